#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eekit/design.hpp"
#include "eekit/effects.hpp"
#include "eekit/errors.hpp"
#include "eekit/model.hpp"
#include "eekit/report.hpp"
#include "eekit/transforms.hpp"

namespace py = pybind11;
using namespace eekit;

namespace {

py::dict stats_to_dict(const SummaryStats& s) {
  py::dict d;
  d["mu"] = s.mu;
  d["mu_star"] = s.mu_star;
  d["sigma"] = s.sigma ? py::object(py::float_(*s.sigma)) : py::object(py::none());
  d["ratio_star"] = s.ratio_star ? py::object(py::float_(*s.ratio_star)) : py::object(py::none());
  d["ratio_abs"] = s.ratio_abs ? py::object(py::float_(*s.ratio_abs)) : py::object(py::none());
  d["n"] = s.n;
  return d;
}

// Outputs indexed by point id, densely filled from a python list.
PointOutputs to_outputs(const std::vector<double>& values) {
  return PointOutputs(values.begin(), values.end());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elementary-effects screening toolkit (native core)";

  py::register_exception<Error>(m, "EekitError");

  m.def("delta_for", &delta_for, py::arg("levels"),
        "Grid step levels/(2*(levels-1)); levels must be 2 or even.");
  m.def("step_sign", &step_sign, py::arg("coord_value"),
        "+1 below 0.5, -1 above (reflection rule).");

  py::class_<ParameterSpec>(m, "ParameterSpec")
      .def(py::init([](std::string name, double x_min, double x_max, int levels) {
             ParameterSpec p{std::move(name), x_min, x_max, levels, std::nullopt};
             p.validate();
             return p;
           }),
           py::arg("name"), py::arg("min"), py::arg("max"), py::arg("levels") = 10)
      .def_readonly("name", &ParameterSpec::name)
      .def_readonly("min", &ParameterSpec::x_min)
      .def_readonly("max", &ParameterSpec::x_max)
      .def_readonly("levels", &ParameterSpec::levels)
      .def("reduce", &ParameterSpec::reduce, py::arg("x"))
      .def("restore", &ParameterSpec::restore, py::arg("reduced"))
      .def("grid_value", &ParameterSpec::grid_value, py::arg("level"))
      .def("__repr__", [](const ParameterSpec& p) {
        return "ParameterSpec('" + p.name + "', " + std::to_string(p.x_min) + ", " +
               std::to_string(p.x_max) + ", levels=" + std::to_string(p.levels) + ")";
      });

  py::class_<DesignPlan>(m, "DesignPlan")
      .def_property_readonly("k", &DesignPlan::k)
      .def_readonly("replicates", &DesignPlan::replicates)
      .def_readonly("seed", &DesignPlan::seed)
      .def_readonly("rng_id", &DesignPlan::rng_id)
      .def_readonly("total_design_points", &DesignPlan::total_design_points)
      .def_property_readonly("mode",
                             [](const DesignPlan& p) { return to_string(p.mode); })
      .def_property_readonly("distinct_points",
                             [](const DesignPlan& p) { return p.point_index.size(); })
      .def_property_readonly("points",
                             [](const DesignPlan& p) {
                               std::vector<std::vector<int>> out;
                               for (const auto& gp : p.point_index) out.push_back(gp.levels_idx);
                               return out;
                             })
      .def("reduced_point",
           [](const DesignPlan& p, int id) { return p.reduced_of(p.point_index.at(id)); },
           py::arg("point_id"))
      .def("physical_point",
           [](const DesignPlan& p, int id) { return p.physical_of(p.point_index.at(id)); },
           py::arg("point_id"))
      .def("to_json", [](const DesignPlan& p) { return plan_to_json(p).dump(2); });

  m.def("sample_first_order", &sample_first_order, py::arg("parameters"), py::arg("replicates"),
        py::arg("seed"));
  m.def("sample_second_order", &sample_second_order, py::arg("parameters"),
        py::arg("replicates"), py::arg("seed"));

  py::class_<AnalyticModel>(m, "AnalyticModel")
      .def_static("linear", &AnalyticModel::linear, py::arg("a"), py::arg("b") = 0.0)
      .def_static("bilinear", &AnalyticModel::bilinear, py::arg("c"), py::arg("i"), py::arg("j"))
      .def_static("product_exp", &AnalyticModel::product_exp, py::arg("a"))
      .def_static("ishigami_like", &AnalyticModel::ishigami_like, py::arg("a"), py::arg("b"))
      .def("__call__", [](const AnalyticModel& model, const std::vector<double>& reduced) {
        model.validate(static_cast<int>(reduced.size()));
        return model.evaluate(reduced);
      });

  m.def(
      "evaluate_points",
      [](const DesignPlan& plan, const AnalyticModel& model) {
        model.validate(plan.k());
        std::vector<double> out;
        out.reserve(plan.point_index.size());
        for (const auto& gp : plan.point_index) out.push_back(model.evaluate(plan.reduced_of(gp)));
        return out;
      },
      py::arg("plan"), py::arg("model"),
      "Evaluate an analytic model at every distinct plan point, by point id.");

  m.def(
      "first_order_effect_table",
      [](const DesignPlan& plan, const std::vector<double>& outputs) {
        const auto point_outputs = to_outputs(outputs);
        std::vector<std::vector<double>> table(plan.k());
        for (const auto& traj : plan.trajectories) {
          const auto ee = first_order_effects(traj, plan.parameters, point_outputs);
          for (int i = 0; i < plan.k(); ++i) table[i].push_back(ee[i]);
        }
        return table;
      },
      py::arg("plan"), py::arg("outputs"),
      "Per-parameter elementary-effect samples (k lists of r values).");

  m.def(
      "second_order_effect_tables",
      [](const DesignPlan& plan, const std::vector<double>& outputs) {
        const auto point_outputs = to_outputs(outputs);
        const int k = plan.k();
        std::vector<std::vector<double>> singles(k), pairs(pair_count(k));
        for (const auto& block : plan.blocks) {
          const auto fx = second_order_effects(block, plan.parameters, point_outputs);
          for (int i = 0; i < k; ++i) singles[i].push_back(fx.single[i]);
          for (int idx = 0; idx < pair_count(k); ++idx) pairs[idx].push_back(fx.pair[idx]);
        }
        std::vector<std::pair<int, int>> index;
        for (int idx = 0; idx < pair_count(k); ++idx) index.push_back(pair_from_index(idx, k));
        py::dict out;
        out["single"] = singles;
        out["pair"] = pairs;
        out["pair_index"] = index;
        return out;
      },
      py::arg("plan"), py::arg("outputs"),
      "Single and pair effect samples from a second-order plan.");

  m.def(
      "aggregate",
      [](const std::vector<double>& samples) { return stats_to_dict(aggregate(samples)); },
      py::arg("samples"), "mu, mu_star, sigma (n-1 divisor) and the two sigma ratios.");

  m.def(
      "classify_first_order",
      [](const std::vector<std::vector<double>>& groups, double negligible_rel) {
        std::vector<EffectsSummary> rows;
        for (std::size_t i = 0; i < groups.size(); ++i) {
          EffectsSummary s;
          s.i = static_cast<int>(i);
          s.stats = aggregate(groups[i]);
          rows.push_back(std::move(s));
        }
        std::vector<std::string> out;
        for (auto zone : classify(rows, negligible_rel)) out.push_back(to_string(zone));
        return out;
      },
      py::arg("groups"), py::arg("negligible_rel") = kDefaultNegligibleRel,
      "Zone label per parameter from its effect samples.");

  m.def(
      "natural_log_output",
      [](double value) {
        EvaluationRecord rec;
        rec.point_id = 0;
        rec.outputs["y"] = value;
        TransformSpec t;
        t.kind = TransformKind::natural_log;
        return apply(t, rec, "y");
      },
      py::arg("value"), "natural_log transform of one raw value (domain-checked).");

  m.attr("__version__") = "0.1.0";
}
