#include "eekit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eekit/csv.hpp"
#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

std::string to_string(ZoneLabel zone) {
  switch (zone) {
    case ZoneLabel::negligible: return "negligible";
    case ZoneLabel::almost_linear: return "almost_linear";
    case ZoneLabel::monotonic: return "monotonic";
    case ZoneLabel::almost_monotonic: return "almost_monotonic";
    case ZoneLabel::nonmonotonic_or_interacting: return "nonmonotonic_or_interacting";
  }
  throw InternalError("unknown zone label");
}

ZoneLabel classify_one(const SummaryStats& stats, double max_mu_star, double negligible_rel) {
  if (stats.n < 2 || !stats.sigma.has_value())
    throw StatsError("classification refused: sigma undefined for n = " +
                     std::to_string(stats.n));
  const double threshold = negligible_rel * max_mu_star;
  if (stats.mu_star <= threshold && *stats.sigma <= threshold) return ZoneLabel::negligible;
  // mu_star > 0 here: mu_star = 0 always falls under the negligible test.
  const double ratio = *stats.sigma / stats.mu_star;
  if (ratio < kZoneAlmostLinear) return ZoneLabel::almost_linear;
  if (ratio < kZoneMonotonic) return ZoneLabel::monotonic;
  if (ratio < kZoneAlmostMonotonic) return ZoneLabel::almost_monotonic;
  return ZoneLabel::nonmonotonic_or_interacting;
}

std::vector<ZoneLabel> classify(std::span<const EffectsSummary> rows, double negligible_rel) {
  double max_first = 0.0, max_pair = 0.0;
  for (const auto& row : rows)
    (row.is_pair ? max_pair : max_first) =
        std::max(row.is_pair ? max_pair : max_first, row.stats.mu_star);

  std::vector<ZoneLabel> zones;
  zones.reserve(rows.size());
  for (const auto& row : rows)
    zones.push_back(classify_one(row.stats, row.is_pair ? max_pair : max_first, negligible_rel));
  return zones;
}

std::string to_string(Presentation p) {
  return p == Presentation::sigma_axis ? "sigma" : "ratio";
}

Presentation presentation_from_string(const std::string& s) {
  if (s == "sigma") return Presentation::sigma_axis;
  if (s == "ratio") return Presentation::ratio_axis;
  throw ConfigError("unknown presentation '" + s + "' (expected sigma or ratio)");
}

// ---------------------------------------------------------------------------
// SVG scatter plot

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double nice_num(double x, bool round_down) {
  const double expv = std::floor(std::log10(x));
  const double f = x / std::pow(10.0, expv);
  double nf;
  if (round_down) {
    nf = f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10;
  } else {
    nf = f <= 1 ? 1 : f <= 2 ? 2 : f <= 5 ? 5 : 10;
  }
  return nf * std::pow(10.0, expv);
}

std::vector<double> nice_ticks(double hi, int target) {
  if (hi <= 0) return {0.0};
  const double step = nice_num(hi / std::max(1, target - 1), true);
  std::vector<double> ticks;
  for (double v = 0; v <= hi + 0.5 * step; v += step) ticks.push_back(v);
  return ticks;
}

std::string point_label(const EffectsSummary& row) {
  if (row.is_pair) return std::to_string(row.i + 1) + "-" + std::to_string(row.j + 1);
  return std::to_string(row.i + 1);
}

}  // namespace

void emit_scatter_svg(std::span<const EffectsSummary> rows, Presentation presentation,
                      const std::filesystem::path& path, const std::string& title) {
  if (rows.empty()) throw StatsError("scatter plot: no summaries to plot");

  struct PlotPoint {
    double x, y;
    std::string label;
  };
  std::vector<PlotPoint> points;
  for (const auto& row : rows) {
    const double mu_star = row.stats.mu_star;
    const double sigma = row.stats.sigma.value_or(0.0);
    if (presentation == Presentation::ratio_axis) {
      if (mu_star == 0.0) continue;  // ratio undefined
      points.push_back({mu_star, sigma / mu_star, point_label(row)});
    } else {
      points.push_back({mu_star, sigma, point_label(row)});
    }
  }
  if (points.empty())
    throw StatsError("scatter plot: every summary has mu* = 0; ratio presentation undefined");

  const double width = 800, height = 600;
  const double ml = 70, mr = 25, mt = title.empty() ? 25 : 45, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmax = 0, ymax = 0;
  for (const auto& p : points) {
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  if (xmax <= 0) xmax = 1;
  if (ymax <= 0) ymax = 1;
  xmax *= 1.05;
  ymax *= 1.05;

  auto sx = [&](double x) { return ml + x / xmax * pw; };
  auto sy = [&](double y) { return mt + ph - y / ymax * ph; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<style>\n"
      << "  text { font-family: sans-serif; font-size: 11px; fill: #222; }\n"
      << "  .title { font-size: 14px; }\n"
      << "  .axis { stroke: #222; stroke-width: 1; }\n"
      << "  .tick { stroke: #222; stroke-width: 1; }\n"
      << "  .gridline { stroke: #ddd; stroke-width: 1; }\n"
      << "  .guide { stroke: #888; stroke-width: 1; stroke-dasharray: 5 4; fill: none; }\n"
      << "  .guidelabel { fill: #666; }\n"
      << "  .pt { fill: #1f77b4; }\n"
      << "  .ptlabel { font-size: 10px; }\n"
      << "</style>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  if (!title.empty())
    svg << "<text class=\"title\" x=\"" << fmt(width / 2) << "\" y=\"22\" text-anchor=\"middle\">"
        << title << "</text>\n";

  for (double t : nice_ticks(xmax, 6)) {
    if (t > xmax) break;
    svg << "<line class=\"gridline\" x1=\"" << fmt(sx(t)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(sx(t)) << "\" y2=\"" << fmt(mt + ph) << "\"/>\n"
        << "<line class=\"tick\" x1=\"" << fmt(sx(t)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
        << fmt(sx(t)) << "\" y2=\"" << fmt(mt + ph + 5) << "\"/>\n"
        << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : nice_ticks(ymax, 6)) {
    if (t > ymax) break;
    svg << "<line class=\"gridline\" x1=\"" << fmt(ml) << "\" y1=\"" << fmt(sy(t)) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(sy(t)) << "\"/>\n"
        << "<line class=\"tick\" x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(sy(t)) << "\" x2=\""
        << fmt(ml) << "\" y2=\"" << fmt(sy(t)) << "\"/>\n"
        << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(sy(t) + 4)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }

  // Guide ratios sigma/mu* = 0.1, 0.5, 1.
  const double guides[] = {kZoneAlmostLinear, kZoneMonotonic, kZoneAlmostMonotonic};
  for (double g : guides) {
    if (presentation == Presentation::sigma_axis) {
      const double x_end = std::min(xmax, ymax / g);
      svg << "<line class=\"guide\" x1=\"" << fmt(sx(0)) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\""
          << fmt(sx(x_end)) << "\" y2=\"" << fmt(sy(g * x_end)) << "\"/>\n"
          << "<text class=\"guidelabel\" x=\"" << fmt(sx(x_end) - 4) << "\" y=\""
          << fmt(sy(g * x_end) - 4) << "\" text-anchor=\"end\">" << fmt(g) << "</text>\n";
    } else if (g <= ymax) {
      svg << "<line class=\"guide\" x1=\"" << fmt(ml) << "\" y1=\"" << fmt(sy(g)) << "\" x2=\""
          << fmt(ml + pw) << "\" y2=\"" << fmt(sy(g)) << "\"/>\n"
          << "<text class=\"guidelabel\" x=\"" << fmt(ml + pw - 4) << "\" y=\"" << fmt(sy(g) - 4)
          << "\" text-anchor=\"end\">" << fmt(g) << "</text>\n";
    }
  }

  svg << "<line class=\"axis\" x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
      << fmt(ml + pw) << "\" y2=\"" << fmt(mt + ph) << "\"/>\n"
      << "<line class=\"axis\" x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml)
      << "\" y2=\"" << fmt(mt + ph) << "\"/>\n"
      << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 12)
      << "\" text-anchor=\"middle\">mu*</text>\n"
      << "<text x=\"16\" y=\"" << fmt(mt + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(mt + ph / 2) << ")\">"
      << (presentation == Presentation::sigma_axis ? "sigma" : "sigma / mu*") << "</text>\n";

  for (const auto& p : points) {
    svg << "<circle class=\"pt\" cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
        << "\" r=\"3\" data-label=\"" << p.label << "\" data-x=\"" << format_double(p.x)
        << "\" data-y=\"" << format_double(p.y) << "\"/>\n"
        << "<text class=\"ptlabel\" x=\"" << fmt(sx(p.x) + 5) << "\" y=\"" << fmt(sy(p.y) - 5)
        << "\">" << p.label << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write SVG: " + path.string());
  out << svg.str();
  if (!out.flush()) throw IoError("failed writing SVG: " + path.string());
}

// ---------------------------------------------------------------------------
// CSV tables

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::optional<double> opt_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

void write_effects_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& first_samples,
                       const std::vector<std::vector<double>>& pair_samples, int k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "kind,i,j,replicate,value\n";
  for (std::size_t i = 0; i < first_samples.size(); ++i)
    for (std::size_t t = 0; t < first_samples[i].size(); ++t)
      out << "first," << i + 1 << ",," << t + 1 << ',' << format_double(first_samples[i][t])
          << '\n';
  for (std::size_t idx = 0; idx < pair_samples.size(); ++idx) {
    const auto [i, j] = pair_from_index(static_cast<int>(idx), k);
    for (std::size_t t = 0; t < pair_samples[idx].size(); ++t)
      out << "second," << i + 1 << ',' << j + 1 << ',' << t + 1 << ','
          << format_double(pair_samples[idx][t]) << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

void write_summary_csv(const std::filesystem::path& path, std::span<const EffectsSummary> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "kind,i,j,mu,mu_star,sigma,ratio_star,ratio_abs,n\n";
  for (const auto& row : rows) {
    out << (row.is_pair ? "second" : "first") << ',' << row.i + 1 << ','
        << (row.is_pair ? std::to_string(row.j + 1) : std::string()) << ','
        << format_double(row.stats.mu) << ',' << format_double(row.stats.mu_star) << ','
        << opt_field(row.stats.sigma) << ',' << opt_field(row.stats.ratio_star) << ','
        << opt_field(row.stats.ratio_abs) << ',' << row.stats.n << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::vector<EffectsSummary> read_summary_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty() || rows.front() != split_csv_line("kind,i,j,mu,mu_star,sigma,ratio_star,ratio_abs,n"))
    throw IoError("summary file " + path.string() + " has an unexpected header");
  std::vector<EffectsSummary> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 9) throw IoError("summary file " + path.string() + ": malformed row");
    EffectsSummary s;
    s.is_pair = row[0] == "second";
    s.i = static_cast<int>(parse_int(row[1])) - 1;
    s.j = row[2].empty() ? -1 : static_cast<int>(parse_int(row[2])) - 1;
    s.stats.mu = parse_double(row[3]);
    s.stats.mu_star = parse_double(row[4]);
    s.stats.sigma = opt_parse(row[5]);
    s.stats.ratio_star = opt_parse(row[6]);
    s.stats.ratio_abs = opt_parse(row[7]);
    s.stats.n = static_cast<int>(parse_int(row[8]));
    out.push_back(std::move(s));
  }
  return out;
}

void write_zones_csv(const std::filesystem::path& path, std::span<const EffectsSummary> rows,
                     std::span<const ZoneLabel> zones, const std::vector<std::string>& names) {
  if (rows.size() != zones.size()) throw InternalError("zones/summaries size mismatch");
  auto label = [&](const EffectsSummary& row) -> std::string {
    if (!row.is_pair) return names.at(row.i);
    return names.at(row.i) + "*" + names.at(row.j);
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "kind,i,j,label,mu,mu_star,sigma,ratio_star,ratio_abs,n,zone\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    out << (row.is_pair ? "second" : "first") << ',' << row.i + 1 << ','
        << (row.is_pair ? std::to_string(row.j + 1) : std::string()) << ',' << label(row) << ','
        << format_double(row.stats.mu) << ',' << format_double(row.stats.mu_star) << ','
        << opt_field(row.stats.sigma) << ',' << opt_field(row.stats.ratio_star) << ','
        << opt_field(row.stats.ratio_abs) << ',' << row.stats.n << ',' << to_string(zones[r])
        << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

}  // namespace eekit
