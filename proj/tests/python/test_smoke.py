import math

import pytest

import eekit


def unit_params(k, levels=10):
    return [eekit.ParameterSpec(f"p{i + 1}", 0.0, 1.0, levels) for i in range(k)]


def test_delta_and_reduction():
    assert eekit.delta_for(10) == pytest.approx(5 / 9)
    assert eekit.delta_for(2) == 1.0
    with pytest.raises(eekit.EekitError):
        eekit.delta_for(5)

    p = eekit.ParameterSpec("set_point", 17.0, 24.0, 10)
    assert p.reduce(20.5) == 0.5
    assert p.restore(0.5) == 20.5
    assert eekit.step_sign(0.0) == 1
    assert eekit.step_sign(1.0) == -1


def test_plan_counts_and_determinism():
    params = unit_params(24)
    plan = eekit.sample_first_order(params, 10, 42)
    assert plan.total_design_points == 250
    assert plan.k == 24
    assert plan.mode == "first_order"
    assert plan.to_json() == eekit.sample_first_order(params, 10, 42).to_json()
    assert plan.to_json() != eekit.sample_first_order(params, 10, 43).to_json()

    second = eekit.sample_second_order(unit_params(12), 10, 7)
    assert second.total_design_points == 790


def test_linear_model_has_constant_effects():
    params = unit_params(4)
    plan = eekit.sample_first_order(params, 10, 3)
    a = [1.0, -2.0, 0.5, 4.0]
    outputs = eekit.evaluate_points(plan, eekit.AnalyticModel.linear(a, 10.0))
    table = eekit.first_order_effect_table(plan, outputs)
    for i, samples in enumerate(table):
        stats = eekit.aggregate(samples)
        assert stats["sigma"] <= 1e-9
        assert stats["mu_star"] == pytest.approx(abs(a[i]), abs=1e-12)
    zones = eekit.classify_first_order(table)
    assert zones == ["almost_linear"] * 4


def test_bilinear_pair_effect():
    k = 5
    plan = eekit.sample_second_order(unit_params(k), 8, 11)
    outputs = eekit.evaluate_points(plan, eekit.AnalyticModel.bilinear(3.0, 1, 2))
    tables = eekit.second_order_effect_tables(plan, outputs)
    target = tables["pair_index"].index((1, 2))
    for idx, samples in enumerate(tables["pair"]):
        if idx == target:
            assert all(abs(v - 3.0) <= 1e-9 for v in samples)
        else:
            assert all(abs(v) <= 1e-9 for v in samples)


def test_aggregate_matches_hand_values():
    stats = eekit.aggregate([1.0, 2.0, 3.0])
    assert stats["mu"] == 2.0
    assert stats["mu_star"] == 2.0
    assert stats["sigma"] == 1.0

    symmetric = eekit.aggregate([2.5, -2.5])
    assert symmetric["mu"] == 0.0
    assert symmetric["sigma"] == pytest.approx(2.5 * math.sqrt(2))
    assert symmetric["ratio_abs"] is None


def test_log_transform_domain():
    assert eekit.natural_log_output(math.e) == pytest.approx(1.0)
    with pytest.raises(eekit.EekitError):
        eekit.natural_log_output(-1.0)
