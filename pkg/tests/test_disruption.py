import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from helpers import worked_instance
from multivendor import rng
from multivendor.disruption import (
    CapacityRule,
    CostDistribution,
    DisruptionModel,
    PowerLaw,
    Quadrant,
    classify_quadrant,
    load_disruption_model,
    sample_severity,
    simulate_horizon,
    summarize_risk,
)
from multivendor.errors import EmptyDistribution, InvalidParameters, ParseError
from multivendor.flow import solve
from multivendor.model import load_scenario, make_scenario


def one_vendor():
    return make_scenario([("a", 5)], [("d", "x", 5)], {("a", "x", "d"): 1})


def two_vendors():
    return make_scenario([("a", 5), ("b", 5)], [("d", "x", 5)], {("a", "x", "d"): 1, ("b", "x", "d"): 2})


def enumerate_expected_cost(s, probs, penalty):
    """Exact expectation over all 2**n total-loss outcomes."""
    total = 0.0
    for down in itertools.product((False, True), repeat=len(probs)):
        w = math.prod(p if d else 1 - p for p, d in zip(probs, down))
        live = [sup.name for sup, d in zip(s.suppliers, down) if not d]
        # these hand instances have one demand point and unit costs sorted by supplier order
        need, cost = s.total_demand, 0.0
        for i, sup in enumerate(s.suppliers):
            if sup.name in live:
                q = min(need, sup.capacity)
                cost += q * s.costs[i][0][0]
                need -= q
        cost += penalty * need
        total += w * cost
    return total


def test_enumeration_oracle_values():
    assert enumerate_expected_cost(one_vendor(), [0.5], 10) == 27.5
    assert enumerate_expected_cost(two_vendors(), [0.5, 0.5], 10) == 17.5


@pytest.mark.parametrize(
    "k, x_min, u, expected",
    [(2.0, 1.0, 0.0, 1.0), (3.0, 2.0, 0.0, 2.0), (2.0, 1.0, 0.75, 4.0), (3.0, 2.0, 0.75, 4.0)],
)
def test_sample_severity_examples(k, x_min, u, expected):
    assert sample_severity(PowerLaw(k, x_min), u) == pytest.approx(expected, rel=1e-15)


def test_powerlaw_cdf_matches_scipy_pareto():
    pl = PowerLaw(2.5, 1.7)
    x = np.linspace(0.5, 50, 200)
    assert np.allclose(pl.cdf(x), stats.pareto(b=1.5, scale=1.7).cdf(x))


def test_sampler_ks():
    pl = PowerLaw(2.5, 1.0)
    x = sample_severity(pl, rng.trial_uniforms(11, 100_000, 1)[:, 0])
    assert x.min() >= 1.0
    assert stats.kstest(x, pl.cdf).statistic < 0.01


@given(st.floats(0, 1, exclude_max=True), st.floats(1.01, 10), st.floats(1e-3, 1e3))
def test_severity_at_least_xmin(u, k, x_min):
    assert sample_severity(PowerLaw(k, x_min), u) >= x_min


def test_powerlaw_rejects_bad_exponent():
    with pytest.raises(InvalidParameters):
        PowerLaw(1.0)
    with pytest.raises(InvalidParameters):
        sample_severity(PowerLaw(2.0), 1.0)


@pytest.mark.parametrize(
    "args, expected",
    [
        ((0.01, 0.9, 0.5, 0.5), Quadrant.LOW_P_HIGH_C),
        ((0.5, 0.5, 0.5, 0.5), Quadrant.HIGH_P_HIGH_C),
        ((0.9, 0.1, 0.5, 0.5), Quadrant.HIGH_P_LOW_C),
        ((0.1, 0.1, 0.5, 0.5), Quadrant.LOW_P_LOW_C),
    ],
)
def test_quadrants(args, expected):
    assert classify_quadrant(*args) is expected


def test_quadrant_rejects_nonfinite():
    with pytest.raises(InvalidParameters):
        classify_quadrant(0.1, math.inf, 0.5, 0.5)


@pytest.mark.parametrize("scenario, n, expected", [(one_vendor, 1, 27.5), (two_vendors, 2, 17.5)])
def test_simulated_mean_matches_enumeration(scenario, n, expected):
    dm = DisruptionModel((0.5,) * n, shortage_penalty=10)
    r = summarize_risk(simulate_horizon(scenario(), dm, 1, 20_000, 4))
    assert abs(r.mean - expected) <= 3 * r.stderr


def test_no_disruption_is_deterministic_baseline():
    s = worked_instance()
    dm = DisruptionModel((0.0, 0.0), shortage_penalty=1e6)
    dist = simulate_horizon(s, dm, 3, 50, 1)
    assert np.all(dist.costs == solve(s).z * 3)
    assert summarize_risk(dist).std == 0


def test_zero_probability_with_fractional_costs():
    s = make_scenario([("a", 9)], [("d", "x", 3)], {("a", "x", "d"): 0.1})
    dist = simulate_horizon(s, DisruptionModel((0.0,)), 7, 5, 0)
    assert np.all(dist.costs == solve(s).z * 7)


def test_redundancy_never_costs_more_per_trial():
    # equal unit costs, total loss: the second vendor can only cover shortfalls
    one = make_scenario([("a", 5)], [("d", "x", 5)], {("a", "x", "d"): 1})
    two = make_scenario([("a", 5), ("b", 5)], [("d", "x", 5)], {("a", "x", "d"): 1, ("b", "x", "d"): 1})
    c1 = simulate_horizon(one, DisruptionModel((0.3,), shortage_penalty=10), 4, 2000, 9).costs
    c2 = simulate_horizon(two, DisruptionModel((0.3, 0.3), shortage_penalty=10), 4, 2000, 9).costs
    assert np.all(c2 <= c1)
    assert c2.mean() < c1.mean()


def test_reproducible():
    dm = DisruptionModel((0.2, 0.4), PowerLaw(2.5), 50, CapacityRule.PROPORTIONAL, 3.0)
    a = simulate_horizon(two_vendors(), dm, 3, 500, 123)
    b = simulate_horizon(two_vendors(), dm, 3, 500, 123)
    assert a.costs.tobytes() == b.costs.tobytes()
    assert a.shortfall_periods == b.shortfall_periods


def test_proportional_rule_floors_capacity():
    dm = DisruptionModel((1.0,), PowerLaw(2.0), 10, CapacityRule.PROPORTIONAL, 4.0)
    assert dm.surviving_capacity(10, 1.0) == 7
    assert dm.surviving_capacity(10, 5.0) == 0
    dist = simulate_horizon(one_vendor(), dm, 1, 200, 0)
    # severity >= 1 always removes at least a quarter of capacity: 1-2 units short
    assert np.all(dist.costs >= 3 * 1 + 2 * 10)


def test_invalid_parameters():
    with pytest.raises(InvalidParameters):
        simulate_horizon(one_vendor(), DisruptionModel((0.1,)), 0, 10)
    with pytest.raises(InvalidParameters):
        DisruptionModel((1.5,))
    with pytest.raises(InvalidParameters):
        DisruptionModel((0.1,), capacity_rule=CapacityRule.PROPORTIONAL)


def test_summary_examples():
    r = summarize_risk([10, 10, 10])
    assert (r.mean, r.std) == (10, 0)
    assert set(r.quantiles.values()) == {10} and r.tail_mean == 10
    assert summarize_risk(list(range(100))).quantiles[0.5] == 49
    one = summarize_risk([7])
    assert one.mean == 7 and set(one.quantiles.values()) == {7} and one.tail_mean == 7


def test_summary_nearest_rank_against_sorted_index():
    values = np.random.default_rng(0).exponential(size=257)
    r = summarize_risk(values)
    ordered = sorted(values)
    for q in (0.5, 0.9, 0.99):
        assert r.quantiles[q] == ordered[math.ceil(q * 257) - 1]
    assert r.tail_mean == pytest.approx(np.mean(ordered[math.ceil(0.99 * 257) - 1 :]))


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=300))
def test_summary_invariants(values):
    r = summarize_risk(values)
    assert r.quantiles[0.5] <= r.quantiles[0.9] <= r.quantiles[0.99] <= r.tail_mean


def test_summary_empty():
    with pytest.raises(EmptyDistribution):
        summarize_risk([])


def test_infeasible_fraction():
    dist = CostDistribution(np.array([1.0, 2.0]), periods=2, shortfall_periods=1)
    assert summarize_risk(dist).infeasible_fraction == 0.25


def test_load_disruption_section(tmp_path):
    text = (__import__("conftest").SCENARIOS / "dual-spine.json").read_text()
    s = load_scenario(text)
    dm = load_disruption_model(text, s)
    assert dm.probabilities == (0.05, 0.05)
    assert dm.capacity_rule is CapacityRule.PROPORTIONAL and dm.severity_ref == 4.0
    with pytest.raises(ParseError):
        load_disruption_model(text.replace('"vendor-b": 0.05', '"ghost": 0.05'), s)
