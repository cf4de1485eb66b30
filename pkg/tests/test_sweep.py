import math

import pytest
from hypothesis import given, settings

from helpers import scenarios, worked_instance
from multivendor.errors import InvalidParameters, TooManySuppliers, UnknownSupplier
from multivendor.flow import Status, oracle_min_cost, solve
from multivendor.model import make_scenario, restrict_suppliers
from multivendor.sweep import marginal_value, sweep_subsets


def test_worked_sweep_matches_oracle():
    s = worked_instance()
    r = sweep_subsets(s, 1)
    assert [e.subset for e in r.entries] == [("s0",), ("s1",), ("s0", "s1")]
    for e in r.entries:
        assert e.z == oracle_min_cost(restrict_suppliers(s, e.subset)).z
    assert [e.z for e in r.entries] == [15, 35, 15]
    assert r.baseline_z == 15


def test_single_supplier_sweep():
    s = make_scenario([("s0", 5)], [("d0", "unit", 5)], {("s0", "unit", "d0"): 2})
    r = sweep_subsets(s, 1)
    assert len(r.entries) == 1 and r.entries[0].z == solve(s).z


def test_min_size_too_large():
    with pytest.raises(InvalidParameters):
        sweep_subsets(worked_instance(), 3)


def test_min_size_filters():
    r = sweep_subsets(worked_instance(), 2)
    assert [e.subset for e in r.entries] == [("s0", "s1")]


def test_subset_guard():
    sups = [(f"s{i}", 1) for i in range(17)]
    s = make_scenario(sups, [("d0", "unit", 1)], {})
    with pytest.raises(TooManySuppliers):
        sweep_subsets(s, 1)


def test_infeasible_subsets_recorded():
    s = make_scenario([("s0", 3), ("s1", 3)], [("d0", "unit", 5)], {("s0", "unit", "d0"): 1, ("s1", "unit", "d0"): 1})
    r = sweep_subsets(s)
    assert [e.status for e in r.entries] == [Status.INFEASIBLE, Status.INFEASIBLE, Status.OPTIMAL]
    assert r.entries[0].z is None


def test_marginal_values():
    s = worked_instance()
    assert marginal_value(s, "s1") == 0
    assert marginal_value(s, "s0") == 20


def test_marginal_sole_supplier():
    s = make_scenario([("s0", 5)], [("d0", "unit", 5)], {("s0", "unit", "d0"): 2})
    assert marginal_value(s, "s0") == math.inf


def test_marginal_unknown():
    with pytest.raises(UnknownSupplier):
        marginal_value(worked_instance(), "ghost")


def _pairs(result):
    for a in result.entries:
        for b in result.entries:
            if set(a.subset) <= set(b.subset):
                yield a, b


@settings(max_examples=100, deadline=None)
@given(scenarios(max_suppliers=4))
def test_fewer_suppliers_never_cheaper(s):
    r = sweep_subsets(s)
    for a, b in _pairs(r):
        if b.status is Status.INFEASIBLE:
            assert a.status is Status.INFEASIBLE
        if a.status is Status.OPTIMAL and b.status is Status.OPTIMAL:
            assert a.z >= b.z


@settings(max_examples=50, deadline=None)
@given(scenarios(max_suppliers=4))
def test_entries_match_independent_solves(s):
    for e in sweep_subsets(s).entries:
        plan = solve(restrict_suppliers(s, e.subset))
        assert (e.status, e.z) == (plan.status, plan.z)


@settings(max_examples=50, deadline=None)
@given(scenarios(max_suppliers=4))
def test_marginal_nonnegative(s):
    if not solve(s).optimal:
        return
    for name in s.supplier_names:
        assert marginal_value(s, name) >= 0
