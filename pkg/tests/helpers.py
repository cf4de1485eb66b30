"""Random instance generators shared by the property and acceptance tests."""

import numpy as np
from hypothesis import strategies as st

from multivendor.model import make_scenario


def random_scenario(gen: np.random.Generator, max_suppliers=3, max_items=2, max_demands_per_item=2, max_qty=5, max_cost=9):
    n_s = int(gen.integers(1, max_suppliers + 1))
    n_k = int(gen.integers(1, max_items + 1))
    suppliers = [(f"s{i}", int(gen.integers(0, 2 * max_qty + 1))) for i in range(n_s)]
    items = [f"k{k}" for k in range(n_k)]
    demands = []
    for k in items:
        for j in range(int(gen.integers(1, max_demands_per_item + 1))):
            demands.append((f"{k}-d{j}", k, int(gen.integers(0, max_qty + 1))))
    costs = {}
    for s, _ in suppliers:
        for name, k, _ in demands:
            if gen.random() < 0.8:
                costs[(s, k, name)] = int(gen.integers(0, max_cost + 1))
    caps = {}
    for k in items:
        for s, _ in suppliers:
            if gen.random() < 0.3:
                caps[(k, s)] = int(gen.integers(0, max_qty + 1))
    return make_scenario(suppliers, demands, costs, items=items, item_capacity=caps)


@st.composite
def scenarios(draw, max_suppliers=3, max_items=2, max_demands_per_item=2, max_qty=5, max_cost=9):
    """Hypothesis strategy for small valid scenarios with integer data."""
    n_s = draw(st.integers(1, max_suppliers))
    n_k = draw(st.integers(1, max_items))
    suppliers = [(f"s{i}", draw(st.integers(0, 2 * max_qty))) for i in range(n_s)]
    items = [f"k{k}" for k in range(n_k)]
    demands = [
        (f"{k}-d{j}", k, draw(st.integers(0, max_qty)))
        for k in items
        for j in range(draw(st.integers(1, max_demands_per_item)))
    ]
    costs = {}
    for s, _ in suppliers:
        for name, k, _ in demands:
            c = draw(st.none() | st.integers(0, max_cost))
            if c is not None:
                costs[(s, k, name)] = c
    caps = {}
    for k in items:
        for s, _ in suppliers:
            u = draw(st.none() | st.integers(0, max_qty))
            if u is not None:
                caps[(k, s)] = u
    return make_scenario(suppliers, demands, costs, items=items, item_capacity=caps)


def worked_instance():
    return make_scenario(
        [("s0", 10), ("s1", 10)],
        [("d0", "unit", 5), ("d1", "unit", 5)],
        {("s0", "unit", "d0"): 1, ("s0", "unit", "d1"): 2, ("s1", "unit", "d0"): 3, ("s1", "unit", "d1"): 4},
    )
