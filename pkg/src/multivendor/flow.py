"""Exact transportation solver via min-cost flow, plus a brute-force oracle.

The network is layered::

    source -> supplier_i -> (supplier_i, item_k) -> demand_j -> sink

Supplier arcs carry the aggregate capacity, the middle arcs the per-item
caps, the demand arcs the unit costs, and the sink arcs the demand
quantities. Successive shortest paths on this graph yield an integral
optimum whenever capacities are integral, so no branching is needed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Sequence

from .errors import InstanceTooLarge
from .model import Scenario


class Status(str, Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    unit_cost: float
    # (supplier, item, demand) for cost-bearing arcs, None for structural arcs
    cell: Optional[tuple[int, int, int]] = None


@dataclass(frozen=True)
class FlowNetwork:
    scenario: Scenario
    n_nodes: int
    source: int
    sink: int
    arcs: tuple[Arc, ...]
    target: int  # total demand

    def supplier_node(self, s: int) -> int:
        return 1 + s

    def pair_node(self, s: int, k: int) -> int:
        return 1 + len(self.scenario.suppliers) + s * len(self.scenario.items) + k

    def demand_node(self, d: int) -> int:
        sc = self.scenario
        return 1 + len(sc.suppliers) * (1 + len(sc.items)) + d


@dataclass(frozen=True)
class ShipmentPlan:
    shipments: tuple[tuple[tuple[int, ...], ...], ...]  # x[s][k][d]
    z: Optional[float]
    status: Status
    shipped: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def build_flow_network(s: Scenario, supply: Sequence[int] | None = None) -> FlowNetwork:
    """Encode ``s`` as a layered flow network.

    ``supply`` overrides the aggregate supplier capacities (used by the
    disruption simulator for reduced capacity).
    """
    n_s, n_k, n_d = len(s.suppliers), len(s.items), len(s.demands)
    caps = [x.capacity for x in s.suppliers] if supply is None else list(supply)
    big = s.total_demand
    source = 0
    sink = 1 + n_s * (1 + n_k) + n_d
    arcs: list[Arc] = []
    for i in range(n_s):
        arcs.append(Arc(source, 1 + i, caps[i], 0.0))
    for i in range(n_s):
        for k in range(n_k):
            u = s.item_capacity[k][i]
            arcs.append(Arc(1 + i, 1 + n_s + i * n_k + k, big if u is None else u, 0.0))
    for i in range(n_s):
        for k in range(n_k):
            for d in range(n_d):
                c = s.costs[i][k][d]
                if c is None:
                    continue
                arcs.append(Arc(1 + n_s + i * n_k + k, 1 + n_s * (1 + n_k) + d, big, float(c), (i, k, d)))
    for d, dem in enumerate(s.demands):
        arcs.append(Arc(1 + n_s * (1 + n_k) + d, sink, dem.quantity, 0.0))
    return FlowNetwork(s, sink + 1, source, sink, tuple(arcs), big)


def _successive_shortest_paths(n: FlowNetwork) -> list[int]:
    """Push up to ``n.target`` units along successive cheapest paths.

    Returns the flow on each arc of ``n.arcs``. The result is a min-cost
    flow among all flows of the same (maximum reachable) value.
    Dijkstra pops in (distance, node index) order and a label only changes
    on strict improvement, which makes tie-breaking follow canonical node
    order.
    """
    m = len(n.arcs)
    # residual edges: 2*a forward, 2*a+1 backward
    to = [0] * (2 * m)
    cap = [0] * (2 * m)
    cost = [0.0] * (2 * m)
    adj: list[list[int]] = [[] for _ in range(n.n_nodes)]
    for a, arc in enumerate(n.arcs):
        to[2 * a], cap[2 * a], cost[2 * a] = arc.head, arc.capacity, arc.unit_cost
        to[2 * a + 1], cap[2 * a + 1], cost[2 * a + 1] = arc.tail, 0, -arc.unit_cost
        adj[arc.tail].append(2 * a)
        adj[arc.head].append(2 * a + 1)
    for edges in adj:
        edges.sort(key=lambda e: to[e])

    potential = [0.0] * n.n_nodes
    flow_value = 0
    while flow_value < n.target:
        dist = [math.inf] * n.n_nodes
        via = [-1] * n.n_nodes
        done = [False] * n.n_nodes
        dist[n.source] = 0.0
        heap = [(0.0, n.source)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in adj[u]:
                if cap[e] <= 0:
                    continue
                v = to[e]
                if done[v]:
                    continue
                # clamp rounding noise; reduced costs are nonnegative in exact arithmetic
                nd = du + max(0.0, cost[e] + potential[u] - potential[v])
                if nd < dist[v]:
                    dist[v] = nd
                    via[v] = e
                    heapq.heappush(heap, (nd, v))
        if not done[n.sink]:
            break
        d_sink = dist[n.sink]
        for v in range(n.n_nodes):
            potential[v] += min(dist[v], d_sink)

        push = n.target - flow_value
        v = n.sink
        while v != n.source:
            e = via[v]
            push = min(push, cap[e])
            v = to[e ^ 1]
        v = n.sink
        while v != n.source:
            e = via[v]
            cap[e] -= push
            cap[e ^ 1] += push
            v = to[e ^ 1]
        flow_value += push
    return [cap[2 * a + 1] for a in range(m)]


def plan_cost(s: Scenario, x) -> float:
    """Objective summed left to right in canonical (s, k, d) order."""
    z = 0.0
    for si, ki, di in s.cells():
        z += s.costs[si][ki][di] * x[si][ki][di]
    return z


def _empty_tensor(s: Scenario) -> list:
    return [[[0] * len(s.demands) for _ in s.items] for _ in s.suppliers]


def _freeze(x) -> tuple:
    return tuple(tuple(tuple(r) for r in p) for p in x)


def solve_partial(n: FlowNetwork) -> ShipmentPlan:
    """Ship as much demand as the network allows, at minimum cost.

    Status is OPTIMAL only if every demand is met; otherwise INFEASIBLE
    with the max-flow plan kept in ``shipments`` and ``z`` for that flow.
    """
    s = n.scenario
    flows = _successive_shortest_paths(n)
    x = _empty_tensor(s)
    for arc, f in zip(n.arcs, flows):
        if arc.cell is not None and f:
            si, ki, di = arc.cell
            x[si][ki][di] = f
    shipped = sum(f for arc, f in zip(n.arcs, flows) if arc.head == n.sink)
    status = Status.OPTIMAL if shipped == n.target else Status.INFEASIBLE
    return ShipmentPlan(_freeze(x), plan_cost(s, x), status, shipped)


def solve_min_cost(n: FlowNetwork) -> ShipmentPlan:
    """Minimum-cost shipment plan meeting every demand exactly, or INFEASIBLE."""
    plan = solve_partial(n)
    if plan.optimal:
        return plan
    return ShipmentPlan(_freeze(_empty_tensor(n.scenario)), None, Status.INFEASIBLE, plan.shipped)


def solve(s: Scenario) -> ShipmentPlan:
    return solve_min_cost(build_flow_network(s))


def audit_plan(plan: ShipmentPlan, s: Scenario, tol: float = 1e-9) -> list[str]:
    """Check an OPTIMAL plan against every constraint; returns the violations."""
    if not plan.optimal:
        return []
    out = []
    x = plan.shipments
    for si, sup in enumerate(s.suppliers):
        total = sum(x[si][k][d] for k in range(len(s.items)) for d in range(len(s.demands)))
        if total > sup.capacity:
            out.append(f"supplier {sup.name!r} ships {total} > capacity {sup.capacity}")
        for ki, item in enumerate(s.items):
            u = s.item_capacity[ki][si]
            per_item = sum(x[si][ki])
            if u is not None and per_item > u:
                out.append(f"supplier {sup.name!r} ships {per_item} of {item!r} > cap {u}")
    for di, dem in enumerate(s.demands):
        got = sum(x[si][ki][di] for si in range(len(s.suppliers)) for ki in range(len(s.items)))
        if got != dem.quantity:
            out.append(f"demand {dem.name!r} receives {got} != {dem.quantity}")
    for si in range(len(s.suppliers)):
        for ki in range(len(s.items)):
            for di in range(len(s.demands)):
                v = x[si][ki][di]
                if not isinstance(v, int) or v < 0:
                    out.append(f"shipment {v!r} at {(si, ki, di)} is not a nonnegative integer")
                elif v and s.costs[si][ki][di] is None:
                    out.append(f"shipment on unavailable cell {(si, ki, di)}")
    if plan.z is None or abs(plan_cost(s, x) - plan.z) > tol:
        out.append(f"objective {plan.z} does not match recomputed {plan_cost(s, x)}")
    return out


def plan_to_dict(plan: ShipmentPlan, s: Scenario) -> dict[str, Any]:
    x = plan.shipments
    rows = []
    if plan.optimal:
        for si, ki, di in s.cells():
            if x[si][ki][di] > 0:
                rows.append(
                    {"supplier": s.suppliers[si].name, "item": s.items[ki], "demand": s.demands[di].name, "units": x[si][ki][di]}
                )
    return {"status": plan.status.value, "z": plan.z, "shipments": rows}


# -- oracle --------------------------------------------------------------------

ORACLE_MAX_CELLS = 12
ORACLE_MAX_DEMAND = 10


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def oracle_min_cost(s: Scenario) -> ShipmentPlan:
    """Exhaustively enumerate integral plans and return the cheapest.

    Every demand point is met exactly. Partial assignments that already
    exceed a supplier or item cap are abandoned, which skips only
    infeasible completions. Ties keep the first plan in enumeration order.
    """
    cells = s.cells()
    if len(cells) > ORACLE_MAX_CELLS:
        raise InstanceTooLarge(f"{len(cells)} cells exceeds oracle limit {ORACLE_MAX_CELLS}")
    if any(d.quantity > ORACLE_MAX_DEMAND for d in s.demands):
        raise InstanceTooLarge(f"a demand exceeds oracle limit {ORACLE_MAX_DEMAND}")

    n_d = len(s.demands)
    # each demand point requests one item, so a supplier appears at most once per demand
    by_demand = [[(si, ki) for si, ki, di in cells if di == d] for d in range(n_d)]
    sup_left = [x.capacity for x in s.suppliers]
    item_left = [[math.inf if u is None else u for u in row] for row in s.item_capacity]
    x = _empty_tensor(s)
    best: list = [math.inf, None]

    def visit(d: int) -> None:
        if d == n_d:
            z = plan_cost(s, x)
            if z < best[0]:
                best[0], best[1] = z, _freeze(x)
            return
        options = by_demand[d]
        for split in _compositions(s.demands[d].quantity, len(options)):
            ok = True
            for (si, ki), q in zip(options, split):
                if q > sup_left[si] or q > item_left[ki][si]:
                    ok = False
            if not ok:
                continue
            for (si, ki), q in zip(options, split):
                sup_left[si] -= q
                item_left[ki][si] -= q
                x[si][ki][d] = q
            visit(d + 1)
            for (si, ki), q in zip(options, split):
                sup_left[si] += q
                item_left[ki][si] += q
                x[si][ki][d] = 0

    visit(0)
    if best[1] is None:
        return ShipmentPlan(_freeze(_empty_tensor(s)), None, Status.INFEASIBLE)
    return ShipmentPlan(best[1], best[0], Status.OPTIMAL, s.total_demand)
