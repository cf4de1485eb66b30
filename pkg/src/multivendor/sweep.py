"""Re-solve an instance over supplier subsets to measure the cost of fewer vendors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidParameters, TooManySuppliers, UnknownSupplier
from .flow import Status, solve
from .model import Scenario, restrict_suppliers

MAX_SWEEP_SUPPLIERS = 16


@dataclass(frozen=True)
class SweepEntry:
    subset: tuple[str, ...]
    status: Status
    z: Optional[float]

    @property
    def size(self) -> int:
        return len(self.subset)


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[SweepEntry, ...]
    baseline_z: Optional[float]

    def z_of(self, subset) -> Optional[float]:
        key = set(subset)
        for e in self.entries:
            if set(e.subset) == key:
                return e.z
        raise KeyError(subset)

    def rows(self) -> list[dict]:
        return [
            {"subset": ",".join(e.subset), "size": e.size, "status": e.status.value, "z": e.z}
            for e in self.entries
        ]


def sweep_subsets(s: Scenario, min_size: int = 1) -> SweepResult:
    """Solve every supplier subset with at least ``min_size`` members.

    Subsets are visited by increasing bitmask, bit i standing for the i-th
    supplier. Infeasible subsets are recorded with ``z = None``.
    """
    n = len(s.suppliers)
    if n > MAX_SWEEP_SUPPLIERS:
        raise TooManySuppliers(f"{n} suppliers exceeds sweep limit {MAX_SWEEP_SUPPLIERS}")
    if not 1 <= min_size <= n:
        raise InvalidParameters(f"min_size must be in [1, {n}], got {min_size}")
    names = s.supplier_names
    entries = []
    baseline = None
    for mask in range(1, 1 << n):
        if bin(mask).count("1") < min_size:
            continue
        subset = tuple(names[i] for i in range(n) if mask >> i & 1)
        plan = solve(restrict_suppliers(s, subset))
        entries.append(SweepEntry(subset, plan.status, plan.z))
        if mask == (1 << n) - 1:
            baseline = plan.z
    return SweepResult(tuple(entries), baseline)


def marginal_value(s: Scenario, supplier: str) -> float:
    """Extra cost of losing ``supplier``; ``math.inf`` if that makes demand unmeetable."""
    if supplier not in s.supplier_names:
        raise UnknownSupplier(f"unknown supplier: {supplier}")
    full = solve(s)
    if not full.optimal:
        raise InvalidParameters("full supplier set is infeasible")
    reduced = solve(restrict_suppliers(s, [n for n in s.supplier_names if n != supplier]))
    if not reduced.optimal:
        return math.inf
    # equal-cost alternative plans can differ by float rounding; the true difference is >= 0
    return max(0.0, reduced.z - full.z)
