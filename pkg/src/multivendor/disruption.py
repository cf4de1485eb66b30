"""Monte Carlo supplier disruptions with power-law severity.

Each period every supplier independently fails with its own probability.
A failed supplier loses capacity according to the capacity rule, the
transportation problem is re-solved on what survives, and any demand the
reduced network cannot carry is charged the shortage penalty.

Severity follows the normalised power law with density proportional to
``x**-k`` on ``[x_min, inf)`` (``k > 1``), i.e. CDF ``1 - (x_min / x)**(k - 1)``.
Disruption probabilities are per period.

Random draws for (trial t, period p) come from the stream of
``derive_seed(seed, t, p)`` (see ``multivendor.rng``): draw ``2*i`` decides
whether supplier i fails and draw ``2*i + 1`` is its severity uniform.
Suppliers therefore see the same draws whenever they share a position,
which gives common random numbers when comparing a scenario against one
with extra suppliers appended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import rng
from .errors import EmptyDistribution, InvalidParameters, ParseError
from .flow import build_flow_network, solve_partial
from .model import Scenario, parse_document


@dataclass(frozen=True)
class PowerLaw:
    k: float
    x_min: float = 1.0

    def __post_init__(self):
        if not self.k > 1:
            raise InvalidParameters(f"power-law exponent must exceed 1, got {self.k}")
        if not self.x_min > 0:
            raise InvalidParameters(f"x_min must be positive, got {self.x_min}")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < self.x_min, 0.0, 1.0 - (self.x_min / np.maximum(x, self.x_min)) ** (self.k - 1))


def sample_severity(pl: PowerLaw, u):
    """Inverse-CDF draw: ``x_min * (1 - u) ** (-1 / (k - 1))``. Accepts scalars or arrays."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise InvalidParameters("u must lie in [0, 1)")
    with np.errstate(over="ignore"):  # k near 1 with u near 1 overflows to inf, still >= x_min
        x = pl.x_min * (1.0 - u) ** (-1.0 / (pl.k - 1.0))
    # guard against pow rounding just below the support
    x = np.maximum(x, pl.x_min)
    return float(x) if x.ndim == 0 else x


class CapacityRule(str, Enum):
    TOTAL_LOSS = "total_loss"
    PROPORTIONAL = "proportional"


@dataclass(frozen=True)
class DisruptionModel:
    probabilities: tuple[float, ...]  # one per supplier, scenario order
    severity: PowerLaw = field(default_factory=lambda: PowerLaw(2.0))
    shortage_penalty: float = 0.0
    capacity_rule: CapacityRule = CapacityRule.TOTAL_LOSS
    severity_ref: float | None = None

    def __post_init__(self):
        for p in self.probabilities:
            if not 0 <= p <= 1:
                raise InvalidParameters(f"disruption probability {p} outside [0, 1]")
        if not self.shortage_penalty >= 0:
            raise InvalidParameters("shortage penalty must be >= 0")
        if self.capacity_rule is CapacityRule.PROPORTIONAL and not (self.severity_ref and self.severity_ref > 0):
            raise InvalidParameters("proportional capacity rule needs a positive severity_ref")

    def surviving_capacity(self, capacity: int, severity: float) -> int:
        """Capacity left after a disruption; proportional loss is rounded down to whole units."""
        if self.capacity_rule is CapacityRule.TOTAL_LOSS:
            return 0
        return math.floor(capacity * max(0.0, 1.0 - severity / self.severity_ref))


def disruption_from_dict(section: dict[str, Any], s: Scenario) -> DisruptionModel:
    allowed = {"per_supplier_p", "power_law", "shortage_penalty", "capacity_rule", "severity_ref"}
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ParseError(f"disruption: unknown key(s) {', '.join(map(repr, unknown))}")
    per = section.get("per_supplier_p", {})
    if not isinstance(per, dict):
        raise ParseError("disruption.per_supplier_p: expected an object")
    ghosts = sorted(set(per) - set(s.supplier_names))
    if ghosts:
        raise ParseError(f"disruption.per_supplier_p: unknown supplier(s) {', '.join(ghosts)}")
    pl = section.get("power_law", {"k": 2.0, "x_min": 1.0})
    if not isinstance(pl, dict) or set(pl) - {"k", "x_min"} or "k" not in pl:
        raise ParseError("disruption.power_law: expected {k, x_min}")
    try:
        rule = CapacityRule(str(section.get("capacity_rule", "total_loss")).lower())
    except ValueError:
        raise ParseError(f"disruption.capacity_rule: unknown rule {section['capacity_rule']!r}") from None
    try:
        return DisruptionModel(
            probabilities=tuple(float(per.get(n, 0.0)) for n in s.supplier_names),
            severity=PowerLaw(float(pl["k"]), float(pl.get("x_min", 1.0))),
            shortage_penalty=float(section.get("shortage_penalty", 0.0)),
            capacity_rule=rule,
            severity_ref=None if section.get("severity_ref") is None else float(section["severity_ref"]),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"disruption: {exc}") from None


def load_disruption_model(text: str, s: Scenario) -> DisruptionModel:
    doc = parse_document(text)
    if "disruption" not in doc:
        raise ParseError("scenario file has no 'disruption' section")
    return disruption_from_dict(doc["disruption"], s)


# -- quadrants -----------------------------------------------------------------


class Quadrant(str, Enum):
    LOW_P_LOW_C = "LOW_P_LOW_C"
    LOW_P_HIGH_C = "LOW_P_HIGH_C"
    HIGH_P_LOW_C = "HIGH_P_LOW_C"
    HIGH_P_HIGH_C = "HIGH_P_HIGH_C"


def classify_quadrant(probability: float, consequence: float, p_threshold: float, c_threshold: float) -> Quadrant:
    """Place a risk on the probability/consequence plane; ties count as HIGH.

    ``consequence`` is whatever the caller measures it in, e.g. the
    ``marginal_value`` of a supplier or a simulated cost increase.
    """
    if not all(math.isfinite(v) for v in (probability, consequence, p_threshold, c_threshold)):
        raise InvalidParameters("quadrant arguments must be finite")
    if not 0 <= probability <= 1:
        raise InvalidParameters(f"probability {probability} outside [0, 1]")
    p = "LOW_P" if probability < p_threshold else "HIGH_P"
    c = "LOW_C" if consequence < c_threshold else "HIGH_C"
    return Quadrant(f"{p}_{c}")


# -- simulation ----------------------------------------------------------------


@dataclass(frozen=True)
class CostDistribution:
    costs: np.ndarray  # total cost per trial, trial order
    periods: int
    shortfall_periods: int = 0  # periods with unmet demand, over all trials

    @property
    def trials(self) -> int:
        return len(self.costs)


def simulate_horizon(
    s: Scenario, dm: DisruptionModel, periods: int, trials: int, seed: int = 0
) -> CostDistribution:
    if periods < 1 or trials < 1:
        raise InvalidParameters("periods and trials must be >= 1")
    n = len(s.suppliers)
    if len(dm.probabilities) != n:
        raise InvalidParameters(f"model has {len(dm.probabilities)} probabilities for {n} suppliers")

    t_idx, p_idx = np.meshgrid(np.arange(trials), np.arange(periods), indexing="ij")
    u = rng.uniforms(rng.derive_seeds(seed, t_idx, p_idx), 2 * n)
    hit = u[..., 0::2] < np.asarray(dm.probabilities)
    severity = sample_severity(dm.severity, u[..., 1::2]) if n else u[..., 1::2]

    base = [x.capacity for x in s.suppliers]
    penalty = dm.shortage_penalty
    cache: dict[tuple[int, ...], tuple[float, int]] = {}

    def period_cost(supply: tuple[int, ...]) -> tuple[float, int]:
        if supply not in cache:
            plan = solve_partial(build_flow_network(s, supply))
            unmet = s.total_demand - plan.shipped
            cache[supply] = (plan.z + penalty * unmet, unmet)
        return cache[supply]

    costs = np.zeros(trials)
    shortfalls = 0
    for t in range(trials):
        per_period = []
        for p in range(periods):
            h = hit[t, p]
            supply = tuple(
                dm.surviving_capacity(base[i], severity[t, p, i]) if h[i] else base[i] for i in range(n)
            )
            c, unmet = period_cost(supply)
            per_period.append(c)
            shortfalls += unmet > 0
        # fsum keeps a constant per-period cost equal to cost * periods bit-for-bit
        costs[t] = math.fsum(per_period)
    return CostDistribution(costs, periods, int(shortfalls))


# -- summaries -----------------------------------------------------------------

QUANTILE_LEVELS = (0.5, 0.9, 0.99)


@dataclass(frozen=True)
class RiskSummary:
    trials: int
    mean: float
    std: float
    stderr: float
    quantiles: dict[float, float]
    tail_mean: float  # mean of the outcomes at or above the 0.99 quantile
    infeasible_fraction: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "std": self.std,
            "stderr": self.stderr,
            "quantiles": {f"{q:g}": v for q, v in self.quantiles.items()},
            "tail_mean_0.99": self.tail_mean,
            "infeasible_period_fraction": self.infeasible_fraction,
        }


def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    """Value of 1-based rank ``ceil(q * n)`` (at least 1) in ascending data."""
    n = len(sorted_values)
    rank = max(1, math.ceil(q * n))
    return float(sorted_values[rank - 1])


def summarize_risk(costs: CostDistribution | Sequence[float]) -> RiskSummary:
    """Mean, population standard deviation, nearest-rank quantiles and upper-tail mean."""
    if isinstance(costs, CostDistribution):
        values, periods, short = costs.costs, costs.periods, costs.shortfall_periods
    else:
        values, periods, short = costs, 1, 0
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n == 0:
        raise EmptyDistribution("no trials to summarise")
    mean = float(x.mean())
    std = float(x.std())
    q = {level: nearest_rank(x, level) for level in QUANTILE_LEVELS}
    tail_start = max(1, math.ceil(0.99 * n)) - 1
    return RiskSummary(
        trials=n,
        mean=mean,
        std=std,
        stderr=std / math.sqrt(n),
        quantiles=q,
        # the tail contains the quantile itself; max() only absorbs rounding in the mean
        tail_mean=max(q[0.99], math.fsum(x[tail_start:]) / (n - tail_start)),
        infeasible_fraction=short / (n * periods),
    )
