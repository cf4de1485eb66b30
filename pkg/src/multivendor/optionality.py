"""Convex payoffs under uncertainty, 1/N bet portfolios and vendor switching value.

Uncertainty is varied by a mean-preserving spread: ``X_s = mu + s * (X - mu)``.
Monte Carlo estimates are driven by ``multivendor.rng`` streams, one per
trial, so every function here is deterministic in its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.special import ndtri

from . import rng
from .errors import InvalidParameters

# -- payoff shapes -------------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    a: float
    b: float = 0.0

    def __call__(self, x):
        return self.a * np.asarray(x, dtype=float) + self.b

    def slope(self, x):
        return np.full(np.shape(x), float(self.a))


@dataclass(frozen=True)
class Quadratic:
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x * x

    def slope(self, x):
        return 2.0 * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class Hinge:
    strike: float = 0.0

    def __call__(self, x):
        return np.maximum(np.asarray(x, dtype=float) - self.strike, 0.0)

    def slope(self, x):
        return (np.asarray(x, dtype=float) > self.strike).astype(float)


@dataclass(frozen=True)
class Table:
    """Piecewise-linear through ``(x, y)`` breakpoints, extended linearly past both ends."""

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        xs = [p[0] for p in self.breakpoints]
        if len(xs) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise InvalidParameters("table needs >= 2 breakpoints with strictly increasing x")

    def slopes(self) -> list[float]:
        bp = self.breakpoints
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(bp, bp[1:])]

    def is_convex(self) -> bool:
        m = self.slopes()
        return all(b >= a for a, b in zip(m, m[1:]))

    def slope(self, x):
        xs = np.array([p[0] for p in self.breakpoints[1:-1]])
        return np.asarray(self.slopes())[np.searchsorted(xs, np.asarray(x, dtype=float), side="right")]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.array([p[0] for p in self.breakpoints])
        ys = np.array([p[1] for p in self.breakpoints])
        m = self.slopes()
        y = np.interp(x, xs, ys)
        y = np.where(x < xs[0], ys[0] + m[0] * (x - xs[0]), y)
        return np.where(x > xs[-1], ys[-1] + m[-1] * (x - xs[-1]), y)


PayoffFunction = Affine | Quadratic | Hinge | Table


def is_convex(f: PayoffFunction) -> bool:
    if isinstance(f, Table):
        return f.is_convex()
    return isinstance(f, (Affine, Quadratic, Hinge))


# -- distributions -------------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidParameters("uniform needs lo < hi")

    @property
    def mean(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def var(self) -> float:
        return (self.hi - self.lo) ** 2 / 12

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * u


@dataclass(frozen=True)
class TwoPoint:
    """``x1`` with probability ``p``, otherwise ``x2``."""

    x1: float
    x2: float
    p: float = 0.5

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise InvalidParameters("two-point probability must be in [0, 1]")

    @property
    def mean(self) -> float:
        return self.p * self.x1 + (1 - self.p) * self.x2

    @property
    def var(self) -> float:
        return self.p * (1 - self.p) * (self.x1 - self.x2) ** 2

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.where(u < self.p, self.x1, self.x2)


@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not self.sd >= 0:
            raise InvalidParameters("normal sd must be >= 0")

    @property
    def var(self) -> float:
        return self.sd**2

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        # shift by half a grid step so u == 0 does not map to -inf
        return self.mean + self.sd * ndtri(u + 2.0**-54)


Distribution = Uniform | TwoPoint | Normal


@dataclass(frozen=True)
class SpreadFamily:
    base: Distribution
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale >= 0:
            raise InvalidParameters("spread scale must be >= 0")

    @property
    def mean(self) -> float:
        return self.base.mean

    @property
    def var(self) -> float:
        return self.scale**2 * self.base.var

    def rescaled(self, scale: float) -> "SpreadFamily":
        return SpreadFamily(self.base, scale)


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo estimate with its standard error, and the exact value when one exists."""

    value: float
    stderr: float
    mc_value: float
    exact: float | None = None


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise InvalidParameters("trials must be >= 1")


def _base_draws(d: SpreadFamily, trials: int, seed: int) -> np.ndarray:
    return d.base.from_uniform(rng.trial_uniforms(seed, trials, 1)[:, 0])


def _spread(x: np.ndarray, scale: float, centre: float) -> np.ndarray:
    return centre + scale * (x - centre)


def _centred_mean(f: PayoffFunction, x: np.ndarray, scale: float) -> tuple[float, float]:
    """Mean of ``f`` over the sample spread about its own mean.

    Spreading about the sample mean keeps the sample's mean fixed, so the
    sample average is convex in ``scale`` with zero slope at 0, hence
    nondecreasing for every convex ``f`` on any fixed sample. The estimated centre adds
    ``(1 - scale) * E[f'(X_s)] * (x - mean)`` to each draw's influence;
    the standard error includes it.
    """
    m = x.mean()
    y = _spread(x, scale, m)
    fy = f(y)
    n = len(x)
    if n == 1:
        return float(fy[0]), 0.0
    influence = fy + (1.0 - scale) * f.slope(y).mean() * (x - m)
    return float(fy.mean()), float(influence.std(ddof=1)) / math.sqrt(n)


def _exact_mean_payoff(f: PayoffFunction, d: SpreadFamily) -> float | None:
    if isinstance(f, Affine):
        return f.a * d.mean + f.b
    if isinstance(f, Quadratic):
        return d.mean**2 + d.var
    return None


def _mc_mean(values: np.ndarray) -> tuple[float, float]:
    n = len(values)
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return float(values.mean()), sd / math.sqrt(n)


def jensen_gap(f: PayoffFunction, d: SpreadFamily, trials: int = 10_000, seed: int = 0) -> Estimate:
    """``E[f(X)] - f(E[X])`` for ``X`` drawn from ``d``.

    AFFINE and QUADRATIC use the closed forms (0 and the variance); the
    Monte Carlo estimate is still computed and reported alongside.
    """
    _check_trials(trials)
    x = _spread(_base_draws(d, trials, seed), d.scale, d.mean)
    mc, se = _mc_mean(f(x))
    f_mean = float(f(d.mean))
    mc_gap = mc - f_mean
    if isinstance(f, Affine):
        exact = 0.0
    elif isinstance(f, Quadratic):
        exact = d.var
    else:
        exact = None
    return Estimate(exact if exact is not None else mc_gap, 0.0 if exact is not None else se, mc_gap, exact)


def spread_curve(
    f: PayoffFunction, d: SpreadFamily, scales: Sequence[float], trials: int = 10_000, seed: int = 0
) -> list[tuple[float, Estimate]]:
    """``E[f(X_s)]`` for each spread scale ``s``, reusing one set of draws for all scales.

    Unlike ``jensen_gap``, draws are spread about their sample mean (see
    ``_centred_mean``), which makes the curve monotone for convex ``f``.
    """
    _check_trials(trials)
    if not scales or any(not s >= 0 for s in scales):
        raise InvalidParameters("scales must be nonempty and >= 0")
    x = _base_draws(d, trials, seed)
    out = []
    for s in scales:
        mc, se = _centred_mean(f, x, s)
        exact = _exact_mean_payoff(f, d.rescaled(s))
        out.append((float(s), Estimate(exact if exact is not None else mc, 0.0 if exact is not None else se, mc, exact)))
    return out


# -- 1/N portfolio -------------------------------------------------------------


@dataclass(frozen=True)
class OptionPortfolio:
    n: int
    trial_cost: float
    jackpot_probability: float
    jackpot_value: float

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameters("portfolio needs at least one bet")
        if not self.trial_cost >= 0 or not self.jackpot_value >= 0:
            raise InvalidParameters("costs and jackpot must be >= 0")
        if not 0 <= self.jackpot_probability <= 1:
            raise InvalidParameters("jackpot probability must be in [0, 1]")

    @property
    def capture_probability(self) -> float:
        return 1.0 - (1.0 - self.jackpot_probability) ** self.n

    @property
    def expected_payoff(self) -> float:
        return self.n * (self.jackpot_probability * self.jackpot_value - self.trial_cost)


@dataclass(frozen=True)
class PortfolioResult:
    payoffs: np.ndarray
    capture_probability: float
    capture_stderr: float
    analytic_capture: float
    mean_payoff: float
    payoff_stderr: float
    analytic_mean: float


def portfolio_simulate(pf: OptionPortfolio, trials: int = 10_000, seed: int = 0) -> PortfolioResult:
    """Draw N independent bets per trial; payoff is jackpots * J minus N * c."""
    _check_trials(trials)
    hits = (rng.trial_uniforms(seed, trials, pf.n) < pf.jackpot_probability).sum(axis=1)
    payoffs = hits * pf.jackpot_value - pf.n * pf.trial_cost
    captured = float((hits > 0).mean())
    q = pf.capture_probability
    mean, se = _mc_mean(payoffs.astype(float))
    return PortfolioResult(
        payoffs=payoffs,
        capture_probability=captured,
        capture_stderr=math.sqrt(q * (1 - q) / trials),
        analytic_capture=q,
        mean_payoff=mean,
        payoff_stderr=se,
        analytic_mean=pf.expected_payoff,
    )


# -- vendor switching ----------------------------------------------------------


@dataclass(frozen=True)
class VendorOptionResult:
    expected_min: float
    stderr: float
    per_vendor_expected: tuple[float, ...]
    savings_vs_best_single: float
    minima: np.ndarray


def vendor_option_value(price_models: Sequence[SpreadFamily], trials: int = 10_000, seed: int = 0) -> VendorOptionResult:
    """Expected price when free to buy from the cheapest of several vendors.

    Vendor i always uses draw i of each trial's stream, so appending a
    vendor can only lower each trial's minimum.
    """
    _check_trials(trials)
    if not price_models:
        raise InvalidParameters("need at least one vendor")
    u = rng.trial_uniforms(seed, trials, len(price_models))
    prices = np.column_stack([m.base.mean + m.scale * (m.base.from_uniform(u[:, i]) - m.base.mean) for i, m in enumerate(price_models)])
    minima = prices.min(axis=1)
    em, se = _mc_mean(minima)
    per_vendor = tuple(float(v) for v in prices.mean(axis=0))
    return VendorOptionResult(em, se, per_vendor, max(0.0, min(per_vendor) - em), minima)


# -- study files ---------------------------------------------------------------


def payoff_from_dict(obj: dict[str, Any]) -> PayoffFunction:
    kind = str(obj.get("kind", "")).lower()
    try:
        if kind == "affine":
            return Affine(float(obj["a"]), float(obj.get("b", 0.0)))
        if kind == "quadratic":
            return Quadratic()
        if kind == "hinge":
            return Hinge(float(obj.get("strike", 0.0)))
        if kind == "table":
            return Table(tuple((float(x), float(y)) for x, y in obj["breakpoints"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameters(f"payoff function {obj!r}: {exc}") from None
    raise InvalidParameters(f"unknown payoff kind {kind!r}")


def distribution_from_dict(obj: dict[str, Any]) -> SpreadFamily:
    kind = str(obj.get("kind", "")).lower()
    scale = float(obj.get("scale", 1.0))
    try:
        if kind == "uniform":
            base: Distribution = Uniform(float(obj["lo"]), float(obj["hi"]))
        elif kind == "two_point":
            base = TwoPoint(float(obj["x1"]), float(obj["x2"]), float(obj.get("p", 0.5)))
        elif kind == "normal":
            base = Normal(float(obj.get("mean", 0.0)), float(obj.get("sd", 1.0)))
        else:
            raise InvalidParameters(f"unknown distribution kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameters(f"distribution {obj!r}: {exc}") from None
    return SpreadFamily(base, scale)
