"""Batch command line: ``multivendor {validate,solve,sweep,simulate,payoff}``.

Exit codes: 0 success, 1 unreadable or invalid input, 2 infeasible
``solve``, 3 a solved plan failed its constraint audit.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .disruption import load_disruption_model, simulate_horizon, summarize_risk
from .errors import MultivendorError, ParseError, ValidationError
from .flow import audit_plan, plan_to_dict, solve
from .model import load_scenario, parse_document
from .optionality import (
    OptionPortfolio,
    distribution_from_dict,
    jensen_gap,
    payoff_from_dict,
    portfolio_simulate,
    spread_curve,
    vendor_option_value,
)
from .report import csv_text, json_text
from .sweep import sweep_subsets

COMMANDS = ("validate", "solve", "sweep", "simulate", "payoff")

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_AUDIT = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    format: str = "json"
    seed: int = 0
    trials: int = 10_000
    periods: int = 1
    min_subset_size: int = 1
    study: Optional[str] = None  # inline payoff study JSON, alternative to input

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.trials < 1 or self.periods < 1:
            raise ValueError("trials and periods must be >= 1")

    def describe(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("output")
        d["version"] = __version__
        return d


class _AuditFailure(Exception):
    pass


def _read_input(cfg: RunConfig) -> str:
    if cfg.input is None:
        raise ParseError("--input is required")
    try:
        return Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {cfg.input}: {exc.strerror}") from None


def _write(cfg: RunConfig, text: str, suffix: str = "") -> None:
    if cfg.output is None:
        if not suffix:
            sys.stdout.write(text)
        return
    Path(cfg.output + suffix).write_text(text, encoding="utf-8", newline="")


def _emit(cfg: RunConfig, report: dict[str, Any], rows: list[dict] | None, header: Sequence[str] = ()) -> None:
    """Write the JSON report, or CSV rows plus a ``.meta.json`` sidecar with the config."""
    if cfg.format == "json":
        _write(cfg, json_text({"config": cfg.describe(), **report}))
        return
    text = csv_text(rows) if rows else ",".join(header) + "\n"
    _write(cfg, text)
    _write(cfg, json_text({"config": cfg.describe()}), ".meta.json")


def _cmd_validate(cfg: RunConfig) -> int:
    try:
        load_scenario(_read_input(cfg))
        violations: list[str] = []
    except ValidationError as exc:
        violations = exc.violations
    for v in violations:
        print(v, file=sys.stderr)
    rows = [{"violation": v} for v in violations]
    _emit(cfg, {"valid": not violations, "violations": violations}, rows, ["violation"])
    return EXIT_INPUT if violations else EXIT_OK


def _cmd_solve(cfg: RunConfig) -> int:
    s = load_scenario(_read_input(cfg))
    plan = solve(s)
    problems = audit_plan(plan, s)
    if problems:
        raise _AuditFailure("; ".join(problems))
    d = plan_to_dict(plan, s)
    _emit(cfg, d, d["shipments"], ["supplier", "item", "demand", "units"])
    if not plan.optimal:
        print("INFEASIBLE: supply cannot meet demand", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig) -> int:
    s = load_scenario(_read_input(cfg))
    result = sweep_subsets(s, cfg.min_subset_size)
    rows = result.rows()
    _emit(cfg, {"baseline_z": result.baseline_z, "entries": rows}, rows)
    return EXIT_OK


def _cmd_simulate(cfg: RunConfig) -> int:
    text = _read_input(cfg)
    s = load_scenario(text)
    dm = load_disruption_model(text, s)
    dist = simulate_horizon(s, dm, cfg.periods, cfg.trials, cfg.seed)
    summary = summarize_risk(dist).to_dict()
    cost_rows = [{"cost": float(c)} for c in dist.costs]
    if cfg.format == "json":
        _write(cfg, json_text({"config": cfg.describe(), "summary": summary}))
        _write(cfg, csv_text(cost_rows), ".costs.csv")
    else:
        _write(cfg, csv_text(cost_rows))
        _write(cfg, json_text({"config": cfg.describe(), "summary": summary}), ".summary.json")
    return EXIT_OK


_STUDY_KEYS = {"function", "distribution", "scales", "portfolio", "vendors"}


def run_study(study: dict[str, Any], trials: int, seed: int) -> dict[str, Any]:
    """Evaluate whichever parts of a payoff study are present."""
    unknown = sorted(set(study) - _STUDY_KEYS)
    if unknown:
        raise ParseError(f"payoff: unknown key(s) {', '.join(map(repr, unknown))}")
    out: dict[str, Any] = {}
    if "function" in study:
        f = payoff_from_dict(study["function"])
        d = distribution_from_dict(study.get("distribution", {"kind": "normal"}))
        g = jensen_gap(f, d, trials, seed)
        out["jensen_gap"] = {"value": g.value, "stderr": g.stderr, "mc_value": g.mc_value, "exact": g.exact}
        if "scales" in study:
            out["curve"] = [
                {"sigma": s, "expected_payoff": e.value, "mc_stderr": e.stderr}
                for s, e in spread_curve(f, d, [float(x) for x in study["scales"]], trials, seed)
            ]
    if "portfolio" in study:
        p = study["portfolio"]
        pf = OptionPortfolio(int(p["n"]), float(p["trial_cost"]), float(p["jackpot_probability"]), float(p["jackpot_value"]))
        r = portfolio_simulate(pf, trials, seed)
        out["portfolio"] = {
            "capture_probability": r.capture_probability,
            "capture_stderr": r.capture_stderr,
            "analytic_capture": r.analytic_capture,
            "mean_payoff": r.mean_payoff,
            "payoff_stderr": r.payoff_stderr,
            "analytic_mean": r.analytic_mean,
        }
    if "vendors" in study:
        v = vendor_option_value([distribution_from_dict(x) for x in study["vendors"]], trials, seed)
        out["vendor_option"] = {
            "expected_min": v.expected_min,
            "stderr": v.stderr,
            "per_vendor_expected": list(v.per_vendor_expected),
            "savings_vs_best_single": v.savings_vs_best_single,
        }
    return out


def _cmd_payoff(cfg: RunConfig) -> int:
    doc = parse_document(cfg.study if cfg.study is not None else _read_input(cfg))
    if set(doc) != {"payoff"} or not isinstance(doc["payoff"], dict):
        raise ParseError("a payoff study is an object with a single 'payoff' section")
    result = run_study(doc["payoff"], cfg.trials, cfg.seed)
    rows = result.get("curve")
    if cfg.format == "csv" and not rows:
        raise ParseError("csv output needs 'function' and 'scales' in the study")
    _emit(cfg, result, rows)
    return EXIT_OK


_DISPATCH = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
    "payoff": _cmd_payoff,
}


def run(cfg: RunConfig) -> int:
    try:
        return _DISPATCH[cfg.command](cfg)
    except _AuditFailure as exc:
        print(f"internal error: plan audit failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except (MultivendorError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multivendor", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="scenario or study file (JSON)")
    p.add_argument("--output", help="report path; stdout if omitted")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--min-subset-size", type=int, default=1)
    p.add_argument("--study", help="inline payoff study JSON (payoff command only)")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
