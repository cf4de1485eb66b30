"""Problem-instance data model and the JSON scenario format.

A scenario is a multi-item transportation problem: suppliers with an
aggregate capacity, demand points that each request one item, a cost tensor
``costs[s][k][d]`` and an optional per-(item, supplier) capacity matrix
``item_capacity[k][s]``.

``None`` marks an UNAVAILABLE cost cell and an UNBOUNDED item capacity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .errors import ParseError, UnknownSupplier, ValidationError

UNAVAILABLE = None
UNBOUNDED = None

Costs = tuple[tuple[tuple[Optional[float], ...], ...], ...]
ItemCapacity = tuple[tuple[Optional[int], ...], ...]

_TOP_KEYS = ("suppliers", "items", "demands", "costs", "item_capacity")
# Sections owned by other modules; load_scenario only checks that they are objects.
_EXTENSION_KEYS = ("disruption", "payoff")


@dataclass(frozen=True)
class Supplier:
    name: str
    capacity: int


@dataclass(frozen=True)
class DemandPoint:
    name: str
    item: str
    quantity: int


@dataclass(frozen=True)
class Scenario:
    suppliers: tuple[Supplier, ...]
    items: tuple[str, ...]
    demands: tuple[DemandPoint, ...]
    costs: Costs
    item_capacity: ItemCapacity

    @property
    def supplier_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.suppliers)

    @property
    def total_demand(self) -> int:
        return sum(d.quantity for d in self.demands)

    def item_index(self, demand: int) -> int:
        """Index into ``items`` of the item requested at demand point ``demand``."""
        return self.items.index(self.demands[demand].item)

    def cells(self) -> list[tuple[int, int, int]]:
        """Available (supplier, item, demand) cells in canonical order."""
        out = []
        for s in range(len(self.suppliers)):
            for k in range(len(self.items)):
                for d in range(len(self.demands)):
                    if self.costs[s][k][d] is not None:
                        out.append((s, k, d))
        return out


def make_scenario(
    suppliers: Iterable[tuple[str, int]],
    demands: Iterable[tuple[str, str, int]],
    costs: dict[tuple[str, str, str], float],
    items: Iterable[str] | None = None,
    item_capacity: dict[tuple[str, str], int] | None = None,
) -> Scenario:
    """Build a scenario from name-keyed mappings.

    ``costs`` maps ``(supplier, item, demand)`` to a unit cost and
    ``item_capacity`` maps ``(item, supplier)`` to a unit cap; missing keys
    mean UNAVAILABLE and UNBOUNDED respectively. Items default to the order
    in which demands first mention them.
    """
    sups = tuple(Supplier(n, c) for n, c in suppliers)
    dems = tuple(DemandPoint(n, k, q) for n, k, q in demands)
    if items is None:
        items = list(dict.fromkeys(d.item for d in dems))
    its = tuple(items)
    s_ix = {s.name: i for i, s in enumerate(sups)}
    k_ix = {k: i for i, k in enumerate(its)}
    d_ix = {d.name: i for i, d in enumerate(dems)}
    grid = [[[None] * len(dems) for _ in its] for _ in sups]
    for (s, k, d), c in costs.items():
        grid[s_ix[s]][k_ix[k]][d_ix[d]] = c
    caps = [[None] * len(sups) for _ in its]
    for (k, s), u in (item_capacity or {}).items():
        caps[k_ix[k]][s_ix[s]] = u
    return Scenario(sups, its, dems, _freeze3(grid), _freeze2(caps))


def _freeze3(grid) -> Costs:
    return tuple(tuple(tuple(row) for row in plane) for plane in grid)


def _freeze2(grid) -> ItemCapacity:
    return tuple(tuple(row) for row in grid)


def _duplicates(names: Iterable[str]) -> list[str]:
    seen, dups = set(), []
    for n in names:
        if n in seen and n not in dups:
            dups.append(n)
        seen.add(n)
    return dups


def validate_scenario(s: Scenario) -> list[str]:
    """Return every violated invariant; an empty list means the scenario is valid."""
    out: list[str] = []
    for label, names in (
        ("supplier", [x.name for x in s.suppliers]),
        ("item", list(s.items)),
        ("demand", [x.name for x in s.demands]),
    ):
        for dup in _duplicates(names):
            out.append(f"uniqueness: duplicate {label} name {dup!r}")
    for sup in s.suppliers:
        if sup.capacity < 0:
            out.append(f"nonnegativity: supplier {sup.name!r} has capacity {sup.capacity}")
    for dem in s.demands:
        if dem.quantity < 0:
            out.append(f"nonnegativity: demand {dem.name!r} has quantity {dem.quantity}")
        if dem.item not in s.items:
            out.append(f"reference: demand {dem.name!r} requests unknown item {dem.item!r}")

    n_s, n_k, n_d = len(s.suppliers), len(s.items), len(s.demands)
    if len(s.costs) != n_s or any(len(p) != n_k or any(len(r) != n_d for r in p) for p in s.costs):
        out.append(f"shape: cost tensor must be {n_s}x{n_k}x{n_d}")
        return out
    if len(s.item_capacity) != n_k or any(len(r) != n_s for r in s.item_capacity):
        out.append(f"shape: item capacity matrix must be {n_k}x{n_s}")
        return out

    for si, sup in enumerate(s.suppliers):
        for ki, item in enumerate(s.items):
            for di, dem in enumerate(s.demands):
                c = s.costs[si][ki][di]
                if c is None:
                    continue
                where = f"({sup.name!r}, {item!r}, {dem.name!r})"
                if not math.isfinite(c) or c < 0:
                    out.append(f"nonnegativity: cost {c} at {where} must be finite and >= 0")
                if dem.item != item:
                    out.append(f"reference: cost at {where} names an item not demanded there")
    for ki, item in enumerate(s.items):
        for si, sup in enumerate(s.suppliers):
            u = s.item_capacity[ki][si]
            if u is not None and u < 0:
                out.append(f"nonnegativity: item capacity for ({item!r}, {sup.name!r}) is {u}")
    return out


def restrict_suppliers(s: Scenario, allowed: Iterable[str]) -> Scenario:
    """Keep only the ``allowed`` suppliers, preserving their original order."""
    allowed = set(allowed)
    known = set(s.supplier_names)
    unknown = sorted(allowed - known)
    if unknown:
        raise UnknownSupplier(f"unknown supplier(s): {', '.join(unknown)}")
    keep = [i for i, sup in enumerate(s.suppliers) if sup.name in allowed]
    return Scenario(
        suppliers=tuple(s.suppliers[i] for i in keep),
        items=s.items,
        demands=s.demands,
        costs=tuple(s.costs[i] for i in keep),
        item_capacity=tuple(tuple(row[i] for i in keep) for row in s.item_capacity),
    )


# -- file format ---------------------------------------------------------------


def parse_document(text: str) -> dict[str, Any]:
    """Decode scenario-file JSON, raising ParseError with the position on failure."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    return doc


def _check_keys(obj: Any, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = [k for k in obj if k not in required and k not in optional]
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ParseError(f"{where}: missing key(s) {', '.join(map(repr, missing))}")


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _num(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _str(v: Any, where: str) -> str:
    if not isinstance(v, str):
        raise ParseError(f"{where}: expected a string, got {v!r}")
    return v


def _list(v: Any, where: str) -> list:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected an array")
    return v


def scenario_from_dict(doc: dict[str, Any]) -> Scenario:
    _check_keys(doc, "scenario", ("suppliers", "items", "demands", "costs"), ("item_capacity",) + _EXTENSION_KEYS)
    for key in _EXTENSION_KEYS:
        if key in doc and not isinstance(doc[key], dict):
            raise ParseError(f"{key}: expected an object")

    suppliers = []
    for i, e in enumerate(_list(doc["suppliers"], "suppliers")):
        where = f"suppliers[{i}]"
        _check_keys(e, where, ("name", "capacity"))
        suppliers.append(Supplier(_str(e["name"], where + ".name"), _int(e["capacity"], where + ".capacity")))
    items = [_str(v, f"items[{i}]") for i, v in enumerate(_list(doc["items"], "items"))]
    demands = []
    for i, e in enumerate(_list(doc["demands"], "demands")):
        where = f"demands[{i}]"
        _check_keys(e, where, ("name", "item", "quantity"))
        demands.append(
            DemandPoint(_str(e["name"], where + ".name"), _str(e["item"], where + ".item"), _int(e["quantity"], where + ".quantity"))
        )

    # first occurrence wins for lookups; duplicates are reported by validate_scenario
    s_ix: dict[str, int] = {}
    for i, x in enumerate(suppliers):
        s_ix.setdefault(x.name, i)
    k_ix: dict[str, int] = {}
    for i, x in enumerate(items):
        k_ix.setdefault(x, i)
    d_ix: dict[str, int] = {}
    for i, x in enumerate(demands):
        d_ix.setdefault(x.name, i)

    problems: list[str] = []
    grid: list = [[[None] * len(demands) for _ in items] for _ in suppliers]
    for i, e in enumerate(_list(doc["costs"], "costs")):
        where = f"costs[{i}]"
        _check_keys(e, where, ("supplier", "item", "demand", "cost"))
        s, k, d = (_str(e[f], f"{where}.{f}") for f in ("supplier", "item", "demand"))
        c = _num(e["cost"], where + ".cost")
        if s not in s_ix or k not in k_ix or d not in d_ix:
            problems.append(f"reference: {where} names unknown supplier/item/demand ({s!r}, {k!r}, {d!r})")
            continue
        if grid[s_ix[s]][k_ix[k]][d_ix[d]] is not None:
            problems.append(f"uniqueness: duplicate cost entry for ({s!r}, {k!r}, {d!r})")
            continue
        grid[s_ix[s]][k_ix[k]][d_ix[d]] = c

    caps: list = [[None] * len(suppliers) for _ in items]
    for i, e in enumerate(_list(doc.get("item_capacity", []), "item_capacity")):
        where = f"item_capacity[{i}]"
        _check_keys(e, where, ("item", "supplier", "max_units"))
        k, s = _str(e["item"], where + ".item"), _str(e["supplier"], where + ".supplier")
        u = _int(e["max_units"], where + ".max_units")
        if s not in s_ix or k not in k_ix:
            problems.append(f"reference: {where} names unknown item/supplier ({k!r}, {s!r})")
            continue
        if caps[k_ix[k]][s_ix[s]] is not None:
            problems.append(f"uniqueness: duplicate item capacity entry for ({k!r}, {s!r})")
            continue
        caps[k_ix[k]][s_ix[s]] = u

    scenario = Scenario(tuple(suppliers), tuple(items), tuple(demands), _freeze3(grid), _freeze2(caps))
    problems += validate_scenario(scenario)
    if problems:
        raise ValidationError(problems)
    return scenario


def load_scenario(text: str) -> Scenario:
    """Parse and validate scenario-file contents.

    Raises ParseError for malformed JSON or schema violations (unknown keys,
    wrong types) and ValidationError listing every broken invariant.
    """
    return scenario_from_dict(parse_document(text))


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "suppliers": [{"name": x.name, "capacity": x.capacity} for x in s.suppliers],
        "items": list(s.items),
        "demands": [{"name": x.name, "item": x.item, "quantity": x.quantity} for x in s.demands],
        "costs": [
            {"supplier": s.suppliers[si].name, "item": s.items[ki], "demand": s.demands[di].name, "cost": s.costs[si][ki][di]}
            for si, ki, di in s.cells()
        ],
    }
    doc["item_capacity"] = [
        {"item": k, "supplier": sup.name, "max_units": s.item_capacity[ki][si]}
        for ki, k in enumerate(s.items)
        for si, sup in enumerate(s.suppliers)
        if s.item_capacity[ki][si] is not None
    ]
    return doc


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
