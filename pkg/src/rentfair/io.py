"""JSON instance and result files with exact rationals.

Rationals are written as ``"p/q"`` strings (``"p"`` when integral). On input
they may also be JSON integers or decimal strings such as ``"12.25"``, which
are converted exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .model import Affine, Allocation, Economy, Family, Objective, Preference, SlopeSet


class InstanceError(ValueError):
    """Input that cannot become a valid economy; ``violations`` lists why."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


def parse_rational(x: Any, where: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise InstanceError([f"{where}: expected a rational, got {x!r}"])
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            # Fraction parses "p/q" and decimal strings exactly
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InstanceError([f"{where}: expected a rational, got {x!r}"])


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _load_json(text: str):
    # JSON number literals with a fraction part are kept exact
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InstanceError([f"malformed JSON: {exc}"]) from None


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _need(doc, key, kind, errors):
    if key not in doc:
        errors.append(f"missing field {key!r}")
        return None
    if not isinstance(doc[key], kind):
        errors.append(f"field {key!r} has the wrong type")
        return None
    return doc[key]


@dataclass(frozen=True)
class InstanceFile:
    economy: Economy
    objective: Objective | None = None

    @classmethod
    def parse(cls, text: str) -> "InstanceFile":
        doc = _load_json(text)
        if not isinstance(doc, dict):
            raise InstanceError(["instance must be a JSON object"])
        errors: list[str] = []
        agents = _need(doc, "agents", list, errors)
        rooms = _need(doc, "rooms", list, errors)
        slopes = _need(doc, "slope_set", list, errors)
        values = _need(doc, "values", list, errors)
        budgets = _need(doc, "budgets", list, errors)
        rho_index = _need(doc, "rho_index", list, errors)
        if "total_rent" not in doc:
            errors.append("missing field 'total_rent'")
        if errors:
            raise InstanceError(errors)
        agents = [str(a) for a in agents]
        rooms = [str(r) for r in rooms]
        n = len(agents)
        if len(rooms) != n or len(values) != n or len(budgets) != n or len(rho_index) != n:
            errors.append("agent/room count mismatch")
        if any(not isinstance(row, list) or len(row) != len(rooms) for row in values):
            errors.append("value matrix dimensions do not match agents and rooms")
        if errors:
            raise InstanceError(errors)
        slope_set = SlopeSet(tuple(parse_rational(x, "slope_set") for x in slopes))
        prefs = []
        for i, (row, b, k) in enumerate(zip(values, budgets, rho_index)):
            if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < len(slope_set.rhos):
                errors.append(f"agent {agents[i]}: rho_index out of range")
                continue
            prefs.append(Preference(tuple(parse_rational(x, f"values[{i}]") for x in row),
                                    parse_rational(b, f"budgets[{i}]"), slope_set.rhos[k]))
        if errors:
            raise InstanceError(errors)
        economy = Economy(tuple(prefs), slope_set, parse_rational(doc["total_rent"], "total_rent"),
                          tuple(agents), tuple(rooms))
        objective = None
        if doc.get("objective") is not None:
            objective = parse_objective(doc["objective"], economy)
        return cls(economy, objective)

    def to_json(self) -> dict:
        e = self.economy
        doc = {
            "agents": list(e.agents),
            "rooms": list(e.rooms),
            "slope_set": [format_rational(r) for r in e.slope_set.rhos],
            "values": [[format_rational(x) for x in row] for row in e.v],
            "budgets": [format_rational(b) for b in e.b],
            "rho_index": [e.slope_index(i) for i in range(e.n)],
            "total_rent": format_rational(e.total_rent),
        }
        if self.objective is not None:
            doc["objective"] = objective_to_json(self.objective, e)
        return doc

    def serialize(self) -> str:
        return _dump_json(self.to_json())


def _scope_ids(family: Family, economy: Economy):
    return economy.agents if family.on_utilities else economy.rooms


def parse_objective(doc, economy: Economy) -> Objective:
    if not isinstance(doc, dict) or "family" not in doc:
        raise InstanceError(["objective needs a 'family'"])
    try:
        family = Family(doc["family"])
    except ValueError:
        raise InstanceError([f"unknown objective family {doc['family']!r}"]) from None
    ids = list(_scope_ids(family, economy))
    scope_doc = doc.get("scope")
    if scope_doc is None:
        scope = tuple(range(len(ids)))
    else:
        unknown = [s for s in scope_doc if str(s) not in ids]
        if unknown:
            raise InstanceError([f"objective scope refers to unknown ids {unknown}"])
        scope = tuple(ids.index(str(s)) for s in scope_doc)
    affine = tuple(
        Affine(parse_rational(f.get("slope", 1), "affine slope"),
               parse_rational(f.get("intercept", 0), "affine intercept"))
        for f in doc.get("affine") or ()
    )
    return Objective(family, scope, affine)


def objective_to_json(objective: Objective, economy: Economy) -> dict:
    ids = _scope_ids(objective.family, economy)
    return {
        "family": objective.family.value,
        "scope": [ids[k] for k in objective.scope],
        "affine": [{"slope": format_rational(f.slope), "intercept": format_rational(f.intercept)}
                   for f in objective.affine],
    }


@dataclass(frozen=True)
class ResultFile:
    """A solved allocation keyed by agent and room ids.

    ``trace`` is kept in its JSON form (rationals as strings) or ``None``.
    """

    assignment: dict[str, str]
    rents: dict[str, Fraction]
    utilities: dict[str, Fraction]
    objective_value: Fraction
    certified: bool
    trace: dict | None = None

    @classmethod
    def from_allocation(cls, economy: Economy, alloc: Allocation, value: Fraction,
                        certified: bool, trace: dict | None = None) -> "ResultFile":
        us = alloc.utilities(economy)
        return cls(
            {economy.agents[i]: economy.rooms[a] for i, a in enumerate(alloc.assignment)},
            {economy.rooms[a]: r for a, r in enumerate(alloc.rents)},
            {economy.agents[i]: u for i, u in enumerate(us)},
            value, certified, trace,
        )

    def allocation(self, economy: Economy) -> Allocation:
        """Positional allocation; raises InstanceError if ids do not match the economy."""
        if set(self.assignment) != set(economy.agents) or set(self.rents) != set(economy.rooms):
            raise InstanceError(["result ids do not match the instance"])
        if sorted(self.assignment.values()) != sorted(economy.rooms):
            raise InstanceError(["assignment is not a bijection onto the rooms"])
        rents = tuple(self.rents[r] for r in economy.rooms)
        sigma = tuple(economy.rooms.index(self.assignment[a]) for a in economy.agents)
        return Allocation(rents, sigma)

    @classmethod
    def parse(cls, text: str) -> "ResultFile":
        doc = _load_json(text)
        errors: list[str] = []
        if not isinstance(doc, dict):
            raise InstanceError(["result must be a JSON object"])
        assignment = _need(doc, "assignment", dict, errors)
        rents = _need(doc, "rents", dict, errors)
        utilities = _need(doc, "utilities", dict, errors)
        if "objective_value" not in doc:
            errors.append("missing field 'objective_value'")
        if errors:
            raise InstanceError(errors)
        return cls(
            {str(k): str(v) for k, v in assignment.items()},
            {str(k): parse_rational(v, f"rents[{k}]") for k, v in rents.items()},
            {str(k): parse_rational(v, f"utilities[{k}]") for k, v in utilities.items()},
            parse_rational(doc["objective_value"], "objective_value"),
            bool(doc.get("certified", False)),
            doc.get("trace"),
        )

    def to_json(self) -> dict:
        doc = {
            "assignment": dict(self.assignment),
            "rents": {k: format_rational(v) for k, v in self.rents.items()},
            "utilities": {k: format_rational(v) for k, v in self.utilities.items()},
            "objective_value": format_rational(self.objective_value),
            "certified": self.certified,
        }
        if self.trace is not None:
            doc["trace"] = self.trace
        return doc

    def serialize(self) -> str:
        return _dump_json(self.to_json())


def trace_to_json(economy: Economy, trace) -> dict:
    """JSON form of a solver trace, one record per loop iteration."""

    def rents(rs):
        return None if rs is None else {economy.rooms[a]: format_rational(r) for a, r in enumerate(rs)}

    def assignment(sigma):
        return {economy.agents[i]: economy.rooms[a] for i, a in enumerate(sigma)}

    return {
        "boundary_rent": format_rational(trace.boundary_rent),
        "init": {"assignment": assignment(trace.init_allocation.assignment),
                 "rents": rents(trace.init_allocation.rents)},
        "iterations": [
            {
                "s": rec.s,
                "assignment": assignment(rec.sigma),
                "weight_exponents": list(rec.weight_exponents),
                "product_weight": format_rational(rec.product_weight),
                "step_rents": rents(rec.step_rents),
                "step_value": format_rational(rec.step_value),
                "member": rec.membership.member,
                "restore_rents": rents(rec.restore_rents),
                "sb_before": rec.sb_size_before,
                "sb_after": rec.sb_size_after,
            }
            for rec in trace.iterations
        ],
    }
