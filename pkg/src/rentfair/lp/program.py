from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

LE, GE, EQ = "<=", ">=", "="
ZERO = Fraction(0)


def _frac(x):
    return x if type(x) is Fraction else Fraction(x)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in (LE, GE, EQ):
            raise ValueError(f"bad relation {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", _frac(self.rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.coeffs, x) if c), ZERO)

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.rel == LE:
            return v <= self.rhs
        if self.rel == GE:
            return v >= self.rhs
        return v == self.rhs


@dataclass
class LinearProgram:
    """A linear program over free real variables.

    ``tiebreak`` lists further objectives ``(maximize, coeffs)`` optimised in
    order over the optimal face, so degenerate optima resolve deterministically.
    """

    variables: list[str]
    objective: list[Fraction]
    maximize: bool = True
    constraints: list[Constraint] = field(default_factory=list)
    tag: str = ""
    tiebreak: list[tuple[bool, list[Fraction]]] = field(default_factory=list)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def add(self, coeffs, rel, rhs):
        coeffs = tuple(coeffs)
        if len(coeffs) != len(self.variables):
            raise ValueError("constraint references undeclared variables")
        self.constraints.append(Constraint(coeffs, rel, rhs))

    def add_terms(self, terms: dict[int, Fraction], rel, rhs):
        row = [ZERO] * len(self.variables)
        for j, c in terms.items():
            row[j] = row[j] + c if row[j] else _frac(c)
        self.add(row, rel, rhs)

    def check(self) -> list[str]:
        out = []
        nv = len(self.variables)
        if len(self.objective) != nv:
            out.append("objective length differs from variable count")
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != nv:
                out.append(f"constraint {k} length differs from variable count")
        return out

    def dump(self) -> str:
        """Plain-text listing in an LP-file-like layout, rationals as ``p/q``."""

        def form(coeffs):
            parts = []
            for c, name in zip(coeffs, self.variables):
                if c:
                    sign = "-" if c < 0 else "+"
                    parts.append(f"{sign} {abs(c)} {name}")
            if not parts:
                return "0"
            text = " ".join(parts)
            return text[2:] if text.startswith("+ ") else text

        lines = [f"\\ {self.tag}" if self.tag else "\\ lp"]
        lines.append("Maximize" if self.maximize else "Minimize")
        lines.append(f" obj: {form(self.objective)}")
        lines.append("Subject To")
        for k, con in enumerate(self.constraints):
            lines.append(f" c{k}: {form(con.coeffs)} {con.rel} {con.rhs}")
        lines.append("Free")
        for name in self.variables:
            lines.append(f" {name}")
        lines.append("End")
        return "\n".join(lines)


@dataclass(frozen=True)
class LpSolution:
    status: str
    point: dict[str, Fraction]
    value: Fraction | None
    duals: tuple[Fraction, ...] = ()
    tag: str = ""

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def vector(self, names: Sequence[str]) -> tuple[Fraction, ...]:
        return tuple(self.point[n] for n in names)


def certify(lp: LinearProgram, sol: LpSolution) -> list[str]:
    """Re-check an optimal solution exactly: primal feasibility plus a dual certificate.

    With ``y`` the duals, optimality holds when ``sum_i y_i a_i == c`` on every
    variable, each ``y_i`` has the sign its relation demands, and ``b . y``
    equals the objective value.
    """
    if not sol.optimal:
        return [f"status {sol.status}"]
    out = []
    x = [sol.point[v] for v in lp.variables]
    for k, con in enumerate(lp.constraints):
        if not con.holds(x):
            out.append(f"constraint {k} violated")
    y = sol.duals
    if len(y) != len(lp.constraints):
        return out + ["dual vector has wrong length"]
    for j, c in enumerate(lp.objective):
        s = sum((yi * con.coeffs[j] for yi, con in zip(y, lp.constraints)), Fraction(0))
        if s != c:
            out.append(f"dual equation for {lp.variables[j]} fails")
    for k, (yi, con) in enumerate(zip(y, lp.constraints)):
        if con.rel == EQ:
            continue
        want_nonneg = (con.rel == LE) == lp.maximize
        if (yi < 0) if want_nonneg else (yi > 0):
            out.append(f"dual sign wrong on constraint {k}")
    dual_value = sum((yi * con.rhs for yi, con in zip(y, lp.constraints)), Fraction(0))
    if dual_value != sol.value:
        out.append(f"duality gap {sol.value - dual_value}")
    return out
