"""Economies with soft-budget preferences and the closed-form quantities on them.

All money amounts are :class:`fractions.Fraction`. Agents and rooms are
addressed by position (``0..n-1``); the string ids are kept for I/O only.

An agent with value ``v`` for a room, soft budget ``b`` and violation
coefficient ``rho`` gets utility ``v - r - rho * max(0, r - b)`` from that
room at rent ``r``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Affine",
    "Allocation",
    "Economy",
    "Family",
    "Objective",
    "Preference",
    "SlopeSet",
    "as_fraction",
    "high_rent_bound",
    "kappa",
    "linearized_value",
    "low_rent_bound",
    "nu_lambda",
    "sb_set",
    "utility",
    "validate",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    """Exact conversion; floats are refused because they are already rounded."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not amounts")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing binary float {x!r}; pass a string or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class SlopeSet:
    rhos: tuple[Fraction, ...]

    def __post_init__(self):
        rhos = tuple(as_fraction(r) for r in self.rhos)
        object.__setattr__(self, "rhos", rhos)

    def violations(self) -> list[str]:
        out = []
        if not self.rhos or self.rhos[0] != 0:
            out.append("slope set must contain 0")
        if any(r < 0 for r in self.rhos):
            out.append("slopes must be nonnegative")
        if len(set(self.rhos)) != len(self.rhos):
            out.append("slope set has duplicates")
        elif any(a >= b for a, b in zip(self.rhos, self.rhos[1:])):
            out.append("slope set must be strictly increasing")
        return out

    @property
    def k(self) -> int:
        return len(self.rhos)

    def __len__(self):
        return len(self.rhos)

    def __getitem__(self, idx: int) -> Fraction:
        return self.rhos[idx]

    def index(self, rho: Fraction) -> int:
        return self.rhos.index(rho)


@dataclass(frozen=True)
class Preference:
    values: tuple[Fraction, ...]
    budget: Fraction
    rho: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))
        object.__setattr__(self, "budget", as_fraction(self.budget))
        object.__setattr__(self, "rho", as_fraction(self.rho))


class Family(enum.Enum):
    MAXMIN_UTILITY = "maxmin-utility"
    MINMAX_UTILITY = "minmax-utility"
    MAXMIN_RENT = "maxmin-rent"
    MINMAX_RENT = "minmax-rent"

    @property
    def on_utilities(self) -> bool:
        return self in (Family.MAXMIN_UTILITY, Family.MINMAX_UTILITY)

    @property
    def maximizes(self) -> bool:
        """True for the maxmin families (the aggregate is a minimum, pushed up)."""
        return self in (Family.MAXMIN_UTILITY, Family.MAXMIN_RENT)

    @property
    def rebates(self) -> bool:
        """Families solved from a high total rent downwards."""
        return self in (Family.MAXMIN_UTILITY, Family.MINMAX_RENT)


@dataclass(frozen=True)
class Affine:
    slope: Fraction = ONE
    intercept: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "slope", as_fraction(self.slope))
        object.__setattr__(self, "intercept", as_fraction(self.intercept))

    def __call__(self, x: Fraction) -> Fraction:
        return self.intercept + self.slope * x


@dataclass(frozen=True)
class Objective:
    """A selection: family plus scope (agent or room positions) and affine maps.

    ``affine`` is aligned with ``scope``; leave it empty for identity maps.
    """

    family: Family
    scope: tuple[int, ...]
    affine: tuple[Affine, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "scope", tuple(self.scope))
        aff = tuple(self.affine) or tuple(Affine() for _ in self.scope)
        object.__setattr__(self, "affine", aff)

    @classmethod
    def full(cls, family, n: int) -> "Objective":
        return cls(Family(family), tuple(range(n)))

    def violations(self, n: int) -> list[str]:
        out = []
        if not self.scope:
            out.append("objective scope must be nonempty")
        if len(set(self.scope)) != len(self.scope):
            out.append("objective scope has duplicates")
        if any(not 0 <= s < n for s in self.scope):
            out.append("objective scope refers to unknown ids")
        if len(self.affine) != len(self.scope):
            out.append("affine list must match scope")
        if any(f.slope <= 0 for f in self.affine):
            out.append("affine slope must be positive")
        return out

    def maps(self) -> dict[int, Affine]:
        return dict(zip(self.scope, self.affine))


@dataclass(frozen=True)
class Economy:
    prefs: tuple[Preference, ...]
    slope_set: SlopeSet
    total_rent: Fraction
    agents: tuple[str, ...] = ()
    rooms: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(self.prefs))
        object.__setattr__(self, "total_rent", as_fraction(self.total_rent))
        n = len(self.prefs)
        if not self.agents:
            object.__setattr__(self, "agents", tuple(str(i + 1) for i in range(n)))
        if not self.rooms:
            m = len(self.prefs[0].values) if self.prefs else 0
            object.__setattr__(self, "rooms", tuple(_room_name(a) for a in range(m)))
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "rooms", tuple(self.rooms))

    @classmethod
    def build(cls, values, budgets, rhos, total_rent, slope_set=None, **ids) -> "Economy":
        """Convenience constructor from a value matrix and per-agent lists."""
        rhos = [as_fraction(r) for r in rhos]
        if slope_set is None:
            slope_set = sorted(set(rhos) | {ZERO})
        if not isinstance(slope_set, SlopeSet):
            slope_set = SlopeSet(tuple(slope_set))
        prefs = tuple(Preference(tuple(row), b, r) for row, b, r in zip(values, budgets, rhos))
        return cls(prefs, slope_set, as_fraction(total_rent), **ids)

    @property
    def n(self) -> int:
        return len(self.prefs)

    @cached_property
    def v(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(p.values for p in self.prefs)

    @cached_property
    def b(self) -> tuple[Fraction, ...]:
        return tuple(p.budget for p in self.prefs)

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        return tuple(p.rho for p in self.prefs)

    def slope_index(self, i: int) -> int:
        return self.slope_set.index(self.prefs[i].rho)

    def with_total(self, total_rent) -> "Economy":
        return Economy(self.prefs, self.slope_set, as_fraction(total_rent), self.agents, self.rooms)

    def u(self, i: int, rent: Fraction, a: int) -> Fraction:
        return utility(self.prefs[i], rent, a)


def _room_name(a: int) -> str:
    # a, b, ..., z, r26, r27, ...
    return chr(ord("a") + a) if a < 26 else f"r{a}"


@dataclass(frozen=True)
class Allocation:
    """Room-indexed rents and an agent-indexed assignment (agent -> room)."""

    rents: tuple[Fraction, ...]
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rents", tuple(as_fraction(r) for r in self.rents))
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if sorted(self.assignment) != list(range(len(self.rents))):
            raise ValueError("assignment must be a bijection onto the rooms")

    @property
    def total(self) -> Fraction:
        return sum(self.rents, ZERO)

    def utilities(self, economy: Economy) -> tuple[Fraction, ...]:
        return tuple(
            utility(economy.prefs[i], self.rents[a], a) for i, a in enumerate(self.assignment)
        )

    def occupants(self) -> tuple[int, ...]:
        occ = [0] * len(self.assignment)
        for i, a in enumerate(self.assignment):
            occ[a] = i
        return tuple(occ)


def utility(pref: Preference, rent: Fraction, room: int) -> Fraction:
    if not 0 <= room < len(pref.values):
        raise ValueError(f"unknown room {room}")
    value = pref.values[room] - rent
    if rent > pref.budget:
        value -= pref.rho * (rent - pref.budget)
    return value


def linearized_value(pref: Preference, room: int) -> Fraction:
    """Value ``V`` with ``u(r) == (1 + rho) * (V - r)`` for every rent above budget."""
    return (pref.values[room] + pref.rho * pref.budget) / (1 + pref.rho)


def sb_set(economy: Economy, rents: Sequence[Fraction]) -> frozenset[tuple[int, int]]:
    """Pairs (agent, room) whose rent strictly exceeds the agent's budget."""
    return frozenset(
        (i, a) for i, bi in enumerate(economy.b) for a, r in enumerate(rents) if r > bi
    )


def nu_lambda(economy: Economy, rents: Sequence[Fraction]):
    """Left-side linearization: ``u_i(r', a) = nu[i][a] - lam[i][a] * r'`` just below ``rents``."""
    nu, lam = [], []
    for p in economy.prefs:
        nrow, lrow = [], []
        for a, r in enumerate(rents):
            if r > p.budget:
                nrow.append(p.values[a] + p.rho * p.budget)
                lrow.append(1 + p.rho)
            else:
                nrow.append(p.values[a])
                lrow.append(ONE)
        nu.append(tuple(nrow))
        lam.append(tuple(lrow))
    return tuple(nu), tuple(lam)


def kappa(economy: Economy, rents: Sequence[Fraction]):
    """Right-side slopes; at the kink the violated slope applies."""
    return tuple(
        tuple(1 + p.rho if r >= p.budget else ONE for r in rents) for p in economy.prefs
    )


def kappa_intercepts(economy: Economy, rents: Sequence[Fraction]):
    """Intercepts matching :func:`kappa`, i.e. ``u_i(r', a) = c[i][a] - kappa[i][a] * r'`` just above."""
    return tuple(
        tuple(p.values[a] + p.rho * p.budget if r >= p.budget else p.values[a]
              for a, r in enumerate(rents))
        for p in economy.prefs
    )


def _max_spread(rows: Iterable[Sequence[Fraction]]) -> Fraction:
    # max over agents and ordered room pairs of row[b] - row[a]; 0 for one room
    best = ZERO
    for row in rows:
        if len(row) > 1:
            best = max(best, max(row) - min(row))
    return best


def high_rent_bound(economy: Economy) -> Fraction:
    n = economy.n
    V = [[linearized_value(p, a) for a in range(n)] for p in economy.prefs]
    return n * (_max_spread(V) + max(economy.b))


def low_rent_bound(economy: Economy) -> Fraction:
    n = economy.n
    return n * (min(economy.b) - _max_spread(economy.v))


def validate(economy: Economy, objective: Objective | None = None) -> list[str]:
    """All violations of the model invariants; an empty list means ok."""
    out = []
    n = economy.n
    if n < 1:
        out.append("economy needs at least one agent")
    if len(economy.agents) != n or len(economy.rooms) != len({*economy.rooms}) or \
            any(len(p.values) != len(economy.rooms) for p in economy.prefs) or \
            len(economy.rooms) != n:
        out.append("agent/room count mismatch")
    if len(set(economy.agents)) != len(economy.agents):
        out.append("agent ids must be distinct")
    out.extend(economy.slope_set.violations())
    for i, p in enumerate(economy.prefs):
        if p.budget < 0:
            out.append(f"agent {economy.agents[i]}: budget must be nonnegative")
        if p.rho not in economy.slope_set.rhos:
            out.append(f"agent {economy.agents[i]}: slope not in slope set")
    if objective is not None:
        out.extend(objective.violations(n))
    return out
