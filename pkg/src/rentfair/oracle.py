"""Brute-force optimum for small economies.

Every bijection is paired with every profile of budget-regime cells, one
closed rent interval per room. Inside a cell each utility is affine in the
rent, so the selection problem restricted to it is a single exact linear
program. The best value over all feasible pairs is the optimum.

Only the LP layer is shared with the solver.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .envy import is_envy_free, objective_value
from .lp import EQ, GE, LE, LinearProgram, solve_lp
from .model import Allocation, Economy, Objective, validate

DEFAULT_SIZE_GUARD = 5


class SizeGuardError(ValueError):
    pass


def size_guard() -> int:
    raw = os.environ.get("RENTFAIR_SIZE_GUARD")
    return int(raw) if raw else DEFAULT_SIZE_GUARD


@dataclass(frozen=True)
class RegimeCell:
    """Closed rent interval; ``None`` stands for an infinite end."""

    lo: Fraction | None
    hi: Fraction | None

    def contains(self, r: Fraction) -> bool:
        return (self.lo is None or r >= self.lo) and (self.hi is None or r <= self.hi)

    def form(self, value: Fraction, budget: Fraction, rho: Fraction) -> tuple[Fraction, Fraction]:
        """``(intercept, slope)`` with utility ``intercept - slope * rent`` on this cell."""
        if rho and self.lo is not None and self.lo >= budget:
            return value + rho * budget, 1 + rho
        return value, Fraction(1)


def breakpoints(economy: Economy) -> list[Fraction]:
    # a budget is a kink only when its agent has a positive slope
    return sorted({p.budget for p in economy.prefs if p.rho})


def regime_cells(economy: Economy) -> list[RegimeCell]:
    pts = breakpoints(economy)
    ends = [None] + pts + [None]
    return [RegimeCell(ends[k], ends[k + 1]) for k in range(len(pts) + 1)]


def _box_admits(profile, m):
    lo = [c.lo for c in profile]
    hi = [c.hi for c in profile]
    if None not in lo and sum(lo) > m:
        return False
    if None not in hi and sum(hi) < m:
        return False
    return True


def _cell_bound(economy, objective, sigma, profile):
    """Best objective value any point of the box could reach, or ``None`` if unbounded."""
    maximize = objective.family.maximizes
    bound = None
    for idx, f in objective.maps().items():
        if objective.family.on_utilities:
            a = sigma[idx]
            end = profile[a].lo if maximize else profile[a].hi
            if end is None:
                continue
            p = economy.prefs[idx]
            c, s = profile[a].form(p.values[a], p.budget, p.rho)
            x = f(c - s * end)
        else:
            end = profile[idx].hi if maximize else profile[idx].lo
            if end is None:
                continue
            x = f(end)
        if bound is None or ((x < bound) if maximize else (x > bound)):
            bound = x
    return bound


def _cell_program(economy, objective, sigma, profile):
    n = economy.n
    names = [f"r_{room}" for room in economy.rooms] + ["R"]
    maximize = objective.family.maximizes
    lp = LinearProgram(names, [Fraction(0)] * n + [Fraction(1)], maximize, tag="oracle-cell")
    for a in range(n):
        row = [Fraction(0)] * (n + 1)
        row[a] = Fraction(1)
        lp.tiebreak.append((False, row))
    forms = [[profile[a].form(p.values[a], p.budget, p.rho) for a in range(n)] for p in economy.prefs]
    for a, cell in enumerate(profile):
        if cell.lo is not None:
            lp.add_terms({a: 1}, GE, cell.lo)
        if cell.hi is not None:
            lp.add_terms({a: 1}, LE, cell.hi)
    for i in range(n):
        ci, si = forms[i][sigma[i]]
        for a in range(n):
            if a == sigma[i]:
                continue
            ca, sa = forms[i][a]
            # ci - si * r_own >= ca - sa * r_a
            lp.add_terms({sigma[i]: -si, a: sa}, GE, ca - ci)
    lp.add_terms({a: 1 for a in range(n)}, EQ, economy.total_rent)
    for idx, f in objective.maps().items():
        if objective.family.on_utilities:
            a = sigma[idx]
            c, s = forms[idx][a]
            const, terms = f.intercept + f.slope * c, {a: -f.slope * s}
        else:
            const, terms = f.intercept, {idx: f.slope}
        terms = {k: -x for k, x in terms.items()}
        terms[n] = Fraction(1)
        lp.add_terms(terms, LE if maximize else GE, const)
    return lp


def oracle_solve(economy: Economy, objective: Objective, force: bool = False) -> tuple[Fraction, Allocation]:
    """Optimal selection value at the economy's total rent, with one witness.

    Ties keep the lexicographically first assignment, then the smallest rents.
    """
    problems = validate(economy, objective)
    if problems:
        raise ValueError("; ".join(problems))
    n = economy.n
    if not force and n > size_guard():
        raise SizeGuardError(f"size guard: n={n} exceeds {size_guard()}")
    maximize = objective.family.maximizes
    names = [f"r_{room}" for room in economy.rooms]
    m = economy.total_rent
    profiles = [p for p in itertools.product(regime_cells(economy), repeat=n) if _box_admits(p, m)]
    best = None
    for sigma in itertools.permutations(range(n)):
        for profile in profiles:
            if best is not None:
                bound = _cell_bound(economy, objective, sigma, profile)
                if bound is not None and ((bound < best[0]) if maximize else (bound > best[0])):
                    continue
            sol = solve_lp(_cell_program(economy, objective, sigma, profile))
            if not sol.optimal:
                continue
            value = sol.value
            rents = sol.vector(names)
            if best is not None:
                if value == best[0]:
                    if (sigma, rents) >= (best[1], best[2]):
                        continue
                elif (value < best[0]) if maximize else (value > best[0]):
                    continue
            best = (value, sigma, rents)
    if best is None:
        raise RuntimeError("no envy-free allocation found in any regime cell")
    value, sigma, rents = best
    return value, Allocation(rents, sigma)


def oracle_is_optimal(economy: Economy, objective: Objective, alloc: Allocation,
                      force: bool = False, value: Fraction | None = None) -> bool:
    """Envy-free, budget-balanced, and at the oracle's optimal value.

    ``value`` may pass a precomputed oracle optimum for the same economy.
    """
    if alloc.total != economy.total_rent or is_envy_free(economy, alloc) is not None:
        return False
    if value is None:
        value = oracle_solve(economy, objective, force)[0]
    return objective_value(economy, alloc, objective) == value
