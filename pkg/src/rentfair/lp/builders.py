"""Linear programs of the initialization, step, restore and baseline phases.

Variables are the room rents ``r_<room>`` followed, where needed, by the
selection level ``R``. Every bundle is described by an affine form
``nu - lam * rent``; a program only ever sees the form valid on its own
feasible set, so its no-envy rows are exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..envy import REBATE, SURCHARGE
from ..model import Economy, Family, Objective, kappa, kappa_intercepts, linearized_value, nu_lambda
from .program import EQ, GE, LE, LinearProgram

ZERO = Fraction(0)
ONE = Fraction(1)


def rent_names(economy: Economy) -> list[str]:
    return [f"r_{room}" for room in economy.rooms]


def _program(economy, with_level, objective_coeffs, maximize, tag, prefer_high):
    """Empty program; degenerate optima resolve towards high (or low) rents.

    Ties go first by total rent, then lexicographically over the rooms, in
    the direction the restore program would move: high when rebating, low
    when surcharging.
    """
    names = rent_names(economy)
    if with_level:
        names.append("R")
    lp = LinearProgram(names, list(objective_coeffs), maximize, tag=tag)
    n = economy.n
    total = [ONE] * n + [ZERO] * (len(names) - n)
    lp.tiebreak.append((prefer_high, total))
    for a in range(n):
        row = [ZERO] * len(names)
        row[a] = ONE
        lp.tiebreak.append((prefer_high, row))
    return lp


def _level_objective(n):
    return [ZERO] * n + [ONE]


def _no_envy(lp, sigma, nu, lam):
    # nu[i][a] - lam[i][a] * t_a for agent i and room a; one row per ordered pair
    n = len(sigma)
    for i in range(n):
        own = sigma[i]
        for j in range(n):
            if j == i:
                continue
            other = sigma[j]
            lp.add_terms({own: -lam[i][own], other: lam[i][other]}, GE, nu[i][other] - nu[i][own])


def _selection_rows(lp, objective: Objective, sigma, nu, lam, level=None):
    """Rows tying the level to the scoped quantities.

    ``level=None`` puts ``R`` in the rows as a variable; otherwise the level is
    the fixed number ``level`` (restore programs).
    """
    n = len(sigma)
    family = objective.family
    upper = family.maximizes  # R <= scoped quantity
    for idx, f in objective.maps().items():
        terms = {}
        if family.on_utilities:
            a = sigma[idx]
            # f(nu - lam * t) = f.intercept + f.slope * nu - f.slope * lam * t
            const = f.intercept + f.slope * nu[idx][a]
            terms[a] = -f.slope * lam[idx][a]
        else:
            a = idx
            const = f.intercept
            terms[a] = f.slope
        # level <= const + terms  (upper)  or  level >= const + terms
        if level is None:
            terms = {k: -c for k, c in terms.items()}
            terms[n] = ONE
            lp.add_terms(terms, LE if upper else GE, const)
        else:
            lp.add_terms(terms, GE if upper else LE, level - const)


def _init_forms(economy: Economy, direction: str):
    n = economy.n
    if direction == REBATE:
        lam = [[1 + p.rho] * n for p in economy.prefs]
        nu = [[(1 + p.rho) * linearized_value(p, a) for a in range(n)] for p in economy.prefs]
    else:
        lam = [[ONE] * n for _ in economy.prefs]
        nu = [list(row) for row in economy.v]
    return nu, lam


def build_init_lp(economy: Economy, objective: Objective, sigma: Sequence[int],
                  target_rent: Fraction, direction: str) -> LinearProgram:
    n = economy.n
    maximize = objective.family.maximizes
    lp = _program(economy, True, _level_objective(n), maximize, f"init-{objective.family.value}",
                  direction == REBATE)
    nu, lam = _init_forms(economy, direction)
    _selection_rows(lp, objective, sigma, nu, lam)
    # no-envy in the quasi-linear profile, which ranks bundles like the scaled forms
    q = [[nu[i][a] / lam[i][a] for a in range(n)] for i in range(n)]
    _no_envy(lp, sigma, q, [[ONE] * n for _ in range(n)])
    lp.add_terms({a: ONE for a in range(n)}, EQ, target_rent)
    return lp


def step_forms(economy: Economy, prev_rents: Sequence[Fraction], direction: str):
    if direction == REBATE:
        return nu_lambda(economy, prev_rents)
    return kappa_intercepts(economy, prev_rents), kappa(economy, prev_rents)


def _regime_rows(lp, economy, prev_rents, direction, sb_prev=None):
    # keep each rent on its side of every kink; agents with rho = 0 have none
    n = economy.n
    if direction == REBATE:
        pairs = sb_prev if sb_prev is not None else {
            (i, a) for i, bi in enumerate(economy.b) for a in range(n) if prev_rents[a] > bi}
        floor = {}
        for i, a in pairs:
            if economy.rho[i]:
                floor[a] = max(floor.get(a, economy.b[i]), economy.b[i])
        for a in sorted(floor):
            lp.add_terms({a: ONE}, GE, floor[a])
    else:
        ceil = {}
        for i, bi in enumerate(economy.b):
            if not economy.rho[i]:
                continue
            for a in range(n):
                if prev_rents[a] < bi:
                    ceil[a] = min(ceil.get(a, bi), bi)
        for a in sorted(ceil):
            lp.add_terms({a: ONE}, LE, ceil[a])


def build_step_lp(economy: Economy, objective: Objective, sigma: Sequence[int],
                  prev_rents: Sequence[Fraction], sb_prev, target_rent: Fraction,
                  direction: str) -> LinearProgram:
    n = economy.n
    maximize = objective.family.maximizes
    lp = _program(economy, True, _level_objective(n), maximize, f"step-{objective.family.value}",
                  direction == REBATE)
    for a in range(n):
        lp.add_terms({a: ONE}, LE if direction == REBATE else GE, prev_rents[a])
    nu, lam = step_forms(economy, prev_rents, direction)
    _selection_rows(lp, objective, sigma, nu, lam)
    _no_envy(lp, sigma, nu, lam)
    _regime_rows(lp, economy, prev_rents, direction, sb_prev)
    lp.add_terms({a: ONE for a in range(n)}, GE if direction == REBATE else LE, target_rent)
    return lp


def build_restore_lp(economy: Economy, objective: Objective, sigma: Sequence[int],
                     step_rents: Sequence[Fraction], level: Fraction, direction: str,
                     prev_rents: Sequence[Fraction]) -> LinearProgram:
    """Move back from an overshooting step while holding the selection level.

    ``prev_rents`` fixes the linearization, which is the one the step used.
    """
    n = economy.n
    rebate = direction == REBATE
    lp = _program(economy, False, [ONE] * n, rebate, f"restore-{objective.family.value}", rebate)
    for a in range(n):
        lp.add_terms({a: ONE}, GE if rebate else LE, step_rents[a])
    nu, lam = step_forms(economy, prev_rents, direction)
    _selection_rows(lp, objective, sigma, nu, lam, level=level)
    _no_envy(lp, sigma, nu, lam)
    return lp


def build_eshwar_lp(economy: Economy, sigma: Sequence[int], prev_rents: Sequence[Fraction],
                    eta: Fraction) -> LinearProgram:
    """Rebate up to ``eta`` keeping no-envy for ``sigma`` and the budget regimes."""
    n = economy.n
    lp = _program(economy, False, [ONE] * n, False, "eshwar", False)
    for a in range(n):
        lp.add_terms({a: ONE}, LE, prev_rents[a])
    nu, lam = nu_lambda(economy, prev_rents)
    _no_envy(lp, sigma, nu, lam)
    _regime_rows(lp, economy, prev_rents, REBATE)
    lp.add_terms({a: ONE for a in range(n)}, GE, sum(prev_rents, ZERO) - eta)
    return lp
