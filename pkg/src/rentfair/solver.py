"""Initialization and the iterative rebate/surcharge loop for all four selections.

Maxmin-utility and minmax-rent start from a total rent high enough that every
budget is exceeded and rebate towards the target. Minmax-utility and
maxmin-rent start low enough that no budget binds and surcharge upwards.
Each round picks an extremal perfect matching of the tight-envy graph,
solves the step program, and, when the step left the selection path,
solves the restore program to get back on it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .envy import (REBATE, SURCHARGE, MembershipVerdict, check_membership, is_envy_free,
                   objective_value, tight_graph)
from .lp import solve_lp
from .lp.builders import (build_eshwar_lp, build_init_lp, build_restore_lp, build_step_lp,
                          rent_names)
from .matching import extremal_perfect_matching, optimal_assignment
from .model import (Allocation, Economy, Family, Objective, high_rent_bound, linearized_value,
                    low_rent_bound, sb_set, validate)

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    """An internal guarantee failed; this is a bug, not bad input."""


@dataclass(frozen=True)
class IterationRecord:
    s: int
    sigma: tuple[int, ...]
    weight_exponents: tuple[int, ...]
    product_weight: Fraction
    step_rents: tuple[Fraction, ...]
    step_value: Fraction
    membership: MembershipVerdict
    restore_rents: tuple[Fraction, ...] | None
    sb_size_before: int
    sb_size_after: int

    @property
    def rents(self) -> tuple[Fraction, ...]:
        return self.restore_rents if self.restore_rents is not None else self.step_rents


@dataclass
class SolveTrace:
    boundary_rent: Fraction
    init_allocation: Allocation
    iterations: list[IterationRecord] = field(default_factory=list)
    final: Allocation | None = None
    objective_value: Fraction | None = None


@dataclass(frozen=True)
class SolveResult:
    allocation: Allocation
    objective_value: Fraction
    trace: SolveTrace
    certified: bool


def iteration_bound(n: int, k: int) -> int:
    return n * n * (n + 1) ** (k - 1) + 2


def direction_of(family: Family) -> str:
    return REBATE if family.rebates else SURCHARGE


def _solve(lp):
    sol = solve_lp(lp)
    if not sol.optimal:
        raise SolverError(f"{lp.tag}: program is {sol.status}")
    return sol


def _check_inputs(economy, objective):
    problems = validate(economy, objective)
    if problems:
        raise ValueError("; ".join(problems))


def initialize(economy: Economy, objective: Objective) -> tuple[Fraction, Allocation]:
    """Boundary total rent and an allocation in the selection at that total."""
    _check_inputs(economy, objective)
    m = economy.total_rent
    direction = direction_of(objective.family)
    if direction == REBATE:
        boundary = max(m, high_rent_bound(economy))
        V = [[linearized_value(p, a) for a in range(economy.n)] for p in economy.prefs]
        sigma = optimal_assignment(V, maximize=True)
    else:
        boundary = min(m, low_rent_bound(economy))
        sigma = optimal_assignment(economy.v, maximize=True)
    sol = _solve(build_init_lp(economy, objective, sigma, boundary, direction))
    return boundary, Allocation(sol.vector(rent_names(economy)), sigma)


def solve(economy: Economy, objective: Objective) -> SolveResult:
    boundary, alloc = initialize(economy, objective)
    trace = SolveTrace(boundary, alloc)
    m = economy.total_rent
    direction = direction_of(objective.family)
    rebate = direction == REBATE
    names = rent_names(economy)
    limit = iteration_bound(economy.n, economy.slope_set.k)

    rents, sigma = alloc.rents, alloc.assignment
    s = 0
    while (sum(rents) > m) if rebate else (sum(rents) < m):
        s += 1
        if s > limit:
            raise SolverError(f"iteration bound {limit} exceeded")
        graph = tight_graph(economy, rents, direction)
        match = extremal_perfect_matching(graph, maximize=rebate)
        sigma = match.assignment
        sb_prev = sb_set(economy, rents)
        step = _solve(build_step_lp(economy, objective, sigma, rents, sb_prev, m, direction))
        t = step.vector(names)
        level = step.point["R"]
        verdict = check_membership(economy, Allocation(t, sigma), objective)
        restored = None
        if not verdict.member:
            back = _solve(build_restore_lp(economy, objective, sigma, t, level, direction, rents))
            restored = back.vector(names)
        new = restored if restored is not None else t
        witness = is_envy_free(economy, Allocation(new, sigma), check_total=False)
        if witness is not None:
            raise SolverError(f"iterate {s} is not envy-free: {witness}")
        record = IterationRecord(s, sigma, match.weight_exponents, match.product_weight, t, level,
                                 verdict, restored, len(sb_prev), len(sb_set(economy, new)))
        trace.iterations.append(record)
        log.debug("iteration %d: sum %s -> %s, member=%s", s, sum(rents), sum(new), verdict.member)
        rents = new

    final = Allocation(rents, sigma)
    value = objective_value(economy, final, objective)
    trace.final = final
    trace.objective_value = value
    certified = (
        final.total == m
        and is_envy_free(economy, final) is None
        and check_membership(economy, final, objective).member
    )
    if not certified:
        raise SolverError("output failed re-verification")
    return SolveResult(final, value, trace, certified)


def eshwar_baseline(economy: Economy) -> Allocation:
    """Some envy-free allocation at the target total, with no selection guarantee."""
    objective = Objective.full(Family.MAXMIN_UTILITY, economy.n)
    _, alloc = initialize(economy, objective)
    m = economy.total_rent
    names = rent_names(economy)
    rents, sigma = alloc.rents, alloc.assignment
    # each round either reaches m, releases a budget pair, or changes the matching weight
    limit = 4 * iteration_bound(economy.n, economy.slope_set.k)
    rounds = 0
    while sum(rents) > m:
        rounds += 1
        if rounds > limit:
            raise SolverError("baseline did not reach the target rent")
        match = extremal_perfect_matching(tight_graph(economy, rents, REBATE), maximize=True)
        sigma = match.assignment
        sol = _solve(build_eshwar_lp(economy, sigma, rents, sum(rents) - m))
        rents = sol.vector(names)
    out = Allocation(rents, sigma)
    if is_envy_free(economy, out) is not None:
        raise SolverError("baseline output is not envy-free")
    return out


def best_for_agent(economy: Economy, agent: int) -> SolveResult:
    if not 0 <= agent < economy.n:
        raise ValueError(f"unknown agent {agent}")
    return solve(economy, Objective(Family.MAXMIN_UTILITY, (agent,)))


def nonnegative_rents_possible(economy: Economy) -> tuple[bool, SolveResult]:
    """Whether some envy-free allocation charges every room a nonnegative rent."""
    res = solve(economy, Objective.full(Family.MAXMIN_RENT, economy.n))
    return min(res.allocation.rents) >= 0, res
