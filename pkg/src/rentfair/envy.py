"""Envy checks, tight-envy graphs and the selection membership test."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Allocation, Economy, Family, Objective, SlopeSet, kappa, nu_lambda, utility

REBATE = "rebate"
SURCHARGE = "surcharge"


@dataclass(frozen=True)
class EnvyWitness:
    envious: int
    envied: int
    gap: Fraction


@dataclass(frozen=True)
class TightEnvyGraph:
    """Agent-room edges to utility-maximal bundles, each carrying a slope weight."""

    n: int
    edges: frozenset[tuple[int, int]]
    weights: dict[tuple[int, int], Fraction]
    direction: str
    slope_set: SlopeSet | None = None

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for i, a in sorted(self.edges):
            adj[i].append(a)
        return adj


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    extreme_set: frozenset[int]
    unreached: frozenset[int]
    envy: EnvyWitness | None = None


def is_envy_free(economy: Economy, alloc: Allocation, check_total: bool = True):
    """``None`` when envy-free, else the witness with the largest envy gap."""
    if check_total and alloc.total != economy.total_rent:
        raise ValueError(f"rents sum to {alloc.total}, economy total is {economy.total_rent}")
    rents, sigma = alloc.rents, alloc.assignment
    worst = None
    for i, p in enumerate(economy.prefs):
        own = utility(p, rents[sigma[i]], sigma[i])
        for j, a in enumerate(sigma):
            if j == i:
                continue
            gap = utility(p, rents[a], a) - own
            if gap > 0 and (worst is None or gap > worst.gap):
                worst = EnvyWitness(i, j, gap)
    return worst


def tight_graph(economy: Economy, rents: Sequence[Fraction], direction: str = REBATE) -> TightEnvyGraph:
    n = economy.n
    if direction == REBATE:
        slopes = nu_lambda(economy, rents)[1]
    elif direction == SURCHARGE:
        slopes = kappa(economy, rents)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    edges, weights = set(), {}
    for i, p in enumerate(economy.prefs):
        us = [utility(p, rents[a], a) for a in range(n)]
        top = max(us)
        for a, x in enumerate(us):
            if x == top:
                edges.add((i, a))
                weights[(i, a)] = slopes[i][a]
    return TightEnvyGraph(n, frozenset(edges), weights, direction, economy.slope_set)


def objective_values(economy: Economy, alloc: Allocation, objective: Objective) -> dict[int, Fraction]:
    """Transformed utility (or rent) of every id in the objective's scope."""
    maps = objective.maps()
    if objective.family.on_utilities:
        us = alloc.utilities(economy)
        return {i: f(us[i]) for i, f in maps.items()}
    return {a: g(alloc.rents[a]) for a, g in maps.items()}


def objective_value(economy: Economy, alloc: Allocation, objective: Objective) -> Fraction:
    vals = objective_values(economy, alloc, objective).values()
    return min(vals) if objective.family.maximizes else max(vals)


def extreme_set(alloc: Allocation, economy: Economy, objective: Objective) -> frozenset[int]:
    vals = objective_values(economy, alloc, objective)
    target = min(vals.values()) if objective.family.maximizes else max(vals.values())
    return frozenset(k for k, x in vals.items() if x == target)


def indifference_digraph(economy: Economy, alloc: Allocation) -> list[list[int]]:
    """Agent digraph: ``i -> j`` when ``i`` is indifferent to ``j``'s bundle."""
    rents, sigma = alloc.rents, alloc.assignment
    out = []
    for i, p in enumerate(economy.prefs):
        own = utility(p, rents[sigma[i]], sigma[i])
        out.append([j for j, a in enumerate(sigma) if j != i and utility(p, rents[a], a) == own])
    return out


def _reach(adj: list[list[int]], sources) -> set[int]:
    seen = set(sources)
    todo = deque(seen)
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def _reverse(adj):
    rev = [[] for _ in adj]
    for x, ys in enumerate(adj):
        for y in ys:
            rev[y].append(x)
    return rev


def check_membership(economy: Economy, alloc: Allocation, objective: Objective) -> MembershipVerdict:
    """Whether an allocation is optimal for its selection at its own total rent.

    Optimality holds when no set of agents (or rooms) can be moved together
    without creating envy: every node must connect to the extreme set in the
    indifference digraph, in the direction the family dictates.
    """
    ext = extreme_set(alloc, economy, objective)
    witness = is_envy_free(economy, alloc, check_total=False)
    family = objective.family
    if witness is not None:
        bad = witness.envious if family.on_utilities else alloc.assignment[witness.envious]
        return MembershipVerdict(False, ext, frozenset({bad}), witness)

    agents = indifference_digraph(economy, alloc)
    if family.on_utilities:
        graph = agents
    else:
        occ = alloc.occupants()
        graph = [[alloc.assignment[j] for j in agents[occ[a]]] for a in range(economy.n)]

    if family in (Family.MAXMIN_UTILITY, Family.MINMAX_RENT):
        # everyone must have a path into the extreme set
        reached = _reach(_reverse(graph), ext)
    else:
        reached = _reach(graph, ext)
    unreached = frozenset(range(economy.n)) - reached
    return MembershipVerdict(not unreached, ext, unreached)
