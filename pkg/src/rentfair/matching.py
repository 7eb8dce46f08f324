"""Exact optimal assignments.

Two objectives appear: the additive total value of an assignment, and the
product of slope weights over a perfect matching of a tight-envy graph
(order-equivalent to the sum of their logarithms, but exact). Both are
solved the same way: start from any perfect matching and cancel improving
exchange cycles, found by Bellman-Ford over the exact group operation.
Ties are broken towards the lexicographically smallest assignment.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .envy import TightEnvyGraph

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class MatchingResult:
    assignment: tuple[int, ...]
    weight_exponents: tuple[int, ...]
    product_weight: Fraction


class NoPerfectMatching(ValueError):
    pass


@dataclass(frozen=True)
class _Group:
    op: Callable
    inv: Callable
    unit: Fraction


ADD = _Group(operator.add, operator.neg, ZERO)
MUL = _Group(operator.mul, lambda x: 1 / x, ONE)


def _perfect_matching(adj, n, fixed):
    """Kuhn's augmenting paths; ``fixed`` pins a prefix of agents to rooms."""
    match_room = [-1] * n  # room -> agent
    match_agent = [-1] * n
    for i, a in enumerate(fixed):
        match_room[a] = i
        match_agent[i] = a
    pinned = set(fixed)

    def augment(i, seen):
        for a in adj[i]:
            if a in seen or a in pinned:
                continue
            seen.add(a)
            if match_room[a] < 0 or augment(match_room[a], seen):
                match_room[a] = i
                match_agent[i] = a
                return True
        return False

    for i in range(len(fixed), n):
        if not augment(i, set()):
            return None
    return match_agent


def _cancel_cycles(assign, adj, w, group, start):
    """Improve ``assign`` (agents ``start..n-1`` free) until no exchange cycle gains."""
    n = len(assign)
    free = range(start, n)
    while True:
        owner = {assign[i]: i for i in free}
        arcs = []
        for i in free:
            base = group.inv(w[i][assign[i]])
            for a in adj[i]:
                j = owner.get(a)
                if j is not None and j != i:
                    arcs.append((i, j, group.op(w[i][a], base)))
        dist = {i: group.unit for i in free}
        pred = {i: None for i in free}
        last = None
        for _ in range(len(free) + 1):
            last = None
            for i, j, g in arcs:
                cand = group.op(dist[i], g)
                if cand > dist[j]:
                    dist[j] = cand
                    pred[j] = i
                    last = j
            if last is None:
                break
        if last is None:
            return assign
        x = last
        for _ in range(len(free)):
            x = pred[x]
        cycle = [x]
        y = pred[x]
        while y != x:
            cycle.append(y)
            y = pred[y]
        cycle.reverse()  # cycle[t] takes the room of cycle[t+1]
        rooms = [assign[c] for c in cycle]
        for t, c in enumerate(cycle):
            assign[c] = rooms[(t + 1) % len(cycle)]


def _total(assign, w, group):
    acc = group.unit
    for i, a in enumerate(assign):
        acc = group.op(acc, w[i][a])
    return acc


def _best(adj, w, group, n, fixed=()):
    start = _perfect_matching(adj, n, list(fixed))
    if start is None:
        return None
    return _cancel_cycles(start, adj, w, group, len(fixed))


def _lexicographic_optimum(adj, w, group, n):
    best = _best(adj, w, group, n)
    if best is None:
        raise NoPerfectMatching("graph has no perfect matching")
    target = _total(best, w, group)
    fixed = []
    for i in range(n):
        for a in adj[i]:
            if a >= best[i]:
                break
            if a in fixed:
                continue
            cand = _best(adj, w, group, n, fixed + [a])
            if cand is not None and _total(cand, w, group) == target:
                best = cand
                break
        fixed.append(best[i])
    return tuple(best)


def optimal_assignment(values: Sequence[Sequence[Fraction]], maximize: bool = True) -> tuple[int, ...]:
    """Bijection agent -> room optimising the total of ``values``."""
    n = len(values)
    if any(len(row) != n for row in values):
        raise ValueError("value matrix must be square")
    w = [[Fraction(x) if maximize else -Fraction(x) for x in row] for row in values]
    adj = [list(range(n)) for _ in range(n)]
    return _lexicographic_optimum(adj, w, ADD, n)


def extremal_perfect_matching(graph: TightEnvyGraph, maximize: bool = True) -> MatchingResult:
    n = graph.n
    adj = graph.adjacency()
    w = [[None] * n for _ in range(n)]
    for (i, a), x in graph.weights.items():
        w[i][a] = x if maximize else 1 / x
    assign = _lexicographic_optimum(adj, w, MUL, n)
    return matching_result(graph, assign)


def matching_result(graph: TightEnvyGraph, assign: Sequence[int]) -> MatchingResult:
    product = ONE
    for i, a in enumerate(assign):
        product *= graph.weights[(i, a)]
    exps = ()
    if graph.slope_set is not None:
        levels = [1 + r for r in graph.slope_set.rhos]
        counts = [0] * len(levels)
        for i, a in enumerate(assign):
            counts[levels.index(graph.weights[(i, a)])] += 1
        exps = tuple(counts)
    return MatchingResult(tuple(assign), exps, product)
