"""Exact two-phase simplex with Bland's rule and lexicographic tie-breaking.

Free variables are split into positive and negative parts. Every constraint
row is scaled to integers, so the whole solve runs on an integer tableau;
only the final point and duals are turned back into fractions.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

from . import _pykernel
from .program import LE, GE, EQ, LinearProgram, LpSolution

try:
    if os.environ.get("RENTFAIR_PURE_PYTHON"):
        raise ImportError("pure python requested")
    from . import _ckernel
except ImportError:  # no compiled extension; the pure kernel is exact too
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"


def _run(T, basis, D, m, obj, allowed, backend):
    if backend == "cython" and _ckernel is not None:
        status, D = _ckernel.run_simplex(T, basis, D, m, obj, allowed)
        if status != _pykernel.OVERFLOW:
            return status, D
    return _pykernel.run_simplex(T, basis, D, m, obj, allowed)


def _run_lexicographic(T, basis, D, m, objs, allowed, backend):
    start = 0
    if backend == "cython" and _ckernel is not None:
        status, D, start = _ckernel.run_lexicographic(T, basis, D, m, objs, allowed)
        if status != _pykernel.OVERFLOW:
            return status, D
    status, D, _ = _pykernel.run_lexicographic(T, basis, D, m, objs, allowed, start)
    return status, D


def _int_row(coeffs, rhs):
    den = math.lcm(*(c.denominator for c in coeffs), rhs.denominator)
    return ([c.numerator * (den // c.denominator) for c in coeffs],
            rhs.numerator * (den // rhs.denominator), den)


def solve_lp(lp: LinearProgram, backend: str | None = None) -> LpSolution:
    backend = backend or BACKEND
    nv = len(lp.variables)
    m = len(lp.constraints)

    rows, rhss, scales, signs, rels = [], [], [], [], []
    for con in lp.constraints:
        coeffs, rhs, den = _int_row(con.coeffs, con.rhs)
        rel, sign = con.rel, 1
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            sign = -1
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(coeffs)
        rhss.append(rhs)
        scales.append(den)
        signs.append(sign)
        rels.append(rel)

    # column layout: x+ | x- | slacks | artificials | rhs
    n_slack = sum(1 for rel in rels if rel != EQ)
    slack_of, art_of = {}, {}
    col = 2 * nv
    for i, rel in enumerate(rels):
        if rel != EQ:
            slack_of[i] = col
            col += 1
    for i, rel in enumerate(rels):
        if rel != LE:
            art_of[i] = col
            col += 1
    ncols = col
    art_cols = set(art_of.values())

    T = []
    basis = []
    for i in range(m):
        row = [0] * (ncols + 1)
        for j, a in enumerate(rows[i]):
            row[j] = a
            row[nv + j] = -a
        if i in slack_of:
            row[slack_of[i]] = 1 if rels[i] == LE else -1
        if i in art_of:
            row[art_of[i]] = 1
            basis.append(art_of[i])
        else:
            basis.append(slack_of[i])
        row[ncols] = rhss[i]
        T.append(row)

    def objective_row(coeffs, maximize):
        coeffs = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        sgn = -1 if maximize else 1
        row = [0] * (ncols + 1)
        for j, c in enumerate(coeffs):
            v = sgn * int(c * den)
            row[j] = v
            row[nv + j] = -v
        return row, den

    obj_rows = []
    phase1 = None
    if art_of:
        w = [0] * (ncols + 1)
        for i in art_of:
            for j in range(ncols + 1):
                if j not in art_cols:
                    w[j] -= T[i][j]
        phase1 = m
        obj_rows.append(w)
    prim_row, prim_scale = objective_row(lp.objective, lp.maximize)
    primary = m + len(obj_rows)
    obj_rows.append(prim_row)
    tie_idx = []
    for maximize, coeffs in lp.tiebreak:
        tie_idx.append(m + len(obj_rows))
        obj_rows.append(objective_row(coeffs, maximize)[0])
    T.extend(obj_rows)

    D = 1
    allowed = [True] * ncols
    if phase1 is not None:
        status, D = _run(T, basis, D, m, phase1, allowed, backend)
        if T[phase1][ncols] != 0:
            return LpSolution("infeasible", {}, None, tag=lp.tag)
        D = _drive_out_artificials(T, basis, D, m, art_cols, ncols)
        for j in art_cols:
            allowed[j] = False

    # primary objective, then each tie-break row over the optimal face so far
    status, D = _run_lexicographic(T, basis, D, m, [primary] + tie_idx, allowed, backend)
    if status == _pykernel.UNBOUNDED:
        return LpSolution("unbounded", {}, None, tag=lp.tag)

    xs = [Fraction(0)] * ncols
    for i, c in enumerate(basis):
        xs[c] = Fraction(T[i][ncols], D)
    point = {name: xs[j] - xs[nv + j] for j, name in enumerate(lp.variables)}
    value = sum((c * point[name] for c, name in zip(lp.objective, lp.variables)), Fraction(0))

    # duals from reduced costs of each row's unit column, mapped back to
    # the caller's rows and sense (see LinearProgram.certify for the conditions)
    duals = []
    flip = -1 if lp.maximize else 1
    prim = T[primary]
    for i in range(m):
        if i in slack_of:
            ucol = slack_of[i]
            eps = 1 if rels[i] == LE else -1
        else:
            ucol = art_of[i]
            eps = 1
        d = Fraction(prim[ucol], D)
        y_std = -d / eps
        duals.append(flip * y_std * signs[i] * scales[i] / prim_scale)
    return LpSolution("optimal", point, value, duals=tuple(duals), tag=lp.tag)


def _drive_out_artificials(T, basis, D, m, art_cols, ncols):
    for r in range(m):
        if basis[r] not in art_cols:
            continue
        for j in range(ncols):
            if j not in art_cols and T[r][j] != 0:
                D = _pykernel.pivot(T, basis, D, r, j)
                break
        # otherwise the row is redundant; its artificial stays basic at zero
    return D
