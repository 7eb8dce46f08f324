"""Pure-Python pivot loop for the integer (fraction-free) simplex tableau.

The tableau ``T`` holds integers; the true entry is ``T[i][j] / D`` with the
common denominator ``D > 0`` equal to the determinant of the current basis.
A pivot on ``(r, c)`` rewrites every other row as
``(T[i][k] * p - T[i][c] * T[r][k]) // D`` with ``p = T[r][c]``; the division
is exact. The last column is the right-hand side. Rows ``0..m-1`` are
constraints, rows from ``m`` on are objective rows (reduced costs of a
minimisation, times ``D``).
"""

OPTIMAL = 0
UNBOUNDED = 1
OVERFLOW = 2  # only produced by the compiled kernel


def pivot(T, basis, D, r, c):
    p = T[r][c]
    prow = T[r]
    width = len(prow)
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [(row[k] * p - f * prow[k]) // D for k in range(width)]
        else:
            T[i] = [x * p // D for x in row]
    basis[r] = c
    if p < 0:
        # keep D positive; T = D * B^-1 [A|b] is invariant under a joint sign flip
        for i in range(len(T)):
            T[i] = [-x for x in T[i]]
        p = -p
    return p


def run_simplex(T, basis, D, m, obj, allowed):
    """Bland's rule on objective row ``obj``. Returns ``(status, D)``."""
    orow_idx = obj
    rhs = len(T[0]) - 1
    while True:
        orow = T[orow_idx]
        c = -1
        for j in range(rhs):
            if allowed[j] and orow[j] < 0:
                c = j
                break
        if c < 0:
            return OPTIMAL, D
        r = -1
        best_num = best_den = 0
        for i in range(m):
            a = T[i][c]
            if a > 0:
                num = T[i][rhs]
                if r < 0:
                    r, best_num, best_den = i, num, a
                    continue
                lhs = num * best_den
                rhs_ = best_num * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[r]):
                    r, best_num, best_den = i, num, a
        if r < 0:
            return UNBOUNDED, D
        D = pivot(T, basis, D, r, c)


def run_lexicographic(T, basis, D, m, objs, allowed, start=0):
    """Optimise the rows ``objs`` in order, each over the optimal face of the previous.

    After each row, columns with positive reduced cost are frozen in
    ``allowed``. Returns ``(status, D, k)`` with ``k`` the row index reached.
    """
    for k in range(start, len(objs)):
        status, D = run_simplex(T, basis, D, m, objs[k], allowed)
        if status != OPTIMAL:
            return status, D, k
        row = T[objs[k]]
        for j in range(len(row) - 1):
            if row[j] > 0:
                allowed[j] = False
    return OPTIMAL, D, len(objs)
