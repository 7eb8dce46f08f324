# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pivot loop: same contract as the pure-Python kernel.

Works on 64-bit integers with overflow checks. When a pivot would overflow,
the tableau is left at the last completed pivot and ``OVERFLOW`` is returned
so the caller can finish in arbitrary precision.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

cdef extern from *:
    """
    static inline int rf_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int rf_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    /* sign of a*b - c*d without overflow */
    static inline int rf_cmp(long long a, long long b, long long c, long long d) {
        __int128 x = (__int128)a * b, y = (__int128)c * d;
        return (x > y) - (x < y);
    }
    """
    int rf_mul(long long a, long long b, long long *r) nogil
    int rf_sub(long long a, long long b, long long *r) nogil
    int rf_cmp(long long a, long long b, long long c, long long d) nogil

DEF OPTIMAL = 0
DEF UNBOUNDED = 1
DEF OVERFLOW = 2

cdef long long LL_MAX = 9223372036854775807
cdef long long LL_MIN = -9223372036854775807


cdef int _pivot(long long *cur, long long *nxt, Py_ssize_t rows, Py_ssize_t width,
                Py_ssize_t r, Py_ssize_t c, long long D) nogil:
    cdef long long p = cur[r * width + c]
    cdef long long f, x, y, z
    cdef Py_ssize_t i, k
    cdef long long *prow = cur + r * width
    for i in range(rows):
        if i == r:
            memcpy(nxt + i * width, prow, width * sizeof(long long))
            continue
        f = cur[i * width + c]
        if f == 0 and p == D:
            memcpy(nxt + i * width, cur + i * width, width * sizeof(long long))
            continue
        for k in range(width):
            # the tableau is sparse; zeros skip the multiply and the division
            if cur[i * width + k] == 0 and (f == 0 or prow[k] == 0):
                nxt[i * width + k] = 0
                continue
            if rf_mul(cur[i * width + k], p, &x):
                return 1
            if f != 0:
                if rf_mul(f, prow[k], &y):
                    return 1
                if rf_sub(x, y, &z):
                    return 1
                x = z
            nxt[i * width + k] = x // D
    return 0


cdef int _simplex(long long **cur, long long **nxt, Py_ssize_t rows, Py_ssize_t width,
                  Py_ssize_t m, Py_ssize_t obj, long long *D, int *bas,
                  unsigned char *allow) nogil:
    cdef Py_ssize_t rhs = width - 1
    cdef Py_ssize_t i, j, r, c
    cdef long long a, num, best_num, best_den, p
    cdef long long *t
    cdef int cmp
    while True:
        t = cur[0]
        c = -1
        for j in range(rhs):
            if allow[j] and t[obj * width + j] < 0:
                c = j
                break
        if c < 0:
            return OPTIMAL
        r = -1
        best_num = 0
        best_den = 1
        for i in range(m):
            a = t[i * width + c]
            if a > 0:
                num = t[i * width + rhs]
                if r < 0:
                    r = i
                    best_num = num
                    best_den = a
                    continue
                cmp = rf_cmp(num, best_den, best_num, a)
                if cmp < 0 or (cmp == 0 and bas[i] < bas[r]):
                    r = i
                    best_num = num
                    best_den = a
        if r < 0:
            return UNBOUNDED
        p = t[r * width + c]
        if _pivot(t, nxt[0], rows, width, r, c, D[0]):
            return OVERFLOW
        cur[0] = nxt[0]
        nxt[0] = t
        bas[r] = <int> c
        D[0] = p


def run_lexicographic(list T, list basis, D, Py_ssize_t m, objs, list allowed, Py_ssize_t start=0):
    cdef Py_ssize_t rows = len(T)
    cdef Py_ssize_t width = len(T[0])
    cdef Py_ssize_t rhs = width - 1
    cdef Py_ssize_t nobj = len(objs)
    cdef Py_ssize_t i, j, k, obj
    cdef long long DD
    cdef int status = OPTIMAL
    cdef long long *buf
    cdef long long *cur
    cdef long long *nxt
    cdef int *bas
    cdef unsigned char *allow

    for row in T:
        for x in row:
            if x > LL_MAX or x < LL_MIN:
                return OVERFLOW, D, start
    if D > LL_MAX:
        return OVERFLOW, D, start
    DD = D

    buf = <long long *> malloc(2 * rows * width * sizeof(long long))
    bas = <int *> malloc(m * sizeof(int))
    allow = <unsigned char *> malloc(rhs * sizeof(unsigned char))
    if buf == NULL or bas == NULL or allow == NULL:
        free(buf); free(bas); free(allow)
        raise MemoryError()
    cur = buf
    nxt = buf + rows * width
    try:
        for i in range(rows):
            row = T[i]
            for j in range(width):
                cur[i * width + j] = row[j]
        for i in range(m):
            bas[i] = basis[i]
        for j in range(rhs):
            allow[j] = 1 if allowed[j] else 0

        k = start
        while k < nobj:
            obj = objs[k]
            with nogil:
                status = _simplex(&cur, &nxt, rows, width, m, obj, &DD, bas, allow)
                if status == OPTIMAL:
                    for j in range(rhs):
                        if cur[obj * width + j] > 0:
                            allow[j] = 0
            if status != OPTIMAL:
                break
            k += 1

        for i in range(rows):
            T[i] = [cur[i * width + j] for j in range(width)]
        for i in range(m):
            basis[i] = bas[i]
        for j in range(rhs):
            allowed[j] = bool(allow[j])
        return status, DD, k
    finally:
        free(buf)
        free(bas)
        free(allow)


def run_simplex(list T, list basis, D, Py_ssize_t m, Py_ssize_t obj, list allowed):
    """Single objective row; ``allowed`` is left untouched."""
    mask = list(allowed)
    status, D, _ = run_lexicographic(T, basis, D, m, [obj], mask)
    return status, D
