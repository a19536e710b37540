# cython: language_level=3
"""Compiled twin of _kernhot_py: integer matrix product and fraction-free
row echelon over Python ints (arbitrary precision preserved).

The arithmetic still runs through CPython long objects; the win over the pure
twin is the removal of interpreter dispatch in the inner loops.
"""

from math import gcd

COMPILED = True


def imatmul(list a, list b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t k = len(b)
    cdef Py_ssize_t m = len(b[0]) if k else 0
    cdef Py_ssize_t i, j, l
    cdef list bt = [[row[j] for row in b] for j in range(m)]
    cdef list out = []
    cdef list ai, bj, row
    cdef object s, v
    for i in range(n):
        ai = a[i]
        row = []
        for j in range(m):
            bj = bt[j]
            s = 0
            for l in range(k):
                v = ai[l]
                if v:
                    s = s + v * bj[l]
            row.append(s)
        out.append(row)
    return out


def irow_echelon(list rows):
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return []
    cdef Py_ssize_t ncols = len(rows[0])
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j
    cdef Py_ssize_t pr
    cdef list ri, rr
    cdef object piv, v, g
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            v = ri[c]
            if not v:
                continue
            rr = rows[r]
            for j in range(c, ncols):
                ri[j] = ri[j] * piv - rr[j] * v
            g = 0
            for j in range(c, ncols):
                if ri[j]:
                    g = gcd(g, ri[j])
            if g > 1:
                for j in range(c, ncols):
                    ri[j] = ri[j] // g
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots
