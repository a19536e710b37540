"""Pure-Python twin of the compiled kernels in _kernhot.pyx.

Both twins expose the same three functions over plain Python ints:

  imatmul(a, b)            -- matrix product of list-of-list integer matrices
  irow_echelon(rows)       -- in-place fraction-free forward elimination;
                              returns pivot column list (rows end up echelon,
                              each row divided by its content)
  COMPILED                 -- flag for the benchmark / diagnostics

Integer arithmetic avoids the per-operation gcd that Fraction arithmetic pays;
the wrappers in `kernels` clear denominators before calling in.
"""

from math import gcd

COMPILED = False


def imatmul(a, b):
    n = len(a)
    k = len(b)
    m = len(b[0]) if k else 0
    bt = [[row[j] for row in b] for j in range(m)]
    out = []
    for i in range(n):
        ai = a[i]
        row = []
        for j in range(m):
            bj = bt[j]
            s = 0
            for l in range(k):
                v = ai[l]
                if v:
                    s += v * bj[l]
            row.append(s)
        out.append(row)
    return out


def irow_echelon(rows):
    """Fraction-free Gaussian elimination with first-nonzero pivoting.

    Mutates `rows` (lists of ints) into row-echelon form with content-reduced
    rows; returns the pivot column indices in order.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    nrows = len(rows)
    pivots = []
    r = 0
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
            v = rows[i][c]
            if not v:
                continue
            ri = rows[i]
            rr = rows[r]
            for j in range(c, ncols):
                ri[j] = ri[j] * piv - rr[j] * v
            g = 0
            for j in range(c, ncols):
                if ri[j]:
                    g = gcd(g, ri[j])
            if g > 1:
                for j in range(c, ncols):
                    ri[j] //= g
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots
