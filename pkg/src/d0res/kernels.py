"""Hot-kernel selection and the Fraction-level wrappers used by linalg.

At import time the compiled extension is preferred; the pure twin is the
fallback.  `IMPLEMENTATION` records which one won (the benchmark and the
equivalence tests import both twins explicitly).  Clearing denominators up
front lets the whole elimination/product run on plain ints, skipping the
per-operation gcd that Fraction arithmetic pays.
"""

from fractions import Fraction
from math import gcd, lcm

try:  # pragma: no cover - depends on whether the extension was built
    from . import _kernhot as _impl

    IMPLEMENTATION = "compiled"
except ImportError:  # pragma: no cover
    from . import _kernhot_py as _impl

    IMPLEMENTATION = "pure"

imatmul = _impl.imatmul
irow_echelon = _impl.irow_echelon


def _common_denominator(rows):
    d = 1
    for row in rows:
        for x in row:
            if x.denominator != 1:
                d = lcm(d, x.denominator)
    return d


def fmatmul(a, b):
    """Product of two list-of-list Fraction matrices via the integer kernel."""
    da = _common_denominator(a)
    db = _common_denominator(b)
    ia = [[(x * da).numerator if da != 1 else x.numerator for x in row] for row in a]
    ib = [[(x * db).numerator if db != 1 else x.numerator for x in row] for row in b]
    prod = imatmul(ia, ib)
    scale = da * db
    if scale == 1:
        return [[Fraction(x) for x in row] for row in prod]
    return [[Fraction(x, scale) for x in row] for row in prod]


def frref(rows):
    """Reduced row echelon form of a list-of-list Fraction matrix.

    Returns (rref rows as Fractions, pivot column list).  Deterministic:
    the pivot is the first row with a nonzero entry in column order.
    Row-wise denominator clearing does not change the RREF.
    """
    if not rows or not rows[0]:
        return [list(r) for r in rows], []
    irows = []
    for row in rows:
        d = 1
        for x in row:
            if x.denominator != 1:
                d = lcm(d, x.denominator)
        irows.append([(x * d).numerator if d != 1 else x.numerator for x in row])
    pivots = irow_echelon(irows)
    ncols = len(irows[0])
    # back-substitute (still fraction-free), then normalize pivots to 1
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        rk = irows[k]
        piv = rk[c]
        for i in range(k):
            ri = irows[i]
            v = ri[c]
            if not v:
                continue
            for j in range(ncols):
                ri[j] = ri[j] * piv - rk[j] * v
            g = 0
            for j in range(ncols):
                if ri[j]:
                    g = gcd(g, ri[j])
            if g > 1:
                for j in range(ncols):
                    ri[j] //= g
    out = []
    for k in range(len(pivots)):
        piv = irows[k][pivots[k]]
        out.append([Fraction(x, piv) for x in irows[k]])
    for _ in range(len(pivots), len(irows)):
        out.append([Fraction(0)] * ncols)
    return out, pivots
