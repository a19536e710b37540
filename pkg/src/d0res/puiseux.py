"""Branch decomposition of a plane curve germ at the origin.

The classical polygon recursion in its rational form: for each polygon edge of
slope q/p (coprime), the reduced characteristic polynomial is read off in the
collapsed variable u = c^p, so each of its roots corresponds to exactly one
branch and conjugate expansions are never enumerated separately.  A root u*
with Bezout exponent m (m*q = -1 mod p) rescales the substitution to

    x = u*^m * x1^p,     y = x1^q * (u*^((m*q+1)/p) + y1)

which keeps all coefficients inside QQ(u*).  Simple roots finish with a
quadratically convergent series lift; multiple roots recurse.

Only the fields QQ and one simple extension are supported; roots requiring
more raise UnsupportedFieldExtension (callers may pass explicit branch
parametrizations instead).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd

from .errors import D0resError, UnsupportedFieldExtension
from .fields import (
    FieldElement,
    NumberField,
    rational_sqrt,
    scalar_is_zero,
    sqrt_in_field,
)
from .poly import Poly
from .series import Series

_ZERO = Fraction(0)
_MAX_DEPTH = 64


class FieldContext:
    """Tracks the single extension a decomposition is allowed to introduce."""

    def __init__(self, field=None):
        self.field = field

    def adjoin(self, minpoly_coeffs):
        """Return the extension defined by the given monic minimal polynomial,
        reusing the active one when the modulus matches."""
        candidate = NumberField(minpoly_coeffs)
        if self.field is None:
            self.field = candidate
            return candidate
        if self.field.minpoly == candidate.minpoly:
            return self.field
        raise UnsupportedFieldExtension(
            "a second extension would be required "
            f"(active modulus {self.field.minpoly}, new {candidate.minpoly})"
        )


# -- univariate scalar polynomials (lowest degree first) -----------------------


def _trim(p):
    while p and scalar_is_zero(p[-1]):
        p.pop()
    return p


def _udiv(p, q):
    p, q = _trim(list(p)), _trim(list(q))
    quot = [_ZERO] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q) and p:
        shift = len(p) - len(q)
        factor = p[-1] / q[-1]
        quot[shift] = factor
        for i, c in enumerate(q):
            p[i + shift] = p[i + shift] - factor * c
        p = _trim(p)
    return quot, p


def _ugcd(p, q):
    p, q = _trim(list(p)), _trim(list(q))
    while q:
        _, r = _udiv(p, q)
        p, q = q, r
    if p:
        lead = p[-1]
        inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
        p = [c * inv for c in p]
    return p


def _ueval(p, x):
    acc = _ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _uderiv(p):
    return _trim([c * k for k, c in enumerate(p)][1:])


def squarefree_decomposition(p):
    """Yun's algorithm over a field of characteristic zero.

    Returns [(factor, multiplicity)] with factor monic and squarefree.
    """
    p = _trim(list(p))
    if len(p) <= 1:
        return []
    lead = p[-1]
    inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
    p = [c * inv for c in p]
    dp = _uderiv(p)
    a = _ugcd(p, dp)
    b, _ = _udiv(p, a)
    c, _ = _udiv(dp, a)
    d = _usub(c, _uderiv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = _ugcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = _udiv(b, a)
        c, _ = _udiv(d, a)
        d = _usub(c, _uderiv(b))
        i += 1
    return out


def _usub(p, q):
    n = max(len(p), len(q))
    out = [_ZERO] * n
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] - c
    return _trim(out)


# -- root finding within QQ plus one simple extension ---------------------------


def _rational_candidates(p):
    """Candidate rational roots of a rational-coefficient polynomial."""
    denom = 1
    for c in p:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 == 0:
        return [Fraction(0)]

    def divisors(n):
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    cands = set()
    for pn in divisors(a0):
        for qd in divisors(an):
            cands.add(Fraction(pn, qd))
            cands.add(Fraction(-pn, qd))
    return sorted(cands)


def _deflate(p, root):
    """Divide by (u - root); remainder must vanish."""
    lin = [-root, Fraction(1) if isinstance(root, Fraction) else root.field.one()]
    q, r = _udiv(p, lin)
    if r:
        raise D0resError("deflation by a non-root")
    return q


def _all_rational(p):
    return all(isinstance(c, Fraction) for c in p)


def _quadratic_roots(p, ctx: FieldContext):
    """Both roots of a squarefree quadratic, extending the field if permitted."""
    c0, c1, c2 = p[0], p[1], p[2]
    disc = c1 * c1 - 4 * c2 * c0
    if isinstance(disc, FieldElement) and disc.is_rational():
        disc = disc.rational_part()
    if isinstance(disc, Fraction):
        r = rational_sqrt(disc) if disc >= 0 else None
        if r is None and ctx.field is not None:
            r = sqrt_in_field(disc, ctx.field)
        if r is not None:
            half = Fraction(1, 2)
            inv_c2 = 1 / c2 if isinstance(c2, Fraction) else c2.inverse()
            return [(-c1 - r) * half * inv_c2, (-c1 + r) * half * inv_c2]
        if _all_rational(p):
            # irreducible over QQ: adjoin a root
            inv = 1 / c2
            field = ctx.adjoin([c0 * inv, c1 * inv, Fraction(1)])
            alpha = field.gen()
            other = field.from_rational(-c1 * inv) - alpha
            return [alpha, other]
    raise UnsupportedFieldExtension(
        "quadratic root outside the supported single-extension fields"
    )


def _depressed_quartic_split(p):
    """Try to split a monic rational quartic into two rational-coefficient
    quadratics (Descartes resolvent).  Returns (quad1, quad2) or None."""
    c0, c1, c2, c3 = p[0], p[1], p[2], p[3]
    # depress via the shift u = w - c3/4, computed exactly
    sh = -c3 / 4
    base = [c0, c1, c2, c3, Fraction(1)]
    shifted = _shift_upoly(base, sh)
    r0, q0, p0 = shifted[0], shifted[1], shifted[2]
    if q0 == 0:
        # biquadratic: w^4 + p0 w^2 + r0 = (w^2 - z1)(w^2 - z2)
        zdisc = p0 * p0 - 4 * r0
        zs = rational_sqrt(zdisc) if zdisc >= 0 else None
        if zs is None:
            return None
        z1, z2 = (-p0 - zs) / 2, (-p0 + zs) / 2
        quad1 = [-z1, Fraction(0), Fraction(1)]
        quad2 = [-z2, Fraction(0), Fraction(1)]
    else:
        # resolvent cubic in z = a^2: z^3 + 2 p0 z^2 + (p0^2 - 4 r0) z - q0^2
        cubic = [-q0 * q0, p0 * p0 - 4 * r0, 2 * p0, Fraction(1)]
        a = None
        for cand in _rational_candidates(cubic):
            if _ueval(cubic, cand) == 0 and cand > 0:
                root = rational_sqrt(cand)
                if root is not None:
                    a = root
                    break
        if a is None:
            return None
        b = (p0 + a * a - q0 / a) / 2
        c = (p0 + a * a + q0 / a) / 2
        quad1 = [b, a, Fraction(1)]
        quad2 = [c, -a, Fraction(1)]
    # undo the shift w = u - sh
    return _shift_upoly(quad1, -sh), _shift_upoly(quad2, -sh)


def _shift_upoly(p, s):
    """p(u + s) by Horner-style synthetic shifts."""
    out = list(p)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + s * out[j + 1]
    return out


def roots_in_tower(p, ctx: FieldContext):
    """All roots of p (with multiplicity) inside QQ or the single extension.

    Returns a list of (root, multiplicity) in deterministic order.  Raises
    UnsupportedFieldExtension when any root falls outside.
    """
    found = []
    for factor, mult in squarefree_decomposition(p):
        for root in _roots_squarefree(factor, ctx):
            found.append((root, mult))
    return found


def _roots_squarefree(p, ctx: FieldContext):
    p = _trim(list(p))
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [-(p[0] / p[1])]
    work = list(p)
    out = []
    if _all_rational(work):
        rational_roots = []
        for cand in _rational_candidates(work):
            if _ueval(work, cand) == 0:
                rational_roots.append(cand)
        for r in sorted(rational_roots):
            out.append(r)
            work = _deflate(work, r)
    work = _trim(work)
    while len(work) - 1 >= 1:
        deg = len(work) - 1
        if deg == 1:
            out.append(-(work[0] / work[1]))
            work = [work[1]]
        elif deg == 2:
            pair = _quadratic_roots(work, ctx)
            out.extend(pair)
            work = [work[-1]]
        elif deg == 3 and _all_rational(work):
            # no rational roots remain, so the cubic is irreducible: adjoin
            inv = 1 / work[-1]
            field = ctx.adjoin([c * inv for c in work])
            alpha = field.gen()
            out.append(alpha)
            work = _deflate([field.from_rational(c) if isinstance(c, Fraction) else c
                             for c in work], alpha)
        elif deg == 4 and _all_rational(work):
            inv = 1 / work[-1]
            monic = [c * inv for c in work]
            split = _depressed_quartic_split(monic)
            if split is not None:
                q1, q2 = split
                out.extend(_roots_squarefree(q1, ctx))
                out.extend(_roots_squarefree(q2, ctx))
                work = [work[-1]]
            else:
                field = ctx.adjoin(monic)
                alpha = field.gen()
                out.append(alpha)
                work = _deflate([field.from_rational(c) for c in monic], alpha)
        else:
            raise UnsupportedFieldExtension(
                f"cannot resolve degree-{deg} characteristic factor inside "
                "QQ plus one simple extension; pass explicit branch "
                "parametrizations instead"
            )
    return out


# -- polygon machinery ----------------------------------------------------------


def newton_polygon_edges(f: Poly):
    """Edges of the origin Newton polygon, in increasing slope order.

    Each edge is (p, q, points) with slope q/p in lowest terms and `points`
    the support points on the edge, listed from the top (max y-exponent) down.
    Requires that the caller has already divided out x- and y-axis
    factors and that f(0,0) = 0.
    """
    support = set(f.terms)
    # minimal i for each j
    by_j = {}
    for (i, j) in support:
        if j not in by_j or i < by_j[j]:
            by_j[j] = i
    # start at the y-axis point (smallest j with i == 0 ... i.e. ord of f(0,y))
    ys = [j for (i, j) in support if i == 0]
    xs = [i for (i, j) in support if j == 0]
    if not ys or not xs:
        raise D0resError("polygon needs both axis intercepts (divide axes out first)")
    a = (0, min(ys))
    bottom_j = 0
    edges = []
    while a[1] > bottom_j:
        best = None
        best_slope = None
        for j, i in by_j.items():
            if j >= a[1]:
                continue
            slope = Fraction(i - a[0], a[1] - j)
            if best_slope is None or slope < best_slope or (
                slope == best_slope and j < best[1]
            ):
                best_slope = slope
                best = (i, j)
        q = best_slope.numerator
        p = best_slope.denominator
        pts = []
        span = a[1] - best[1]
        for k in range(span // p + 1):
            pt = (a[0] + k * q, a[1] - k * p)
            if pt in support:
                pts.append(pt)
        edges.append((p, q, pts))
        a = best
    # walking down from the y-axis intercept, convexity makes the slopes
    # increase, so the edges are already in increasing-slope order
    return edges


def edge_characteristic(f: Poly, p, q, pts):
    """Reduced characteristic polynomial Phi(u), u = c^p, lowest degree first."""
    j_min = min(j for (_, j) in pts)
    degree = (max(j for (_, j) in pts) - j_min) // p
    coeffs = [_ZERO] * (degree + 1)
    for (i, j) in pts:
        coeffs[(j - j_min) // p] = f.terms.get((i, j), _ZERO)
    return coeffs


def puiseux_transform(f: Poly, p, q, A, B):
    """f(A*x1^p, x1^q*(B+y1)) divided by the largest power of x1."""
    out = {}
    apow = [Fraction(1)]
    for _ in range(f.degree_in(0)):
        apow.append(apow[-1] * A)
    bpow = [Fraction(1)]
    for _ in range(f.degree_in(1)):
        bpow.append(bpow[-1] * B)
    for (i, j), c in f.terms.items():
        base = c * apow[i]
        xdeg = p * i + q * j
        for l in range(j + 1):
            coeff = base * comb(j, l) * bpow[j - l]
            key = (xdeg, l)
            prev = out.get(key, _ZERO)
            out[key] = prev + coeff
    g = Poly(2, out)
    v = g.monomial_content(0)
    if v:
        g = g.divide_by_monomial(0, v)
    return g


# -- expansion chains -------------------------------------------------------------


class _Leaf:
    __slots__ = ("levels", "tail_poly", "order_key")

    def __init__(self, levels, tail_poly, order_key):
        self.levels = levels          # [(p, q, A, B), ...] outermost first
        self.tail_poly = tail_poly    # None means the tail is exactly zero
        self.order_key = order_key    # tuple used for deterministic sorting


def _regular_ready(f1: Poly) -> bool:
    """A simple characteristic root always lands here: f1(0,0)=0, f1_y(0,0)!=0."""
    if not scalar_is_zero(f1.eval_scalars([_ZERO, _ZERO])):
        return False
    return not scalar_is_zero(f1.diff(1).eval_scalars([_ZERO, _ZERO]))


def _expand(f: Poly, ctx: FieldContext, depth, prefix_key):
    """All expansion leaves of f at the origin (f free of the x-axis factor)."""
    if depth > _MAX_DEPTH:
        raise D0resError("polygon recursion too deep; input may not be reduced")
    leaves = []
    # exact tail: y | f
    ytail = f.monomial_content(1)
    if ytail:
        if ytail > 1:
            raise D0resError("repeated y-axis factor; input not squarefree")
        leaves.append(_Leaf([], None, prefix_key + ((-1, 0),)))
        f = f.divide_by_monomial(1, 1)
    if not scalar_is_zero(f.eval_scalars([_ZERO, _ZERO])):
        return leaves
    if f.monomial_content(0):
        # a vertical component inside the recursion means the input was not
        # in the expected shape (the caller strips x | f at the top level)
        raise D0resError("unexpected vertical component in polygon recursion")
    for edge_idx, (p, q, pts) in enumerate(newton_polygon_edges(f)):
        phi = edge_characteristic(f, p, q, pts)
        m = 0 if p == 1 else (-pow(q, -1, p)) % p
        for root_idx, (u_star, mult) in enumerate(roots_in_tower(phi, ctx)):
            A = u_star ** m if m else Fraction(1)
            exp_b = (m * q + 1) // p
            B = u_star ** exp_b
            key = prefix_key + ((edge_idx, root_idx),)
            f1 = puiseux_transform(f, p, q, A, B)
            if mult == 1 and _regular_ready(f1):
                leaves.append(_Leaf([(p, q, A, B)], f1, key))
            else:
                for sub in _expand(f1, ctx, depth + 1, key):
                    sub.levels.insert(0, (p, q, A, B))
                    leaves.append(sub)
    leaves.sort(key=lambda leaf: leaf.order_key)
    return leaves


def solve_regular_tail(f1: Poly, trunc) -> Series:
    """Series y(x) with f1(x, y(x)) = 0 mod x^trunc, for a simple root at 0.

    Newton lift; needs f1(0,0) = 0 and d f1/dy (0,0) != 0.
    """
    if not scalar_is_zero(f1.eval_scalars([_ZERO, _ZERO])):
        raise D0resError("tail polynomial does not vanish at the origin")
    fy = f1.diff(1)
    if scalar_is_zero(fy.eval_scalars([_ZERO, _ZERO])):
        raise D0resError("tail root is not simple; recursion should have continued")
    x = Series.variable(trunc)
    y = Series.zero(trunc)
    steps = 0
    while True:
        val = f1.eval_series([x, y])
        if val.is_zero_at_precision():
            break
        dval = fy.eval_series([x, y])
        y = y - val * dval.invert()
        steps += 1
        if steps > trunc.bit_length() + 4:
            raise D0resError("series lift failed to converge")
    return y


def expansion_leaves(f: Poly, ctx: FieldContext):
    """Public wrapper used by the branches module."""
    return _expand(f, ctx, 0, ())


def leaf_to_coords(leaf: _Leaf, trunc):
    """Back-substitute one expansion leaf into (x(t), y(t)) series."""
    if leaf.tail_poly is None:
        y = Series.zero(trunc)
    else:
        y = solve_regular_tail(leaf.tail_poly, trunc)
    x = Series.variable(trunc)
    for (p, q, A, B) in reversed(leaf.levels):
        new_x = (x ** p) * A
        new_y = (x ** q) * (Series.monomial(0, B, trunc) + y)
        x, y = new_x, new_y
    return x, y
