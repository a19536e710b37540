"""Sparse multivariate polynomials over the exact scalars.

Exponents are tuples of non-negative ints; zero coefficients are never stored.
The monomial order used everywhere (annihilator bases, implicit equations,
deterministic reports) is graded lexicographic with the LAST variable strongest,
so that for plane curves (x, y) the pure y-powers lead within a degree.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import D0resError
from .fields import scalar_is_zero
from .series import Series

_ZERO = Fraction(0)


def grlex_key(exponent):
    """Sort key: by total degree, then lexicographically on reversed exponents."""
    return (sum(exponent), tuple(reversed(exponent)))


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise D0resError(f"exponent {exp} has arity != {nvars}")
            if any(e < 0 for e in exp):
                raise D0resError("negative exponent")
            if not scalar_is_zero(coeff):
                clean[exp] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, index):
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exponent, coeff):
        return cls(len(exponent), {tuple(exponent): coeff})

    # -- structure ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def min_degree(self):
        """Order of vanishing at the origin (multiplicity of the lowest part)."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def lowest_part(self):
        d = self.min_degree()
        if d is None:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def degree_in(self, index):
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]))

    def coefficient(self, exponent):
        return self.terms.get(tuple(exponent), _ZERO)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise D0resError("arity mismatch")
            return other
        if isinstance(other, (int, Fraction)) or hasattr(other, "field"):
            return Poly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, _ZERO) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, _ZERO) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise D0resError("negative polynomial power")
        result = Poly.constant(self.nvars, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, scalar):
        return Poly(self.nvars, {e: c * scalar for e, c in self.terms.items()})

    def diff(self, index):
        out = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            ne = list(e)
            ne[index] -= 1
            out[tuple(ne)] = c * e[index]
        return Poly(self.nvars, out)

    def divide_by_monomial(self, index, power):
        """Exact division by x_index^power."""
        out = {}
        for e, c in self.terms.items():
            if e[index] < power:
                raise D0resError("monomial division is not exact")
            ne = list(e)
            ne[index] -= power
            out[tuple(ne)] = c
        return Poly(self.nvars, out)

    def monomial_content(self, index):
        """Largest power of x_index dividing every term (0 for the zero poly)."""
        if not self.terms:
            return 0
        return min(e[index] for e in self.terms)

    # -- evaluation -----------------------------------------------------------

    def eval_scalars(self, values):
        if len(values) != self.nvars:
            raise D0resError("wrong number of values")
        acc = _ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            acc = acc + term
        return acc

    def eval_series(self, coords) -> Series:
        """Substitute one Series per variable (all sharing a truncation)."""
        if len(coords) != self.nvars:
            raise D0resError("wrong number of coordinate series")
        n = min(s.trunc for s in coords)
        var = coords[0].var
        result = Series.zero(n, var=var)
        # cache powers per variable
        powers = []
        for s in coords:
            powers.append({0: Series.one(n, var=var), 1: s.truncate(n)})
        for e, c in self.sorted_terms():
            term = Series.monomial(0, c, n, var=var)
            for idx, k in enumerate(e):
                if k == 0:
                    continue
                cache = powers[idx]
                if k not in cache:
                    base = cache[1]
                    acc = cache[max(j for j in cache if j <= k)]
                    j = max(j for j in cache if j <= k)
                    while j < k:
                        acc = acc * base
                        j += 1
                        cache[j] = acc
                term = term * cache[k]
            result = result + term
        return result

    def translate(self, point):
        """f(x + p): recenter so that `point` moves to the origin."""
        if len(point) != self.nvars:
            raise D0resError("wrong point arity")
        result = Poly.zero(self.nvars)
        for e, c in self.terms.items():
            term = Poly.constant(self.nvars, c)
            for idx, k in enumerate(e):
                if k == 0:
                    continue
                shifted = Poly(self.nvars, {
                    tuple(1 if j == idx else 0 for j in range(self.nvars)): Fraction(1),
                    (0,) * self.nvars: point[idx],
                })
                term = term * shifted ** k
            result = result + term
        return result

    # -- display / comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def __repr__(self):
        return poly_text(self)


def monomials_upto(nvars, degree):
    """All exponent tuples with total degree <= degree, in graded-lex order."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            for d in range(remaining + 1):
                out.append(prefix + (d,))
            return
        for d in range(remaining + 1):
            rec(prefix + (d,), remaining - d, slots - 1)

    rec((), degree, nvars)
    out.sort(key=grlex_key)
    return out


_VAR_NAMES = ("x", "y", "z", "w")


def var_names(nvars):
    if nvars <= len(_VAR_NAMES):
        return _VAR_NAMES[:nvars]
    return tuple(f"x{i+1}" for i in range(nvars))


def poly_text(f: Poly) -> str:
    names = var_names(f.nvars)
    parts = []
    for e, c in f.sorted_terms():
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


# -- bivariate gcd / squarefree test (univariate-in-y over K[x]) ---------------


def _as_y_coeffs(f: Poly):
    """f(x, y) as a list of univariate-in-x coefficient lists, index = y-degree."""
    dy = f.degree_in(1)
    out = [[] for _ in range(dy + 1)]
    dx = f.degree_in(0)
    for j in range(dy + 1):
        out[j] = [_ZERO] * (dx + 1)
    for (i, j), c in f.terms.items():
        out[j][i] = c
    return [_trim(c) for c in out]


def _trim(p):
    p = list(p)
    while p and scalar_is_zero(p[-1]):
        p.pop()
    return p


def _upoly_divmod(p, q):
    p = _trim(list(p))
    q = _trim(list(q))
    if not q:
        raise ZeroDivisionError
    quot = [_ZERO] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q):
        shift = len(p) - len(q)
        factor = p[-1] / q[-1]
        quot[shift] = factor
        for i, c in enumerate(q):
            p[i + shift] = p[i + shift] - factor * c
        p = _trim(p)
    return quot, p


def _upoly_gcd(p, q):
    p, q = _trim(list(p)), _trim(list(q))
    while q:
        _, r = _upoly_divmod(p, q)
        p, q = q, r
    if p:
        lead = p[-1]
        inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
        p = [c * inv for c in p]
    return p


def _upoly_mul(p, q):
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if scalar_is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def _upoly_sub(p, q):
    n = max(len(p), len(q))
    out = [_ZERO] * n
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] - c
    return _trim(out)


def _ypoly_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _ypoly_pseudo_rem(a, b):
    """Pseudo-remainder of y-polynomials with K[x] coefficients (b nonzero)."""
    db = len(b) - 1
    lc_b = b[-1]
    r = [list(c) for c in a]
    r = _ypoly_trim(r)
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        lead = r[-1]
        r = [_upoly_mul(c, lc_b) for c in r]
        shift = dr - db
        for j in range(db + 1):
            r[j + shift] = _upoly_sub(r[j + shift], _upoly_mul(lead, b[j]))
        r = _ypoly_trim(r)
    return r


def _content_and_primitive(coeffs):
    cont = []
    for c in coeffs:
        cont = _upoly_gcd(cont, c) if cont else _trim(list(c))
        if len(cont) == 1:
            break
    if not cont:
        return [], [list(c) for c in coeffs]
    prim = []
    for c in coeffs:
        q, r = _upoly_divmod(c, cont)
        assert not r
        prim.append(q)
    return cont, prim


def gcd_bivariate(f: Poly, g: Poly) -> Poly:
    """gcd of two plane polynomials over the scalar field (primitive PRS).

    The result is normalized so its graded-lex leading coefficient is 1.
    """
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    fy = _ypoly_trim(_as_y_coeffs(f))
    gy = _ypoly_trim(_as_y_coeffs(g))
    cf, pf = _content_and_primitive(fy)
    cg, pg = _content_and_primitive(gy)
    ccont = _upoly_gcd(cf, cg)
    a, b = pf, pg
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _ypoly_pseudo_rem(a, b)
        if r:
            _, r = _content_and_primitive(r)
        a, b = b, r
    _, a = _content_and_primitive(a)
    out = {}
    for j, cx in enumerate(a):
        for i, c in enumerate(_upoly_mul(cx, ccont)):
            if not scalar_is_zero(c):
                out[(i, j)] = c
    result = Poly(2, out)
    if not result.is_zero():
        lead = result.terms[max(result.terms, key=grlex_key)]
        inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
        result = result.scale(inv)
    return result


def is_squarefree(f: Poly) -> bool:
    """True iff the plane polynomial defines a reduced curve.

    Char-0 criterion: gcd(f, f_x, f_y) is a nonzero constant.
    """
    if f.nvars != 2:
        raise D0resError("squarefreeness check is for plane polynomials")
    if f.is_zero():
        return False
    g = gcd_bivariate(f, f.diff(0))
    g = gcd_bivariate(g, f.diff(1))
    return g.total_degree() == 0
