"""Exact scalars: rationals plus at most one simple extension QQ[a]/(m(a)).

A scalar is either a `fractions.Fraction` or a `FieldElement` attached to a
`NumberField`.  Mixed Fraction/FieldElement arithmetic works through the usual
reflected operators; two distinct extensions never mix (UnsupportedFieldExtension).
Everything is immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import D0resError, UnsupportedFieldExtension

Rat = Fraction


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class NumberField:
    """QQ[a]/(m(a)) for a monic minimal polynomial m with rational coefficients.

    `minpoly` is the coefficient tuple (c0, ..., c_{d-1}, 1) of m, lowest degree
    first.  m must be squarefree; the arithmetic only needs m to define the
    quotient ring, and inversion raises on zero divisors if m is reducible.
    """

    def __init__(self, minpoly, generator="a"):
        coeffs = tuple(_as_fraction(c) for c in minpoly)
        if len(coeffs) < 3:
            raise D0resError("extension degree must be at least 2")
        if coeffs[-1] != 1:
            # normalize to monic
            lead = coeffs[-1]
            if lead == 0:
                raise D0resError("minimal polynomial has zero leading coefficient")
            coeffs = tuple(c / lead for c in coeffs)
        if not _is_squarefree_univariate(coeffs):
            raise D0resError("minimal polynomial must be squarefree")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.generator = generator
        # reduction table: a^degree = -(c0 + c1 a + ... + c_{d-1} a^{d-1})
        self._top = tuple(-c for c in coeffs[:-1])

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.minpoly == other.minpoly
            and self.generator == other.generator
        )

    def __hash__(self):
        return hash((self.minpoly, self.generator))

    def __repr__(self):
        return f"NumberField({self.generator}: {poly_str(self.minpoly, 'a')})"

    def zero(self):
        return FieldElement(self, (Fraction(0),) * self.degree)

    def one(self):
        return self.from_rational(Fraction(1))

    def gen(self):
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return FieldElement(self, tuple(coeffs))

    def from_rational(self, value):
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = _as_fraction(value)
        return FieldElement(self, tuple(coeffs))

    def element(self, coeffs):
        coeffs = [_as_fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = _reduce_mod(coeffs, self.minpoly)
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))


class FieldElement:
    """Element of a NumberField, stored as coefficients of 1, a, ..., a^{d-1}."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise UnsupportedFieldExtension(
                    "cannot mix elements of distinct extensions "
                    f"({self.field.generator} vs {other.field.generator})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self):
        if not self.is_rational():
            raise D0resError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b != 0:
                    prod[i + j] += a * b
        return FieldElement(self.field, tuple(_reduce_mod(prod, self.field.minpoly)))

    __rmul__ = __mul__

    def inverse(self):
        """Extended Euclid against the minimal polynomial; raises on zero divisors."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        # invariants: r0 = s0 * m + t0 * self (as polynomials mod nothing)
        r0, r1 = list(self.field.minpoly), list(self.coeffs)
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while any(c != 0 for c in r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        r0 = _poly_trim(r0)
        if len(r0) != 1:
            raise ZeroDivisionError(
                f"{self} is a zero divisor (reducible modulus {poly_str(self.field.minpoly, 'a')})"
            )
        inv_lead = 1 / r0[0]
        return self.field.element([c * inv_lead for c in t0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return format_scalar(self)


# -- generic scalar helpers (Fraction | FieldElement) -------------------------


def scalar_is_zero(x) -> bool:
    if isinstance(x, FieldElement):
        return x.is_zero()
    return x == 0


def scalar_field(x):
    """The NumberField of x, or None for rationals."""
    return x.field if isinstance(x, FieldElement) else None


def common_field(*values):
    """The single NumberField appearing among values (None if all rational)."""
    field = None
    for v in values:
        f = scalar_field(v)
        if f is None:
            continue
        if field is None:
            field = f
        elif field != f:
            raise UnsupportedFieldExtension("values live in distinct extensions")
    return field


def coerce_scalar(x, field):
    """Coerce a scalar into `field` (or leave rational when field is None)."""
    if field is None:
        if isinstance(x, FieldElement):
            return x.rational_part()
        return _as_fraction(x)
    if isinstance(x, FieldElement):
        if x.field != field:
            raise UnsupportedFieldExtension("cannot coerce between distinct extensions")
        return x
    return field.from_rational(x)


def scalar_rational_part(x):
    if isinstance(x, FieldElement):
        return x.rational_part()
    return _as_fraction(x)


# -- formatting and parsing ----------------------------------------------------


def format_scalar(x) -> str:
    """Lossless string form: '3/2', '-1', '1+2*a', '1/2*a^2-1'."""
    if not isinstance(x, FieldElement):
        return str(_as_fraction(x))
    if x.is_rational():
        return str(x.coeffs[0])
    return poly_str(x.coeffs, x.field.generator)


def poly_str(coeffs, sym) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            term = str(c)
        else:
            var = sym if k == 1 else f"{sym}^{k}"
            if c == 1:
                term = var
            elif c == -1:
                term = f"-{var}"
            else:
                term = f"{c}*{var}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for term in parts[1:]:
        out += term if term.startswith("-") else "+" + term
    return out


def parse_scalar(text, field=None):
    """Inverse of format_scalar.  Rational strings always parse; generator terms
    require `field` (matching generator name)."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty scalar string")
    terms = _split_terms(text)
    if field is None:
        if len(terms) == 1 and not any(ch.isalpha() for ch in terms[0]):
            return Fraction(terms[0])
        raise ValueError(f"non-rational scalar {text!r} needs a field declaration")
    coeffs = [Fraction(0)] * field.degree
    for term in terms:
        coeff, power = _parse_term(term, field.generator)
        if power >= field.degree:
            raise ValueError(f"term exponent {power} exceeds extension degree")
        coeffs[power] += coeff
    elem = field.element(coeffs)
    return elem.rational_part() if elem.is_rational() else elem


def _split_terms(text):
    terms, start = [], 0
    for i, ch in enumerate(text):
        if ch in "+-" and i > start and text[i - 1] not in "+-*^/":
            terms.append(text[start:i])
            start = i
    terms.append(text[start:])
    return terms


def _parse_term(term, gen):
    if gen not in term:
        return Fraction(term), 0
    head, _, tail = term.partition(gen)
    power = 1
    if tail.startswith("^"):
        power = int(tail[1:])
    elif tail:
        raise ValueError(f"cannot parse term {term!r}")
    head = head.rstrip("*")
    if head in ("", "+"):
        coeff = Fraction(1)
    elif head == "-":
        coeff = Fraction(-1)
    else:
        coeff = Fraction(head)
    return coeff, power


# -- tiny univariate polynomial kit over QQ (dense, lowest degree first) -------


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] -= c
    return _poly_trim(out)


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p, q):
    p = list(p)
    q = _poly_trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    while len(_poly_trim(p)) >= len(q):
        p = _poly_trim(p)
        shift = len(p) - len(q)
        factor = p[-1] / q[-1]
        quot[shift] = factor
        for i, c in enumerate(q):
            p[i + shift] -= factor * c
    return quot, _poly_trim(p)


def _reduce_mod(coeffs, minpoly):
    coeffs = list(coeffs)
    d = len(minpoly) - 1
    top = [-c for c in minpoly[:-1]]
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        coeffs[k] = Fraction(0)
        for i, t in enumerate(top):
            coeffs[k - d + i] += c * t
    out = coeffs[:d]
    out += [Fraction(0)] * (d - len(out))
    return out


def _is_squarefree_univariate(coeffs):
    p = list(coeffs)
    dp = [i * c for i, c in enumerate(p)][1:]
    g = _poly_gcd(p, dp)
    return len(g) == 1


def _poly_gcd(p, q):
    p, q = _poly_trim(list(p)), _poly_trim(list(q))
    while q:
        _, r = _poly_divmod(p, q)
        p, q = q, r
    if p:
        lead = p[-1]
        p = [c / lead for c in p]
    return p


def rational_sqrt(value):
    """Exact square root of a nonnegative rational, or None."""
    v = _as_fraction(value)
    if v < 0:
        return None
    if v == 0:
        return Fraction(0)
    rn, rd = isqrt(v.numerator), isqrt(v.denominator)
    if rn * rn == v.numerator and rd * rd == v.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(value, field):
    """Exact square root of a rational inside QQ or a quadratic NumberField.

    Returns a scalar with square equal to `value`, or None.  Only the rational
    and quadratic-extension cases are attempted (enough for one simple extension).
    """
    v = _as_fraction(value)
    r = rational_sqrt(v)
    if r is not None:
        return r if field is None else field.from_rational(r)
    if field is None or field.degree != 2:
        return None
    # want (e0 + e1*a)^2 = v with a^2 = -m1*a - m0
    m0, m1 = field.minpoly[0], field.minpoly[1]
    # e0 = e1*m1/2 makes the a-coefficient vanish; then
    # e1^2*(m1^2/4 - m0) = v
    denom = m1 * m1 / 4 - m0
    if denom == 0:
        return None
    w = v / denom
    e1 = rational_sqrt(w)
    if e1 is None:
        return None
    e0 = e1 * m1 / 2
    cand = field.element([e0, e1])
    if cand * cand == field.from_rational(v):
        return cand
    return None
