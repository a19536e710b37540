"""Truncated power series in one variable over the exact scalars.

A Series holds exactly `trunc` coefficients c_0..c_{trunc-1}; it represents an
element of K[[t]] known modulo t^trunc.  Every arithmetic result carries the
minimum truncation of its inputs.  A series whose stored coefficients all
vanish is only "zero at precision": order() returns None for it and callers
must decide whether that means zero or insufficient truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import D0resError
from .fields import scalar_is_zero

_ZERO = Fraction(0)


class Series:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, trunc=None, var="t"):
        coeffs = list(coeffs)
        if trunc is not None:
            if trunc <= 0:
                raise D0resError("truncation order must be positive")
            if len(coeffs) < trunc:
                coeffs += [_ZERO] * (trunc - len(coeffs))
            else:
                coeffs = coeffs[:trunc]
        elif not coeffs:
            raise D0resError("series needs coefficients or an explicit truncation")
        self.coeffs = tuple(coeffs)
        self.var = var

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, trunc, var="t"):
        return cls([], trunc=trunc, var=var)

    @classmethod
    def one(cls, trunc, var="t"):
        return cls([Fraction(1)], trunc=trunc, var=var)

    @classmethod
    def variable(cls, trunc, var="t"):
        return cls.monomial(1, Fraction(1), trunc, var=var)

    @classmethod
    def monomial(cls, exponent, coeff, trunc, var="t"):
        coeffs = [_ZERO] * trunc
        if exponent < trunc:
            coeffs[exponent] = coeff
        return cls(coeffs, var=var)

    @classmethod
    def from_pairs(cls, pairs, trunc, var="t"):
        coeffs = [_ZERO] * trunc
        for exponent, coeff in pairs:
            if exponent < 0:
                raise D0resError("negative exponent in series data")
            if exponent < trunc:
                coeffs[exponent] = coeffs[exponent] + coeff
        return cls(coeffs, var=var)

    # -- structure ------------------------------------------------------------

    @property
    def trunc(self):
        return len(self.coeffs)

    def order(self):
        """Least index with nonzero coefficient; None when zero at precision."""
        for i, c in enumerate(self.coeffs):
            if not scalar_is_zero(c):
                return i
        return None

    def is_zero_at_precision(self):
        return self.order() is None

    def coefficient(self, k):
        if k >= len(self.coeffs):
            raise D0resError(f"coefficient {k} beyond truncation {self.trunc}")
        return self.coeffs[k]

    def truncate(self, n):
        if n > self.trunc:
            raise D0resError("cannot extend a truncated series")
        return Series(self.coeffs[:n], var=self.var)

    def extend_with_zeros(self, n):
        """Only valid when the series is known exactly (polynomial data)."""
        if n <= self.trunc:
            return self
        return Series(list(self.coeffs) + [_ZERO] * (n - self.trunc), var=self.var)

    # -- arithmetic -----------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, Series):
            return None
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        n = self._common(other)
        if n is None:
            return NotImplemented
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n)], var=self.var)

    def __sub__(self, other):
        n = self._common(other)
        if n is None:
            return NotImplemented
        return Series([self.coeffs[i] - other.coeffs[i] for i in range(n)], var=self.var)

    def __neg__(self):
        return Series([-c for c in self.coeffs], var=self.var)

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(self.trunc, other.trunc)
            out = [_ZERO] * n
            for i, a in enumerate(self.coeffs[:n]):
                if scalar_is_zero(a):
                    continue
                for j in range(n - i):
                    b = other.coeffs[j]
                    if not scalar_is_zero(b):
                        out[i + j] = out[i + j] + a * b
            return Series(out, var=self.var)
        # scalar multiple
        return Series([c * other for c in self.coeffs], var=self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise D0resError("negative series power")
        result = Series.one(self.trunc, var=self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def compose(self, inner: "Series") -> "Series":
        """self(inner), requiring ord(inner) >= 1."""
        o = inner.order()
        if o is not None and o < 1:
            raise D0resError("composition needs an inner series of order >= 1")
        n = min(self.trunc, inner.trunc)
        result = Series.zero(n, var=inner.var)
        # Horner from the top coefficient down
        for k in range(n - 1, -1, -1):
            result = result * inner.truncate(n)
            c = self.coeffs[k]
            if not scalar_is_zero(c):
                result = result + Series.monomial(0, c, n, var=inner.var)
        return result

    def invert(self) -> "Series":
        """Multiplicative inverse of a unit (ord == 0) series."""
        o = self.order()
        if o != 0:
            raise D0resError("only unit series (order 0) are invertible")
        n = self.trunc
        a0 = self.coeffs[0]
        inv0 = 1 / a0 if isinstance(a0, Fraction) else a0.inverse()
        out = [inv0] + [_ZERO] * (n - 1)
        for k in range(1, n):
            acc = _ZERO
            for j in range(1, k + 1):
                aj = self.coeffs[j]
                if not scalar_is_zero(aj):
                    acc = acc + aj * out[k - j]
            out[k] = -inv0 * acc
        return Series(out, var=self.var)

    # -- comparisons / display --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if scalar_is_zero(c):
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = self.var if i == 1 else f"{self.var}^{i}"
                terms.append(var if c == 1 else f"{c}*{var}")
            if len(terms) >= 8:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O({self.var}^{self.trunc})>"
