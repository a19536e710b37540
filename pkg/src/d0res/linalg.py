"""Exact dense matrices over the scalar field, with deterministic elimination.

Matrices over plain rationals route through the integer kernels (compiled or
pure twin); matrices containing extension elements use the generic scalar path.
Everything is immutable; no operation ever rounds.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import D0resError, NonCommutingActions
from .fields import FieldElement, scalar_is_zero
from .kernels import fmatmul, frref

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ExactMatrix:
    __slots__ = ("rows", "cols", "data", "rational")

    def __init__(self, data):
        data = tuple(tuple(_norm(x) for x in row) for row in data)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise D0resError("ragged matrix rows")
        else:
            width = 0
        self.data = data
        self.rows = len(data)
        self.cols = width
        self.rational = all(isinstance(x, Fraction) for row in data for x in row)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[_ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks):
        """Direct sum; works for rectangular blocks too."""
        total_r = sum(b.rows for b in blocks)
        total_c = sum(b.cols for b in blocks)
        out = [[_ZERO] * total_c for _ in range(total_r)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                row = out[r0 + i]
                for j in range(b.cols):
                    row[c0 + j] = b.data[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls(out)

    # -- basics ---------------------------------------------------------------

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def is_zero(self):
        return all(scalar_is_zero(x) for row in self.data for x in row)

    def is_square(self):
        return self.rows == self.cols

    def transpose(self):
        return ExactMatrix([[self.data[i][j] for i in range(self.rows)]
                            for j in range(self.cols)])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        return all(
            self.data[i][j] == other.data[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"ExactMatrix[{self.rows}x{self.cols}: {body}]"

    def flat(self):
        """Row-major entry tuple (used to column-ize matrices)."""
        return tuple(x for row in self.data for x in row)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return ExactMatrix([
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)
        ])

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return ExactMatrix([
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)
        ])

    def __neg__(self):
        return ExactMatrix([[-x for x in row] for row in self.data])

    def scale(self, scalar):
        return ExactMatrix([[x * scalar for x in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise D0resError(
                    f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}"
                )
            if self.rational and other.rational:
                return ExactMatrix(fmatmul(
                    [list(r) for r in self.data], [list(r) for r in other.data]
                ))
            return ExactMatrix(_generic_matmul(self.data, other.data))
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not self.is_square():
            raise D0resError("powers need a square matrix")
        if n < 0:
            raise D0resError("negative matrix power")
        result = ExactMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def apply_to(self, vector):
        """Matrix-vector product (vector = sequence of scalars)."""
        if len(vector) != self.cols:
            raise D0resError("vector length mismatch")
        return tuple(
            sum((a * v for a, v in zip(row, vector) if not scalar_is_zero(v)), _ZERO)
            for row in self.data
        )

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise D0resError("shape mismatch")

    # -- elimination ------------------------------------------------------------

    def rref(self):
        """(reduced row echelon form, pivot columns); deterministic pivoting."""
        rows, pivots = rref_rows([list(r) for r in self.data])
        return ExactMatrix(rows), pivots

    def rank(self):
        if self.rows == 0 or self.cols == 0:
            return 0
        _, pivots = self.rref()
        return len(pivots)

    def nullspace(self):
        """Exact basis of the right kernel, one vector per free column.

        The vector for free column f has 1 in slot f and -rref[i][f] in the
        i-th pivot slot.  Empty list iff the matrix is injective on columns.
        """
        if self.cols == 0:
            return []
        if self.rows == 0:
            rref_data, pivots = [], []
        else:
            m, pivots = self.rref()
            rref_data = m.data
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            vec = [_ZERO] * self.cols
            vec[f] = _ONE
            for i, p in enumerate(pivots):
                vec[p] = -rref_data[i][f]
            basis.append(tuple(vec))
        return basis


def _norm(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, FieldElement)):
        return x
    raise D0resError(f"not an exact scalar: {x!r}")


def _generic_matmul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[_ZERO] * m for _ in range(n)]
    for i in range(n):
        for l in range(k):
            v = a[i][l]
            if scalar_is_zero(v):
                continue
            brow = b[l]
            orow = out[i]
            for j in range(m):
                w = brow[j]
                if not scalar_is_zero(w):
                    orow[j] = orow[j] + v * w
    return out


def rref_rows(rows):
    """RREF of a list-of-list scalar matrix; returns (rows, pivot columns)."""
    if not rows or not rows[0]:
        return rows, []
    if all(isinstance(x, Fraction) for row in rows for x in row):
        return frref(rows)
    return _rref_generic(rows)


def _rref_generic(rows):
    nrows, ncols = len(rows), len(rows[0])
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if not scalar_is_zero(rows[i][c]):
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        inv = 1 / piv if isinstance(piv, Fraction) else piv.inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i == r:
                continue
            v = rows[i][c]
            if scalar_is_zero(v):
                continue
            rows[i] = [a - v * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    # move zero rows to the bottom, preserving order of nonzero ones
    nonzero = [row for row in rows if any(not scalar_is_zero(x) for x in row)]
    zero = [row for row in rows if all(scalar_is_zero(x) for x in row)]
    return nonzero + zero, pivots


def nullspace(matrix: ExactMatrix):
    return matrix.nullspace()


def solve_exact(rows, rhs):
    """One exact solution of A x = b, or None when inconsistent.

    Free variables are set to zero (rref particular solution); also returns
    the number of free variables so callers can detect non-uniqueness:
    (solution, n_free) or (None, 0).
    """
    if not rows:
        return [], 0
    ncols = len(rows[0])
    augmented = [list(r) + [v] for r, v in zip(rows, rhs)]
    red, pivots = rref_rows(augmented)
    if ncols in pivots:
        return None, 0
    solution = [_ZERO] * ncols
    for i, p in enumerate(pivots):
        solution[p] = red[i][ncols]
    return solution, ncols - len(pivots)


def commute(a: ExactMatrix, b: ExactMatrix) -> bool:
    return (a * b - b * a).is_zero()


def eval_poly_at_matrices(f, mats):
    """f(A_1, ..., A_m) for pairwise commuting square matrices of equal size.

    The commutation check is mandatory: without it the substitution is not a
    ring homomorphism and the module axioms are broken.
    """
    if f.nvars != len(mats):
        raise D0resError("polynomial arity != number of matrices")
    if not mats:
        raise D0resError("need at least one matrix")
    n = mats[0].rows
    for m in mats:
        if not m.is_square() or m.rows != n:
            raise D0resError("matrices must be square and same size")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not commute(mats[i], mats[j]):
                raise NonCommutingActions(
                    f"action matrices {i} and {j} do not commute"
                )
    identity = ExactMatrix.identity(n)
    powers = [{0: identity, 1: m} for m in mats]
    acc = ExactMatrix.zeros(n, n)
    for exp, coeff in f.sorted_terms():
        term = identity
        for idx, k in enumerate(exp):
            if k == 0:
                continue
            cache = powers[idx]
            if k not in cache:
                top = max(j for j in cache if j <= k)
                cur = cache[top]
                while top < k:
                    cur = cur * cache[1]
                    top += 1
                    cache[top] = cur
            term = term * cache[k]
        acc = acc + term.scale(coeff)
    return acc


def eval_series_at_matrix(s, matrix: ExactMatrix):
    """s(A) for a truncated series s and nilpotent A with A^trunc == 0.

    Exact as long as the nilpotency index of A is at most the truncation of s;
    the caller is responsible for that precondition (checked cheaply here).
    """
    n = matrix.rows
    if not matrix.is_square():
        raise D0resError("series evaluation needs a square matrix")
    acc = ExactMatrix.zeros(n, n)
    power = ExactMatrix.identity(n)
    for k, c in enumerate(s.coeffs):
        if k > 0:
            power = power * matrix
            if power.is_zero():
                return acc
        if not scalar_is_zero(c):
            acc = acc + power.scale(c)
    if not (power * matrix).is_zero():
        raise D0resError(
            "matrix is not nilpotent within the series truncation; "
            "the evaluation would be inexact"
        )
    return acc
