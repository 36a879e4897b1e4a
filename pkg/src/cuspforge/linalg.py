"""Dense matrices over exact scalars (rationals, field elements) or floats.

Exact elimination picks the first nonzero pivot in column order, so results
(kernels, complements) are deterministic.  Float elimination uses scaled
partial pivoting and treats pivots below ``tol * max column norm`` as zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpfr, mpq, mpz


DEFAULT_RANK_TOL = 1e-8

_MPQ = type(mpq(0))
_MPZ = type(mpz(0))
_FLOATS = (float, complex, type(mpfr(0)))


class LinalgError(ArithmeticError):
    pass


def is_float_scalar(x) -> bool:
    return isinstance(x, _FLOATS)


def _exact(x):
    if isinstance(x, (int, _MPZ)) and not isinstance(x, bool):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return x


class Matrix:
    """Immutable ``rows x cols`` matrix with row-major ``entries``."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise LinalgError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise LinalgError("ragged rows")
        return cls(len(rows), ncols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls.from_rows(list(zip(*cols))) if cols else cls(0, 0, ())

    @classmethod
    def identity(cls, n: int, one=1, zero=0) -> "Matrix":
        return cls(n, n, (one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=0) -> "Matrix":
        return cls(rows, cols, (zero,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def col(self, j) -> list:
        return list(self.entries[j :: self.cols])

    def tolist(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    transpose = T

    def map(self, f: Callable) -> "Matrix":
        return Matrix(self.rows, self.cols, (f(x) for x in self.entries))

    def is_float(self) -> bool:
        return any(is_float_scalar(x) for x in self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * m : (i + 1) * m]
            for j in range(p):
                acc = 0
                for k, x in enumerate(arow):
                    if x:
                        y = b[k * p + j]
                        if y:
                            acc = x * y + acc
                out.append(acc)
        return Matrix(n, p, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise LinalgError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, (x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if self.shape != other.shape:
            raise LinalgError("shape mismatch in subtraction")
        return Matrix(self.rows, self.cols, (x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self):
        return Matrix(self.rows, self.cols, (-x for x in self.entries))

    def __mul__(self, s):
        if isinstance(s, Matrix):
            return NotImplemented
        return Matrix(self.rows, self.cols, (x * s for x in self.entries))

    __rmul__ = __mul__

    def __truediv__(self, s):
        s = float(s) if self.is_float() and isinstance(s, int) else _exact(s)
        return Matrix(self.rows, self.cols, (x / s for x in self.entries))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), 0)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def max_abs(self) -> float:
        return max((abs(float(x)) for x in self.entries), default=0.0)

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)])

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"


# ---------------------------------------------------------------------------
# elimination


def _rref(rows: list, ncols: int, tol):
    """Reduce ``rows`` in place; returns list of pivot columns.

    ``tol`` is None for exact arithmetic.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    if tol is not None:
        scale = [max((abs(x) for x in row), default=0.0) or 1.0 for row in rows]
    for c in range(ncols):
        if r == nrows:
            break
        if tol is None:
            p = next((i for i in range(r, nrows) if rows[i][c]), None)
        else:
            best, p = 0.0, None
            for i in range(r, nrows):
                v = abs(rows[i][c]) / scale[i]
                if v > best:
                    best, p = v, i
            if p is not None and max(abs(rows[i][c]) for i in range(r, nrows)) <= tol:
                for i in range(r, nrows):
                    rows[i][c] = 0.0
                p = None
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        if tol is not None:
            scale[r], scale[p] = scale[p], scale[r]
        piv = rows[r][c]
        inv = 1 / piv if tol is None else None
        prow = [x * inv for x in rows[r]] if tol is None else [x / piv for x in rows[r]]
        rows[r] = prow
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in range(c, ncols):
                        pj = prow[j]
                        if pj:
                            row[j] = row[j] - f * pj
                    if tol is not None:
                        row[c] = 0.0
        pivots.append(c)
        r += 1
    return pivots


def _prepare(m: Matrix, tol):
    rows = [[_exact(x) for x in m.row(i)] for i in range(m.rows)]
    if m.is_float():
        rows = [[complex(x) if isinstance(x, complex) else float(x) for x in row] for row in rows]
        if tol is None:
            tol = DEFAULT_RANK_TOL
        colnorm = max(
            (math.sqrt(sum(abs(rows[i][j]) ** 2 for i in range(m.rows))) for j in range(m.cols)),
            default=0.0,
        )
        return rows, tol * (colnorm or 1.0)
    return rows, None


def rref(m: Matrix, tol: float | None = None):
    """Reduced row echelon form and pivot columns."""
    rows, t = _prepare(m, tol)
    piv = _rref(rows, m.cols, t)
    return Matrix.from_rows(rows) if rows else m, piv


# Floating-point rank, kernel and solve go through the SVD: a rank decision is
# then a gap in the singular values rather than a pivot threshold.


def _np(m: Matrix):
    vals = [complex(x) if isinstance(x, complex) else float(x) for x in m.entries]
    dtype = complex if any(isinstance(x, complex) for x in vals) else float
    return np.array(vals, dtype=dtype).reshape(m.rows, m.cols)


def _svd(m: Matrix, tol):
    a = _np(m)
    u, sv, vh = np.linalg.svd(a)
    tol = DEFAULT_RANK_TOL if tol is None else tol
    cut = tol * (sv[0] if sv.size else 0.0)
    r = int(np.sum(sv > cut)) if sv.size and sv[0] > 0 else 0
    return u, sv, vh, r


def rank(m: Matrix, tol: float | None = None) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.is_float():
        return _svd(m, tol)[3]
    rows, t = _prepare(m, tol)
    return len(_rref(rows, m.cols, t))


def kernel_basis(m: Matrix, tol: float | None = None) -> list:
    """Basis of the right kernel; one free column per vector, in column order."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        one = 1.0 if m.is_float() else mpq(1)
        zero = 0.0 if m.is_float() else mpq(0)
        return [[one if i == j else zero for i in range(m.cols)] for j in range(m.cols)]
    if m.is_float():
        _, _, vh, r = _svd(m, tol)
        null = vh[r:].conj()
        return [[x.item() for x in row] for row in null]
    rows, t = _prepare(m, tol)
    piv = _rref(rows, m.cols, t)
    one = 1.0 if t is not None else mpq(1)
    zero = 0.0 if t is not None else mpq(0)
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -rows[r][f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence, tol: float | None = None):
    """One solution x of ``m x = b`` (free variables set to 0), or None.

    In floating point the minimum-norm least-squares solution is returned when
    its residual is below ``tol`` relative to the scale of ``m`` and ``b``.
    """
    if m.is_float() or any(is_float_scalar(x) for x in b):
        a = _np(m)
        rhs = np.array([complex(x) if isinstance(x, complex) else float(x) for x in b])
        x, *_ = np.linalg.lstsq(a, rhs, rcond=None)
        scale = max(np.abs(a).max(initial=0.0), np.abs(rhs).max(initial=0.0), 1.0)
        if np.abs(a @ x - rhs).max(initial=0.0) > (tol or DEFAULT_RANK_TOL) * scale:
            return None
        return [v.item() for v in x]
    aug = m.hstack(Matrix(m.rows, 1, b))
    rows, t = _prepare(aug, tol)
    piv = _rref(rows, aug.cols, t)
    if m.cols in piv:
        return None
    zero = 0.0 if t is not None else mpq(0)
    x = [zero] * m.cols
    for r, c in enumerate(piv):
        x[c] = rows[r][m.cols]
    return x


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise LinalgError("inverse of non-square matrix")
    n = m.rows
    sample = next((x for x in m.entries if x), 1)
    one = sample * 0 + 1 if not isinstance(sample, int) else mpq(1)
    zero = one * 0
    aug = m.hstack(Matrix.identity(n, one, zero))
    rows, t = _prepare(aug, None if not m.is_float() else 1e-14)
    piv = _rref(rows, 2 * n, t)
    if piv[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    return Matrix.from_rows([row[n:] for row in rows])


def det(m: Matrix):
    if m.rows != m.cols:
        raise LinalgError("determinant of non-square matrix")
    rows = [[_exact(x) for x in m.row(i)] for i in range(m.rows)]
    n = m.rows
    d = 1
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return rows[0][0] * 0 if n else 1
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        piv = rows[c][c]
        d = d * piv
        for i in range(c + 1, n):
            f = rows[i][c] / piv
            if f:
                for j in range(c, n):
                    rows[i][j] = rows[i][j] - f * rows[c][j]
    return d


def column_span_basis(vectors: list, tol: float | None = None) -> list:
    """Greedy maximal independent subset, in input order."""
    chosen = []
    for v in vectors:
        trial = chosen + [v]
        if rank(Matrix.from_rows(trial), tol) == len(trial):
            chosen.append(v)
    return chosen


def to_float(m: Matrix) -> Matrix:
    return m.map(float)
