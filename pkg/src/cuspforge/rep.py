"""Representations into G = SL±(4,R), the SL(2,C) lift and cusp normal form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .fpgroup import Presentation, evaluate_word, inverse as word_inverse
from .lie import J
from .linalg import Matrix, LinalgError, det, inverse, solve
from .numfield import FieldElem, NumberField, fe_sign, fe_sqrt, fe_to_float


class ValidationError(ValueError):
    pass


class NormalFormError(ValueError):
    pass


def _is_zero(x, tol=None) -> bool:
    if isinstance(x, (float, complex)):
        return abs(x) <= (tol if tol is not None else 1e-9)
    return not x


def _mat_close(a: Matrix, b: Matrix, tol=None) -> bool:
    return all(_is_zero(x - y, tol) for x, y in zip(a.entries, b.entries))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexPair:
    """``re + i*im`` with both parts in a real field (or plain numbers)."""

    re: object
    im: object

    def __add__(self, o):
        o = _cp(o)
        return ComplexPair(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _cp(o)
        return ComplexPair(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _cp(o) - self

    def __neg__(self):
        return ComplexPair(-self.re, -self.im)

    def __mul__(self, o):
        o = _cp(o)
        return ComplexPair(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return ComplexPair(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = _cp(o)
        n = o.norm2()
        p = self * o.conj()
        return ComplexPair(p.re / n, p.im / n)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        o = _cp(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


def _cp(x) -> ComplexPair:
    if isinstance(x, ComplexPair):
        return x
    return ComplexPair(x, x * 0)


# ---------------------------------------------------------------------------


@dataclass
class Representation:
    """Images of the generators in G, tagged ``SO31`` or ``SL4``."""

    presentation: Presentation
    images: list
    form: str = "SO31"
    field: NumberField | None = None
    _inverses: list | None = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.form not in ("SO31", "SL4"):
            raise ValidationError(f"unknown form tag {self.form!r}")
        if len(self.images) != self.presentation.ngens:
            raise ValidationError("one image per generator is required")

    @property
    def is_float(self) -> bool:
        return any(m.is_float() for m in self.images)

    def one(self):
        if self.is_float:
            return 1.0
        return self.field.one() if self.field is not None else mpq(1)

    def identity(self) -> Matrix:
        one = self.one()
        return Matrix.identity(4, one, one * 0)

    @property
    def inverses(self) -> list:
        if self._inverses is None:
            if self.form == "SO31":
                self._inverses = [J @ g.T @ J for g in self.images]
            else:
                self._inverses = [inverse(g) for g in self.images]
        return self._inverses

    def __call__(self, word: tuple) -> Matrix:
        return evaluate_word(word, self.images, self.inverses, self.identity())

    def inverse_of(self, word: tuple) -> Matrix:
        return self(word_inverse(word))

    def conjugate(self, g: Matrix, g_inv: Matrix | None = None, form: str | None = None):
        if g_inv is None:
            g_inv = inverse(g)
        return Representation(
            self.presentation, [g @ a @ g_inv for a in self.images], form or self.form, self.field
        )

    def to_float(self) -> "Representation":
        return Representation(
            self.presentation, [m.map(fe_to_float) for m in self.images], self.form, None
        )

    def restrict(self, cusp: int = 0):
        """The torus representation of cusp ``cusp``."""
        from .fpgroup import torus_presentation

        p = self.presentation.peripherals[cusp]
        return Representation(
            torus_presentation(), [self(p.meridian), self(p.longitude)], self.form, self.field
        )


@dataclass
class SL2CRep:
    presentation: Presentation
    images: list  # 2x2 nested lists of ComplexPair
    field: NumberField | None = None

    def __call__(self, word):
        one = ComplexPair(self.field.one(), self.field.zero()) if self.field else ComplexPair(1, 0)
        zero = one * 0
        result = [[one, zero], [zero, one]]
        for a in word:
            m = self.images[abs(a) - 1]
            if a < 0:
                m = _sl2_inv(m)
            result = _mm2(result, m)
        return result


def _mm2(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def _sl2_inv(m):
    (a, b), (c, d) = m
    return [[d, -b], [-c, a]]


# ---------------------------------------------------------------------------


def validate(rep, tol: float | None = None) -> None:
    """Check every relator evaluates to the identity and images lie in G.

    SL(2,C) relators may also evaluate to -I (a PSL(2,C) representation).
    """
    if isinstance(rep, SL2CRep):
        for k, r in enumerate(rep.presentation.relators):
            m = rep(r)
            ok = all(
                _is_zero(m[i][j].re - (s if i == j else 0), tol) and _is_zero(m[i][j].im, tol)
                for s in (1,)
                for i in range(2)
                for j in range(2)
            ) or all(
                _is_zero(m[i][j].re - (-1 if i == j else 0), tol) and _is_zero(m[i][j].im, tol)
                for i in range(2)
                for j in range(2)
            )
            if not ok:
                raise ValidationError(f"relator {k} does not evaluate to +-I")
        for k, m in enumerate(rep.images):
            d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if not (_is_zero(d.re - 1, tol) and _is_zero(d.im, tol)):
                raise ValidationError(f"generator {k} has determinant != 1")
        return
    for k, g in enumerate(rep.images):
        if rep.form == "SO31":
            if not _mat_close(g.T @ J @ g, J.map(lambda x: x * rep.one()), tol):
                raise ValidationError(f"generator {k} does not preserve J")
        if not rep.is_float:
            d = det(g)
            if d != 1 and d != -1:
                raise ValidationError(f"generator {k} has determinant {d}, not +-1")
    ident = rep.identity()
    for k, r in enumerate(rep.presentation.relators):
        if not _mat_close(rep(r), ident, tol):
            raise ValidationError(f"relator {k} does not evaluate to I")


# ---------------------------------------------------------------------------
# SL(2,C) -> SO(3,1) through the action on Hermitian matrices.  A Hermitian
# h = [[a, b], [conj b, d]] has coordinates (a, 2 Re b, 2 Im b, 2 d); the form
# -det h then matches x^T J x up to the factor 4.


def _herm_basis(one):
    zero = one * 0
    half = one / 2
    c = lambda r, i=zero: ComplexPair(r, i)
    return [
        [[c(one), c(zero)], [c(zero), c(zero)]],
        [[c(zero), c(half)], [c(half), c(zero)]],
        [[c(zero), c(zero, half)], [c(zero, -half), c(zero)]],
        [[c(zero), c(zero)], [c(zero), c(half)]],
    ]


def _herm_coords(h):
    return [h[0][0].re, h[0][1].re * 2, h[0][1].im * 2, h[1][1].re * 2]


def lift_sl2c_to_so31(a, one=None) -> Matrix:
    """4x4 matrix of ``h -> a h a*`` in the coordinates above.

    ``[[1, w], [0, 1]]`` maps to the parabolic normal form with translation
    ``(Re w, Im w)``.
    """
    if one is None:
        sample = a[0][0].re
        one = sample * 0 + 1
    a_star = [[a[j][i].conj() for j in range(2)] for i in range(2)]
    cols = [_herm_coords(_mm2(_mm2(a, h), a_star)) for h in _herm_basis(one)]
    return Matrix.from_columns(cols)


def lift_representation(rep: SL2CRep) -> Representation:
    one = rep.field.one() if rep.field else mpq(1)
    return Representation(
        rep.presentation, [lift_sl2c_to_so31(m, one) for m in rep.images], "SO31", rep.field
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuspShape:
    u: object
    v: object

    def argument_ok(self) -> bool:
        return cusp_shape_argument_ok(self)

    def to_complex(self) -> complex:
        return complex(float(self.u), float(self.v))


def cusp_shape_argument_ok(shape: CuspShape) -> bool:
    """True iff arg(u + iv) is not a multiple of pi/3, i.e. v(v^2 - 3u^2) != 0."""
    u, v = shape.u, shape.v
    val = v * (v * v - 3 * u * u)
    if isinstance(val, float):
        return abs(val) > 1e-12 * max(1.0, abs(u) ** 3, abs(v) ** 3)
    return fe_sign(val) != 0 if isinstance(val, FieldElem) else val != 0


def parabolic_normal_form(x, y, one=1) -> Matrix:
    """The unipotent matrix with translation (x, y) fixing e1."""
    zero = one * 0
    return Matrix.from_rows(
        [
            [one, x, y, (x * x + y * y) / 2],
            [zero, one, zero, x],
            [zero, zero, one, y],
            [zero, zero, zero, one],
        ]
    )


def _matvec(m: Matrix, v):
    return [sum((m[i, j] * v[j] for j in range(m.cols)), v[0] * 0) for i in range(m.rows)]


def _ratio(a, b, tol):
    """Scalar s with a = s*b, or raise."""
    k = max(range(len(b)), key=lambda i: abs(float(b[i])))
    if _is_zero(b[k], tol):
        raise NormalFormError("degenerate vector")
    s = a[k] / b[k]
    if not all(_is_zero(x - s * y, tol) for x, y in zip(a, b)):
        raise NormalFormError("vectors are not proportional")
    return s


def normalize_peripheral(rep: Representation, cusp: int = 0, tol: float | None = None):
    """Conjugate so that the meridian and longitude of ``cusp`` are in normal form.

    Returns ``(rep', g, shape)`` with ``rep' = g rep g^-1``.  ``g`` is only
    determined up to scale; it is returned unnormalised since the
    determinant-one rescaling generally needs a fourth root.
    """
    p = rep.presentation.peripherals[cusp]
    A, B = rep(p.meridian), rep(p.longitude)
    one = rep.one()
    ident = rep.identity()
    flt = rep.is_float
    if not _mat_close(A @ B, B @ A, tol):
        raise NormalFormError("peripheral images do not commute")

    def unip(M):
        for s in (1, -1):
            X = M * s - ident
            X2 = X @ X
            if all(_is_zero(x, tol) for x in (X2 @ X).entries):
                return X, X2
        raise NormalFormError("peripheral image is not parabolic")

    X, X2 = unip(A)
    Y, _ = unip(B)
    if all(_is_zero(x, tol) for x in X2.entries):
        raise NormalFormError("meridian image is not a rank-one translation")
    k = max(range(4), key=lambda j: max(abs(float(X2[i, j])) for i in range(4)))
    w = [one if i == k else one * 0 for i in range(4)]
    h1 = _matvec(X2, w)
    Xw = _matvec(X, w)
    h2 = [a - b / 2 for a, b in zip(Xw, h1)]
    u = _ratio(_matvec(Y, h2), h1, tol)
    Yw = _matvec(Y, w)
    q = [a - u * b for a, b in zip(Yw, h2)]
    v2 = _ratio(_matvec(Y, q), h1, tol)
    if flt:
        if v2 <= (tol or 1e-12):
            raise NormalFormError("peripheral pair is degenerate")
        v = math.sqrt(v2)
    else:
        if fe_sign(v2) <= 0 if isinstance(v2, FieldElem) else v2 <= 0:
            raise NormalFormError("peripheral pair is degenerate")
        if isinstance(v2, FieldElem):
            v = fe_sqrt(v2)
        else:
            from .numfield import _rational_sqrt

            v = _rational_sqrt(v2)
        if v is None:
            raise NormalFormError("imaginary part of the cusp shape is not in the field")
    c = (u * u + v * v) / 2
    h3 = [(a - c * b) / v for a, b in zip(q, h1)]
    h = Matrix.from_columns([h1, h2, h3, w])
    try:
        g = inverse(h)
    except LinalgError:
        raise NormalFormError("could not build a normalising frame") from None
    if rep.form == "SO31":
        g = _make_conformal(g, one, tol)
    g_inv = inverse(g)
    new = rep.conjugate(g, g_inv)
    N1 = parabolic_normal_form(one, one * 0, one)
    N2 = parabolic_normal_form(u, v, one)
    if not (_mat_close(new(p.meridian), N1, tol) and _mat_close(new(p.longitude), N2, tol)):
        # a -I factor is allowed in SL±(4)
        if not (
            _mat_close(-new(p.meridian), N1, tol) or _mat_close(new(p.meridian), N1, tol)
        ) or not (
            _mat_close(-new(p.longitude), N2, tol) or _mat_close(new(p.longitude), N2, tol)
        ):
            raise NormalFormError("normal form verification failed")
    return new, g, CuspShape(u, v)


def _make_conformal(g: Matrix, one, tol):
    """Adjust g by (I + c E14) so that g^T J g is a multiple of J."""
    K = g.T @ J @ g
    r = g.row(3)
    rows, rhs = [], []
    for i in range(4):
        for j in range(4):
            rows.append([-2 * r[i] * r[j], -(J[i, j] * one)])
            rhs.append(-K[i, j])
    sol = solve(Matrix.from_rows(rows), rhs, tol)
    if sol is None:
        return g
    c = sol[0]
    zero = one * 0
    E = Matrix.from_rows([[one, zero, zero, c], [zero, one, zero, zero], [zero, zero, one, zero], [zero, zero, zero, one]])
    return E @ g
