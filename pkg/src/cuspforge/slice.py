"""The slice of peripheral representations and the generalized cusp groups.

A slice point ``s = (a, b, x1, y1, x2, y2)`` gives the representation of
Z^2 sending gamma_i to ``|det|^(-1/4) exp(N_{a,b}(x_i, y_i))`` with

    N_{a,b}(x, y) = [[0, x, y, 0], [0, a x, 0, x], [0, 0, b y, y], [0, 0, 0, 0]].

At ``a = b = 0`` the matrix N is nilpotent (N^3 = 0), so everything there is
polynomial and can be computed exactly.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .cohomology import Cocycle, coboundary_matrix
from .fpgroup import torus_presentation
from .lie import Module, module
from .linalg import Matrix, is_float_scalar, kernel_basis, rank, solve
from .numfield import FieldElem, fe_sign

DET_TOL = 1e-9


class SliceError(ValueError):
    pass


def _is_zero(x) -> bool:
    if isinstance(x, (float, complex)):
        return abs(x) < 1e-300
    if isinstance(x, FieldElem):
        return fe_sign(x) == 0
    return x == 0


@dataclass(frozen=True)
class SlicePoint:
    """A point of the slice.

    The determinant ``y1 x2 - x1 y2`` must be +-1.  With ``scaled=True`` any
    nonzero determinant is accepted: rescaling (x_i, y_i) by r is conjugation
    by diag(1, r, r, r^2) when a = b = 0, so such points describe the same
    conjugacy classes as honest slice points.
    """

    a: object
    b: object
    x1: object
    y1: object
    x2: object
    y2: object
    scaled: bool = False

    def __post_init__(self):
        d = self.det()
        if is_float_scalar(d):
            ok = abs(d) > DET_TOL if self.scaled else abs(abs(d) - 1) < DET_TOL
        elif self.scaled:
            ok = not _is_zero(d)
        else:
            ok = d == 1 or d == -1
        if not ok:
            raise SliceError(f"slice point determinant y1*x2 - x1*y2 = {d} is not admissible")

    def det(self):
        return self.y1 * self.x2 - self.x1 * self.y2

    def coords(self) -> tuple:
        return (self.a, self.b, self.x1, self.y1, self.x2, self.y2)

    def is_float(self) -> bool:
        return any(is_float_scalar(c) for c in self.coords())

    def on_cusp_locus(self) -> bool:
        return _is_zero(self.a) and _is_zero(self.b)

    def one(self):
        if self.is_float():
            return 1.0
        for c in self.coords():
            if isinstance(c, FieldElem):
                return c.field.one()
        return mpq(1)

    @classmethod
    def from_shape(cls, u, v, one=None) -> "SlicePoint":
        """The point (0, 0, 1, 0, u, v) matching the normal form M0(1,0), M0(u,v)."""
        one = one if one is not None else (1.0 if is_float_scalar(u) else mpq(1))
        zero = one * 0
        return cls(zero, zero, one, zero, u + zero, v + zero, scaled=True)


def generator_matrix(a, b, x, y, one=1) -> Matrix:
    """The Lie algebra element N_{a,b}(x, y)."""
    z = one * 0
    return Matrix.from_rows(
        [[z, x, y, z], [z, a * x, z, x], [z, z, b * y, y], [z, z, z, z]]
    )


def _phi1(p):
    # (e^p - 1)/p and (e^p - 1 - p)/p^2, series near 0; p may be complex
    if abs(p) < 1e-4:
        return 1 + p / 2 + p * p / 6 + p**3 / 24, 0.5 + p / 6 + p * p / 24 + p**3 / 120
    e = cmath.exp(p) if isinstance(p, complex) else math.exp(p)
    return (e - 1) / p, (e - 1 - p) / (p * p)


def exp_slice(a, b, x, y) -> Matrix:
    """Closed-form ``|det|^(-1/4) exp(N_{a,b}(x, y))`` in floating point."""
    p, q = a * x, b * y
    f1p, f2p = _phi1(p)
    f1q, f2q = _phi1(q)
    ep = cmath.exp(p) if isinstance(p, complex) else math.exp(p)
    eq = cmath.exp(q) if isinstance(q, complex) else math.exp(q)
    corner = x * x * f2p + y * y * f2q
    m = Matrix.from_rows(
        [
            [1.0, x * f1p, y * f1q, corner],
            [0.0, ep, 0.0, x * f1p],
            [0.0, 0.0, eq, y * f1q],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    scale = cmath.exp(-(p + q) / 4) if isinstance(p + q, complex) else math.exp(-(p + q) / 4)
    return m * scale


def _unipotent(x, y, one) -> Matrix:
    n = generator_matrix(one * 0, one * 0, x, y, one)
    return Matrix.identity(4, one, one * 0) + n + (n @ n) / 2


def slice_rep(s: SlicePoint, mode: str = "float"):
    """The representation of Z^2 attached to ``s``."""
    from .rep import Representation

    if mode == "exact":
        if not s.on_cusp_locus():
            raise SliceError("exact mode needs a = b = 0")
        one = s.one()
        imgs = [_unipotent(s.x1, s.y1, one), _unipotent(s.x2, s.y2, one)]
    elif mode == "float":
        a, b = float(s.a), float(s.b)
        imgs = [exp_slice(a, b, float(s.x1), float(s.y1)), exp_slice(a, b, float(s.x2), float(s.y2))]
    else:
        raise SliceError(f"unknown mode {mode!r}")
    return Representation(torus_presentation(), imgs, "SL4", None)


def cs(s: SlicePoint):
    """(x1 + i y1)/(x2 + i y2) as a (real, imaginary) pair."""
    if not s.on_cusp_locus():
        raise SliceError("the cusp-shape map is defined on a = b = 0")
    n = s.x2 * s.x2 + s.y2 * s.y2
    return (s.x1 * s.x2 + s.y1 * s.y2) / n, s.det() / n


# ---------------------------------------------------------------------------
# tangent cocycles at a = b = 0

PARAMS = ("a", "b", "x1", "y1", "x2", "y2")


def _dexp_nilpotent(n: Matrix, dn: Matrix, one) -> Matrix:
    """Derivative of exp at n in direction dn, for n with n^3 = 0."""
    ident = Matrix.identity(4, one, one * 0)
    powers = [ident, n, n @ n]
    total = Matrix.zeros(4, 4, one * 0)
    for k in range(1, 6):
        acc = Matrix.zeros(4, 4, one * 0)
        for j in range(k):
            left, right = j, k - 1 - j
            if left < 3 and right < 3:
                acc = acc + powers[left] @ dn @ powers[right]
        total = total + acc / factorial(k)
    return total


def _tangent_value(s: SlicePoint, which: int, param: str, one) -> Matrix:
    x, y = (s.x1, s.y1) if which == 0 else (s.x2, s.y2)
    zero = one * 0
    n = generator_matrix(zero, zero, x, y, one)
    rho = Matrix.identity(4, one, zero) + n + (n @ n) / 2
    own_x, own_y = ("x1", "y1") if which == 0 else ("x2", "y2")
    if param == "a":
        dn, dtr = generator_matrix(one, zero, x, zero, one) - generator_matrix(zero, zero, x, zero, one), x
    elif param == "b":
        dn, dtr = generator_matrix(zero, one, zero, y, one) - generator_matrix(zero, zero, zero, y, one), y
    elif param == own_x:
        dn, dtr = generator_matrix(zero, zero, one, zero, one), zero
    elif param == own_y:
        dn, dtr = generator_matrix(zero, zero, zero, one, one), zero
    else:
        return Matrix.zeros(4, 4, zero)
    d = _dexp_nilpotent(n, dn, one) - rho * (dtr / 4)
    # z = (d rho) rho^-1; rho^-1 = exp(-n)
    rho_inv = Matrix.identity(4, one, zero) - n + (n @ n) / 2
    return d @ rho_inv


def tangent_cocycles(s: SlicePoint, mod="g") -> dict:
    """The six coordinate tangent vectors of the slice at ``s`` as cocycles on Z^2."""
    if not s.on_cusp_locus():
        raise SliceError("tangent cocycles are computed on a = b = 0")
    mod = module(mod)
    rep = _float_unipotent_rep(s) if s.is_float() else slice_rep(s, "exact")
    one = s.one()
    out = {}
    for p in PARAMS:
        vals = [mod.coords(_tangent_value(s, w, p, one)) for w in (0, 1)]
        out[p] = Cocycle(rep, mod, vals)
    return out


def _float_unipotent_rep(s: SlicePoint):
    from .rep import Representation

    one = 1.0
    imgs = [_unipotent(float(s.x1), float(s.y1), one), _unipotent(float(s.x2), float(s.y2), one)]
    return Representation(torus_presentation(), imgs, "SL4", None)


def tangent_matrix(s: SlicePoint, param: str, which: int) -> Matrix:
    """The value on gamma_{which+1} of the tangent cocycle for ``param``, as a matrix."""
    return _tangent_value(s, which, param, s.one())


def projected_Da_Db(s: SlicePoint):
    """(D_a, D_b) in Z^1(Z^2, v).

    D_a is the v-part of the a tangent cocycle with its (1,4) corner terms
    removed by a coboundary; its diagonal is x_i (-1, 3, -1, -1)/4.  The
    off-diagonal terms x_i^2/2 (E12 - E24) that remain are needed for the
    cocycle condition and pair trivially with diagonal invariant vectors.
    """
    tc = tangent_cocycles(s, "v")
    v = Module("v")
    rep = tc["a"].rep
    cob = coboundary_matrix(rep, v)
    out = []
    for p in ("a", "b"):
        z = tc[p]
        corners = []
        for j in range(2):
            m = z.value_matrix(j)
            zero = m[0, 0] * 0
            corners.extend(v.coords(Matrix(4, 4, (m[0, 3] if k == 3 else zero for k in range(16)))))
        a = solve(cob, corners)
        if a is None:
            raise SliceError("corner terms are not a coboundary")
        out.append(z - Cocycle.from_vector(rep, v, [sum((cob[i, k] * a[k] for k in range(cob.cols)), zero) for i in range(cob.rows)]))
    return tuple(out)


def _tangent_space_basis(s: SlicePoint) -> list:
    """Basis of ker(grad h), h = y1 x2 - x1 y2, in (a, b, x1, y1, x2, y2) coordinates."""
    grad = Matrix.from_rows([[s.one() * 0, s.one() * 0, -s.y2, s.x2, s.y1, -s.x1]])
    return kernel_basis(grad)


def tangent_image_dim(s: SlicePoint, tol=None) -> int:
    """Dimension of the image of T_s S in H^1(Z^2, g)."""
    tc = tangent_cocycles(s, "g")
    rep = tc["a"].rep
    cob = coboundary_matrix(rep, "g")
    cob_rows = [cob.col(k) for k in range(cob.cols)]
    imgs = []
    for w in _tangent_space_basis(s):
        vec = None
        for coef, p in zip(w, PARAMS):
            if coef:
                term = [c * coef for c in tc[p].vector()]
                vec = term if vec is None else [x + y for x, y in zip(vec, term)]
        if vec is not None:
            imgs.append(vec)
    base = rank(Matrix.from_rows(cob_rows), tol)
    return rank(Matrix.from_rows(cob_rows + imgs), tol) - base


def da_db_independent(s: SlicePoint, tol=None) -> bool:
    """Are [D_a], [D_b] independent in H^1(Z^2, v)?"""
    da, db = projected_Da_Db(s)
    cob = coboundary_matrix(da.rep, "v")
    rows = [cob.col(k) for k in range(cob.cols)]
    base = rank(Matrix.from_rows(rows), tol)
    return rank(Matrix.from_rows(rows + [da.vector(), db.vector()]), tol) - base == 2


# ---------------------------------------------------------------------------
# generalized cusp groups


class CuspKind(enum.Enum):
    TYPE0 = 0
    TYPE1 = 1
    TYPE2 = 2


@dataclass(frozen=True)
class CuspType:
    kind: CuspKind
    params: tuple = ()
    nonconvex: bool = False  # type 2 with lambda1 * lambda2 < 0

    def __str__(self):
        text = f"type {self.kind.value}"
        if self.params:
            text += " (" + ", ".join(f"{float(p):.6g}" for p in self.params) + ")"
        if self.nonconvex:
            text += " [lambda1*lambda2 < 0: horospheres not strictly convex]"
        return text


def _kind(t) -> CuspKind:
    if isinstance(t, CuspType):
        return t.kind
    if isinstance(t, CuspKind):
        return t
    return CuspKind(int(t))


def cusp_group_element(t, x, y, z) -> Matrix:
    """M_k(x, y, z) in closed form."""
    k = _kind(t)
    if k is CuspKind.TYPE0:
        return Matrix.from_rows(
            [[1.0, x, y, z + (x * x + y * y) / 2], [0.0, 1.0, 0.0, x], [0.0, 0.0, 1.0, y], [0.0, 0.0, 0.0, 1.0]]
        )
    if k is CuspKind.TYPE1:
        return Matrix.from_rows(
            [[math.exp(x), 0.0, 0.0, 0.0], [0.0, 1.0, y, z + y * y / 2], [0.0, 0.0, 1.0, y], [0.0, 0.0, 0.0, 1.0]]
        )
    return Matrix.from_rows(
        [[math.exp(x), 0.0, 0.0, 0.0], [0.0, math.exp(y), 0.0, 0.0], [0.0, 0.0, 1.0, z], [0.0, 0.0, 0.0, 1.0]]
    )


def _perm(perm) -> Matrix:
    # sends e_i to e_perm[i]
    return Matrix(4, 4, (1.0 if perm[j] == i else 0.0 for i in range(4) for j in range(4)))


def conjugator(t, a, b=0.0) -> Matrix:
    """C~_a (type 1) or D~_{a,b} (type 2), conjugating A_{a,b} into T(a) or T(a,b)."""
    k = _kind(t)
    if k is CuspKind.TYPE1:
        if a == 0:
            raise SliceError("type 1 conjugator needs a != 0")
        c = Matrix.from_rows(
            [[1.0, -1 / a, 0.0, 0.0], [0.0, a, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]
        )
        return _perm((1, 0, 2, 3)) @ c
    if k is CuspKind.TYPE2:
        if a == 0 or b == 0:
            raise SliceError("type 2 conjugator needs a != 0 and b != 0")
        d = Matrix.from_rows(
            [[1.0, -1 / a, -1 / b, 0.0], [0.0, a, 0.0, 1.0], [0.0, 0.0, b, 1.0], [0.0, 0.0, 0.0, 1.0]]
        )
        return _perm((2, 0, 1, 3)) @ d
    raise SliceError("type 0 slice groups are already in normal form")


def unnormalized_exp(a, b, x, y) -> Matrix:
    """exp(N_{a,b}(x, y)) without the determinant normalisation."""
    return exp_slice(a, b, x, y) * math.exp((a * x + b * y) / 4)


def model_group_element(t, params, x, y) -> Matrix:
    """The element of T(0), T(lambda) or T(lambda1, lambda2) matching N(x, y)."""
    k = _kind(t)
    if k is CuspKind.TYPE0:
        return cusp_group_element(k, x, y, 0.0)
    if k is CuspKind.TYPE1:
        (lam,) = params
        return cusp_group_element(k, lam * x, y, -x / lam)
    l1, l2 = params
    return cusp_group_element(k, l1 * x, l2 * y, -x / l1 - y / l2)


def classify_slice_point(s: SlicePoint) -> CuspType:
    a0, b0 = _is_zero(s.a), _is_zero(s.b)
    if a0 and b0:
        return CuspType(CuspKind.TYPE0)
    if a0 or b0:
        return CuspType(CuspKind.TYPE1, (s.b if a0 else s.a,))
    flag = float(s.a) * float(s.b) < 0
    if flag:
        warnings.warn("type 2 slice point with a*b < 0: the horospheres are not strictly convex", stacklevel=2)
    return CuspType(CuspKind.TYPE2, (s.a, s.b), nonconvex=flag)


def _affine(point):
    if len(point) != 4 or point[3] != 1:
        raise SliceError("expected an affine point [a:b:c:1]")
    return float(point[0]), float(point[1]), float(point[2])


def horosphere_value(t, params, point) -> float:
    """The foliation parameter s of the leaf through ``point``."""
    a, b, c = _affine(point)
    k = _kind(t)
    if k is CuspKind.TYPE0:
        return a - (b * b + c * c) / 2
    if k is CuspKind.TYPE1:
        (lam,) = params
        if a <= 0:
            raise SliceError("type 1 leaves need a > 0")
        return b - c * c / 2 + math.log(a) / lam**2
    l1, l2 = params
    if a <= 0 or b <= 0:
        raise SliceError("type 2 leaves need a, b > 0")
    return c + math.log(a) / l1**2 + math.log(b) / l2**2


def omega_contains(t, params, point) -> bool:
    a, b, _ = _affine(point)
    k = _kind(t)
    if k is CuspKind.TYPE1 and a <= 0:
        return False
    if k is CuspKind.TYPE2 and (a <= 0 or b <= 0):
        return False
    return horosphere_value(t, params, point) > 0


def act(g: Matrix, point) -> list:
    """g applied to an affine point, renormalised to last coordinate 1."""
    v = [sum(g[i, j] * float(point[j]) for j in range(4)) for i in range(4)]
    return [x / v[3] for x in v]


def sample_leaf(t, params, s_value: float, coords) -> list:
    """Points [a:b:c:1] on the leaf with parameter ``s_value`` over the given free coordinates."""
    k = _kind(t)
    out = []
    for p, q in coords:
        if k is CuspKind.TYPE0:
            out.append([s_value + (p * p + q * q) / 2, p, q, 1.0])
        elif k is CuspKind.TYPE1:
            (lam,) = params
            out.append([p, q * q / 2 - math.log(p) / lam**2 + s_value, q, 1.0])
        else:
            l1, l2 = params
            out.append([p, q, s_value - math.log(p) / l1**2 - math.log(q) / l2**2, 1.0])
    return out

