"""Slice coordinates, cusp-type verdicts and the orientation-reversing symmetry tools.

Slice coordinates are read off with the pairing ``<w, a> = 4 tr(w(gamma) a)``
between a cocycle restricted to a cyclic subgroup <gamma> and a vector of v
fixed by Ad(rho(gamma)).  The pairing only sees cohomology classes.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from gmpy2 import mpq

from .cohomology import (
    Cocycle,
    coboundary_matrix,
    evaluate_cocycle,
    h1,
    is_coboundary,
    is_coboundary_on,
    is_cocycle,
    restrict,
    rigidity_verdict,
)
from .fpgroup import Peripheral, Presentation, free_reduce, power, torus_presentation
from .lie import Module, adjoint, module
from .linalg import Matrix, inverse, is_float_scalar, rank
from .numfield import FieldElem, fe_sign
from .rep import CuspShape, NormalFormError, Representation, normalize_peripheral
from .slice import SlicePoint, _tangent_space_basis, PARAMS, projected_Da_Db, tangent_cocycles

TYPE2 = "type-2 achievable"
TYPE12 = "type-1-or-2 achievable"
NO_CONCLUSION = "no conclusion (remains type 0 to first order)"

SHEARS = (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5)


class PairingError(ValueError):
    pass


class ReframeNeeded(PairingError):
    """The cusp shape has argument in (pi/3)Z, so the pairing matrix is singular."""


def _zero(x) -> bool:
    if is_float_scalar(x):
        return abs(x) < 1e-9
    if isinstance(x, FieldElem):
        return fe_sign(x) == 0
    return x == 0


def _mat_zero(m: Matrix, tol=1e-9) -> bool:
    if m.is_float():
        return m.max_abs() < tol
    return all(_zero(x) for x in m.entries)


def _one_of(x):
    if is_float_scalar(x):
        return 1.0
    if isinstance(x, FieldElem):
        return x.field.one()
    return mpq(1)


# ---------------------------------------------------------------------------
# invariant vectors and the pairing


@dataclass(frozen=True)
class InvariantVector:
    shape: tuple
    matrix: Matrix


def delta_matrix(u, v) -> Matrix:
    n = u * u + v * v
    if _zero(n):
        raise PairingError("delta_{u,v} needs u^2 + v^2 != 0")
    one = _one_of(n)
    z = one * 0
    p = -(u * u - 3 * v * v) / n
    q = -(4 * u * v) / n
    r = (3 * u * u - v * v) / n
    return Matrix.from_rows([[-one, z, z, z], [z, p, q, z], [z, q, r, z], [z, z, z, -one]])


def delta_invariant(shape) -> InvariantVector:
    """delta_{u,v}: in v and fixed by the normal-form translation M0(u, v)."""
    from .lie import sigma
    from .rep import parabolic_normal_form

    u, v = (shape.u, shape.v) if isinstance(shape, CuspShape) else shape
    m = delta_matrix(u, v)
    if not _mat_zero(sigma(m) + m):
        raise PairingError("delta is not in v")
    g = parabolic_normal_form(u, v, _one_of(u * u + v * v))
    if not _mat_zero(adjoint(g, m, inverse(g)) - m):
        raise PairingError("delta is not invariant")
    return InvariantVector((u, v), m)


def duality_pairing(value: Matrix, a, gamma: Matrix | None = None):
    """4 tr(value * a); if ``gamma`` is given, ``a`` must be fixed by Ad(gamma)."""
    am = a.matrix if isinstance(a, InvariantVector) else a
    if gamma is not None and not _mat_zero(adjoint(gamma, am, inverse(gamma)) - am):
        raise PairingError("pairing vector is not invariant under the group element")
    out = (value @ am).trace() * 4
    return mpq(out) if isinstance(out, int) else out


def slice_coord_matrix(shape) -> Matrix:
    """M(u, v) = -16 [[1, 0], [u(u^2-3v^2)/(u^2+v^2), v(v^2-3u^2)/(u^2+v^2)]]."""
    u, v = (shape.u, shape.v) if isinstance(shape, CuspShape) else shape
    n = u * u + v * v
    one = _one_of(n)
    return Matrix.from_rows(
        [[one * -16, one * 0], [u * (u * u - 3 * v * v) / n * -16, v * (v * v - 3 * u * u) / n * -16]]
    )


# ---------------------------------------------------------------------------
# slice basis and slice coordinates


def slice_basis(shape, one=None):
    """(z_gamma1, z_gamma2) on the normal-form torus representation.

    Scaled so that z_gamma1(gamma1) has diagonal (-1, 3, -1, -1).
    """
    u, v = (shape.u, shape.v) if isinstance(shape, CuspShape) else shape
    one = one if one is not None else _one_of(u * u + v * v)
    da, db = projected_Da_Db(SlicePoint.from_shape(u, v, one))
    return da * 4, db * 4


@dataclass
class SliceCoords:
    cusp: int
    c_a: object
    c_b: object
    shape: CuspShape
    d: tuple = ()

    def as_floats(self):
        return float(self.c_a), float(self.c_b)

    def direction(self, tol=1e-9):
        """Unit vector along (c_a, c_b) with first non-negligible entry positive.

        The class is only defined up to scale, so this is what two computations
        (exact versus float, or two basis choices) should agree on.
        """
        a, b = self.as_floats()
        n = math.hypot(a, b)
        if n < tol:
            return 0.0, 0.0
        a, b = a / n, b / n
        a = 0.0 if abs(a) < tol else a
        b = 0.0 if abs(b) < tol else b
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return a + 0.0, b + 0.0


def _normal_frame(rep: Representation, cusp: int, tol=None):
    _, g, shape = normalize_peripheral(rep, cusp, tol)
    return g, inverse(g), shape


def slice_coordinates(z: Cocycle, cusps=None, tol=None) -> list:
    """Slice coordinates (c_a, c_b) of the class of ``z`` in H^1(Gamma, v), per cusp."""
    if z.mod != Module("v"):
        raise PairingError("slice coordinates need a v-valued cocycle")
    rep = z.rep
    pres = rep.presentation
    out = []
    for c in range(len(pres.peripherals)) if cusps is None else cusps:
        g, gi, shape = _normal_frame(rep, c, tol)
        if not shape.argument_ok():
            raise ReframeNeeded(f"cusp {c}: shape argument is a multiple of pi/3; reframe the peripheral pair")
        p = pres.peripherals[c]
        zm = g @ evaluate_cocycle(z, p.meridian) @ gi
        zl = g @ evaluate_cocycle(z, p.longitude) @ gi
        one = _one_of(shape.u)
        d1 = duality_pairing(zm, delta_invariant((one, one * 0)))
        d2 = duality_pairing(zl, delta_invariant(shape))
        c_a, c_b = solve_slice(shape, d1, d2)
        out.append(SliceCoords(c, c_a, c_b, shape, (d1, d2)))
    return out


def solve_slice(shape, d1, d2):
    u, v = shape.u, shape.v
    n = u * u + v * v
    d1, d2 = (mpq(d) if isinstance(d, int) else d for d in (d1, d2))
    c_a = d1 / -16
    det = v * (v * v - 3 * u * u) / n
    if _zero(det):
        raise ReframeNeeded("singular slice coordinate matrix")
    c_b = (d2 / -16 - c_a * u * (u * u - 3 * v * v) / n) / det
    return c_a, c_b


def classify_types(coords) -> list:
    """Per-cusp verdicts from the nonzero pattern of the slice coordinates."""
    out = []
    for sc in coords:
        ca, cb = (sc.c_a, sc.c_b) if isinstance(sc, SliceCoords) else sc
        nz = (not _zero(ca)) + (not _zero(cb))
        out.append(TYPE2 if nz == 2 else TYPE12 if nz == 1 else NO_CONCLUSION)
    return out


# ---------------------------------------------------------------------------
# change of peripheral frame


def _combo(m, l, p, q) -> tuple:
    return free_reduce(power(m, p) + power(l, q))


def reframe_peripheral(pres: Presentation, cusp: int, U) -> Presentation:
    """New pair (m^p l^q, m^r l^s) for U = [[p, q], [r, s]] with det U = +-1."""
    (p, q), (r, s) = U
    if p * s - q * r not in (1, -1):
        raise PairingError("reframing matrix must be unimodular")
    per = list(pres.peripherals)
    old = per[cusp]
    per[cusp] = Peripheral(_combo(old.meridian, old.longitude, p, q), _combo(old.meridian, old.longitude, r, s))
    return Presentation(list(pres.generators), list(pres.relators), per)


def auto_reframe(rep: Representation, cusp: int = 0, tol=None):
    """Smallest shear m^n l (n in 0, 1, -1, ..., 5, -5) whose cusp shape passes the argument test.

    Returns ``(rep', n)``.
    """
    for n in SHEARS:
        pres = reframe_peripheral(rep.presentation, cusp, [[1, 0], [n, 1]])
        cand = Representation(pres, rep.images, rep.form, rep.field)
        _, _, shape = normalize_peripheral(cand, cusp, tol)
        if shape.argument_ok():
            return cand, n
    raise PairingError("no shear with |n| <= 5 gives an admissible cusp shape")


# ---------------------------------------------------------------------------
# orientation-reversing symmetries


@dataclass
class SymmetryData:
    peripheral_matrix: list
    automorphism: dict = field(default_factory=dict)

    def __post_init__(self):
        (a, b), (c, d) = self.peripheral_matrix
        if a * d - b * c != -1:
            raise PairingError("the peripheral matrix of an orientation-reversing symmetry has det -1")
        sq = [[a * a + b * c, a * b + b * d], [c * a + d * c, c * b + d * d]]
        if sq != [[1, 0], [0, 1]]:
            raise PairingError("the peripheral matrix must be an involution")

    @classmethod
    def from_json(cls, data: dict) -> "SymmetryData":
        return cls([list(r) for r in data["peripheral_matrix"]], dict(data.get("automorphism", {})))


def _primitive(v):
    g = gcd(abs(v[0]), abs(v[1]))
    v = [v[0] // g, v[1] // g]
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = [-v[0], -v[1]]
    return tuple(v)


def involution_pm_basis(M):
    """Primitive integer +1 and -1 eigenvectors (gamma_+, gamma_-) of M, as exponent pairs."""
    if isinstance(M, SymmetryData):
        M = M.peripheral_matrix
    SymmetryData([list(r) for r in M])  # validation
    (a, b), (c, d) = M
    out = []
    for sign in (1, -1):
        for e in ((1, 0), (0, 1)):
            w = (a * e[0] + b * e[1] + sign * e[0], c * e[0] + d * e[1] + sign * e[1])
            if w != (0, 0):
                out.append(_primitive(w))
                break
    return out[0], out[1]


def pm_presentation(pres: Presentation, cusp: int, M) -> Presentation:
    """Peripheral pair replaced by (gamma_-, gamma_+), so the meridian slot holds gamma_-."""
    gp, gm = involution_pm_basis(M)
    per = list(pres.peripherals)
    old = per[cusp]
    per[cusp] = Peripheral(
        _combo(old.meridian, old.longitude, *gm), _combo(old.meridian, old.longitude, *gp)
    )
    return Presentation(list(pres.generators), list(pres.relators), per)


def a_plus(one=None) -> Matrix:
    one = one if one is not None else mpq(1)
    return _diag([-one, -one, one * 3, -one])


def a_minus(one=None) -> Matrix:
    one = one if one is not None else mpq(1)
    return _diag([-one, one * 3, -one, -one])


def _diag(d) -> Matrix:
    z = d[0] * 0
    return Matrix.from_rows([[d[i] if i == j else z for j in range(4)] for i in range(4)])


def z_pm_cocycles(trep: Representation, shape: CuspShape):
    """(z_+, z_-) on the torus rep with generators (gamma_-, gamma_+) in normal form.

    z_+(gamma_-) = 0, z_+(gamma_+) = a_+;  z_-(gamma_-) = a_-, z_-(gamma_+) = 0.
    """
    if not _zero(shape.u):
        raise PairingError("z_+- need a purely imaginary cusp shape")
    one = trep.one()
    v = Module("v")
    zero = [one * 0] * v.dim
    zp = Cocycle(trep, v, [zero, v.coords(a_plus(one))])
    zm = Cocycle(trep, v, [v.coords(a_minus(one)), zero])
    pres = torus_presentation()
    if not (is_cocycle(pres, zp) and is_cocycle(pres, zm)):
        raise PairingError("z_+- fail the cocycle condition; is the representation in normal form?")
    return zp, zm


def default_intertwiner(x=0, y=0, one=None) -> Matrix:
    """A_phi = M0(x, y) diag(1, -1, 1, 1)."""
    from .rep import parabolic_normal_form

    one = one if one is not None else mpq(1)
    return parabolic_normal_form(x * one, y * one, one) @ _diag([one, -one, one, one])


@dataclass
class EigenCheck:
    plus_ok: bool
    minus_ok: bool
    plus_witness: list | None
    minus_witness: list | None
    plus_difference: Matrix
    minus_difference: Matrix

    @property
    def ok(self) -> bool:
        return self.plus_ok and self.minus_ok


# phi_* on the torus generated by (gamma_-, gamma_+)
_PHI_WORDS = ((-1,), (2,))


def pullback(z: Cocycle, A: Matrix, A_inv: Matrix | None = None) -> Cocycle:
    """phi^*(z)(gamma) = Ad(A^-1) z(phi_* gamma)."""
    A_inv = A_inv if A_inv is not None else inverse(A)
    vals = [z.mod.coords(A_inv @ evaluate_cocycle(z, w) @ A) for w in _PHI_WORDS]
    return Cocycle(z.rep, z.mod, vals)


def phi_eigen_check(zp: Cocycle, zm: Cocycle, A: Matrix, tol=None) -> EigenCheck:
    """Check that phi^* z_+ - z_+ and phi^* z_- + z_- are coboundaries."""
    rep = zp.rep
    A_inv = inverse(A)
    for j, w in enumerate(_PHI_WORDS):
        lhs = rep(w)
        rhs = A @ rep.images[j] @ A_inv
        if not (_mat_zero(lhs - rhs) or _mat_zero(lhs + rhs)):
            raise PairingError("A_phi does not intertwine rho and rho o phi_*")
    dp = pullback(zp, A, A_inv) - zp
    dm = pullback(zm, A, A_inv) + zm
    okp, wp = is_coboundary(dp, tol)
    okm, wm = is_coboundary(dm, tol)
    return EigenCheck(okp, okm, wp, wm, dp.value_matrix(1), dm.value_matrix(0))


def type1_criterion(rep: Representation, z: Cocycle, gamma_plus: tuple, tol=None) -> bool:
    """True iff z restricted to <gamma_+> is not a coboundary."""
    value = z.mod.coords(evaluate_cocycle(z, gamma_plus))
    ok, _ = is_coboundary_on(rep, z.mod, gamma_plus, value, tol)
    return not ok


def generic_class(h1_basis: list, rep: Representation, mod="v", tol=None, bound: int = 3) -> Cocycle:
    """A combination of the basis whose restriction to every cusp is nontrivial."""
    mod = module(mod)
    k = len(h1_basis)
    if k == 0:
        raise PairingError("empty cohomology basis")
    cusps = range(len(rep.presentation.peripherals))
    cands = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    rng = range(-bound, bound + 1)
    cands += sorted(
        (c for c in product(rng, repeat=k) if any(c)),
        key=lambda c: (max(abs(x) for x in c), sum(abs(x) for x in c), [-x for x in c]),
    )
    one = rep.one()
    for coefs in cands:
        vec = [sum((vb[i] * (one * c) for vb, c in zip(h1_basis, coefs)), one * 0) for i in range(len(h1_basis[0]))]
        z = Cocycle.from_vector(rep, mod, vec)
        if all(not is_coboundary(restrict(z, c), tol)[0] for c in cusps):
            return z
    raise PairingError("no combination is nontrivial on every cusp; the input data is suspect")


# ---------------------------------------------------------------------------
# the transversality decomposition


@dataclass
class TranslemmaReport:
    cusps: int
    dim_v_sigma: int
    dim_res: int
    dim_intersection: int
    dim_span: int
    skipped: str = ""

    @property
    def ok(self) -> bool:
        k = self.cusps
        return not self.skipped and (self.dim_v_sigma, self.dim_res, self.dim_intersection, self.dim_span) == (
            4 * k,
            2 * k,
            0,
            6 * k,
        )


def translemma_check(rep: Representation, tol=None) -> TranslemmaReport:
    """Compare V_Sigma (slice tangents) with res_* H^1(Gamma, so(3,1)) inside H^1(Delta, g)."""
    pres = rep.presentation
    k = len(pres.peripherals)
    verdict = rigidity_verdict(pres, rep, tol)
    if not verdict.rigid:
        return TranslemmaReport(k, 0, 0, 0, 0, skipped="representation is not infinitesimally rigid rel cusps")
    g_mod = Module("g")
    width = 2 * g_mod.dim
    one = rep.one()
    zero = one * 0
    so = h1(pres, rep, "so31", tol)
    so_cocycles = [Cocycle.from_vector(rep, "so31", vec) for vec in so.h1]
    cob_rows, v_rows, r_rows = [], [], [[] for _ in so_cocycles]
    for c in range(k):
        try:
            g, gi, shape = _normal_frame(rep, c, tol)
        except NormalFormError as exc:
            return TranslemmaReport(k, 0, 0, 0, 0, skipped=f"cusp {c}: {exc}")
        s = SlicePoint.from_shape(shape.u, shape.v, one)
        tc = tangent_cocycles(s, g_mod)
        trep = tc["a"].rep
        cm = coboundary_matrix(trep, g_mod)
        pad = lambda vec: [zero] * (c * width) + list(vec) + [zero] * ((k - c - 1) * width)
        cob_rows += [pad(cm.col(i)) for i in range(cm.cols)]
        for w in _tangent_space_basis(s):
            vec = [zero] * width
            for coef, p in zip(w, PARAMS):
                if coef:
                    vec = [a + b * coef for a, b in zip(vec, tc[p].vector())]
            v_rows.append(pad(vec))
        p = pres.peripherals[c]
        for row, z in zip(r_rows, so_cocycles):
            vals = [g_mod.coords(g @ evaluate_cocycle(z, w) @ gi) for w in (p.meridian, p.longitude)]
            row.extend(vals[0] + vals[1])
    rk = lambda rows: rank(Matrix.from_rows(rows), tol) if rows else 0
    base = rk(cob_rows)
    dv = rk(cob_rows + v_rows) - base
    dr = rk(cob_rows + r_rows) - base
    span = rk(cob_rows + v_rows + r_rows) - base
    return TranslemmaReport(k, dv, dr, dv + dr - span, span)
