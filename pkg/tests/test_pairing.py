import math
import random

import numpy as np
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from cuspforge.cohomology import Cocycle, coboundary, evaluate_cocycle, is_cocycle
from cuspforge.fpgroup import Peripheral, Presentation, parse_word, torus_presentation
from cuspforge.lie import Module, sigma
from cuspforge.linalg import Matrix, det, inverse
from cuspforge.numfield import NumberField
from cuspforge.pairing import (
    NO_CONCLUSION,
    TYPE12,
    TYPE2,
    PairingError,
    ReframeNeeded,
    SymmetryData,
    a_minus,
    a_plus,
    auto_reframe,
    classify_types,
    default_intertwiner,
    delta_invariant,
    delta_matrix,
    duality_pairing,
    generic_class,
    involution_pm_basis,
    phi_eigen_check,
    reframe_peripheral,
    slice_basis,
    slice_coord_matrix,
    slice_coordinates,
    type1_criterion,
    z_pm_cocycles,
)
from cuspforge.rep import CuspShape, Representation, normalize_peripheral, parabolic_normal_form
from cuspforge.slice import SlicePoint, classify_slice_point, CuspKind, unnormalized_exp

Q = mpq
rat = st.fractions(min_value=-4, max_value=4, max_denominator=5).map(lambda f: Q(f.numerator, f.denominator))
nonzero = rat.filter(lambda q: q != 0)


def diag(*d):
    return Matrix(4, 4, (Q(d[i]) if i == j else Q(0) for i in range(4) for j in range(4)))


def torus(u, v):
    one = Q(1) if not hasattr(u, "field") else u.field.one()
    return Representation(
        torus_presentation(), [parabolic_normal_form(one, one * 0, one), parabolic_normal_form(u, v, one)], "SO31", None
    )


# -- invariant vectors and the pairing ----------------------------------------


def test_delta_examples():
    assert delta_matrix(Q(1), Q(0)) == diag(-1, -1, 3, -1)
    assert delta_matrix(Q(0), Q(1)) == diag(-1, 3, -1, -1)
    with pytest.raises(PairingError):
        delta_matrix(Q(0), Q(0))


@given(rat, nonzero)
def test_delta_invariance(u, v):
    d = delta_invariant((u, v)).matrix
    g = parabolic_normal_form(u, v)
    assert g @ d @ inverse(g) == d
    assert sigma(d) == -d and d.trace() == 0
    m = parabolic_normal_form(Q(1), Q(0))
    d10 = delta_invariant((Q(1), Q(0))).matrix
    assert m @ d10 @ inverse(m) == d10


def test_pairing_examples():
    za, zb = slice_basis((Q(0), Q(1)))
    v0 = za.value_matrix(0)
    assert [v0[i, i] for i in range(4)] == [-1, 3, -1, -1]
    d10 = delta_invariant((Q(1), Q(0)))
    assert duality_pairing(za.value_matrix(0), d10) == -16
    assert duality_pairing(zb.value_matrix(0), d10) == 0
    with pytest.raises(PairingError):
        duality_pairing(za.value_matrix(0), diag(-1, 3, -1, -1), parabolic_normal_form(Q(1), Q(0)))


def test_coord_matrix_examples():
    assert slice_coord_matrix((Q(1), Q(0))) == Matrix.from_rows([[-16, 0], [-16, 0]])
    assert slice_coord_matrix((Q(0), Q(1))) == Matrix.from_rows([[-16, 0], [0, -16]])


def test_coord_matrix_determinant_symbolic():
    u, v = sympy.symbols("u v", real=True)
    n = u**2 + v**2
    m = -16 * sympy.Matrix([[1, 0], [u * (u**2 - 3 * v**2) / n, v * (v**2 - 3 * u**2) / n]])
    assert sympy.simplify(m.det() - 256 * v * (v**2 - 3 * u**2) / n) == 0


@given(rat, nonzero)
def test_coord_matrix_determinant(u, v):
    m = slice_coord_matrix((u, v))
    assert det(m) == 256 * v * (v * v - 3 * u * u) / (u * u + v * v)
    assert (det(m) == 0) == (not CuspShape(u, v).argument_ok())


@given(rat, nonzero, rat, rat, st.lists(rat, min_size=9, max_size=9))
def test_pairing_coboundary_insensitive(u, v, ca, cb, a):
    rep = torus(u, v)
    za, zb = slice_basis((u, v))
    z = za * ca + zb * cb
    zc = z + coboundary(rep, "v", a)
    for j, delta in ((0, delta_invariant((Q(1), Q(0)))), (1, delta_invariant((u, v)))):
        assert duality_pairing(zc.value_matrix(j), delta) == duality_pairing(z.value_matrix(j), delta)
        assert duality_pairing(coboundary(rep, "v", a).value_matrix(j), delta) == 0


@given(rat, nonzero.map(abs), rat, rat, st.lists(rat, min_size=9, max_size=9))
def test_slice_coordinate_round_trip(u, v, ca, cb, a):
    shape = CuspShape(u, v)
    if not shape.argument_ok():
        return
    rep = torus(u, v)
    za, zb = slice_basis((u, v))
    z = Cocycle(rep, Module("v"), (za * ca + zb * cb + coboundary(rep, "v", a)).values)
    (sc,) = slice_coordinates(z)
    assert (sc.c_a, sc.c_b) == (ca, cb)
    (scaled,) = slice_coordinates(z * 3)
    assert (scaled.c_a, scaled.c_b) == (3 * ca, 3 * cb)
    assert classify_types([scaled]) == classify_types([sc])


def test_slice_coordinates_of_coboundary(knot52):
    a = [knot52.field(Q(k)) for k in range(9)]
    (sc,) = slice_coordinates(coboundary(knot52.rep, "v", a))
    assert sc.c_a.is_zero() and sc.c_b.is_zero()


def test_slice_coordinates_need_v():
    rep = torus(Q(0), Q(1))
    with pytest.raises(PairingError):
        slice_coordinates(Cocycle(rep, Module("so31"), [[Q(0)] * 6] * 2))


def test_classify_types_examples():
    assert classify_types([(Q(1), Q(1))]) == [TYPE2]
    assert classify_types([(Q(1), Q(0))]) == [TYPE12]
    assert classify_types([(Q(0), Q(-2))]) == [TYPE12]
    assert classify_types([(Q(0), Q(0))]) == [NO_CONCLUSION]


# -- reframing ----------------------------------------------------------------


def test_reframe_examples():
    pres = torus_presentation()
    assert reframe_peripheral(pres, 0, [[1, 0], [0, 1]]) == pres
    new = reframe_peripheral(pres, 0, [[1, 0], [2, 1]])
    assert new.peripherals[0] == Peripheral((1,), (1, 1, 2))
    with pytest.raises(PairingError):
        reframe_peripheral(pres, 0, [[1, 2], [2, 4]])


def test_reframe_pi_over_three():
    F = NumberField([-3, 0, 1], ["1", "2"])
    rep = torus(F.one(), F.gen())
    assert not normalize_peripheral(rep)[2].argument_ok()
    z = Cocycle(rep, Module("v"), [[F.zero()] * 9] * 2)
    with pytest.raises(ReframeNeeded):
        slice_coordinates(z)
    new, n = auto_reframe(rep)
    assert n == 1
    _, _, shape = normalize_peripheral(new)
    assert shape.argument_ok() and (shape.u, shape.v) == (F(2), F.gen())


# -- symmetry machinery -----------------------------------------------------------


def test_involution_examples():
    assert involution_pm_basis([[1, 0], [0, -1]]) == ((1, 0), (0, 1))
    assert involution_pm_basis([[0, 1], [1, 0]]) == ((1, 1), (1, -1))
    with pytest.raises(PairingError):
        involution_pm_basis([[1, 0], [0, 1]])
    with pytest.raises(PairingError):
        SymmetryData([[1, 1], [0, -1]]) and SymmetryData([[2, 1], [1, 0]])


def test_z_pm_cocycles():
    c = Q(3)
    rep = torus(Q(0), c)
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), c))
    assert zp.value_matrix(0).is_zero() and zm.value_matrix(1).is_zero()
    assert zp.value_matrix(1) == a_plus() == diag(-1, -1, 3, -1)
    assert zm.value_matrix(0) == a_minus()
    assert is_cocycle(torus_presentation(), zp) and is_cocycle(torus_presentation(), zm)
    with pytest.raises(PairingError):
        z_pm_cocycles(torus(Q(1), c), CuspShape(Q(1), c))


def test_eigen_check_trivial_intertwiner():
    c = Q(2)
    rep = torus(Q(0), c)
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), c))
    chk = phi_eigen_check(zp, zm, default_intertwiner(0, 0))
    assert chk.ok
    assert chk.plus_difference.is_zero()


@given(rat, rat, nonzero.map(abs))
def test_eigen_check_patterns(x, y, c):
    rep = torus(Q(0), c)
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), c))
    chk = phi_eigen_check(zp, zm, default_intertwiner(x, y))
    assert chk.ok and chk.plus_witness is not None and chk.minus_witness is not None
    e = lambda i, j: Matrix(4, 4, (Q(int(k == 4 * i + j)) for k in range(16)))  # noqa: E731
    assert chk.plus_difference == e(0, 2) * (-4 * y) + e(0, 3) * (-4 * y * y) + e(2, 3) * (4 * y)
    t = 1 + x
    assert chk.minus_difference == e(0, 1) * (-4 * t) + e(0, 3) * (4 * t * t) + e(1, 3) * (4 * t)


@given(rat, nonzero.map(abs))
def test_displayed_plus_witness(y, c):
    # the explicit v_+ of the eigenbasis argument, checked independently of the solver
    rep = torus(Q(0), c)
    e = lambda i, j: Matrix(4, 4, (Q(int(k == 4 * i + j)) for k in range(16)))  # noqa: E731
    w = 2 * y * (c + y) / c
    vp = diag(-y / c, -y / c, 3 * y / c, -y / c) - e(0, 2) * w + e(2, 3) * w
    gm, gp = rep.images
    assert gm @ vp @ inverse(gm) == vp
    got = vp - gp @ vp @ inverse(gp)
    want = e(0, 2) * (-4 * y) + e(0, 3) * (-4 * y * y) + e(2, 3) * (4 * y)
    assert got == want


@given(rat, nonzero.map(abs))
def test_displayed_minus_witness(x, c):
    rep = torus(Q(0), c)
    e = lambda i, j: Matrix(4, 4, (Q(int(k == 4 * i + j)) for k in range(16)))  # noqa: E731
    t = 1 + x
    vm = diag(-t, 3 * t, -t, -t) + e(0, 1) * (2 * x * t) - e(1, 3) * (2 * x * t)
    gm, gp = rep.images
    assert gp @ vm @ inverse(gp) == vm
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), c))
    chk = phi_eigen_check(zp, zm, default_intertwiner(x, Q(0)))
    assert vm - gm @ vm @ inverse(gm) == chk.minus_difference


def test_eigen_check_rejects_non_intertwiner():
    rep = torus(Q(0), Q(2))
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), Q(2)))
    bad = default_intertwiner(0, 0) + Matrix(4, 4, (Q(int(k == 1)) for k in range(16)))
    with pytest.raises(PairingError):
        phi_eigen_check(zp, zm, bad)


def test_type1_criterion_synthetic():
    c = Q(2)
    rep = torus(Q(0), c)
    zp, zm = z_pm_cocycles(rep, CuspShape(Q(0), c))
    assert type1_criterion(rep, zp, (2,))
    assert not type1_criterion(rep, zm, (2,))


def test_type1_criterion_bundled(fig8, knot63):
    from cuspforge.cohomology import h1

    for m in (fig8, knot63):
        pres = m.presentation
        s = h1(pres, m.rep, "v")
        z = Cocycle.from_vector(m.rep, "v", s.h1[0])
        gp, gm = involution_pm_basis(m.symmetry)
        per = pres.peripherals[0]
        from cuspforge.pairing import _combo

        word = _combo(per.meridian, per.longitude, *gp)
        assert type1_criterion(m.rep, z, word)


# -- generic classes -----------------------------------------------------------------


def two_cusp_block():
    pres = Presentation.from_strings(
        ["m1", "l1", "m2", "l2"],
        ["m1 l1 m1^-1 l1^-1", "m2 l2 m2^-1 l2^-1"],
        [{"meridian": "m1", "longitude": "l1"}, {"meridian": "m2", "longitude": "l2"}],
    )
    one = Q(1)
    m, l = parabolic_normal_form(one, Q(0)), parabolic_normal_form(Q(0), one)
    rep = Representation(pres, [m, l, m, l], "SO31", None)
    za, _ = slice_basis((Q(0), Q(1)))
    zero = [Q(0)] * 18
    return rep, [za.vector() + zero, zero + za.vector()]


def test_generic_class_block_case():
    rep, basis = two_cusp_block()
    z = generic_class(basis, rep)
    assert z.vector() == [a + b for a, b in zip(*basis)]


def test_generic_class_single(knot52):
    from cuspforge.cohomology import h1

    s = h1(knot52.presentation, knot52.rep, "v")
    z = generic_class(s.h1, knot52.rep)
    assert z.vector() == s.h1[0]


def test_generic_class_exhausted():
    rep, basis = two_cusp_block()
    with pytest.raises(PairingError):
        generic_class([basis[0]], rep)


# -- orientation-reversing symmetries on the slice ---------------------------------------


def _conjugate_to_flip(s: SlicePoint) -> bool:
    """Is there an invertible X with X g1 X^-1 = g1^-1 and X g2 X^-1 = g2?"""
    g1 = np.array(unnormalized_exp(s.a, s.b, s.x1, s.y1).tolist(), dtype=float)
    g2 = np.array(unnormalized_exp(s.a, s.b, s.x2, s.y2).tolist(), dtype=float)
    g1i = np.linalg.inv(g1)
    eye = np.eye(4)
    # vec(X g) = (g^T kron I) vec X; vec(h X) = (I kron h) vec X (column-major)
    sys_ = np.vstack([np.kron(g1.T, eye) - np.kron(eye, g1i), np.kron(g2.T, eye) - np.kron(eye, g2)])
    _, sv, vh = np.linalg.svd(sys_)
    null = vh[np.sum(sv > 1e-9 * sv[0]) :]
    if not len(null):
        return False
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = (rng.standard_normal(len(null)) @ null).reshape(4, 4, order="F")
        if abs(np.linalg.det(x)) > 1e-8:
            return True
    return False


def test_flip_symmetry_forces_type_at_most_one():
    rng = random.Random(8)
    c = 1.7
    for _ in range(50):
        # the s0 family (0, b, x1, 0, 0, 1/x1) is conjugate to its flip and has type 0 or 1
        x1 = 1 / c + rng.uniform(-0.1, 0.1)
        s = SlicePoint(0.0, rng.uniform(-0.3, 0.3), x1, 0.0, 0.0, 1 / x1)
        assert _conjugate_to_flip(s)
        assert classify_slice_point(s).kind in (CuspKind.TYPE0, CuspKind.TYPE1)
        # near s0: conjugacy to the flip forces a*b = 0
        y1 = rng.uniform(-0.1, 0.1)
        x2 = rng.uniform(-0.1, 0.1)
        y2 = (y1 * x2 + 1) / x1
        a = rng.choice((0.0, 1.0, -1.0)) * rng.uniform(0.05, 0.3)
        b = rng.choice((0.0, 1.0, -1.0)) * rng.uniform(0.05, 0.3)
        if _conjugate_to_flip(SlicePoint(a, b, x1, y1, x2, y2)):
            assert a * b == 0
        if a * b != 0:
            assert not _conjugate_to_flip(SlicePoint(a, b, x1, y1, x2, y2))
