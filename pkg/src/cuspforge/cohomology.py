"""Group cohomology H^1(Gamma, M) for M = g, so(3,1) or v via Fox calculus.

Cocycles are stored by their values on the generators, as coordinate vectors
in the module basis.  Conventions: z(uv) = z(u) + Ad(u) z(v) and the
coboundary of a is g -> a - Ad(g) a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fpgroup import Presentation, fox_derivative, free_reduce
from .lie import Module, adjoint_matrix, module
from .linalg import Matrix, column_span_basis, is_float_scalar, kernel_basis, rank, solve
from .rep import Representation


class CohomologyError(ValueError):
    pass


class _AdCache:
    """Memoised rho(word), rho(word)^-1 and Ad matrices for one representation."""

    def __init__(self, rep: Representation, mod: Module):
        self.rep = rep
        self.mod = mod
        ident = rep.identity()
        self._mats = {(): (ident, ident)}
        self._ads = {}

    def mats(self, word: tuple):
        word = free_reduce(word)
        hit = self._mats.get(word)
        if hit is not None:
            return hit
        g, gi = self.mats(word[:-1])
        a = word[-1]
        img, inv = self.rep.images, self.rep.inverses
        step, step_inv = (img[a - 1], inv[a - 1]) if a > 0 else (inv[-a - 1], img[-a - 1])
        out = (g @ step, step_inv @ gi)
        self._mats[word] = out
        return out

    def ad(self, word: tuple) -> Matrix:
        word = free_reduce(word)
        hit = self._ads.get(word)
        if hit is None:
            g, gi = self.mats(word)
            hit = adjoint_matrix(g, self.mod, gi)
            self._ads[word] = hit
        return hit


def _zero(rep: Representation):
    return rep.one() * 0


def _blank(d, zero):
    return [[zero] * d for _ in range(d)]


def fox_jacobian(pres: Presentation, rep: Representation, mod) -> Matrix:
    """Block matrix with (relator r, generator j) block sum c * Ad(rho(w)) over dr/dx_j."""
    mod = module(mod)
    d = mod.dim
    cache = _AdCache(rep, mod)
    zero = _zero(rep)
    n = pres.ngens
    rows = [[zero] * (n * d) for _ in range(len(pres.relators) * d)]
    for ri, r in enumerate(pres.relators):
        for j in range(n):
            for w, c in fox_derivative(r, j).terms.items():
                ad = cache.ad(w)
                for a in range(d):
                    row = rows[ri * d + a]
                    for b in range(d):
                        x = ad[a, b]
                        if x:
                            row[j * d + b] = row[j * d + b] + x * c
    if not rows:
        return Matrix(0, n * d, ())
    return Matrix.from_rows(rows)


@dataclass
class Cocycle:
    rep: Representation
    mod: Module
    values: list  # one coordinate vector per generator

    @classmethod
    def from_vector(cls, rep, mod, vec):
        mod = module(mod)
        d = mod.dim
        return cls(rep, mod, [list(vec[j * d : (j + 1) * d]) for j in range(rep.presentation.ngens)])

    def vector(self) -> list:
        return [x for v in self.values for x in v]

    def value_matrix(self, j: int) -> Matrix:
        return self.mod.from_coords(self.values[j])

    def __add__(self, other):
        return Cocycle(self.rep, self.mod, [[a + b for a, b in zip(u, v)] for u, v in zip(self.values, other.values)])

    def __sub__(self, other):
        return self + other * (-1)

    def __mul__(self, s):
        return Cocycle(self.rep, self.mod, [[a * s for a in v] for v in self.values])

    __rmul__ = __mul__


def coboundary(rep: Representation, mod, a: Sequence) -> Cocycle:
    """The cocycle g -> a - Ad(rho(g)) a."""
    mod = module(mod)
    cache = _AdCache(rep, mod)
    vals = []
    for j in range(rep.presentation.ngens):
        ad = cache.ad((j + 1,))
        img = [sum((ad[i, k] * a[k] for k in range(mod.dim)), _zero(rep)) for i in range(mod.dim)]
        vals.append([x - y for x, y in zip(a, img)])
    return Cocycle(rep, mod, vals)


def coboundary_matrix(rep: Representation, mod) -> Matrix:
    """Columns are the coboundaries of the module basis vectors."""
    mod = module(mod)
    d = mod.dim
    cache = _AdCache(rep, mod)
    one = rep.one()
    blocks = []
    for j in range(rep.presentation.ngens):
        ad = cache.ad((j + 1,))
        blocks.append([[(one if a == b else one * 0) - ad[a, b] for b in range(d)] for a in range(d)])
    return Matrix.from_rows([row for blk in blocks for row in blk])


def z1_basis(pres: Presentation, rep: Representation, mod, tol=None) -> list:
    mod = module(mod)
    jac = fox_jacobian(pres, rep, mod)
    return kernel_basis(jac, tol)


def b1_basis(rep: Representation, mod, tol=None) -> list:
    m = coboundary_matrix(rep, mod)
    return column_span_basis([m.col(k) for k in range(m.cols)], tol)


@dataclass
class CohomologySummary:
    module: Module
    z1: list
    b1: list
    h1: list
    jacobian_rank: int
    extra: dict = field(default_factory=dict)

    @property
    def z1_dim(self):
        return len(self.z1)

    @property
    def b1_dim(self):
        return len(self.b1)

    @property
    def h1_dim(self):
        return len(self.h1)

    def dims(self):
        return (self.z1_dim, self.b1_dim, self.h1_dim)


def complement(sub: list, vectors: list, tol=None) -> list:
    """Vectors from ``vectors`` completing ``sub`` to a basis of their joint span."""
    chosen = []
    base = list(sub)
    r = rank(Matrix.from_rows(base), tol) if base else 0
    for v in vectors:
        trial = base + [v]
        r2 = rank(Matrix.from_rows(trial), tol)
        if r2 > r:
            base, r = trial, r2
            chosen.append(v)
    return chosen


def h1(pres: Presentation, rep: Representation, mod, tol=None) -> CohomologySummary:
    mod = module(mod)
    jac = fox_jacobian(pres, rep, mod)
    jr = rank(jac, tol) if jac.rows else 0
    z1 = kernel_basis(jac, tol) if jac.rows else kernel_basis(Matrix(0, jac.cols, ()), tol)
    b1 = b1_basis(rep, mod, tol)
    if len(b1) > len(z1):
        raise CohomologyError("coboundaries exceed cocycles; rank tolerance is inconsistent")
    hh = complement(b1, z1, tol)
    if len(hh) != len(z1) - len(b1):
        raise CohomologyError("coboundaries are not contained in the cocycle space")
    return CohomologySummary(mod, z1, b1, hh, jr)


def is_cocycle(pres: Presentation, z: Cocycle, tol=None) -> bool:
    jac = fox_jacobian(pres, z.rep, z.mod)
    vec = z.vector()
    for i in range(jac.rows):
        s = sum((jac[i, k] * vec[k] for k in range(jac.cols)), vec[0] * 0)
        if is_float_scalar(s):
            if abs(s) > (tol or 1e-8):
                return False
        elif s:
            return False
    return True


def evaluate_cocycle(z: Cocycle, word: tuple) -> Matrix:
    """Value of the cocycle on an arbitrary word, as a 4x4 matrix."""
    rep = z.rep
    total = Matrix.zeros(4, 4, _zero(rep))
    prefix = rep.identity()
    prefix_inv = rep.identity()
    for a in word:
        j = abs(a) - 1
        val = z.value_matrix(j)
        if a < 0:
            gi = rep.inverses[j]
            val = -(gi @ val @ rep.images[j])
            step, step_inv = rep.inverses[j], rep.images[j]
        else:
            step, step_inv = rep.images[j], rep.inverses[j]
        total = total + prefix @ val @ prefix_inv
        prefix = prefix @ step
        prefix_inv = step_inv @ prefix_inv
    return total


def evaluate_cocycle_coords(z: Cocycle, word: tuple) -> list:
    return z.mod.coords(evaluate_cocycle(z, word))


def restrict(z: Cocycle, cusp: int = 0) -> Cocycle:
    """Restriction to the peripheral torus subgroup of ``cusp``."""
    p = z.rep.presentation.peripherals[cusp]
    trep = z.rep.restrict(cusp)
    return Cocycle(trep, z.mod, [evaluate_cocycle_coords(z, p.meridian), evaluate_cocycle_coords(z, p.longitude)])


def is_coboundary(z: Cocycle, tol=None):
    """``(True, a)`` with z = delta(a) when z is a coboundary, else ``(False, None)``."""
    m = coboundary_matrix(z.rep, z.mod)
    a = solve(m, z.vector(), tol)
    if a is None:
        return False, None
    if m.is_float() or any(is_float_scalar(x) for x in z.vector()):
        # confirm the residual; float elimination can accept near-solutions
        res = max(abs(sum(m[i, k] * a[k] for k in range(m.cols)) - z.vector()[i]) for i in range(m.rows))
        if res > (tol or 1e-8) * max(1.0, m.max_abs()) * 10:
            return False, None
    return True, a


def is_coboundary_on(rep: Representation, mod, word: tuple, value, tol=None):
    """Is ``value`` in the image of (1 - Ad(rho(word))), i.e. a coboundary on <word>?"""
    mod = module(mod)
    g = rep(word)
    from .linalg import inverse

    ad = adjoint_matrix(g, mod, rep.inverse_of(word) if not rep.is_float else inverse(g))
    one = rep.one()
    m = Matrix.from_rows([[(one if a == b else one * 0) - ad[a, b] for b in range(mod.dim)] for a in range(mod.dim)])
    a = solve(m, list(value), tol)
    return (a is not None), a


@dataclass
class RigidityVerdict:
    rigid: bool
    path: str
    h1_dim: int
    cusps: int
    kernel_dim: int
    summary: CohomologySummary

    def label(self) -> str:
        return "RIGID" if self.rigid else "NOT RIGID"


def restriction_map_rank(summary: CohomologySummary, rep: Representation, tol=None):
    """dim of res_*(H^1(Gamma, M)) inside the direct sum of the cusp cohomologies."""
    pres = rep.presentation
    mod = summary.module
    k = len(pres.peripherals)
    cob_rows = []  # rows of a block-diagonal coboundary space
    blocks = []
    for c in range(k):
        trep = rep.restrict(c)
        cm = coboundary_matrix(trep, mod)
        blocks.append([cm.col(i) for i in range(cm.cols)])
    width = 2 * mod.dim
    zero = _zero(rep)
    for c, cols in enumerate(blocks):
        for col in cols:
            row = [zero] * (width * k)
            row[c * width : (c + 1) * width] = col
            cob_rows.append(row)
    res_rows = []
    for vec in summary.h1:
        z = Cocycle.from_vector(rep, mod, vec)
        row = []
        for c in range(k):
            rz = restrict(z, c)
            row.extend(rz.vector())
        res_rows.append(row)
    base = rank(Matrix.from_rows(cob_rows), tol) if cob_rows else 0
    full = rank(Matrix.from_rows(cob_rows + res_rows), tol) if (cob_rows or res_rows) else 0
    return full - base


def rigidity_verdict(pres: Presentation, rep: Representation, tol=None) -> RigidityVerdict:
    """Infinitesimal rigidity rel cusps, decided with v coefficients.

    Fast path: dim H^1(Gamma, v) equals the number of cusps.  Otherwise the
    kernel of the restriction map is computed cusp by cusp.
    """
    summ = h1(pres, rep, "v", tol)
    k = len(pres.peripherals)
    if summ.h1_dim == k:
        return RigidityVerdict(True, "fast", summ.h1_dim, k, 0, summ)
    r = restriction_map_rank(summ, rep, tol)
    kern = summ.h1_dim - r
    return RigidityVerdict(kern == 0, "slow", summ.h1_dim, k, kern, summ)
