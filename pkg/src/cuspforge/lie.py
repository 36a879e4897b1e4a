"""The splitting sl(4) = so(3,1) + v and the adjoint action.

``J`` is the form of signature (3,1) with ``J[0][3] = J[3][0] = -1``.  The
involution ``sigma(a) = -J a^T J`` has so(3,1) as +1 eigenspace and the
9-dimensional complement v as -1 eigenspace.  The Killing form is taken as
``4 tr(ab)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .linalg import Matrix, inverse

J = Matrix.from_rows([[0, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0]])


def sigma(a: Matrix) -> Matrix:
    return -(J @ a.T @ J)


class LieError(ValueError):
    pass


def split(a: Matrix):
    """(so(3,1) part, v part) of a traceless matrix."""
    t = a.trace()
    if a.is_float():
        if abs(t) > 1e-9 * max(1.0, a.max_abs()):
            raise LieError("split needs a traceless matrix")
    elif t != 0:
        raise LieError("split needs a traceless matrix")
    s = sigma(a)
    return (a + s) / 2, (a - s) / 2


def killing(a: Matrix, b: Matrix):
    return (a @ b).trace() * 4


def in_so31(g: Matrix) -> bool:
    return g.T @ J @ g == J


def _e(i, j):
    return Matrix(4, 4, (1 if (r, c) == (i, j) else 0 for r in range(4) for c in range(4)))


_SO31_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@lru_cache(maxsize=None)
def so31_basis() -> tuple:
    return tuple(J @ (_e(i, j) - _e(j, i)) for i, j in _SO31_PAIRS)


def _v_generic(u: Sequence) -> Matrix:
    h = -(u[4] + u[7]) * mpq(1, 2)
    return Matrix.from_rows(
        [
            [h, u[0], u[1], u[2]],
            [u[3], u[4], u[5], -u[0]],
            [u[6], u[5], u[7], -u[1]],
            [u[8], -u[3], -u[6], h],
        ]
    )


@lru_cache(maxsize=None)
def v_basis() -> tuple:
    out = []
    for k in range(9):
        u = [mpq(int(i == k)) for i in range(9)]
        out.append(_v_generic(u))
    return tuple(out)


class Module:
    """A Lie algebra module with an ordered basis and coordinate map."""

    def __init__(self, name: str):
        if name not in ("g", "so31", "v"):
            raise ValueError(f"unknown module {name!r}")
        self.name = name
        if name == "so31":
            self.basis = so31_basis()
        elif name == "v":
            self.basis = v_basis()
        else:
            self.basis = so31_basis() + v_basis()
        self.dim = len(self.basis)

    def coords(self, a: Matrix) -> list:
        if self.name == "so31":
            k = J @ a
            return [k[i, j] for i, j in _SO31_PAIRS]
        if self.name == "v":
            e = a.entries
            return [e[1], e[2], e[3], e[4], e[5], e[6], e[8], e[10], e[12]]
        s, v = split(a)
        return Module("so31").coords(s) + Module("v").coords(v)

    def from_coords(self, c: Sequence) -> Matrix:
        total = None
        for x, b in zip(c, self.basis):
            if x:
                term = b * x
                total = term if total is None else total + term
        if total is None:
            zero = next(iter(c), 0) * 0 if c else 0
            return Matrix.zeros(4, 4, zero)
        return total

    def __eq__(self, other):
        return isinstance(other, Module) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Module({self.name!r})"


def module(name) -> Module:
    return name if isinstance(name, Module) else Module(name)


def adjoint(g: Matrix, a: Matrix, g_inv: Matrix | None = None) -> Matrix:
    if g_inv is None:
        g_inv = inverse(g)
    return g @ a @ g_inv


def adjoint_matrix(g: Matrix, mod, g_inv: Matrix | None = None) -> Matrix:
    """Matrix of ``a -> g a g^-1`` on ``mod`` in its basis (columns = images)."""
    mod = module(mod)
    if g_inv is None:
        g_inv = inverse(g)
    cols = []
    for b in mod.basis:
        cols.append(mod.coords(_sparse_conj(g, b, g_inv)))
    return Matrix.from_columns(cols)


def _sparse_conj(g: Matrix, b: Matrix, g_inv: Matrix) -> Matrix:
    # b has integer/rational entries with few nonzeros
    nz = [(i, j, b[i, j]) for i in range(4) for j in range(4) if b[i, j]]
    out = [0] * 16
    ge, ie = g.entries, g_inv.entries
    as_float = isinstance(ge[0], float)
    for i, j, c in nz:
        if as_float:
            c = float(c)
        gcol = [ge[r * 4 + i] for r in range(4)]
        irow = ie[j * 4 : j * 4 + 4]
        for r in range(4):
            gr = gcol[r]
            if gr:
                gr = gr * c
                for s in range(4):
                    y = irow[s]
                    if y:
                        out[r * 4 + s] = gr * y + out[r * 4 + s]
    return Matrix(4, 4, out)
