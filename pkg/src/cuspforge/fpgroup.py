"""Words, finite presentations, group ring elements and Fox calculus.

A word is a tuple of nonzero integers: ``k`` stands for generator ``k-1`` and
``-k`` for its inverse.  Text form is whitespace separated, e.g.
``"y x y^-1 x^-1 y x"``; ``x^3`` expands to three letters.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

log = logging.getLogger(__name__)


class WordError(ValueError):
    pass


def free_reduce(letters) -> tuple:
    out: list = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word: tuple) -> tuple:
    w = free_reduce(word)
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def inverse(word: tuple) -> tuple:
    return tuple(-a for a in reversed(word))


def power(word: tuple, n: int) -> tuple:
    if n < 0:
        return free_reduce(inverse(word) * (-n))
    return free_reduce(word * n)


def exponent_sum(word: tuple, gen: int) -> int:
    return sum(1 if a == gen + 1 else -1 for a in word if abs(a) == gen + 1)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str, generators: Sequence[str]) -> tuple:
    """Parse whitespace separated tokens ``g`` or ``g^k``; ``1`` is the empty word."""
    index = {g: i for i, g in enumerate(generators)}
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"malformed token {tok!r}")
        name, exp = m.group(1), m.group(2)
        if name not in index:
            raise WordError(f"unknown generator {name!r}")
        k = 1 if exp is None else int(exp)
        if k == 0:
            raise WordError(f"zero exponent in {tok!r}")
        letter = index[name] + 1
        letters.extend([letter if k > 0 else -letter] * abs(k))
    return free_reduce(letters)


def print_word(word: tuple, generators: Sequence[str]) -> str:
    """Inverse of :func:`parse_word`; runs of a letter are written ``g^k``."""
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        name = generators[abs(word[i]) - 1]
        k = (j - i) * (1 if word[i] > 0 else -1)
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


@dataclass
class Peripheral:
    meridian: tuple
    longitude: tuple


@dataclass
class Presentation:
    """Finite presentation with a meridian/longitude pair per cusp."""

    generators: list
    relators: list
    peripherals: list = field(default_factory=list)

    @classmethod
    def from_strings(cls, generators, relators, peripherals=()):
        gens = list(generators)
        if len(set(gens)) != len(gens):
            raise WordError("duplicate generator names")
        rels = []
        for text in relators:
            w = parse_word(text, gens)
            c = cyclic_reduce(w)
            if c != w:
                log.warning("relator %r was cyclically reduced to %r", text, print_word(c, gens))
            rels.append(c)
        periph = [
            Peripheral(parse_word(p["meridian"], gens), parse_word(p["longitude"], gens))
            for p in peripherals
        ]
        return cls(gens, rels, periph)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> tuple:
        return parse_word(text, self.generators)

    def show(self, word: tuple) -> str:
        return print_word(word, self.generators)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [self.show(r) for r in self.relators],
            "peripherals": [
                {"meridian": self.show(p.meridian), "longitude": self.show(p.longitude)}
                for p in self.peripherals
            ],
        }


def torus_presentation() -> Presentation:
    """``<m, l | m l m^-1 l^-1>`` with the obvious peripheral pair."""
    return Presentation(["m", "l"], [(1, 2, -1, -2)], [Peripheral((1,), (2,))])


class GroupRingElem:
    """Finite Z-linear combination of reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for w, c in (terms or {}).items():
            w = free_reduce(w)
            self.terms[w] = self.terms.get(w, 0) + c
        self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def word(cls, w, coeff=1):
        return cls({tuple(w): coeff})

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return GroupRingElem(t)

    def __neg__(self):
        return GroupRingElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem({w: c * other for w, c in self.terms.items()})
        t: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = free_reduce(u + v)
                t[w] = t.get(w, 0) + a * b
        return GroupRingElem(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GroupRingElem) and self.terms == other.terms

    def __repr__(self):
        return f"GroupRingElem({self.terms!r})"

    def augmentation(self) -> int:
        return sum(self.terms.values())


def fox_derivative(word: tuple, gen: int) -> GroupRingElem:
    """Fox derivative of ``word`` with respect to generator index ``gen``.

    Uses d(uv) = du + u dv, dg/dg = 1 and d(g^-1)/dg = -g^-1.
    """
    terms: dict = {}
    prefix: tuple = ()
    for a in word:
        if a == gen + 1:
            key = free_reduce(prefix)
            terms[key] = terms.get(key, 0) + 1
        elif a == -(gen + 1):
            key = free_reduce(prefix + (a,))
            terms[key] = terms.get(key, 0) - 1
        prefix = prefix + (a,)
    return GroupRingElem(terms)


def evaluate_word(word: tuple, images: Sequence, inverses: Sequence, identity):
    """Product of generator images along ``word``."""
    result = identity
    for a in word:
        result = result @ (images[a - 1] if a > 0 else inverses[-a - 1])
    return result


def groupring_operator(elem: GroupRingElem, action: Callable, zero):
    """Sum of ``c * action(word)`` over the terms of ``elem``."""
    total = zero
    for w, c in elem.terms.items():
        total = total + action(w) * c
    return total
