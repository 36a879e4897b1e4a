"""Exact real number fields Q[t]/(f) with a chosen real embedding.

A field is given by a squarefree, irreducible minimal polynomial ``f`` and a
rational interval isolating one real root.  Elements are polynomials in the
generator of degree below ``deg f`` with ``gmpy2.mpq`` coefficients.  Signs
are decided exactly: a gcd zero-test first, then interval refinement.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import mpmath
from gmpy2 import mpq, mpz

Rational = mpq

__all__ = [
    "Rational",
    "parse_rational",
    "NumberField",
    "FieldElem",
    "FieldError",
    "fe_sign",
    "fe_to_float",
    "fe_to_mpf",
    "fe_sqrt",
    "QQ",
]


class FieldError(ValueError):
    pass


def parse_rational(value) -> mpq:
    """Parse ``"p/q"``, ``"p"``, ints, Fractions and mpq values.

    Floats are rejected: they would silently import rounding error.
    """
    if isinstance(value, bool):
        raise FieldError(f"not a rational: {value!r}")
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, type(mpq(0))):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        s = value.strip()
        try:
            if "/" in s:
                p, q = s.split("/")
                q = int(q)
                if q == 0:
                    raise FieldError(f"zero denominator in {value!r}")
                return mpq(int(p), q)
            return mpq(int(s))
        except ValueError:
            raise FieldError(f"malformed rational {value!r}") from None
    if isinstance(value, _RationalABC):
        return mpq(int(value.numerator), int(value.denominator))
    raise FieldError(f"not a rational: {value!r}")


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# dense polynomials over Q, coefficient lists low degree first


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a, b):
    n = max(len(a), len(b))
    out = [mpq(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pscale(a, s):
    return _trim([c * s for c in a])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
    return _trim(q), _trim(a)


def _pmonic(a):
    return [c / a[-1] for c in a] if a else a


def _pgcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _pderiv(a):
    return _trim([a[i] * i for i in range(1, len(a))])


def _peval(p, x):
    acc = mpq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sturm_count(f, lo, hi) -> int:
    """Number of distinct real roots of f in (lo, hi]."""
    seq = [f, _pderiv(f)]
    while seq[-1]:
        r = _pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(_pscale(r, -1))

    def changes(x):
        signs = [_sign(_peval(p, x)) for p in seq]
        signs = [s for s in signs if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return changes(lo) - changes(hi)


def _interval_eval(p, lo, hi):
    """Enclosure of p over [lo, hi] by interval Horner."""
    a = b = mpq(0)
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


def _rational_roots(f) -> list:
    # f has rational coefficients; clear denominators first
    den = mpz(1)
    for c in f:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    while ints and ints[0] == 0:
        return [mpq(0)]
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 > 10**12 or an > 10**12:
        return []  # the check is advertised as cheap; skip huge constants
    roots = []
    for p in _divisors(a0):
        for q in _divisors(an):
            for s in (1, -1):
                r = mpq(s * p, q)
                if _peval(f, r) == 0 and r not in roots:
                    roots.append(r)
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = int(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return out


# ---------------------------------------------------------------------------


class NumberField:
    """``Q[t]/(f)`` embedded in R by the root of ``f`` inside an interval."""

    def __init__(self, min_poly: Sequence, root_interval: Sequence, name: str = "t"):
        f = _trim([parse_rational(c) for c in min_poly])
        if len(f) < 2:
            raise FieldError("minimal polynomial must have degree >= 1")
        f = _pmonic(f)
        lo, hi = (parse_rational(x) for x in root_interval)
        if lo > hi:
            raise FieldError("root interval is reversed")
        if _pgcd(f, _pderiv(f)) != [mpq(1)]:
            raise FieldError("minimal polynomial is not squarefree")
        if len(f) > 2 and _rational_roots(f):
            raise FieldError("minimal polynomial has a rational root")
        if lo == hi:
            if _peval(f, lo) != 0:
                raise FieldError("point interval is not a root")
        else:
            count = _sturm_count(f, lo, hi) + (1 if _peval(f, lo) == 0 else 0)
            if count != 1:
                raise FieldError(
                    f"interval [{lo}, {hi}] contains {count} real roots, expected 1"
                )
        self.min_poly = tuple(f)
        self.degree = len(f) - 1
        self.name = name
        self._lo, self._hi = lo, hi
        self._interval0 = (lo, hi)
        # t^k mod f for k = n .. 2n-2, used by multiplication
        n = self.degree
        self._red = []
        cur = [-c for c in f[:-1]]
        for _ in range(max(n - 1, 1)):
            self._red.append(cur)
            nxt = [mpq(0)] + cur
            top = nxt.pop()
            cur = [nxt[i] - top * f[i] for i in range(n)]
        self._zero = FieldElem(self, (mpq(0),) * n)
        self._one = FieldElem(self, (mpq(1),) + (mpq(0),) * (n - 1))

    # -- construction -----------------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field is not self and value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        return self.from_rational(parse_rational(value))

    def from_coeffs(self, coeffs: Iterable) -> "FieldElem":
        c = _trim([parse_rational(x) for x in coeffs])
        if len(c) > self.degree:
            c = _pdivmod(c, list(self.min_poly))[1]
        return FieldElem(self, tuple(c) + (mpq(0),) * (self.degree - len(c)))

    def from_rational(self, q) -> "FieldElem":
        return FieldElem(self, (mpq(q),) + (mpq(0),) * (self.degree - 1))

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        return FieldElem(self, (mpq(0), mpq(1)) + (mpq(0),) * (self.degree - 2))

    # -- embedding --------------------------------------------------------
    @property
    def root_interval(self):
        return self._interval0

    def _refine(self):
        lo, hi = self._lo, self._hi
        if lo == hi:
            return
        f = self.min_poly
        mid = (lo + hi) / 2
        fm = _peval(f, mid)
        if fm == 0:
            self._lo = self._hi = mid
        elif _sign(fm) == _sign(_peval(f, lo)):
            self._lo = mid
        else:
            self._hi = mid

    def enclose(self, coeffs, width=None):
        """Rational interval containing the embedded value of ``coeffs``."""
        while True:
            a, b = _interval_eval(coeffs, self._lo, self._hi)
            if width is None or b - a <= width or self._lo == self._hi:
                return a, b
            self._refine()

    def root_float(self) -> float:
        return fe_to_float(self.gen())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.min_poly != other.min_poly:
            return False
        lo = max(self._interval0[0], other._interval0[0])
        hi = min(self._interval0[1], other._interval0[1])
        return lo <= hi and (
            lo == hi and _peval(self.min_poly, lo) == 0
            or _sturm_count(list(self.min_poly), lo, hi)
            + (1 if _peval(self.min_poly, lo) == 0 else 0) == 1
        )

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        terms = " + ".join(f"{format_rational(c)}*{self.name}^{i}" for i, c in enumerate(self.min_poly) if c)
        return f"NumberField({terms}, root in [{self._interval0[0]}, {self._interval0[1]}])"

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "min_poly": [format_rational(c) for c in self.min_poly],
            "root_interval": [format_rational(x) for x in self._interval0],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NumberField":
        try:
            return cls(data["min_poly"], data["root_interval"])
        except KeyError as exc:
            raise FieldError(f"field descriptor is missing {exc}") from None


class FieldElem:
    """An element of a :class:`NumberField`, immutable and hashable."""

    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.c = coeffs

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise FieldError("mixed fields in arithmetic")
            return other
        if isinstance(other, float):
            return NotImplemented
        try:
            return self.field.from_rational(parse_rational(other))
        except FieldError:
            return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.c))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, float):
                return NotImplemented
            try:
                s = parse_rational(other)
            except FieldError:
                return NotImplemented
            return FieldElem(self.field, tuple(a * s for a in self.c))
        other = self._coerce(other)
        n = self.field.degree
        a, b = self.c, other.c
        prod = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        red = self.field._red
        for k in range(n, 2 * n - 1):
            ck = prod[k]
            if ck:
                r = red[k - n]
                for i in range(n):
                    out[i] += ck * r[i]
        return FieldElem(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: s*x + t*f = 1
        f = list(self.field.min_poly)
        r0, r1 = f, _trim(list(self.c))
        s0, s1 = [], [mpq(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _padd(s0, _pscale(_pmul(q, s1), -1))
        if not r1:
            raise FieldError("element is a zero divisor; minimal polynomial is reducible")
        inv = _pscale(s1, 1 / r1[0])
        return self.field.from_coeffs(inv)

    def __truediv__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, float):
                return NotImplemented
            s = parse_rational(other)
            if s == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElem(self.field, tuple(a / s for a in self.c))
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, float):
            return False
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.c == other.c

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __lt__(self, other):
        return fe_sign(self - other) < 0

    def __le__(self, other):
        return fe_sign(self - other) <= 0

    def __gt__(self, other):
        return fe_sign(self - other) > 0

    def __ge__(self, other):
        return fe_sign(self - other) >= 0

    def __abs__(self):
        return -self if fe_sign(self) < 0 else self

    def __float__(self):
        return fe_to_float(self)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_json(self) -> list:
        return [format_rational(c) for c in self.c]

    def __repr__(self):
        if self.is_rational():
            return f"FieldElem({format_rational(self.c[0])})"
        terms = [
            f"{format_rational(c)}*{self.field.name}^{i}" if i else format_rational(c)
            for i, c in enumerate(self.c)
            if c
        ]
        return f"FieldElem({' + '.join(terms)})"


# ---------------------------------------------------------------------------


def _is_real_zero(x: FieldElem) -> bool:
    """Zero test against the embedding, robust to reducible input polynomials."""
    if x.is_zero():
        return True
    field = x.field
    g = _pgcd(list(field.min_poly), _trim(list(x.c)))
    if len(g) <= 1:
        return False
    lo, hi = field._interval0
    if lo == hi:
        return _peval(g, lo) == 0
    glo, ghi = _peval(g, lo), _peval(g, hi)
    return glo == 0 or ghi == 0 or _sign(glo) != _sign(ghi)


def fe_sign(x) -> int:
    """Exact sign of ``x`` under the field's real embedding."""
    if not isinstance(x, FieldElem):
        return _sign(parse_rational(x))
    if x.is_rational():
        return _sign(x.c[0])
    if _is_real_zero(x):
        return 0
    coeffs = _trim(list(x.c))
    field = x.field
    while True:
        a, b = field.enclose(coeffs)
        if a > 0:
            return 1
        if b < 0:
            return -1
        field._refine()


def fe_to_mpf(x, precision_bits: int = 53):
    """Embedded value as an ``mpmath.mpf`` with the requested accuracy."""
    with mpmath.workprec(precision_bits + 10):
        if not isinstance(x, FieldElem):
            q = parse_rational(x)
            return mpmath.mpf(int(q.numerator)) / int(q.denominator)
        if x.is_zero():
            return mpmath.mpf(0)
        coeffs = _trim(list(x.c))
        field = x.field
        tol = mpq(1, 2 ** (precision_bits + 2))
        while True:
            a, b = field.enclose(coeffs)
            scale = max(mpq(1), abs(a), abs(b))
            if b - a <= tol * scale or field._lo == field._hi:
                mid = (a + b) / 2
                return mpmath.mpf(int(mid.numerator)) / int(mid.denominator)
            field._refine()


def fe_to_float(x, precision_bits: int = 53) -> float:
    """Embedded value rounded to a Python float.

    ``precision_bits`` controls how tightly the value is enclosed before
    rounding; accuracy beyond 53 bits needs :func:`fe_to_mpf`.
    """
    return float(fe_to_mpf(x, max(precision_bits, 53)))


def _rational_sqrt(q):
    q = mpq(q)
    if q < 0:
        return None
    import gmpy2

    n, d = q.numerator, q.denominator
    rn, rd = gmpy2.isqrt(n), gmpy2.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def _charpoly(mat):
    """Characteristic polynomial of a square rational matrix (Faddeev-LeVerrier)."""
    n = len(mat)
    ident = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [mpq(1)]
    m_prev = [[mpq(0)] * n for _ in range(n)]
    c_prev = mpq(1)
    for k in range(1, n + 1):
        am = [[sum(mat[i][l] * m_prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        mk = [[am[i][j] + c_prev * ident[i][j] for j in range(n)] for i in range(n)]
        amk = [[sum(mat[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        ck = -sum(amk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        m_prev, c_prev = mk, ck
    # coeffs: x^n + c1 x^{n-1} + ... ; return low-first
    return list(reversed(coeffs))


def _fpoly_rem(a, b):
    """Remainder of field-coefficient polynomials (lists, low first)."""
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    inv = b[-1].inverse()
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        for i, y in enumerate(b):
            a[i + k] = a[i + k] - c * y
        a.pop()
        while a and a[-1].is_zero():
            a.pop()
    return a


def _fpoly_gcd(a, b):
    while b:
        a, b = b, _fpoly_rem(a, b)
    inv = a[-1].inverse()
    return [c * inv for c in a]


def fe_sqrt(x: FieldElem):
    """Nonnegative square root of ``x`` inside its field, or ``None``.

    The minimal polynomial of a candidate root is found by factoring
    ``charpoly(x)(X^2)`` over Q; a gcd over the field with ``X^2 - x`` then
    isolates the root.  When both signs are conjugate the input is twisted
    by a square so that they separate.
    """
    field = x.field
    if fe_sign(x) < 0:
        return None
    if x.is_zero():
        return field.zero()
    if x.is_rational():
        r = _rational_sqrt(x.c[0])
        if r is not None:
            return field.from_rational(r)
        if field.degree == 1:
            return None
    import sympy

    X = sympy.Symbol("X")
    t = field.gen()
    for shift in range(0, 6):
        b = field.one() if shift == 0 else t + shift
        a = x * b * b
        n = field.degree
        cols = []
        e = a
        basis = field.one()
        for _ in range(n):
            cols.append(list((a * basis).c))
            basis = basis * t
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        cp = _charpoly(mat)
        expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * X ** (2 * i) for i, c in enumerate(cp))
        _, factors = sympy.factor_list(sympy.Poly(expr, X))
        target = [-e] + [field.zero(), field.one()]  # X^2 - a
        for fac, _mult in factors:
            coeffs = [mpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in reversed(fac.all_coeffs())]
            fpoly = [field.from_rational(c) for c in coeffs]
            g = _fpoly_gcd(target, fpoly)
            if len(g) == 2:
                root = -g[0]
                if root * root != a:
                    continue
                root = root / b
                return root if fe_sign(root) >= 0 else -root
    return None


QQ = NumberField([0, 1], [0, 0], name="q")
