"""Exact coefficient arithmetic: arbitrary-precision rationals and Q(zeta_m).

Rationals are gmpy2.mpq values (always stored reduced, positive denominator),
aliased as ``Rat``.  Cyclotomic numbers are held in the power basis
1, zeta, ..., zeta^(phi(m)-1) modulo the m-th cyclotomic polynomial, so
equality is structural.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

from gmpy2 import mpq, mpz

from .errors import ConductorMismatch, DivisionByZero

Rat = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def rat(n, d=1) -> Rat:
    """Reduced rational n/d."""
    return mpq(n, d)


def floor_q(x) -> int:
    x = mpq(x)
    return int(x.numerator // x.denominator)


def ceil_q(x) -> int:
    x = mpq(x)
    return int(-((-x.numerator) // x.denominator))


def euler_phi(m: int) -> int:
    """Euler totient, by trial-division factoring (m stays small here)."""
    assert m >= 1
    result = m
    n, p = m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if n > 1:
        result -= result // n
    return result


def _poly_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_int(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod_int(num: list, den: list) -> tuple[list, list]:
    """Exact integer polynomial division (den monic here)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        if c:
            assert c % den[-1] == 0
            t = c // den[-1]
            q[k] = t
            for j, y in enumerate(den):
                num[k + j] -= t * y
    return q, _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Coefficients of Phi_m, constant term first, as a tuple of ints.

    Built by exact division of x^m - 1 by the product of Phi_e over the
    proper divisors e of m; degree is phi(m).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for e in range(1, m):
        if m % e == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(e)))
            assert not rem
    return tuple(num)


class RootOfUnity:
    """The exact root of unity zeta_m^s, stored so that m is its order.

    Canonical: gcd(s, m) is divided out, hence m == 1 represents 1 and
    (m, s) == (2, 1) represents -1.
    """

    __slots__ = ("order", "exponent")

    def __init__(self, order: int, exponent: int = 1):
        if order < 1:
            raise ValueError("order must be positive")
        s = exponent % order
        g = gcd(s, order)
        if s == 0:
            order, s = 1, 0
        elif g > 1:
            order, s = order // g, s // g
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "exponent", s)

    def __setattr__(self, *a):
        raise AttributeError("RootOfUnity is immutable")

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.order == other.order and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.order, self.exponent))

    def __repr__(self):
        return f"RootOfUnity({self.order}, {self.exponent})"

    def is_one(self) -> bool:
        return self.order == 1

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        m = self.order * other.order // gcd(self.order, other.order)
        e = self.exponent * (m // self.order) + other.exponent * (m // other.order)
        return RootOfUnity(m, e)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)


class RationalField:
    """The rationals, with elements represented as mpq values."""

    degree = 1
    conductor = 1

    zero = _ZERO
    one = _ONE

    def from_int(self, n) -> Rat:
        return mpq(n)

    def from_rational(self, q) -> Rat:
        return mpq(q)

    def invert(self, x: Rat) -> Rat:
        if not x:
            raise DivisionByZero("1/0 in Q")
        return 1 / mpq(x)

    def is_zero(self, x) -> bool:
        return not x

    def embed_root(self, z: RootOfUnity) -> Rat:
        if z.order == 1:
            return _ONE
        if z.order == 2:
            return mpq(-1)
        raise ConductorMismatch(f"zeta_{z.order} does not lie in Q")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class CyclotomicNumber:
    """Element of Q(zeta_m) as phi(m) power-basis coordinates (mpq)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "CyclotomicField", coords):
        self.field = field
        self.coords = tuple(coords)
        assert len(self.coords) == field.degree

    def __repr__(self):
        return f"CyclotomicNumber(m={self.field.conductor}, {self.coords})"

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.field.conductor == other.field.conductor and self.coords == other.coords
        if isinstance(other, (int, type(_ONE), type(mpz(0)))):
            return self == self.field.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.conductor, self.coords))

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.field.conductor != self.field.conductor:
                raise ConductorMismatch(
                    f"mixing Q(zeta_{self.field.conductor}) with Q(zeta_{other.field.conductor})"
                )
            return other
        return self.field.from_rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicNumber(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return CyclotomicNumber(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CyclotomicNumber(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.field.conductor != self.field.conductor:
                raise ConductorMismatch(
                    f"mixing Q(zeta_{self.field.conductor}) with Q(zeta_{other.field.conductor})"
                )
            return CyclotomicNumber(self.field, self.field._mul_coords(self.coords, other.coords))
        # rational scalar
        s = mpq(other)
        return CyclotomicNumber(self.field, [a * s for a in self.coords])

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        return self.field.invert(self)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_part(self) -> Rat:
        """The element as an mpq; only valid when is_rational()."""
        assert self.is_rational()
        return self.coords[0]


class CyclotomicField:
    """Q(zeta_m) with power-basis arithmetic modulo Phi_m.

    Use cyclotomic_field(m) to get the cached instance for a conductor.
    """

    def __init__(self, m: int):
        self.conductor = m
        self.degree = euler_phi(m)
        phi = cyclotomic_polynomial(m)
        # rows[j] = coordinates of zeta^(degree+j), as mpz, for j up to
        # max(degree-2, m-1-degree): enough for products and for embedding
        # any power zeta^e with e < m.
        deg = self.degree
        top = max(2 * deg - 2, m - 1)
        rows = []
        cur = [mpz(-c) for c in phi[:deg]]  # zeta^deg (Phi_m is monic)
        rows.append(list(cur))
        for _ in range(deg, top):
            lead = cur[-1]
            cur = [mpz(0)] + cur[:-1]
            if lead:
                first = rows[0]
                for i in range(deg):
                    cur[i] += lead * first[i]
            rows.append(list(cur))
        self._rows = rows
        self.zero = CyclotomicNumber(self, (_ZERO,) * deg)
        one = [_ZERO] * deg
        one[0] = _ONE
        self.one = CyclotomicNumber(self, one)

    def __repr__(self):
        return f"Q(zeta_{self.conductor})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("cyc", self.conductor))

    def from_int(self, n) -> CyclotomicNumber:
        c = [_ZERO] * self.degree
        c[0] = mpq(n)
        return CyclotomicNumber(self, c)

    def from_rational(self, q) -> CyclotomicNumber:
        c = [_ZERO] * self.degree
        c[0] = mpq(q)
        return CyclotomicNumber(self, c)

    def is_zero(self, x: CyclotomicNumber) -> bool:
        return not any(x.coords)

    def _reduce(self, conv: list) -> list:
        deg = self.degree
        rows = self._rows
        for e in range(len(conv) - 1, deg - 1, -1):
            c = conv[e]
            if c:
                row = rows[e - deg]
                for i in range(deg):
                    if row[i]:
                        conv[i] += c * row[i]
        del conv[deg:]
        while len(conv) < deg:
            conv.append(_ZERO)
        return conv

    def _mul_coords(self, a, b) -> list:
        conv = [_ZERO] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return self._reduce(conv)

    def monomial(self, e: int) -> CyclotomicNumber:
        """zeta^e as an element (0 <= e < conductor)."""
        e %= self.conductor
        if e < self.degree:
            c = [_ZERO] * self.degree
            c[e] = _ONE
            return CyclotomicNumber(self, c)
        return CyclotomicNumber(self, [mpq(v) for v in self._rows[e - self.degree]])

    def embed_root(self, z: RootOfUnity) -> CyclotomicNumber:
        """zeta_conductor^(s * conductor/m); ConductorMismatch unless m | conductor."""
        if self.conductor % z.order != 0:
            raise ConductorMismatch(
                f"order {z.order} does not divide conductor {self.conductor}"
            )
        return self.monomial(z.exponent * (self.conductor // z.order))

    def invert(self, u: CyclotomicNumber) -> CyclotomicNumber:
        """Inverse via extended gcd of the coordinate polynomial with Phi_m."""
        if not any(u.coords):
            raise DivisionByZero(f"1/0 in Q(zeta_{self.conductor})")
        phi = [mpq(c) for c in cyclotomic_polynomial(self.conductor)]
        s = _poly_modinv(list(u.coords), phi)
        s += [_ZERO] * (self.degree - len(s))
        return CyclotomicNumber(self, s[: self.degree])


def _poly_modinv(a: list, mod: list) -> list:
    """Inverse of a modulo mod in Q[x] (mod irreducible), by extended gcd."""
    r0, r1 = [mpq(c) for c in mod], _poly_trim([mpq(c) for c in a])
    t0, t1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _poly_qq_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _poly_qq_sub(t0, _poly_qq_mul(q, t1))
    assert r1, "gcd hit zero: element not invertible"
    inv_lead = 1 / r1[0]
    return [c * inv_lead for c in t1]


def _poly_qq_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    dd = len(den) - 1
    inv = 1 / den[-1]
    q = [_ZERO] * max(len(num) - dd, 0)
    for k in range(len(num) - dd - 1, -1, -1):
        c = num[k + dd]
        if c:
            t = c * inv
            q[k] = t
            for j, y in enumerate(den):
                num[k + j] -= t * y
    return _poly_trim(q), _poly_trim(num[:dd])


def _poly_qq_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_qq_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else _ZERO
        y = b[i] if i < len(b) else _ZERO
        out.append(x - y)
    return _poly_trim(out)


@lru_cache(maxsize=None)
def cyclotomic_field(m: int) -> CyclotomicField:
    return CyclotomicField(m)


def root_as_element(z: RootOfUnity, conductor: int) -> CyclotomicNumber:
    """Embed a root of unity into Q(zeta_conductor)."""
    return cyclotomic_field(conductor).embed_root(z)


def cyc_invert(u: CyclotomicNumber) -> CyclotomicNumber:
    """Multiplicative inverse of a nonzero cyclotomic number."""
    return u.inverse()


def ring_for_root(z: RootOfUnity):
    """Coefficient ring for an expansion whose constant is z.

    Orders 1 and 2 live in Q already; larger orders get Q(zeta_m).
    """
    return QQ if z.order <= 2 else cyclotomic_field(z.order)
