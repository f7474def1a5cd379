"""Ramified series: exact fractional exponents over a fixed lattice (1/d)Z.

A PuiseuxSeries stores coefficients for u^shift .. u^(order_u - 1) where
u^d = x, and is known modulo u^order_u.  The shift may be negative (the
derivative of x^(1/2) lives at x^(-1/2)).  The ramification d is fixed per
series; operations on mismatched lattices are rejected, never rescaled.

A series whose stored coefficients are all zero is "known zero modulo
u^order_u", kept distinct from an unknown series.
"""
from __future__ import annotations

from gmpy2 import mpq

from .coeffring import QQ, RootOfUnity, ceil_q, ring_for_root
from .errors import (
    InnerNotSmall,
    InsufficientOuterOrder,
    LogarithmicTerm,
    NonPositiveExponent,
    RingMismatch,
    ZeroSeries,
)
from .series import TruncatedSeries, _mul_lists


class InitialTerm:
    """The seed monomial c * x^q with c a root of unity and q > 0."""

    __slots__ = ("c", "q")

    def __init__(self, c: RootOfUnity, q):
        q = mpq(q)
        if q <= 0:
            raise NonPositiveExponent(f"exponent {q} must be positive")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "q", q)

    def __setattr__(self, *a):
        raise AttributeError("InitialTerm is immutable")

    @property
    def n(self) -> int:
        return int(self.q.numerator)

    @property
    def d(self) -> int:
        return int(self.q.denominator)

    def __eq__(self, other):
        if not isinstance(other, InitialTerm):
            return NotImplemented
        return self.c == other.c and self.q == other.q

    def __hash__(self):
        return hash((self.c, self.q))

    def __repr__(self):
        return f"InitialTerm(c={self.c!r}, q={self.q})"


class Precision:
    """Precision a in the sense of the factor (1 + ...) known mod x^a.

    a is a positive multiple of 1/d; a series with initial exponent q at
    this precision is known mod x^(q+a).
    """

    __slots__ = ("a", "d")

    def __init__(self, a, d: int):
        a = mpq(a)
        if a <= 0:
            raise ValueError("precision must be positive")
        if d % a.denominator != 0:
            raise ValueError(f"precision {a} is not a multiple of 1/{d}")
        self.a = a
        self.d = d

    def u_steps(self, n: int = 0) -> int:
        """Truncation order in u-units for a series with leading u-exponent n."""
        return n + int(self.a * self.d)

    @classmethod
    def from_u_steps(cls, steps: int, n: int, d: int) -> "Precision":
        return cls(mpq(steps - n, d), d)

    def doubled(self) -> "Precision":
        return Precision(2 * self.a, self.d)

    def __eq__(self, other):
        if not isinstance(other, Precision):
            return NotImplemented
        return self.a == other.a and self.d == other.d

    def __repr__(self):
        return f"Precision({self.a}, d={self.d})"


class PuiseuxSeries:
    __slots__ = ("ring", "ramification", "shift", "coeffs", "order_u")

    def __init__(self, ring, ramification: int, shift: int, coeffs, order_u: int):
        assert ramification >= 1
        coeffs = list(coeffs)
        # trim to the stated order and normalize away leading stored zeros
        if shift + len(coeffs) > order_u:
            del coeffs[order_u - shift:]
        lead = 0
        while lead < len(coeffs) and ring.is_zero(coeffs[lead]):
            lead += 1
        if lead:
            shift += lead
            del coeffs[:lead]
        if not coeffs:
            shift = order_u
        else:
            coeffs.extend([ring.zero] * (order_u - shift - len(coeffs)))
        self.ring = ring
        self.ramification = ramification
        self.shift = shift
        self.coeffs = coeffs
        self.order_u = order_u

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring, d: int, order_u: int):
        return cls(ring, d, order_u, [], order_u)

    @classmethod
    def monomial(cls, ring, d: int, coeff, exp_u: int, order_u: int):
        return cls(ring, d, exp_u, [coeff], order_u)

    @classmethod
    def one(cls, ring, d: int, order_u: int):
        return cls.monomial(ring, d, ring.one, 0, order_u)

    @classmethod
    def from_x_series(cls, ts: TruncatedSeries, d: int, ring=None):
        """Lift an integer-exponent x-series onto the u-lattice (x = u^d)."""
        ring = ring or ts.ring
        coeffs = [ring.zero] * ((ts.order - 1) * d + 1)
        same = ring == ts.ring
        for k, c in enumerate(ts.coeffs):
            coeffs[k * d] = c if same else ring.from_rational(c)
        return cls(ring, d, 0, coeffs, ts.order * d)

    # -- basics ---------------------------------------------------------

    @property
    def order_x(self) -> mpq:
        return mpq(self.order_u, self.ramification)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> mpq:
        """Exponent, in x-units, of the lowest nonzero term."""
        if not self.coeffs:
            raise ZeroSeries("zero series has no valuation")
        return mpq(self.shift, self.ramification)

    def _vbound_u(self) -> int:
        """Lower bound for the u-valuation: exact if nonzero, order if zero."""
        return self.shift if self.coeffs else self.order_u

    def leading_coefficient(self):
        if not self.coeffs:
            raise ZeroSeries("zero series has no leading coefficient")
        return self.coeffs[0]

    def coefficient(self, exp) -> object:
        """Coefficient of x^exp (zero if absent; exp must be on the lattice)."""
        exp = mpq(exp)
        j = exp * self.ramification
        assert j.denominator == 1, f"{exp} not on the 1/{self.ramification} lattice"
        i = int(j) - self.shift
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    def nonzero_terms(self):
        """Sorted list of (exponent in x-units, coefficient)."""
        d = self.ramification
        return [
            (mpq(self.shift + i, d), c)
            for i, c in enumerate(self.coeffs)
            if not self.ring.is_zero(c)
        ]

    def __repr__(self):
        terms = self.nonzero_terms()[:4]
        body = " + ".join(f"({c})*x^({e})" for e, c in terms) or "0"
        more = " + ..." if len(self.nonzero_terms()) > 4 else ""
        return f"PuiseuxSeries({body}{more} mod x^({self.order_x}))"

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.ramification == other.ramification
            and self.shift == other.shift
            and self.coeffs == other.coeffs
            and self.order_u == other.order_u
        )

    def _check_compatible(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.ramification != other.ramification:
            raise RingMismatch(
                f"ramification {self.ramification} vs {other.ramification}"
            )

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        order = min(self.order_u, other.order_u)
        shift = min(self._vbound_u(), other._vbound_u(), order)
        out = [self.ring.zero] * (order - shift)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                k = src.shift + i - shift
                if 0 <= k < len(out):
                    out[k] = out[k] + c
        return PuiseuxSeries(self.ring, self.ramification, shift, out, order)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PuiseuxSeries(
            self.ring, self.ramification, self.shift, [-c for c in self.coeffs], self.order_u
        )

    def scale(self, s):
        """Multiply by a scalar (rational or ring element)."""
        if not isinstance(s, type(self.ring.zero)):
            s = self.ring.from_rational(s)
        return PuiseuxSeries(
            self.ring, self.ramification, self.shift, [c * s for c in self.coeffs], self.order_u
        )

    def mul(self, other) -> "PuiseuxSeries":
        self._check_compatible(other)
        order = min(self.order_u + other._vbound_u(), other.order_u + self._vbound_u())
        if not self.coeffs or not other.coeffs:
            return PuiseuxSeries.zero(self.ring, self.ramification, order)
        shift = self.shift + other.shift
        coeffs = _mul_lists(self.ring, self.coeffs, other.coeffs, order - shift)
        return PuiseuxSeries(self.ring, self.ramification, shift, coeffs, order)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self.mul(other)
        return self.scale(other)

    def inverse(self) -> "PuiseuxSeries":
        """Reciprocal: invert the unit factor, negate the leading exponent."""
        if not self.coeffs:
            raise ZeroSeries("cannot invert the zero series")
        from .series import _invert_lists

        inv = _invert_lists(self.ring, self.coeffs, len(self.coeffs))
        w = self.shift
        return PuiseuxSeries(
            self.ring, self.ramification, -w, inv, self.order_u - 2 * w
        )

    # -- calculus ----------------------------------------------------------

    def x_derivative(self) -> "PuiseuxSeries":
        """Termwise d/dx; truncation drops by one x-unit."""
        d = self.ramification
        coeffs = [c * mpq(self.shift + i, d) for i, c in enumerate(self.coeffs)]
        return PuiseuxSeries(self.ring, d, self.shift - d, coeffs, self.order_u - d)

    def x_integrate(self) -> "PuiseuxSeries":
        """Termwise antiderivative with zero constant; rejects x^-1 terms."""
        d = self.ramification
        coeffs = []
        for i, c in enumerate(self.coeffs):
            j = self.shift + i
            if j == -d:
                if not self.ring.is_zero(c):
                    raise LogarithmicTerm(
                        "nonzero x^-1 coefficient: invalid seed or truncation bug"
                    )
                coeffs.append(self.ring.zero)
            else:
                coeffs.append(c * mpq(d, j + d))
        return PuiseuxSeries(self.ring, d, self.shift + d, coeffs, self.order_u + d)

    # -- precision plumbing -------------------------------------------------

    def truncated(self, order_u: int) -> "PuiseuxSeries":
        assert order_u <= self.order_u
        return PuiseuxSeries(
            self.ring, self.ramification, self.shift, list(self.coeffs), order_u
        )

    def as_exact(self, order_u: int) -> "PuiseuxSeries":
        """Re-stamp a polynomial known exactly to a higher stated order.

        Only valid when the caller knows every omitted coefficient is zero,
        e.g. the solver's iterates, which are exact polynomials.
        """
        assert order_u >= self.order_u
        return PuiseuxSeries(
            self.ring, self.ramification, self.shift, list(self.coeffs), order_u
        )

    def with_ring(self, ring) -> "PuiseuxSeries":
        """Map coefficients into a larger coefficient ring (explicit embed)."""
        if ring == self.ring:
            return self
        if self.ring != QQ:
            raise RingMismatch("only rational coefficients can be embedded")
        return PuiseuxSeries(
            ring,
            self.ramification,
            self.shift,
            [ring.from_rational(c) for c in self.coeffs],
            self.order_u,
        )

    def with_ramification(self, d2: int) -> "PuiseuxSeries":
        """Re-express on a finer lattice (explicit; d2 must be a multiple of d)."""
        d = self.ramification
        if d2 == d:
            return self
        assert d2 % d == 0
        r = d2 // d
        coeffs = [self.ring.zero] * (len(self.coeffs) * r)
        for i, c in enumerate(self.coeffs):
            coeffs[i * r] = c
        return PuiseuxSeries(self.ring, d2, self.shift * r, coeffs, self.order_u * r)


def from_initial_term(T: InitialTerm) -> PuiseuxSeries:
    """The seed monomial at precision 1/d: known mod x^(q + 1/d)."""
    ring = ring_for_root(T.c)
    c = ring.embed_root(T.c)
    return PuiseuxSeries.monomial(ring, T.d, c, T.n, T.n + 1)


def valuation(P: PuiseuxSeries) -> mpq:
    return P.valuation()


def outer_substitute(A: TruncatedSeries, P: PuiseuxSeries, target_x, horner=False) -> PuiseuxSeries:
    """Evaluate the integer-exponent series A at the Puiseux series P.

    Returns A(P) modulo x^target_x.  A must carry at least
    floor(target_x / v(P)) + 1 terms; fewer raises InsufficientOuterOrder
    rather than silently truncating.
    """
    target_x = mpq(target_x)
    v = P.valuation()  # ZeroSeries propagates for the zero inner
    if v <= 0:
        raise InnerNotSmall("substitution requires positive inner valuation")
    # outer terms with k*v < target can contribute; require exactly those
    need = max(ceil_q(target_x / v), 1)
    if A.order < need:
        raise InsufficientOuterOrder(
            f"outer series has {A.order} terms; needs {need} for order {target_x}"
        )
    ring, d = P.ring, P.ramification
    target_u = ceil_q(target_x * d)
    if ring == A.ring:
        outer = TruncatedSeries(ring, A.coeffs, var="u")
    else:
        outer = TruncatedSeries(ring, [ring.from_rational(c) for c in A.coeffs], var="u")
    inner_order = min(P.order_u, target_u)
    inner = TruncatedSeries(
        ring, [ring.zero] * P.shift + P.coeffs, order=inner_order, var="u"
    )
    if horner:
        comp = outer.compose_horner(inner, target_u)
    else:
        comp = outer.compose_brent_kung(inner, target_u)
    return PuiseuxSeries(ring, d, 0, comp.coeffs, comp.order)
