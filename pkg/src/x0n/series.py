"""Dense truncated power series over a commutative ring with unit inversion.

A TruncatedSeries of order M stores exactly M coefficients and is known
modulo u^M.  Every operation returns the minimum truncation order implied
by its inputs and never overstates precision.

Multiplication ladder: schoolbook for short operands, Karatsuba above a
cutoff, and (over Q) Kronecker substitution into one large GMP integer
product, segmented so that series whose coefficient sizes grow with the
index do not pay quadratic padding waste.
"""
from __future__ import annotations

import gmpy2
from gmpy2 import mpq, mpz

from .coeffring import RationalField
from .errors import (
    BadConstantTerm,
    InnerNotSmall,
    NonUnitLeadingCoefficient,
    RingMismatch,
)

_NAIVE_CUTOFF = 48
_KRONECKER_MIN = 48


# ---------------------------------------------------------------------------
# Kronecker substitution over Z: pack signed coefficients into one integer.
# ---------------------------------------------------------------------------

def _pack_signed(vals, slot):
    """Sum of vals[i] * 2^(slot*i) for signed vals with |v| < 2^(slot-1)."""
    mask = (mpz(1) << slot) - 1
    digs = []
    carry = 0
    for v in vals:
        t = v + carry
        d = t & mask
        digs.append(d)
        carry = (t - d) >> slot
    packed = gmpy2.pack(digs, slot)
    if carry:
        packed += mpz(carry) << (slot * len(vals))
    return packed


def _unpack_signed(x, slot, n):
    """Recover the first n signed coefficients, each |c| < 2^(slot-1), from x.

    Slots beyond n (a truncated product's discarded tail) are masked away;
    the borrow encoding keeps lower slots valid regardless of the tail.
    """
    if x < 0 or x.bit_length() > slot * (n + 1):
        # keep one spare slot: the borrow out of coefficient n-1 lands there
        x &= (mpz(1) << (slot * (n + 1))) - 1
    half = mpz(1) << (slot - 1)
    offset = gmpy2.pack([half] * n, slot)
    y = x + offset
    digs = gmpy2.unpack(y, slot)
    assert len(digs) >= n
    return [d - half for d in digs[:n]]


def _pack_pair_mul(aseg, bseg, n_out):
    """First n_out coefficients of aseg*bseg via one packed GMP product."""
    mba = max((v.bit_length() for v in aseg if v), default=0)
    mbb = max((v.bit_length() for v in bseg if v), default=0)
    if not mba or not mbb:
        return None
    slot = mba + mbb + min(len(aseg), len(bseg)).bit_length() + 2
    prod = _pack_signed(aseg, slot) * _pack_signed(bseg, slot)
    return _unpack_signed(prod, slot, min(len(aseg) + len(bseg) - 1, n_out))


def _intpoly_mul_trunc(A, B, m):
    """First m coefficients of the product of integer coefficient lists.

    One halving step separates the large-coefficient upper halves from the
    lower ones (three packed products instead of one) so coefficient-size
    growth along the index does not inflate every packing slot; GMP's
    large-product throughput favors few big multiplications over finer
    segmentation.
    """
    A, B = A[:m], B[:m]
    va = next((i for i, v in enumerate(A) if v), len(A))
    vb = next((i for i, v in enumerate(B) if v), len(B))
    A, B = A[va:], B[vb:]
    out = [mpz(0)] * m
    m_eff = min(m - va - vb, len(A) + len(B) - 1 if A and B else 0)
    if m_eff <= 0:
        return out
    h = (m_eff + 1) // 2  # ceil: the dropped hi*hi pair starts at 2h >= m_eff
    if h < 32:
        parts = [(A, B, 0)]
    else:
        parts = [
            (A[:h], B[:h], 0),
            (A[:h], B[h:m_eff], h),
            (A[h:m_eff], B[:h], h),
        ]
    for aseg, bseg, off in parts:
        if not aseg or not bseg:
            continue
        usable = m_eff - off
        coeffs = _pack_pair_mul(aseg[:usable], bseg[:usable], usable)
        if coeffs is None:
            continue
        shift = off + va + vb
        for k, c in enumerate(coeffs):
            if c:
                out[shift + k] += c
    return out


def _lcm_denominators(vals):
    l = mpz(1)
    for v in vals:
        d = v.denominator
        if d != 1:
            l = gmpy2.lcm(l, d)
    return l


def _mul_qq_kronecker(a, b, m):
    """Truncated product of mpq lists via scaled integer Kronecker, or None."""
    a, b = a[:m], b[:m]
    da, db = _lcm_denominators(a), _lcm_denominators(b)
    maxbits = max(
        max((v.numerator.bit_length() for v in a), default=0),
        max((v.numerator.bit_length() for v in b), default=0),
    )
    if (da.bit_length() + db.bit_length()) > 2 * maxbits + 512:
        return None  # denominator clearing would dominate; let Karatsuba handle it
    A = [v.numerator * (da // v.denominator) for v in a]
    B = [v.numerator * (db // v.denominator) for v in b]
    res = _intpoly_mul_trunc(A, B, m)
    den = da * db
    if den == 1:
        return [mpq(v) for v in res]
    return [mpq(v, den) for v in res]


# ---------------------------------------------------------------------------
# Ring-generic list arithmetic.
# ---------------------------------------------------------------------------

def _add_lists(ring, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _mul_naive(ring, a, b, m):
    out = [ring.zero] * m
    if len(a) > len(b):
        a, b = b, a
    for i, x in enumerate(a):
        if i >= m:
            break
        if ring.is_zero(x):
            continue
        for j in range(min(len(b), m - i)):
            y = b[j]
            if not ring.is_zero(y):
                out[i + j] = out[i + j] + x * y
    return out


def _mul_karatsuba_full(ring, a, b):
    na, nb = len(a), len(b)
    if not na or not nb:
        return []
    if min(na, nb) <= _NAIVE_CUTOFF:
        return _mul_naive(ring, a, b, na + nb - 1)
    h = max(na, nb) // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _mul_karatsuba_full(ring, a0, b0) if a0 and b0 else []
    z2 = _mul_karatsuba_full(ring, a1, b1) if a1 and b1 else []
    s0, s1 = _add_lists(ring, a0, a1), _add_lists(ring, b0, b1)
    z1 = _mul_karatsuba_full(ring, s0, s1)
    out = [ring.zero] * (na + nb - 1)
    for k, v in enumerate(z0):
        out[k] = out[k] + v
        if k < len(z1):
            z1[k] = z1[k] - v
    for k, v in enumerate(z2):
        out[2 * h + k] = out[2 * h + k] + v
        if k < len(z1):
            z1[k] = z1[k] - v
    for k, v in enumerate(z1):
        if h + k < len(out):
            out[h + k] = out[h + k] + v
    return out


def _mul_lists(ring, a, b, m):
    """First m coefficients of a*b over ring."""
    if m <= 0:
        return []
    if isinstance(ring, RationalField) and m >= _KRONECKER_MIN:
        res = _mul_qq_kronecker(a, b, m)
        if res is not None:
            return res
    if min(len(a), len(b), m) <= _NAIVE_CUTOFF:
        return _mul_naive(ring, a, b, m)
    full = _mul_karatsuba_full(ring, a[:m], b[:m])
    full = full[:m]
    full.extend([ring.zero] * (m - len(full)))
    return full


def _invert_lists(ring, a, m):
    """Newton inversion: first m coefficients of 1/a (a[0] a unit)."""
    x = [ring.invert(a[0])]
    two = ring.from_int(2)
    k = 1
    while k < m:
        k2 = min(2 * k, m)
        ax = _mul_lists(ring, a[:k2], x, k2)
        e = [-c for c in ax]
        e[0] = e[0] + two
        x = _mul_lists(ring, x, e, k2)
        k = k2
    return x


# ---------------------------------------------------------------------------
# The series type.
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Coefficients c_0..c_{M-1} over a ring, known modulo u^M.

    The variable tag is documentation only and is ignored by arithmetic
    and equality.
    """

    __slots__ = ("ring", "coeffs", "var")

    def __init__(self, ring, coeffs, order=None, var="x"):
        coeffs = list(coeffs)
        if order is not None:
            if len(coeffs) > order:
                del coeffs[order:]
            elif len(coeffs) < order:
                coeffs.extend([ring.zero] * (order - len(coeffs)))
        if not coeffs:
            raise ValueError("a TruncatedSeries needs a positive order")
        self.ring = ring
        self.coeffs = coeffs
        self.var = var

    @classmethod
    def from_rationals(cls, ring, values, order=None, var="x"):
        return cls(ring, [ring.from_rational(v) for v in values], order, var)

    @classmethod
    def zero(cls, ring, order, var="x"):
        return cls(ring, [ring.zero] * order, var=var)

    @classmethod
    def one(cls, ring, order, var="x"):
        c = [ring.zero] * order
        c[0] = ring.one
        return cls(ring, c, var=var)

    @classmethod
    def identity(cls, ring, order, var="x"):
        """The series u, to the given order (order >= 2)."""
        c = [ring.zero] * order
        c[1] = ring.one
        return cls(ring, c, var=var)

    @property
    def order(self):
        return len(self.coeffs)

    def prefix(self, order):
        assert order <= self.order
        return TruncatedSeries(self.ring, self.coeffs[:order], var=self.var)

    def valuation_index(self):
        """Index of the first nonzero coefficient, or None if all stored are 0."""
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return None

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order > 6 else ""
        return f"TruncatedSeries[{self.var}; mod {self.var}^{self.order}]([{head}{tail}])"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check_ring(other)
        m = min(self.order, other.order)
        return TruncatedSeries(
            self.ring, [a + b for a, b in zip(self.coeffs[:m], other.coeffs[:m])], var=self.var
        )

    def __sub__(self, other):
        self._check_ring(other)
        m = min(self.order, other.order)
        return TruncatedSeries(
            self.ring, [a - b for a, b in zip(self.coeffs[:m], other.coeffs[:m])], var=self.var
        )

    def __neg__(self):
        return TruncatedSeries(self.ring, [-a for a in self.coeffs], var=self.var)

    def scale(self, s):
        return TruncatedSeries(self.ring, [c * s for c in self.coeffs], var=self.var)

    def mul(self, other, order=None):
        """Product modulo u^order; order is clamped to min available orders."""
        self._check_ring(other)
        m = min(self.order, other.order)
        if order is not None:
            m = min(m, order)
        return TruncatedSeries(self.ring, _mul_lists(self.ring, self.coeffs, other.coeffs, m), var=self.var)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.mul(other)
        return self.scale(other)

    def invert(self, order=None):
        """Newton-iteration inverse modulo u^order (doubles correct terms each pass)."""
        ring = self.ring
        if ring.is_zero(self.coeffs[0]):
            raise NonUnitLeadingCoefficient("constant term is not a unit")
        m = self.order if order is None else min(order, self.order)
        return TruncatedSeries(ring, _invert_lists(ring, self.coeffs, m), var=self.var)

    def sqrt_one_plus(self, order=None):
        """Square root with constant term 1, via B <- (B + A/B)/2."""
        ring = self.ring
        if self.coeffs[0] != ring.one:
            raise BadConstantTerm("square root requires constant term 1")
        m = self.order if order is None else min(order, self.order)
        half = ring.invert(ring.from_int(2))
        b = [ring.one]
        k = 1
        while k < m:
            k2 = min(2 * k, m)
            binv = _invert_lists(ring, b + [ring.zero] * (k2 - len(b)), k2)
            ab = _mul_lists(ring, self.coeffs[:k2], binv, k2)
            b = b + [ring.zero] * (k2 - len(b))
            b = [(x + y) * half for x, y in zip(b, ab)]
            k = k2
        return TruncatedSeries(ring, b, var=self.var)

    # -- composition ------------------------------------------------------

    def _compose_setup(self, inner, order):
        self._check_ring(inner)
        ring = self.ring
        if not ring.is_zero(inner.coeffs[0]):
            raise InnerNotSmall("inner series must have zero constant term")
        v = inner.valuation_index()
        t_out = min(order, self.order * (v if v is not None else inner.order))
        j1 = None
        for j in range(1, self.order):
            if not ring.is_zero(self.coeffs[j]):
                j1 = j
                break
        if j1 is not None:
            veff = v if v is not None else inner.order
            t_out = min(t_out, inner.order + (j1 - 1) * veff)
        if v is None:
            # inner is zero to its stated order: composition is the constant term
            out = [ring.zero] * t_out
            if t_out:
                out[0] = self.coeffs[0]
            return None, t_out, TruncatedSeries(ring, out, var=self.var)
        k_eff = min(self.order, (t_out + v - 1) // v) if t_out > 0 else 1
        return (v, k_eff), t_out, None

    def compose_horner(self, inner, order):
        """self(inner) modulo u^order by Horner; quadratic-time reference."""
        setup, t_out, early = self._compose_setup(inner, order)
        if early is not None:
            return early
        v, k_eff = setup
        ring = self.ring
        a, bc = self.coeffs, inner.coeffs
        acc = [a[k_eff - 1]] if k_eff >= 1 else [ring.zero]
        for k in range(k_eff - 2, -1, -1):
            t_k = t_out - k * v
            acc = _mul_lists(ring, acc, bc, t_k)
            acc[0] = acc[0] + a[k]
        acc = acc[:t_out]
        acc.extend([ring.zero] * (t_out - len(acc)))
        return TruncatedSeries(ring, acc, var=self.var)

    def compose_brent_kung(self, inner, order):
        """self(inner) modulo u^order by baby-step/giant-step block evaluation.

        Splits the outer coefficients into ~sqrt(K) blocks of size r, where K
        is the number of outer terms that can reach the target order; the
        powers inner^2..inner^r are the baby steps, and a Horner pass in
        inner^r combines the blocks.
        """
        setup, t_out, early = self._compose_setup(inner, order)
        if early is not None:
            return early
        v, k_eff = setup
        ring = self.ring
        if k_eff <= 4 or t_out <= 16:
            return self.compose_horner(inner, order)
        r = gmpy2.isqrt(k_eff)
        if r * r < k_eff:
            r += 1
        r = int(r)
        bc = inner.coeffs
        powers = [None, bc[:t_out]]
        for j in range(2, r + 1):
            powers.append(_mul_lists(ring, powers[-1], bc, t_out))
        a = self.coeffs
        nblocks = (k_eff + r - 1) // r
        zero = ring.zero

        def eval_block(i, t):
            out = [zero] * t
            for j in range(min(r, k_eff - i * r)):
                s = a[i * r + j]
                if ring.is_zero(s):
                    continue
                if j == 0:
                    out[0] = out[0] + s
                    continue
                pw = powers[j]
                lo = j * v  # leading zeros of inner^j
                hi = min(t, len(pw))
                if lo < hi:
                    out[lo:hi] = [x + s * y for x, y in zip(out[lo:hi], pw[lo:hi])]
            return out

        giant = powers[r]
        acc = eval_block(nblocks - 1, max(t_out - (nblocks - 1) * r * v, 1))
        for i in range(nblocks - 2, -1, -1):
            t_i = t_out - i * r * v
            acc = _mul_lists(ring, acc, giant, t_i)
            blk = eval_block(i, t_i)
            acc = [x + y for x, y in zip(acc, blk)]
        acc = acc[:t_out]
        acc.extend([zero] * (t_out - len(acc)))
        return TruncatedSeries(ring, acc, var=self.var)
