"""Independent verification of expansions through q-expansions of 1/j.

Nothing here trusts the solver's series: 1/j is rebuilt from first
principles as Delta/E4^3 with E4 = 1 + 240*sum sigma_3(n) q^n and
Delta = q * prod(1-q^n)^24 (pentagonal-number product), so every expected
number in the test suite reduces to divisor sums and an eta product.

The reciprocal-j modular polynomial for N in {2, 3} is reconstructed two
independent ways (from cusp expansions, and by exact linear algebra on
q-expansions of j(tau), j(N tau)) and must agree coefficient-for-
coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz

from .coeffring import QQ, RootOfUnity, cyclotomic_field
from .errors import (
    InsufficientPrecision,
    NotPrime,
    OracleMismatch,
    PrecisionTooLow,
)
from .puiseux import InitialTerm, PuiseuxSeries
from .series import TruncatedSeries
from .solver import ExpansionResult, Level, puiseux_x0n

QSeries = TruncatedSeries  # over Q, in the nome variable q_nome


def _sigma3_sums(M: int) -> list:
    s = [0] * M
    for d in range(1, M):
        d3 = d * d * d
        for n in range(d, M, d):
            s[n] += d3
    return s


def _eta_product(M: int) -> list:
    """prod_{n>=1} (1 - q^n) mod q^M via the pentagonal number theorem."""
    c = [mpq(0)] * M
    c[0] = mpq(1)
    m = 1
    while True:
        p1 = m * (3 * m - 1) // 2
        p2 = m * (3 * m + 1) // 2
        if p1 >= M and p2 >= M:
            break
        sign = mpq(-1 if m % 2 else 1)
        if p1 < M:
            c[p1] = sign
        if p2 < M:
            c[p2] = sign
        m += 1
    return c


def _eisenstein4(M: int) -> TruncatedSeries:
    coeffs = [mpq(240 * s) for s in _sigma3_sums(M)]
    coeffs[0] = mpq(1)
    return TruncatedSeries(QQ, coeffs)


def _delta_over_q(M: int) -> TruncatedSeries:
    eta = TruncatedSeries(QQ, _eta_product(M))
    e2 = eta.mul(eta, M)
    e4 = e2.mul(e2, M)
    e8 = e4.mul(e4, M)
    e16 = e8.mul(e8, M)
    return e16.mul(e8, M)


def j_inverse_qexp(M: int) -> QSeries:
    """1/j as a q-expansion mod q^M, built from E4^3 and Delta."""
    assert M >= 2
    body = M - 1
    p24 = _delta_over_q(body)
    e4 = _eisenstein4(body)
    e4c = e4.mul(e4, body).mul(e4, body)
    x_body = p24.mul(e4c.invert(body), body)
    return TruncatedSeries(QQ, [mpq(0)] + x_body.coeffs, var="q")


def _spread(coeffs, N: int, M: int) -> list:
    """Substitute q -> q^N in a coefficient list, truncated mod q^M."""
    out = [mpq(0)] * M
    for i, c in enumerate(coeffs):
        if i * N >= M:
            break
        out[i * N] = c
    return out


def infinity_cusp_check(N: int, k: int, M: int) -> tuple[bool, str]:
    """Exact test of h(x(q)) = x(q^N) mod q^M for the cusp seed (1, N).

    Needs x-precision N + 2^k >= M; anything less is refused rather than
    silently compared on fewer terms.
    """
    assert N >= 1 and M >= 2
    if N + 2 ** k < M:
        raise InsufficientPrecision(
            f"k={k} gives x-order {N + 2 ** k} < requested q-order {M}"
        )
    res = puiseux_x0n(InitialTerm(RootOfUnity(1), N), k, level=Level(N))
    h = res.h
    hx = TruncatedSeries(QQ, [QQ.zero] * h.shift + h.coeffs, order=M, var="q")
    xq = j_inverse_qexp(M)
    lhs = hx.compose_brent_kung(xq, M)
    rhs = _spread(xq.coeffs, N, M)
    for i in range(M):
        if lhs.coeffs[i] != rhs[i]:
            return False, (
                f"first mismatch at q^{i}: h(x(q)) has {lhs.coeffs[i]}, "
                f"x(q^{N}) has {rhs[i]}"
            )
    return True, f"h(x(q)) = x(q^{N}) mod q^{M}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def cusp_expansions_prime(N: int, k: int) -> list[ExpansionResult]:
    """All N+1 cusp expansions of a prime level: (1, N) and (zeta_N^s, 1/N)."""
    if not _is_prime(N):
        raise NotPrime(f"{N} is not prime")
    out = [puiseux_x0n(InitialTerm(RootOfUnity(1), N), k, level=Level(N))]
    for s in range(N):
        out.append(
            puiseux_x0n(InitialTerm(RootOfUnity(N, s), mpq(1, N)), k, level=Level(N))
        )
    return out


@dataclass
class ModularPolynomial:
    level: Level
    coeffs: dict  # (exp_x1, exp_x2) -> int

    def degree(self) -> int:
        return max(a for a, _ in self.coeffs)

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get((b, a)) == c for (a, b), c in self.coeffs.items())

    def to_json_obj(self) -> list:
        return [
            {"exp_x1": a, "exp_x2": b, "coefficient": str(c)}
            for (a, b), c in sorted(self.coeffs.items())
        ]


def _qj_series(L: int) -> TruncatedSeries:
    """q*j(q) mod q^L: the reciprocal of the unit part of the 1/j expansion."""
    x = j_inverse_qexp(L + 1)
    return TruncatedSeries(QQ, x.coeffs[1:]).invert(L)


def _phi_from_qexp(N: int, extra: int = 40) -> dict:
    """Reconstruct phi_N by exact linear algebra on q-expansions.

    Unknown integer coefficients c_ab of j^a * j(N.)^b (a, b <= N+1) must
    cancel in every power of q; the nullspace of that linear system is
    one-dimensional and spanned by phi_N.
    """
    deg = N + 1
    shift = (N + 1) ** 2  # deepest pole among the monomials
    L = shift + extra
    qj = _qj_series(L)
    qjN = TruncatedSeries(QQ, _spread(qj.coeffs, N, L))
    pows_a = [TruncatedSeries.one(QQ, L)]
    pows_b = [TruncatedSeries.one(QQ, L)]
    for _ in range(deg):
        pows_a.append(pows_a[-1].mul(qj, L))
        pows_b.append(pows_b[-1].mul(qjN, L))
    monomials = [(a, b) for a in range(deg + 1) for b in range(deg + 1)]
    columns = []
    for a, b in monomials:
        prod = pows_a[a].mul(pows_b[b], L).coeffs  # q^(a+Nb) * j^a jN^b
        off = shift - (a + N * b)  # align all rows at exponent -shift
        col = [mpq(0)] * L
        for i, c in enumerate(prod):
            if off + i < L:
                col[off + i] = c
        columns.append(col)
    equations = [[col[t] for col in columns] for t in range(L)]
    basis = _nullspace_qq(equations, len(monomials))
    if len(basis) != 1:
        raise OracleMismatch(
            f"q-expansion relation space has dimension {len(basis)}, expected 1"
        )
    vec = basis[0]
    den = mpz(1)
    for v in vec:
        den = gmpy2.lcm(den, v.denominator)
    ints = [mpz(v * den) for v in vec]
    content = mpz(0)
    for v in ints:
        content = gmpy2.gcd(content, v)
    ints = [v // content for v in ints]
    lead = ints[monomials.index((deg, 0))]
    if lead == 0:
        raise OracleMismatch("oracle relation is not monic in j")
    if lead < 0:
        ints = [-v for v in ints]
    return {m: int(v) for m, v in zip(monomials, ints) if v}


def _nullspace_qq(equations: list, nvars: int) -> list:
    rows = [list(r) for r in equations]
    pivots = []
    r = 0
    for c in range(nvars):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(nvars) if c not in pivot_set):
        v = [mpq(0)] * nvars
        v[fc] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def phi_reconstruct_prime(N: int, steps: int = 5) -> ModularPolynomial:
    """Reconstruct phi_N (N in {2, 3}) from cusp expansions, cross-checked.

    Forms the product of (Y - 1/h_i) over the N+1 cusp expansions on a
    common lattice and conductor; every elementary symmetric function must
    terminate as a polynomial in 1/x of degree <= N+1, which yields
    integer phi_N coefficients.  The result must match the q-expansion
    reconstruction exactly.
    """
    if not _is_prime(N):
        raise NotPrime(f"{N} is not prime")
    if N not in (2, 3):
        raise ValueError("cusp reconstruction is implemented for N in {2, 3}")
    deg = N + 1
    ring = QQ if N == 2 else cyclotomic_field(N)
    expansions = cusp_expansions_prime(N, steps)
    recips = [
        r.h.with_ring(ring).with_ramification(N).inverse() for r in expansions
    ]
    # order for the exact constant 1: wide enough that it never binds
    big = max(r.order_u for r in recips) + N * deg * deg + sum(
        -r.shift for r in recips
    )
    poly = [PuiseuxSeries.one(ring, N, big)]
    for rc in recips:
        nxt = []
        for j in range(len(poly) + 1):
            term = poly[j - 1] if j >= 1 else None
            if j < len(poly):
                prod = poly[j].mul(rc)
                term = -prod if term is None else term - prod
            nxt.append(term)
        poly = nxt
    phi: dict = {}
    for ydeg, cj in enumerate(poly):
        if cj.order_x < 1:
            raise PrecisionTooLow(
                f"Y^{ydeg} coefficient tracked only to x^{cj.order_x}"
            )
        for exp, coeff in cj.nonzero_terms():
            if exp.denominator != 1 or exp > 0 or exp < -deg:
                raise PrecisionTooLow(
                    f"Y^{ydeg} coefficient has stray term at x^{exp}"
                )
            if ring != QQ:
                if not coeff.is_rational():
                    raise PrecisionTooLow(
                        f"Y^{ydeg} coefficient at x^{exp} is irrational: {coeff}"
                    )
                coeff = coeff.rational_part()
            if coeff.denominator != 1:
                raise OracleMismatch(
                    f"phi coefficient at X^{-exp} Y^{ydeg} is not integral: {coeff}"
                )
            phi[(int(-exp), ydeg)] = int(coeff)
    reference = _phi_from_qexp(N)
    if phi != reference:
        raise OracleMismatch(
            "cusp-expansion reconstruction disagrees with q-expansion oracle: "
            f"{phi} vs {reference}"
        )
    return ModularPolynomial(level=Level(N), coeffs=phi)
