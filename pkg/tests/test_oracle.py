from fractions import Fraction

import pytest
from gmpy2 import mpq

from x0n.errors import InsufficientPrecision, NotPrime
from x0n.oracle import (
    ModularPolynomial,
    _phi_from_qexp,
    cusp_expansions_prime,
    infinity_cusp_check,
    j_inverse_qexp,
    phi_reconstruct_prime,
)


# --- brute-force oracle, standard library only -----------------------------

def brute_1_over_j(M):
    """1/j mod q^M from scratch: explicit divisor sums, explicit eta product,
    schoolbook arithmetic on Fractions."""

    def conv(a, b):
        out = [Fraction(0)] * M
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if i + j >= M:
                        break
                    out[i + j] += x * y
        return out

    sigma3 = [sum(d ** 3 for d in range(1, n + 1) if n % d == 0) for n in range(M)]
    e4 = [Fraction(1)] + [Fraction(240 * s) for s in sigma3[1:]]
    eta = [Fraction(1)] + [Fraction(0)] * (M - 1)
    for n in range(1, M):  # multiply the factors (1 - q^n) one by one
        factor = [Fraction(0)] * M
        factor[0] = Fraction(1)
        if n < M:
            factor[n] = Fraction(-1)
        eta = conv(eta, factor)
    delta_over_q = eta
    for _ in range(23):
        delta_over_q = conv(delta_over_q, eta)
    e4cubed = conv(conv(e4, e4), e4)
    inv = [Fraction(0)] * M  # schoolbook reciprocal of e4cubed
    inv[0] = Fraction(1)
    for n in range(1, M):
        acc = Fraction(0)
        for k in range(1, n + 1):
            acc += e4cubed[k] * inv[n - k]
        inv[n] = -acc
    body = conv(delta_over_q, inv)
    return [Fraction(0)] + body[: M - 1]


def test_j_inverse_examples():
    assert j_inverse_qexp(2).coeffs == [mpq(0), mpq(1)]
    assert j_inverse_qexp(3).coeffs == [mpq(0), mpq(1), mpq(-744)]
    assert j_inverse_qexp(4).coeffs == [mpq(0), mpq(1), mpq(-744), mpq(356652)]


def test_j_inverse_against_brute_force():
    M = 24
    got = j_inverse_qexp(M).coeffs
    want = brute_1_over_j(M)
    assert [Fraction(int(c.numerator), int(c.denominator)) for c in got] == want


def test_j_inverse_integrality():
    xs = j_inverse_qexp(128)
    assert xs.coeffs[0] == 0 and xs.coeffs[1] == 1
    assert all(c.denominator == 1 for c in xs.coeffs)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_infinity_cusp_check(N):
    ok, report = infinity_cusp_check(N, 6, 30)
    assert ok, report


def test_infinity_cusp_check_requires_precision():
    with pytest.raises(InsufficientPrecision):
        infinity_cusp_check(2, 2, 30)


def test_cusp_expansions_prime_n2():
    exps = cusp_expansions_prime(2, 3)
    assert len(exps) == 3
    leads = [(r.h.valuation(), r.h.leading_coefficient()) for r in exps]
    assert (mpq(2), mpq(1)) in leads
    assert (mpq(1, 2), mpq(1)) in leads
    assert (mpq(1, 2), mpq(-1)) in leads


def test_cusp_expansions_prime_n3():
    exps = cusp_expansions_prime(3, 3)
    assert len(exps) == 4
    seeds = {(r.initial_term.c, r.initial_term.q) for r in exps}
    assert len(seeds) == 4  # pairwise distinct initial terms


def test_cusp_expansions_rejects_composites():
    with pytest.raises(NotPrime):
        cusp_expansions_prime(4, 2)


@pytest.mark.parametrize("N", [2, 3])
def test_phi_reconstruction(N):
    poly = phi_reconstruct_prime(N)
    assert isinstance(poly, ModularPolynomial)
    assert poly.is_symmetric()
    assert poly.degree() == N + 1
    assert poly.coeffs == _phi_from_qexp(N)  # already enforced internally
    assert poly.coeffs[(N + 1, 0)] == 1 and poly.coeffs[(0, N + 1)] == 1


def test_phi_json_shape():
    poly = phi_reconstruct_prime(2)
    obj = poly.to_json_obj()
    assert all(set(row) == {"exp_x1", "exp_x2", "coefficient"} for row in obj)
    assert all(isinstance(row["coefficient"], str) for row in obj)
    assert len(obj) == len(poly.coeffs)
