import random

import pytest
from gmpy2 import mpq

from x0n.coeffring import QQ, cyclotomic_field
from x0n.errors import (
    BadConstantTerm,
    InnerNotSmall,
    NonUnitLeadingCoefficient,
    RingMismatch,
)
from x0n.series import (
    TruncatedSeries,
    _mul_karatsuba_full,
    _mul_naive,
    _mul_qq_kronecker,
)


def qq(values, order=None):
    return TruncatedSeries.from_rationals(QQ, values, order)


def test_mul_examples():
    a = qq([1, 1], 3)  # 1 + u mod u^3
    b = qq([1, -1], 3)
    assert a.mul(b, 3) == qq([1, 0, -1])

    f = qq([1, 60, 39780])
    assert f.mul(f, 3) == qq([1, 120, 83160])

    one = TruncatedSeries.one(QQ, 5)
    g = qq([3, 1, 4, 1, 5])
    assert g.mul(one, 5) == g


def test_mul_ring_mismatch():
    a = qq([1, 2])
    b = TruncatedSeries.from_rationals(cyclotomic_field(3), [1, 2])
    with pytest.raises(RingMismatch):
        a.mul(b)


def test_mul_order_is_min_of_inputs():
    a = qq([1, 1, 1])          # known mod u^3
    b = qq([1, 2, 3, 4, 5])    # known mod u^5
    assert a.mul(b, 5).order == 3
    assert a.mul(b).order == 3


def _random_qq(rng, n, denmax=6):
    return [mpq(rng.randint(-99, 99), rng.randint(1, denmax)) for _ in range(n)]


@pytest.mark.parametrize("seed", range(6))
def test_mul_strategies_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(50, 170)
    m = rng.randint(40, n)
    a, b = _random_qq(rng, n), _random_qq(rng, n)
    ref = _mul_naive(QQ, a, b, m)
    kara = _mul_karatsuba_full(QQ, a[:m], b[:m])[:m]
    kara += [mpq(0)] * (m - len(kara))
    assert kara == ref
    kron = _mul_qq_kronecker(a, b, m)
    assert kron == ref


def test_kronecker_handles_big_and_sparse():
    rng = random.Random(42)
    a = [mpq(0)] * 200
    b = [mpq(0)] * 200
    for _ in range(30):
        a[rng.randrange(200)] = mpq(rng.randint(-(10**50), 10**50))
        b[rng.randrange(200)] = mpq(rng.getrandbits(200) - (1 << 199))
    assert _mul_qq_kronecker(a, b, 200) == _mul_naive(QQ, a, b, 200)


def test_invert_examples():
    a = qq([1, -1], 4)
    assert a.invert(4) == qq([1, 1, 1, 1])

    b = qq([1, 744], 3)
    inv = b.invert(3)
    assert inv == qq([1, -744, 553536])
    assert b.mul(inv, 3) == TruncatedSeries.one(QQ, 3)

    c = qq([2], 2)
    assert c.invert(2) == qq([mpq(1, 2), 0])


def test_invert_requires_unit():
    with pytest.raises(NonUnitLeadingCoefficient):
        qq([0, 1]).invert(2)


@pytest.mark.parametrize("seed", range(4))
def test_invert_round_trip(seed):
    rng = random.Random(10 + seed)
    n = rng.randint(8, 80)
    a = _random_qq(rng, n)
    if not a[0]:
        a[0] = mpq(3)
    s = qq(a)
    assert s.mul(s.invert(n), n) == TruncatedSeries.one(QQ, n)


def test_sqrt_examples():
    assert TruncatedSeries.one(QQ, 4).sqrt_one_plus(4) == TruncatedSeries.one(QQ, 4)

    a = qq([1, -1728], 3)
    assert a.sqrt_one_plus(3) == qq([1, -864, -373248])

    sq = qq([1, 2, 1], 3)  # (1+u)^2
    assert sq.sqrt_one_plus(3) == qq([1, 1, 0])


def test_sqrt_requires_one():
    with pytest.raises(BadConstantTerm):
        qq([2, 1]).sqrt_one_plus(2)


@pytest.mark.parametrize("seed", range(4))
def test_sqrt_squares_back(seed):
    rng = random.Random(50 + seed)
    n = rng.randint(6, 60)
    a = _random_qq(rng, n)
    a[0] = mpq(1)
    s = qq(a)
    r = s.sqrt_one_plus(n)
    assert r.mul(r, n) == s
    assert r.coeffs[0] == 1


def test_compose_horner_examples():
    a = qq([1, 1, 1], 5)
    b = qq([0, 0, 1], 5)
    assert a.compose_horner(b, 5) == qq([1, 0, 1, 0, 1])

    any_a = qq([7, -3, 2, 9])
    ident = TruncatedSeries.identity(QQ, 4)
    assert any_a.compose_horner(ident, 4) == any_a

    geo = qq([1, 1, 1, 1])  # 1/(1-u) to order 4
    inner = qq([0, 1, 1], 4)
    assert geo.compose_horner(inner, 4) == qq([1, 1, 2, 3])


def test_compose_requires_small_inner():
    with pytest.raises(InnerNotSmall):
        qq([1, 1]).compose_horner(qq([1, 1]), 2)


def test_compose_constant_outer():
    const = qq([5, 0, 0, 0, 0])
    inner = qq([0, 1, 3, 2, 8])
    for res in (const.compose_horner(inner, 5), const.compose_brent_kung(inner, 5)):
        assert res == qq([5, 0, 0, 0, 0])


def _random_cyc(field, rng, n):
    from x0n.coeffring import CyclotomicNumber

    return [
        CyclotomicNumber(
            field, [mpq(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(field.degree)]
        )
        for _ in range(n)
    ]


@pytest.mark.parametrize("seed", range(8))
def test_brent_kung_matches_horner_qq(seed):
    rng = random.Random(200 + seed)
    m = rng.choice([17, 33, 64, 128])
    a = qq(_random_qq(rng, m))
    inner_c = _random_qq(rng, m)
    inner_c[0] = mpq(0)
    for lead in range(1, rng.randint(1, 3)):
        inner_c[lead] = mpq(0)  # inner valuation can exceed 1
    b = qq(inner_c)
    assert a.compose_brent_kung(b, m) == a.compose_horner(b, m)


@pytest.mark.parametrize("seed", range(4))
def test_brent_kung_matches_horner_cyclotomic(seed):
    rng = random.Random(300 + seed)
    F = cyclotomic_field(12)
    m = rng.choice([16, 33, 64])
    a = TruncatedSeries(F, _random_cyc(F, rng, m))
    ic = _random_cyc(F, rng, m)
    ic[0] = F.zero
    b = TruncatedSeries(F, ic)
    assert a.compose_brent_kung(b, m) == a.compose_horner(b, m)


@pytest.mark.parametrize("seed", range(5))
def test_mul_commutative_associative(seed):
    rng = random.Random(400 + seed)
    m = rng.randint(5, 60)
    a, b, c = (qq(_random_qq(rng, m)) for _ in range(3))
    assert a.mul(b, m) == b.mul(a, m)
    assert a.mul(b, m).mul(c, m) == a.mul(b.mul(c, m), m)


@pytest.mark.parametrize("seed", range(3))
def test_compose_associative(seed):
    rng = random.Random(500 + seed)
    m = rng.randint(6, 24)
    a = qq(_random_qq(rng, m))
    bc, cc = _random_qq(rng, m), _random_qq(rng, m)
    bc[0] = cc[0] = mpq(0)
    b, c = qq(bc), qq(cc)
    lhs = a.compose_horner(b, m).compose_horner(c, m)
    rhs = a.compose_horner(b.compose_horner(c, m), m)
    assert lhs == rhs


def test_series_over_cyclotomic_invert():
    F = cyclotomic_field(4)
    i = F.monomial(1)
    s = TruncatedSeries(F, [F.one + i, i, F.from_int(3)])
    inv = s.invert(3)
    assert s.mul(inv, 3) == TruncatedSeries.one(F, 3)
