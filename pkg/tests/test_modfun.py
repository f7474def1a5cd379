import pytest
from gmpy2 import mpq

from x0n import modfun
from x0n.coeffring import QQ
from x0n.modfun import relation_residual, series_E, series_F, series_G
from x0n.puiseux import PuiseuxSeries, from_initial_term, InitialTerm
from x0n.coeffring import RootOfUnity


def test_series_f_examples():
    assert series_F(1).coeffs == [mpq(1)]
    assert series_F(2).coeffs == [mpq(1), mpq(60)]
    assert series_F(3).coeffs == [mpq(1), mpq(60), mpq(39780)]


def test_series_e_examples():
    assert series_E(2).coeffs == [mpq(0), mpq(1)]
    assert series_E(3).coeffs == [mpq(0), mpq(1), mpq(-864)]
    assert series_E(4).coeffs == [mpq(0), mpq(1), mpq(-864), mpq(-373248)]


def test_series_g_examples():
    assert series_G(2).coeffs == [mpq(0), mpq(1)]
    assert series_G(3).coeffs == [mpq(0), mpq(1), mpq(-744)]
    assert series_G(4).coeffs == [mpq(0), mpq(1), mpq(-744), mpq(-393768)]


def test_g_valuation_exactly_one():
    g = series_G(8)
    assert g.coeffs[0] == 0 and g.coeffs[1] == 1


def test_integrality_up_to_512():
    for s in (series_F(512), series_E(512), series_G(512)):
        assert all(c.denominator == 1 for c in s.coeffs)


def test_prefix_consistency_across_orders():
    import importlib

    g_long = series_G(96).coeffs
    f_long = series_F(96).coeffs
    e_long = series_E(96).coeffs
    importlib.reload(modfun)  # drop the memo: recompute shorter orders fresh
    assert modfun.series_G(40).coeffs == g_long[:40]
    assert modfun.series_F(40).coeffs == f_long[:40]
    assert modfun.series_E(40).coeffs == e_long[:40]


def test_residual_of_true_expansion_is_zero():
    h = from_initial_term(InitialTerm(RootOfUnity(1), 1)).as_exact(8)  # h = x
    r = relation_residual(h, 1)
    assert r.is_zero() and r.order_u == 8


def test_residual_of_unconverged_seed():
    # exact polynomial x^2 fed as an N=2 approximation: residual appears at x^3
    h = PuiseuxSeries.monomial(QQ, 1, mpq(1), 2, 6)
    r = relation_residual(h, 2)
    assert r.valuation() == 3
    # derive the expected residual 2*G(x^2) - 2x*G(x) directly from series_G
    g = series_G(6).coeffs
    lhs = {}
    for k, c in enumerate(g):
        if 2 * k < 6 and c:
            lhs[2 * k] = lhs.get(2 * k, mpq(0)) + 2 * c
    for k, c in enumerate(g[:5]):
        if c:
            lhs[k + 1] = lhs.get(k + 1, mpq(0)) - 2 * c
    expected = sorted((mpq(e), v) for e, v in lhs.items() if v and e < r.order_x)
    assert r.nonzero_terms() == expected
    assert r.nonzero_terms()[0] == (mpq(3), mpq(1488))


def test_residual_order_follows_input_truncation():
    # relation_residual sizes G from h's own truncation, so the residual
    # carries exactly the order h supports
    h = PuiseuxSeries.monomial(QQ, 1, mpq(1), 2, 40)
    assert relation_residual(h, 2).order_u == 40
