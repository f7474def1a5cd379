"""The modular series E, F, G and the defining-relation residual.

F is the Gauss hypergeometric series with parameters (1/12, 5/12; 1) at
1728x, generated by its term ratio so every coefficient stays an exact
integer; E = x*sqrt(1 - 1728x); G = E*F^2 has valuation exactly 1.

The series caches grow monotonically behind one lock; any prefix of a
longer cache equals the shorter computation.
"""
from __future__ import annotations

import threading

from gmpy2 import mpq

from .coeffring import QQ, ceil_q, floor_q
from .puiseux import PuiseuxSeries, outer_substitute
from .series import TruncatedSeries

_lock = threading.RLock()
_f_coeffs = [mpq(1)]
_sqrt_cache: list = []  # coefficients of sqrt(1 - 1728x)
_g_cache: list = []


def _reset_caches():
    """Drop memoized series (timing runs need cold-cache comparability)."""
    with _lock:
        del _f_coeffs[1:]
        _sqrt_cache.clear()
        _g_cache.clear()


def series_F(M: int) -> TruncatedSeries:
    """2F1(1/12, 5/12; 1; 1728x) mod x^M; all coefficients are integers."""
    assert M >= 1
    with _lock:
        k = len(_f_coeffs) - 1
        while len(_f_coeffs) < M:
            _f_coeffs.append(_f_coeffs[-1] * mpq(12 * (12 * k + 1) * (12 * k + 5), (k + 1) ** 2))
            k += 1
        return TruncatedSeries(QQ, _f_coeffs[:M])


def _sqrt_body(M: int) -> list:
    with _lock:
        if len(_sqrt_cache) < M:
            base = TruncatedSeries.from_rationals(QQ, [1, -1728], M)
            _sqrt_cache[:] = base.sqrt_one_plus(M).coeffs
        return _sqrt_cache[:M]


def series_E(M: int) -> TruncatedSeries:
    """x * sqrt(1 - 1728x) mod x^M (M >= 2)."""
    assert M >= 2
    return TruncatedSeries(QQ, [mpq(0)] + _sqrt_body(M - 1))


def series_G(M: int) -> TruncatedSeries:
    """E * F^2 mod x^M; valuation 1 with unit leading coefficient."""
    assert M >= 2
    with _lock:
        if len(_g_cache) < M:
            f = series_F(M)
            body = f.mul(f, M - 1).mul(TruncatedSeries(QQ, _sqrt_body(M - 1)), M - 1)
            _g_cache[:] = [mpq(0)] + body.coeffs
        return TruncatedSeries(QQ, _g_cache[:M])


def g_order_for(target_x, q) -> int:
    """Integer order of G needed to run products and G∘h up to x^target_x."""
    return max(ceil_q(target_x) + 1, floor_q(mpq(target_x) / mpq(q)) + 1, 2)


def relation_residual(h0: PuiseuxSeries, q) -> PuiseuxSeries:
    """v(h)*(G∘h0) - h0'*G at v(h) = q, to the order h0's truncation supports.

    Vanishes identically for a true expansion; for an approximation of
    precision a it has valuation >= q + a.
    """
    q = mpq(q)
    t_x = h0.order_x
    G = series_G(g_order_for(t_x, q))
    composed = outer_substitute(G, h0, t_x)
    g_lift = PuiseuxSeries.from_x_series(G, h0.ramification, h0.ring)
    rhs = h0.x_derivative().mul(g_lift)
    return composed.scale(q) - rhs
