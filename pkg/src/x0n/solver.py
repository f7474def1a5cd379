"""Precision-doubling expansion solver and level inference from initial terms.

One Newton step sends an approximation h0, correct mod x^(q+a), to
h0 + eps correct mod x^(q+2a), with

    eps = h0'*G * integral( (q*(G∘h0) - h0'*G) / (G * h0'*G) ) dx

evaluated entirely in exact arithmetic on the u = x^(1/d) lattice.  The
iterate h0 is an exact polynomial, so each step widens its stated order
with known zeros before computing; the doubling statement is about the
distance to the true expansion.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .coeffring import RootOfUnity
from .errors import LevelNotFound
from .modfun import g_order_for, series_G
from .puiseux import (
    InitialTerm,
    Precision,
    PuiseuxSeries,
    from_initial_term,
    outer_substitute,
)

DEFAULT_LEVEL_CAP = 256


@dataclass(frozen=True)
class Level:
    n: int

    def __post_init__(self):
        assert self.n >= 1


@dataclass
class ExpansionResult:
    h: PuiseuxSeries
    initial_term: InitialTerm
    level: Level
    steps: int
    precision: Precision


def newton_step(h0: PuiseuxSeries, q, a) -> PuiseuxSeries:
    """One precision-doubling pass: h0 mod x^(q+a) -> h mod x^(q+2a)."""
    q, a = mpq(q), mpq(a)
    d = h0.ramification
    assert h0.valuation() == q, "seed leading exponent disagrees with q"
    s = q + 2 * a
    s_u = int(s * d)
    h = h0.as_exact(s_u)

    G = series_G(g_order_for(s, q))
    composed = outer_substitute(G, h, s)
    g_lift = PuiseuxSeries.from_x_series(G, d, h.ring)
    hp = h.x_derivative()
    hpg = hp.mul(g_lift)
    residual = composed.scale(q) - hpg
    if residual.is_zero():
        return h
    integrand = residual.mul(g_lift.mul(hpg).inverse())
    eps = hpg.mul(integrand.x_integrate())
    return h + eps


def puiseux_x0n(T: InitialTerm, k: int, level: Level | None = None,
                cap: int = DEFAULT_LEVEL_CAP) -> ExpansionResult:
    """Run k doubling steps from the seed; result precision is 2^k / d."""
    assert k >= 0
    h = from_initial_term(T)
    a = mpq(1, T.d)
    for _ in range(k):
        h = newton_step(h, T.q, a)
        a *= 2
    if level is None:
        level = infer_level(T, cap)
    return ExpansionResult(h=h, initial_term=T, level=level, steps=k,
                           precision=Precision(a, T.d))


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for k in range(p * p, n + 1, p):
                sieve[k] = 0
    return out


def infer_level(T: InitialTerm, cap: int = DEFAULT_LEVEL_CAP) -> Level:
    """Smallest-composition search for the level owning the initial term T.

    Breadth-first over compositions of the monomial maps x -> x^p and
    x -> zeta_p^s * x^(1/p) (all p prime, all branch choices of the p-th
    root); each applied map multiplies the level by p.  The first hit by
    composition length, then by level, wins.  Constants stay exact
    (order, exponent) pairs, so conductors grow only inside this search.
    """
    target = (T.c.order, T.c.exponent, T.q)
    start = (1, 0, mpq(1))
    if target == start:
        return Level(1)
    primes = _primes_upto(cap)
    frontier = {start: 1}
    visited = {start}
    while frontier:
        hits = []
        nxt: dict = {}
        for (m, s, q), n_level in sorted(
            frontier.items(), key=lambda kv: (kv[1], kv[0][0], kv[0][1], str(kv[0][2]))
        ):
            for p in primes:
                n_new = n_level * p
                if n_new > cap:
                    break
                z_up = RootOfUnity(m, s * p)
                moves = [(z_up.order, z_up.exponent, q * p)]
                for u in range(p):
                    z_dn = RootOfUnity(m * p, s + m * u)
                    moves.append((z_dn.order, z_dn.exponent, q / p))
                for state in moves:
                    if state == target:
                        hits.append(n_new)
                    if state not in visited:
                        prev = nxt.get(state)
                        if prev is None or n_new < prev:
                            nxt[state] = n_new
        if hits:
            return Level(min(hits))
        visited.update(nxt)
        frontier = nxt
    raise LevelNotFound(
        f"no composition with level <= {cap} produces {T!r}"
    )
