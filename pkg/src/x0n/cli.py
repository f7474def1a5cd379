"""Command-line front end: expand, infer-level, verify, oracle-check, phi, bench.

All exact values are rendered as "n/d" strings, never floats.  Output for a
given invocation is deterministic byte-for-byte (no timestamps in payloads);
only bench emits measured times.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from gmpy2 import mpq

from .coeffring import RootOfUnity
from .errors import ParseError, X0NError
from .modfun import g_order_for, relation_residual, series_G
from .oracle import infinity_cusp_check, phi_reconstruct_prime
from .puiseux import InitialTerm, PuiseuxSeries, outer_substitute
from .solver import DEFAULT_LEVEL_CAP, infer_level, puiseux_x0n


# ---------------------------------------------------------------------------
# Initial-term grammar:  [SIGN] [zeta_M[^S] *] x[^K | ^(N/D)]
# ---------------------------------------------------------------------------

def parse_initial_term(text: str) -> InitialTerm:
    s = text
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def expect(tok):
        nonlocal pos
        if not s.startswith(tok, pos):
            raise ParseError(f"expected {tok!r}", pos)
        pos += len(tok)

    def read_int():
        nonlocal pos
        start = pos
        if pos < len(s) and s[pos] in "+-":
            pos += 1
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start or not s[start:pos].lstrip("+-"):
            raise ParseError("expected an integer", start)
        return int(s[start:pos])

    skip_ws()
    negate = False
    if pos < len(s) and s[pos] == "-":
        negate = True
        pos += 1
        skip_ws()
    c = RootOfUnity(1)
    if s.startswith("zeta_", pos):
        pos += 5
        order_pos = pos
        order = read_int()
        if order < 1:
            raise ParseError("root order must be positive", order_pos)
        exponent = 1
        if pos < len(s) and s[pos] == "^":
            pos += 1
            exponent = read_int()
        c = RootOfUnity(order, exponent)
        skip_ws()
        expect("*")
        skip_ws()
    expect("x")
    num, den = 1, 1
    if pos < len(s) and s[pos] == "^":
        pos += 1
        if pos < len(s) and s[pos] == "(":
            pos += 1
            num = read_int()
            skip_ws()
            expect("/")
            den_pos = pos
            den = read_int()
            if den == 0:
                raise ParseError("zero denominator", den_pos)
            expect(")")
        else:
            num = read_int()
    skip_ws()
    if pos != len(s):
        raise ParseError(f"unexpected trailing input {s[pos:]!r}", pos)
    if negate:
        c = RootOfUnity(2, 1) * c
    return InitialTerm(c, mpq(num, den))


def render_initial_term(T: InitialTerm) -> str:
    c, q = T.c, T.q
    if q == 1:
        xpart = "x"
    elif q.denominator == 1:
        xpart = f"x^{q.numerator}"
    else:
        xpart = f"x^({q.numerator}/{q.denominator})"
    if c.order == 1:
        return xpart
    if c.order == 2:
        return f"-{xpart}"
    zeta = f"zeta_{c.order}" if c.exponent == 1 else f"zeta_{c.order}^{c.exponent}"
    return f"{zeta}*{xpart}"


# ---------------------------------------------------------------------------
# Rendering helpers.
# ---------------------------------------------------------------------------

def fmt_q(q) -> str:
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coeff_coords(h: PuiseuxSeries, value) -> list:
    if h.ring.degree == 1:
        vals = [mpq(value)]
    else:
        vals = list(value.coords)
    return [f"{v.numerator}/{v.denominator}" for v in vals]


def _coeff_text(h: PuiseuxSeries, value) -> str:
    if h.ring.degree == 1:
        return fmt_q(value)
    m = h.ring.conductor
    parts = []
    for k, v in enumerate(value.coords):
        if not v:
            continue
        z = "" if k == 0 else (f"z_{m}" if k == 1 else f"z_{m}^{k}")
        if z and abs(v) == 1:
            parts.append(("-" if v < 0 else "") + z)
        else:
            parts.append(fmt_q(v) + ("*" + z if z else ""))
    return "(" + (" + ".join(parts).replace("+ -", "- ") or "0") + ")"


def expansion_json(result) -> dict:
    T, h = result.initial_term, result.h
    return {
        "level": result.level.n,
        "c": {"order": T.c.order, "exponent": T.c.exponent},
        "q": fmt_q(T.q),
        "ramification": h.ramification,
        "precision": fmt_q(T.q + result.precision.a),
        "terms": [
            {"exp": fmt_q(e), "coeff": {"conductor": T.c.order, "coords": _coeff_coords(h, c)}}
            for e, c in h.nonzero_terms()
        ],
    }


def expansion_text(result) -> str:
    T, h = result.initial_term, result.h
    lines = [
        f"initial term: {render_initial_term(T)}",
        f"level: {result.level.n}",
        f"ramification: {h.ramification}",
        f"precision: a = {fmt_q(result.precision.a)}, h known mod x^({fmt_q(T.q + result.precision.a)})",
    ]
    terms = []
    for e, c in h.nonzero_terms():
        cs = _coeff_text(h, c)
        if e == 0:
            terms.append(cs)
        else:
            xs = "x" if e == 1 else (f"x^{e}" if e.denominator == 1 else f"x^({fmt_q(e)})")
            terms.append(f"{cs}*{xs}" if cs not in ("1",) else xs)
    lines.append("h = " + (" + ".join(terms) or "0"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_expand(args) -> int:
    T = parse_initial_term(args.term)
    level = infer_level(T, args.cap)
    result = puiseux_x0n(T, args.steps, level=level)
    if args.json:
        print(json.dumps(expansion_json(result)))
    else:
        print(expansion_text(result))
    return 0


def cmd_infer_level(args) -> int:
    T = parse_initial_term(args.term)
    level = infer_level(T, args.cap)
    print(json.dumps({"term": render_initial_term(T), "level": level.n}))
    return 0


def cmd_verify(args) -> int:
    T = parse_initial_term(args.term)
    result = puiseux_x0n(T, args.steps)
    residual = relation_residual(result.h, T.q)
    bound = T.q + result.precision.a
    if residual.is_zero():
        val_text = f">= {fmt_q(residual.order_x)} (zero to tracked order)"
        ok = residual.order_x >= bound
    else:
        v = residual.valuation()
        val_text = fmt_q(v)
        ok = v >= bound
    print(f"term: {render_initial_term(T)}  steps: {args.steps}")
    print(f"residual valuation: {val_text}")
    print(f"required bound q + a: {fmt_q(bound)}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_oracle_check(args) -> int:
    ok, report = infinity_cusp_check(args.level, args.steps, args.q_order)
    print(("PASS: " if ok else "FAIL: ") + report)
    return 0 if ok else 1


def cmd_phi(args) -> int:
    poly = phi_reconstruct_prime(args.level)
    print(json.dumps({"level": args.level, "terms": poly.to_json_obj()}))
    return 0


def _bench_inner(size: int):
    """The expansion iterate whose composition dominates expand at this size."""
    k = max(1, (size - 1).bit_length())
    res = puiseux_x0n(InitialTerm(RootOfUnity(1), 2), k)
    return res.h.truncated(min(res.h.order_u, size + 2))


def cmd_bench(args) -> int:
    sizes = args.sizes
    if sizes != sorted(sizes):
        raise X0NError("bench sizes must be ascending")
    inner_full = _bench_inner(sizes[-1])
    print("size,horner_ms,brent_kung_ms")
    for size in sizes:
        target = size + 2
        G = series_G(g_order_for(target, 2))
        h = inner_full.truncated(target)
        t0 = time.perf_counter()
        res_h = outer_substitute(G, h, target, horner=True)
        t1 = time.perf_counter()
        res_bk = outer_substitute(G, h, target)
        t2 = time.perf_counter()
        assert res_h == res_bk
        print(f"{size},{(t1 - t0) * 1000:.3f},{(t2 - t1) * 1000:.3f}")
    return 0


def _sizes_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="x0n",
        description="Exact Puiseux expansions at cusps of X0(N), with verification oracles.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("expand", help="expand an initial term to precision 2^k/d")
    sp.add_argument("--term", required=True, help="initial term, e.g. x^2, -x^(1/3), zeta_3*x^(5/3)")
    sp.add_argument("--steps", type=int, required=True, help="number of doubling steps k")
    sp.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sp.add_argument("--cap", type=int, default=DEFAULT_LEVEL_CAP, help="level search bound")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("infer-level", help="determine N from the initial term")
    sp.add_argument("--term", required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_LEVEL_CAP)
    sp.set_defaults(func=cmd_infer_level)

    sp = sub.add_parser("verify", help="check the defining-relation residual of an expansion")
    sp.add_argument("--term", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle-check", help="compare h(x(q)) with x(q^N) from the j oracle")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--q-order", type=int, required=True, dest="q_order")
    sp.set_defaults(func=cmd_oracle_check)

    sp = sub.add_parser("phi", help="reconstruct the modular polynomial (N in {2,3})")
    sp.add_argument("--level", type=int, required=True, choices=(2, 3))
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("bench", help="time the dominant composition kernel")
    sp.add_argument("--sizes", type=_sizes_list, required=True, help="comma-separated term counts")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except X0NError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
