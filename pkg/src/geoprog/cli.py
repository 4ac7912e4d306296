"""Command-line driver.

Exit codes: 0 ok (including unresolved results), 1 verification failure or
bad input values, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import lab
from .birat import (
    MapUndefined,
    build_fixeda,
    cubic_to_weierstrass,
    fa_value,
    identity_suite,
    q_from_u,
    w_factor,
    weierstrass_to_cubic,
    witnesses_from_point,
)
from .descent2 import DEFAULT_BUDGET
from .ellcurve import Curve, Point, bx_curve, mordell_curve, on_curve, torsion_order
from .exactnum import as_rat, rat_str, rational_root
from .polynom import RatFunc1
from .progressions import (
    DIFFERENCE,
    RATIO,
    bihomo_construct,
    class1_progression,
    class2_progression,
    class3_progression,
    cq2_family,
    killer_Q,
)
from .store import ENV_VAR, Store

log = logging.getLogger("geoprog")

AMAX_SHORT = 2000  # larger scans need --long


class VerificationFailure(Exception):
    pass


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _rats(text: str) -> list[Fraction]:
    return [_rat(t) for t in text.split(",") if t.strip()]


def _pair(text: str) -> tuple[Fraction, Fraction]:
    vals = _rats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated rationals: {text!r}")
    return vals[0], vals[1]


def _ratfunc(text: str) -> RatFunc1:
    """'c0,c1,...' or 'c0,c1,...|d0,d1,...' (coefficients, lowest degree first)."""
    num, _, den = text.partition("|")
    try:
        return RatFunc1.make(_rats(num), _rats(den) if den else [1])
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _store(args) -> Optional[Store]:
    return None if args.no_cache else Store()


# -- handlers --------------------------------------------------------------


def cmd_verify_point(args) -> int:
    k = args.a * args.q**args.i
    c = bx_curve(k) if args.family == "bx" else mordell_curve(k)
    P = Point(args.x, args.y)
    ok = on_curve(c, P)
    order = torsion_order(c, P) if ok else None
    out = {
        "curve": str(c),
        "point": P.to_json(),
        "on_curve": ok,
        "order": "infinite" if ok and order is None else order,
        "x_nonzero": args.x != 0,
    }
    _emit(out)
    return 0 if ok else 1


def cmd_rank(args) -> int:
    res = lab.curve_rank(Curve(args.a2, args.a4, args.a6), args.budget)
    _emit(res.to_json())
    return 0


def cmd_membership(args) -> int:
    fam = lab.BX if args.family == "bx" else lab.MORDELL
    res = lab.membership(args.a, args.q, fam, args.budget, _store(args))
    _emit(res.to_json())
    return 0


def _write_csv(path: Optional[str], header: Sequence[str], rows) -> None:
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if path:
            fh.close()


def cmd_cq(args) -> int:
    if args.amax > AMAX_SHORT and not args.long:
        print(f"amax > {AMAX_SHORT} needs --long", file=sys.stderr)
        return 2
    res = lab.compute_CQ(args.q, args.amax, args.budget, _store(args), args.workers)
    _write_csv(args.out, ("a", "verdict"), ((r.a, r.verdict) for r in res.rows))
    table = res.counting()
    if args.counting:
        _write_csv(args.counting, ("x", "count_confirmed", "count_unresolved"), table)
        if not args.no_plot:
            from .plots import counting_figure

            fig = counting_figure(args.q, table, Path(args.counting).with_suffix(".png"))
            log.info("wrote %s", fig)
    print(
        f"Q={args.q} amax={args.amax}: confirmed {len(res.confirmed)}, unresolved {len(res.unresolved)}",
        file=sys.stderr,
    )
    return 0


def cmd_ma(args) -> int:
    _emit(lab.compute_m(args.a, args.qmax, args.budget, _store(args)).to_json())
    return 0


def cmd_mseries(args) -> int:
    series = lab.m_series(args.amax, args.qmax, args.budget, _store(args))
    rows, ms, avgs, total = [], [], [], 0
    for n, r in enumerate(series, 1):
        if r.value is None:
            # The running average needs every m(a_k); stop at the first gap.
            log.warning("m(%d) unresolved below Q = %d; series truncated at n = %d", r.a, args.qmax, n - 1)
            break
        total += r.value
        ms.append(r.value)
        avgs.append(Fraction(total, n))
        rows.append((n, r.a, r.value, int(r.exact), rat_str(avgs[-1])))
    _write_csv(args.out, ("n", "a", "m", "exact", "average"), rows)
    if args.out and rows and not args.no_plot:
        from .plots import m_figure

        m_figure([r[1] for r in rows], ms, [float(v) for v in avgs], Path(args.out).with_suffix(".png"))
    return 0


def cmd_rset(args) -> int:
    confirmed, unresolved = lab.compute_R(args.amax, args.budget, _store(args))
    _emit({"confirmed": confirmed, "unresolved": unresolved})
    return 0


def cmd_intersect(args) -> int:
    confirmed, unresolved = lab.intersections(args.qlo, args.qhi, args.amax, args.budget, _store(args))
    _emit({"confirmed": confirmed, "unresolved": unresolved})
    return 0


def cmd_construct(args) -> int:
    kind = args.kind
    extra = None
    if kind == "class1":
        ws = class1_progression(args.g1, args.g2, args.h1, args.h2, args.a, args.q, args.n)
    elif kind == "class2":
        ws = class2_progression(args.u, args.v, args.w, args.seed_a, args.seed_q, args.n)
    elif kind == "class3":
        ws = class3_progression(args.f1, args.f2, args.u, args.v, args.q, args.n)
    elif kind == "bihomo":
        ws = bihomo_construct(args.d, args.variant, args.q, args.p0, args.p1, args.q0, args.q1, args.n)
    elif kind == "cq2":
        _, ws = cq2_family(args.q, args.u, args.v, args.n)
    else:
        _, proof = killer_Q(args.a)
        _emit(proof.to_json())
        return 0
    out = ws.to_json()
    if extra:
        out.update(extra)
    _emit(out)
    return 0 if ws.validate() else 1


def cmd_fixeda(args) -> int:
    inst = build_fixeda(args.a, args.p, args.v)
    out = {"instance": inst.to_json()}
    status = 0
    if args.u is not None:
        u = args.u
        W = w_factor(inst.a, inst.p, u)
        y = args.y
        if y is None:
            y2 = fa_value(inst.a, inst.p, inst.v, u) / (W * W)
            y = rational_root(y2, 2)
        out["u"] = rat_str(u)
        out["Q"] = rat_str(q_from_u(inst.a, inst.p, u))
        if y is None or not inst.on_ca(u, y):
            out["on_curve"] = False
            status = 1
        else:
            out["on_curve"] = True
            out["y"] = rat_str(y)
            ws = witnesses_from_point(inst, u, y)
            out["witnesses"] = ws.to_json()
            status = 0 if ws.validate() else 1
    _emit(out)
    return status


def cmd_cubicmap(args) -> int:
    if args.inverse:
        # (x, y) on x^3 + y^3 = A  ->  Weierstrass point.
        P = cubic_to_weierstrass(args.A, args.x, args.y)
        _emit({"weierstrass": P.to_json()})
    else:
        x, y = weierstrass_to_cubic(args.A, Point(args.x, args.y))
        _emit({"cubic": [rat_str(x), rat_str(y)], "check": rat_str(x**3 + y**3)})
    return 0


def cmd_identities(args) -> int:
    log.info("identity suite seed=%d trials=%d", args.seed, args.trials)
    results = identity_suite(args.trials, args.seed)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(ok for _, ok in results) else 1


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geoprog", description="Geometric progressions in value sets of rational functions.")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--no-cache", action="store_true", help=f"do not read or write the cache (path from ${ENV_VAR})")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def budgeted(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        return p

    p = sub.add_parser("verify-point")
    p.add_argument("--family", choices=("bx", "mordell"), required=True)
    p.add_argument("--a", type=_rat, required=True)
    p.add_argument("--q", type=_rat, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--x", type=_rat, required=True)
    p.add_argument("--y", type=_rat, required=True)
    p.set_defaults(fn=cmd_verify_point)

    p = budgeted(sub.add_parser("rank"))
    p.add_argument("--a2", type=_rat, default=Fraction(0))
    p.add_argument("--a4", type=_rat, default=Fraction(0))
    p.add_argument("--a6", type=_rat, default=Fraction(0))
    p.set_defaults(fn=cmd_rank)

    p = budgeted(sub.add_parser("membership"))
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--family", choices=("bx", "mordell"), required=True)
    p.set_defaults(fn=cmd_membership)

    p = budgeted(sub.add_parser("cq"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--amax", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--counting")
    p.add_argument("--long", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(fn=cmd_cq)

    p = budgeted(sub.add_parser("ma"))
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.set_defaults(fn=cmd_ma)

    p = budgeted(sub.add_parser("mseries", help="m(a_n) over R and its running average"))
    p.add_argument("--amax", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(fn=cmd_mseries)

    p = budgeted(sub.add_parser("rset"))
    p.add_argument("--amax", type=int, required=True)
    p.set_defaults(fn=cmd_rset)

    p = budgeted(sub.add_parser("intersect"))
    p.add_argument("--qlo", type=int, required=True)
    p.add_argument("--qhi", type=int, required=True)
    p.add_argument("--amax", type=int, required=True)
    p.set_defaults(fn=cmd_intersect)

    p = sub.add_parser("construct")
    csub = p.add_subparsers(dest="kind", required=True)
    c = csub.add_parser("class1", help="f = (x g1(y) + g2(y)) / (x h1(y) + h2(y))")
    for name in ("g1", "g2", "h1", "h2"):
        c.add_argument(f"--{name}", type=_ratfunc, required=True, help="c0,c1,... or num|den")
    c.add_argument("--a", type=_rat, required=True)
    c.add_argument("--q", type=_rat, required=True)
    c.add_argument("--n", type=int, default=5)
    c = csub.add_parser("class2", help="f = u x^2 + v x y + w y^2")
    for name in ("u", "v", "w"):
        c.add_argument(f"--{name}", type=_rat, required=True)
    c.add_argument("--seed-a", type=_pair, required=True, help="r,s")
    c.add_argument("--seed-q", type=_pair, required=True, help="u2,v2")
    c.add_argument("--n", type=int, default=5)
    c = csub.add_parser("class3", help="f = f1(x, y) / f2(x, y), forms with degrees differing by 1")
    c.add_argument("--f1", type=_rats, required=True)
    c.add_argument("--f2", type=_rats, required=True)
    c.add_argument("--u", type=_rat, required=True)
    c.add_argument("--v", type=_rat, required=True)
    c.add_argument("--q", type=_rat, required=True)
    c.add_argument("--n", type=int, default=5)
    c = csub.add_parser("bihomo")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--variant", choices=(RATIO, DIFFERENCE), required=True)
    for name in ("q", "p0", "p1", "q0", "q1"):
        c.add_argument(f"--{name}", type=_rat, required=True)
    c.add_argument("--n", type=int, default=5)
    c = csub.add_parser("cq2")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--u", type=int, required=True)
    c.add_argument("--v", type=int, required=True)
    c.add_argument("--n", type=int, default=3)
    c = csub.add_parser("killer")
    c.add_argument("--a", type=int, required=True)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("fixeda")
    for name in ("a", "p", "v"):
        p.add_argument(f"--{name}", type=_rat, required=True)
    p.add_argument("--u", type=_rat)
    p.add_argument("--y", type=_rat, help="y on C_a (derived from u when omitted)")
    p.set_defaults(fn=cmd_fixeda)

    p = sub.add_parser("cubicmap")
    p.add_argument("--A", type=_rat, required=True)
    p.add_argument("--x", type=_rat, required=True)
    p.add_argument("--y", type=_rat, required=True)
    p.add_argument("--inverse", action="store_true", help="map x^3 + y^3 = A to the Weierstrass curve")
    p.set_defaults(fn=cmd_cubicmap)

    p = sub.add_parser("identities")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_identities)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, MapUndefined, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
