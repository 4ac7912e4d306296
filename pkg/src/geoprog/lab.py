"""Experiment harness: membership of (a, Q), the sets C_Q and R, m(a),
intersections, the running average of m, and the fixed-a (p0, v0) scan.

Every aggregate comes as a (confirmed, unresolved) pair since descent plus
search can leave a curve undecided.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .birat import MapUndefined, build_fixeda, ca_to_ea, witnesses_from_point
from .descent2 import DEFAULT_BUDGET, EXACT, UNDETERMINED, RankResult, positive_rank_witness, rank_bounds
from .ellcurve import Curve, INF, Point, add, is_infinite_order, mordell_curve, on_curve, scale_point
from .exactnum import as_rat, classify_solution_level, factor, fourth_power_free_part, is_square
from .progressions import WitnessSet
from .ptsearch import SearchParams, search_points
from .store import BX, MORDELL, CacheRecord, Store

log = logging.getLogger(__name__)

MEMBER = "Member"
NONMEMBER = "NonMember"
VERDICTS = (MEMBER, NONMEMBER, UNDETERMINED)

BX_INDICES = 4
MORDELL_INDICES = 6
FIRST_PASS = 64  # cheap descent pass before spending the full budget
MORDELL_SEARCH = (SearchParams(M=2000, E=40), SearchParams(M=10**5, E=100))


# -- single curves ---------------------------------------------------------


def sixth_power_free_part(k: int) -> tuple[int, int]:
    """(k0, t) with k = k0 t^6 and k0 sixth-power-free, t > 0."""
    if k == 0:
        raise ValueError("k must be nonzero")
    k0, t = (-1 if k < 0 else 1), 1
    for p, e in factor(k).factors:
        t *= p ** (e // 6)
        k0 *= p ** (e % 6)
    return k0, t


def _bx_rank(b: int, budget: int, store: Optional[Store]) -> RankResult:
    """Rank of y^2 = x^3 + b x for fourth-power-free b, through the cache."""
    if store is not None:
        rec = store.get(BX, 0, b)
        if rec is not None and (rec.status == EXACT or int(rec.budget) >= budget):
            return rec.to_rank()
    res = rank_bounds(0, b, budget)
    if store is not None:
        store.put(CacheRecord.from_rank(BX, 0, b, res, str(budget)))
    return res


def bx_rank(B: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None) -> RankResult:
    """Rank bounds for y^2 = x^3 + B x, computed on the fourth-power-free twin."""
    b, t = fourth_power_free_part(B)
    res = _bx_rank(b, budget, store)
    if t == 1:
        return res
    return RankResult(res.lower, res.upper, res.status, [scale_point(P, t) for P in res.witnesses], res.budget_used, res.selmer)


def _mordell_search(k: int) -> RankResult:
    c = mordell_curve(k)
    for params in MORDELL_SEARCH:
        for P in search_points(c, params):
            if P.x != 0 and is_infinite_order(c, P):
                return RankResult(1, None, UNDETERMINED, [P])
    return RankResult(0, None, UNDETERMINED)


def mordell_rank(k: int, store: Optional[Store] = None) -> RankResult:
    """Search-only lower bound for y^2 = x^3 + k; the upper bound stays unknown."""
    k0, t = sixth_power_free_part(k)
    res = None
    if store is not None:
        rec = store.get(MORDELL, 0, k0)
        if rec is not None:
            res = rec.to_rank()
    if res is None:
        res = _mordell_search(k0)
        if store is not None:
            store.put(CacheRecord.from_rank(MORDELL, 0, k0, res, "search"))
    if t == 1:
        return res
    return RankResult(res.lower, res.upper, res.status, [scale_point(P, t) for P in res.witnesses])


def _rational_roots(c: Curve) -> list[Fraction]:
    """Rational roots of x^3 + A2 x^2 + A4 x + A6 (float seeds, exact check)."""
    coeffs = [1.0, float(c.A2), float(c.A4), float(c.A6)]
    out = []
    for z in np.roots(coeffs):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        r = Fraction(z.real).limit_denominator(10**6)
        # A few Newton steps in exact arithmetic tighten large roots.
        for _ in range(8):
            f = c.rhs(r)
            if f == 0:
                break
            df = 3 * r * r + 2 * c.A2 * r + c.A4
            if df == 0:
                break
            r = (r - f / df).limit_denominator(10**12)
        for cand in {r, Fraction(round(r))}:
            if c.rhs(cand) == 0 and cand not in out:
                out.append(cand)
    return out


def curve_rank(c: Curve, budget: int = DEFAULT_BUDGET) -> RankResult:
    """Rank bounds for a general curve.

    With a rational 2-torsion point the curve is moved to y^2 = x^3 + A x^2 + B x
    (integral) and 2-isogeny descent applies; otherwise only a search runs and
    the upper bound is None.
    """
    roots = _rational_roots(c)
    if roots:
        r = roots[0]
        A, B = 3 * r + c.A2, 3 * r * r + 2 * c.A2 * r + c.A4
        u = 1
        while (A * u * u).denominator != 1 or (B * u**4).denominator != 1:
            u *= math.lcm(A.denominator, B.denominator)
        res = rank_bounds(int(A * u * u), int(B * u**4), budget)
        back = [Point(P.x / (u * u) + r, P.y / u**3) for P in res.witnesses]
        assert all(on_curve(c, P) for P in back)
        return RankResult(res.lower, res.upper, res.status, back, res.budget_used, res.selmer)
    # No 2-torsion: move to the short model and search.
    shift = c.A2 / 3
    a, b = c.short_coeffs()
    short = Curve(0, a, b)
    pts = []
    for params in MORDELL_SEARCH:
        pts = [P for P in search_points(short, params) if is_infinite_order(short, P)]
        if pts:
            break
    back = [Point(P.x - shift, P.y) for P in pts[:1]]
    return RankResult(1 if back else 0, None, UNDETERMINED, back)


# -- membership ------------------------------------------------------------


@dataclass
class MembershipResult:
    a: int
    Q: int
    family: str
    ranks: list[tuple[int, RankResult]] = field(default_factory=list)
    verdict: str = UNDETERMINED

    def witnesses(self) -> WitnessSet:
        """Witness set for the value function of the family (x != 0 points)."""
        from .progressions import f_cubic_ratio, f_mordell

        f, name = (f_cubic_ratio, "(y^2 - x^3)/x") if self.family == BX else (f_mordell, "y^2 - x^3")
        ws = WitnessSet(name, f, Fraction(self.a), Fraction(self.Q))
        for i, res in self.ranks:
            if res.witnesses:
                P = res.witnesses[0]
                ws.entries.append((i, P.x, P.y))
        return ws

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "Q": self.Q,
            "family": self.family,
            "verdict": self.verdict,
            "ranks": [{"i": i, **res.to_json()} for i, res in self.ranks],
        }


def _verdict(ranks: Sequence[RankResult], n: int, family: str) -> str:
    if family == BX and any(r.upper == 0 for r in ranks):
        return NONMEMBER
    if len(ranks) == n and all(r.lower >= 1 for r in ranks):
        return MEMBER
    return UNDETERMINED


def membership(
    a: int,
    Q: int,
    family: str = BX,
    budget: int = DEFAULT_BUDGET,
    store: Optional[Store] = None,
) -> MembershipResult:
    """Decide G(a, Q) against y^2 = x^3 + a Q^i x (i < 4) or y^2 = x^3 + a Q^i (i < 6).

    Bx curves get a cheap descent pass first; the full budget is spent only
    when no index has been proved rank 0. A NonMember result stops at the
    first rank-0 index.
    """
    a, Q = int(a), int(Q)
    if a < 1 or Q < 2:
        raise ValueError("need a >= 1 and Q >= 2")
    out = MembershipResult(a, Q, family)
    if family == MORDELL:
        for i in range(MORDELL_INDICES):
            res = mordell_rank(a * Q**i, store)
            out.ranks.append((i, res))
            if res.lower == 0:
                break
        out.verdict = _verdict([r for _, r in out.ranks], MORDELL_INDICES, family)
        return out
    if family != BX:
        raise ValueError(f"unknown family {family!r}")
    results: dict[int, RankResult] = {}
    for b in sorted({min(FIRST_PASS, budget), budget}):
        for i in range(BX_INDICES):
            if i in results and results[i].exact:
                continue
            results[i] = bx_rank(a * Q**i, b, store)
            if results[i].upper == 0:
                out.ranks = [(i, results[i])]
                out.verdict = NONMEMBER
                return out
    out.ranks = sorted(results.items())
    out.verdict = _verdict([r for _, r in out.ranks], BX_INDICES, family)
    return out


# -- scans -----------------------------------------------------------------


@dataclass
class ExperimentRow:
    a: int
    verdict: str
    digest: str
    seconds: float

    def to_json(self) -> dict:
        return self.__dict__.copy()


def _digest(res: MembershipResult) -> str:
    blob = json.dumps([[i, r.lower, r.upper, [P.to_json() for P in r.witnesses]] for i, r in res.ranks])
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _job(args) -> tuple[MembershipResult, float]:
    a, Q, family, budget = args
    t0 = time.perf_counter()
    res = membership(a, Q, family, budget)
    return res, time.perf_counter() - t0


def run_memberships(
    pairs: Iterable[tuple[int, int]],
    family: str = BX,
    budget: int = DEFAULT_BUDGET,
    store: Optional[Store] = None,
    workers: int = 1,
) -> list[tuple[MembershipResult, float]]:
    """Membership for many (a, Q); results sorted by (a, Q) whatever the pool order."""
    jobs = [(a, Q, family, budget) for a, Q in pairs]
    if workers <= 1:
        out = []
        for a, Q, fam, b in jobs:
            t0 = time.perf_counter()
            res = membership(a, Q, fam, b, store)
            out.append((res, time.perf_counter() - t0))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_job, jobs, chunksize=4))
        if store is not None:
            # Cache writes stay in this process.
            for res, _ in out:
                for i, r in res.ranks:
                    if family == BX:
                        b, t = fourth_power_free_part(res.a * res.Q**i)
                        wit = [scale_point(P, Fraction(1, t)) for P in r.witnesses]
                        store.put(CacheRecord.from_rank(BX, 0, b, RankResult(r.lower, r.upper, r.status, wit, r.budget_used, r.selmer), str(budget)))
    out.sort(key=lambda item: (item[0].a, item[0].Q))
    return out


@dataclass
class CQResult:
    Q: int
    rows: list[ExperimentRow]

    @property
    def confirmed(self) -> list[int]:
        return [r.a for r in self.rows if r.verdict == MEMBER]

    @property
    def unresolved(self) -> list[int]:
        return [r.a for r in self.rows if r.verdict == UNDETERMINED]

    def counting(self) -> list[tuple[int, int, int]]:
        """(x, #confirmed <= x, #unresolved <= x); C_Q(x) lies in [c, c + u]."""
        out, c, u = [], 0, 0
        for r in self.rows:
            c += r.verdict == MEMBER
            u += r.verdict == UNDETERMINED
            out.append((r.a, c, u))
        return out


def compute_CQ(
    Q: int, amax: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None, workers: int = 1
) -> CQResult:
    res = run_memberships(((a, Q) for a in range(1, amax + 1)), BX, budget, store, workers)
    rows = [ExperimentRow(m.a, m.verdict, _digest(m), round(dt, 3)) for m, dt in res]
    return CQResult(Q, rows)


def compute_R(amax: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None) -> tuple[list[int], list[int]]:
    """(confirmed positive rank, undetermined) for y^2 = x^3 + a x, 1 <= a <= amax."""
    confirmed, unresolved = [], []
    for a in range(1, amax + 1):
        r = bx_rank(a, budget, store)
        if r.lower >= 1:
            confirmed.append(a)
        elif r.upper != 0:
            unresolved.append(a)
    return confirmed, unresolved


@dataclass
class MResult:
    a: int
    value: Optional[int]  # smallest confirmed member Q, or None
    exact: bool  # all smaller proper Q are NonMember
    unresolved: list[int]  # proper Q below value (or below qmax) left undecided
    in_R: Optional[bool]

    def to_json(self) -> dict:
        return self.__dict__.copy()


def proper_quotients(qmax: int, d: int = 4) -> list[int]:
    return [Q for Q in range(2, qmax + 1) if classify_solution_level(Q, d).is_proper]


def compute_m(a: int, qmax: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None) -> MResult:
    r = bx_rank(a, budget, store)
    if r.upper == 0:
        return MResult(a, None, True, [], False)
    in_R = True if r.lower >= 1 else None
    unresolved = []
    for Q in proper_quotients(qmax):
        res = membership(a, Q, BX, budget, store)
        if res.verdict == MEMBER:
            return MResult(a, Q, not unresolved, unresolved, True)
        if res.verdict == UNDETERMINED:
            unresolved.append(Q)
    return MResult(a, None, False, unresolved, in_R)


def intersections(
    qlo: int, qhi: int, amax: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None
) -> tuple[list[int], list[int]]:
    """(a in every C_Q for qlo <= Q <= qhi, a not excluded but not confirmed)."""
    confirmed, unresolved = [], []
    for a in range(1, amax + 1):
        state = MEMBER
        for Q in range(qlo, qhi + 1):
            v = membership(a, Q, BX, budget, store).verdict
            if v == NONMEMBER:
                state = NONMEMBER
                break
            if v == UNDETERMINED:
                state = UNDETERMINED
        if state == MEMBER:
            confirmed.append(a)
        elif state == UNDETERMINED:
            unresolved.append(a)
    return confirmed, unresolved


def average_A(m_values: Sequence[int], x: int) -> Fraction:
    """(m(a_1) + ... + m(a_x)) / x over the R-ordered values."""
    if x < 1 or x > len(m_values):
        raise ValueError(f"need 1 <= x <= {len(m_values)}")
    return Fraction(sum(m_values[:x]), x)


def m_series(amax: int, qmax: int, budget: int = DEFAULT_BUDGET, store: Optional[Store] = None) -> list[MResult]:
    """m(a) for every confirmed a in R up to amax, in increasing a."""
    confirmed, _ = compute_R(amax, budget, store)
    return [compute_m(a, qmax, budget, store) for a in confirmed]


# -- fixed a ---------------------------------------------------------------


@dataclass
class ScanHit:
    p0: int
    v0: int
    point: Point  # on E_a(p0, v0)
    witnesses: Optional[WitnessSet]  # i = 0..3 certificate when the point maps back

    def to_json(self) -> dict:
        return {
            "p0": self.p0,
            "v0": self.v0,
            "point": self.point.to_json(),
            "witnesses": None if self.witnesses is None else self.witnesses.to_json(),
        }


def _certificate(a: int, p0: int, v0: int, P: Point, budget: int) -> Optional[WitnessSet]:
    inst = build_fixeda(a, p0, v0)
    _, inverse = ca_to_ea(inst)
    base = bx_rank(a, budget)
    P0 = base.witnesses[0] if base.witnesses else None
    E = inst.E
    tors = [INF, Point(Fraction(0), Fraction(0)), Point(inst.f1, Fraction(0)), Point(inst.f2, Fraction(0))]
    for R in (P, add(E, P, P)):
        for T in tors:
            S = add(E, R, T)
            if S.is_infinity:
                continue
            try:
                u, y = inverse(S)
            except (MapUndefined, ZeroDivisionError):
                continue
            if u == 0:
                continue
            try:
                ws = witnesses_from_point(inst, u, y, P0)
            except (ValueError, ZeroDivisionError):
                continue
            if ws.Q != 0 and ws.validate():
                return ws
    return None


def conjecture32_scan(
    a: int,
    pset: Iterable[int] = (2, 3, 4),
    vset: Iterable[int] = range(1, 11),
    budget: int = 256,
) -> Optional[ScanHit]:
    """First (p0, v0) whose curve E_a(p0, v0) shows a positive-rank witness."""
    if budget <= 0:
        return None
    vset = list(vset)
    for p0 in pset:
        if is_square(p0 * (p0 * p0 + a)):
            continue
        for v0 in vset:
            inst = build_fixeda(a, p0, v0)
            A, B = int(-(inst.f1 + inst.f2)), int(inst.f1 * inst.f2)
            P = positive_rank_witness(A, B, budget)
            if P is not None:
                return ScanHit(p0, v0, P, _certificate(a, p0, v0, P, budget))
    return None
