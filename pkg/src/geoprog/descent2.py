"""Rank bounds by descent via 2-isogeny.

For E: y^2 = x^3 + A x^2 + B x and the isogenous E': y^2 = x^3 - 2A x^2 +
(A^2 - 4B) x, the image of E(Q) under x -> x mod squares consists of the
squarefree divisors b1 of B whose quartic

    N^2 = b1 M^4 + A M^2 e^2 + (B / b1) e^4

has a rational point. Everywhere-locally-solvable b1 give the upper bound,
b1 with a point actually found give the lower bound, and

    rank E(Q) = log2 #im(E) + log2 #im(E') - 2.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .ellcurve import Curve, Point, INF, is_infinite_order, on_curve
from .exactnum import prime_divisors, squarefree_divisors, squarefree_part

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2**12
START_BOUND = 2**4

EXACT = "Exact"
UNDETERMINED = "Undetermined"

# Moduli for the square-class sieve of the quartic search.
SIEVE_MODULI = (64, 27, 25, 49, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


@dataclass(frozen=True)
class IsogenyPair:
    A: int
    B: int

    def __post_init__(self) -> None:
        if self.B * (self.A * self.A - 4 * self.B) == 0:
            raise ValueError("B (A^2 - 4B) must be nonzero")

    @property
    def E(self) -> Curve:
        return Curve(self.A, self.B, 0)

    @property
    def A_dual(self) -> int:
        return -2 * self.A

    @property
    def B_dual(self) -> int:
        return self.A * self.A - 4 * self.B

    @property
    def E_dual(self) -> Curve:
        return Curve(self.A_dual, self.B_dual, 0)


def isogenous_pair(A: int, B: int) -> IsogenyPair:
    return IsogenyPair(int(A), int(B))


@dataclass(frozen=True)
class HomSpace:
    """N^2 = b1 M^4 + A M^2 e^2 + b2 e^4 with b1 b2 = B."""

    b1: int
    b2: int
    A: int

    def value(self, M: int, e: int) -> int:
        M2, e2 = M * M, e * e
        return self.b1 * M2 * M2 + self.A * M2 * e2 + self.b2 * e2 * e2


def homspace(b1: int, A: int, B: int) -> HomSpace:
    if B % b1:
        raise ValueError(f"{b1} does not divide {B}")
    return HomSpace(b1, B // b1, A)


# -- local solvability -----------------------------------------------------


def _is_padic_square(n: int, p: int) -> bool:
    """n a nonzero integer: is it a square in Q_p?"""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    if v % 2:
        return False
    if p == 2:
        return n % 8 == 1
    return pow(n % p, (p - 1) // 2, p) == 1


def _val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _taylor(coeffs: tuple[int, ...], x0: int) -> list[int]:
    """Integer Taylor coefficients of g(x0 + t): c_k = g^(k)(x0) / k!."""
    c = list(coeffs)
    n = len(c)
    # Repeated synthetic division by (t - x0).
    out = []
    for _ in range(n):
        acc = 0
        nxt = []
        for a in reversed(c):
            acc = acc * x0 + a
            nxt.append(acc)
        out.append(nxt[-1])
        c = list(reversed(nxt[:-1]))
    return out


def _zp_soluble(coeffs: tuple[int, ...], p: int, x0: int, n: int, depth: int = 0) -> bool:
    """Is there x in x0 + p^n Z_p with g(x) a square in Q_p (0 allowed)?"""
    tay = _taylor(coeffs, x0)
    gx = tay[0]
    if gx == 0 or _is_padic_square(gx, p):
        return True
    lam = _val(gx, p)
    pn = 1
    delta = None
    for k, ck in enumerate(tay[1:], start=1):
        if ck:
            cand = k * n + _val(ck, p)
            delta = cand if delta is None else min(delta, cand)
    c1 = tay[1] if len(tay) > 1 else 0
    if c1:
        mu = _val(c1, p)
        if lam > 2 * mu and lam - mu >= n:
            return True  # Hensel: a root of g lies in the coset
    need = 3 if p == 2 else 1
    if delta is None or delta - lam >= need:
        return False
    if depth > 200:
        raise RuntimeError("p-adic solubility recursion did not terminate")
    pn = p**n
    return any(_zp_soluble(coeffs, p, x0 + t * pn, n + 1, depth + 1) for t in range(p))


def _poly_mod(coeffs: tuple[int, ...], t: int, p: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * t + a) % p
    return acc


def _top_level_odd(coeffs: tuple[int, ...], p: int) -> bool:
    """Solubility over all of Z_p for odd p, with a fast first level."""
    rng = random.Random(p)
    probes = range(p) if p <= 64 else [rng.randrange(p) for _ in range(64)]
    for t in probes:
        r = _poly_mod(coeffs, t, p)
        if r and pow(r, (p - 1) // 2, p) == 1:
            return True
    if p <= 64:
        roots = [t for t in range(p) if _poly_mod(coeffs, t, p) == 0]
    elif p < 2**21:
        ts = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for a in reversed(coeffs):
            acc = (acc * ts + (a % p)) % p
        squares = np.zeros(p, dtype=bool)
        squares[(ts * ts) % p] = True
        if np.any(squares[acc] & (acc != 0)):
            return True
        roots = [int(t) for t in np.nonzero(acc == 0)[0]]
    else:
        roots = []
        for t in range(p):
            r = _poly_mod(coeffs, t, p)
            if r == 0:
                roots.append(t)
            elif pow(r, (p - 1) // 2, p) == 1:
                return True
    return any(_zp_soluble(coeffs, p, t, 1) for t in roots)


@lru_cache(maxsize=200000)
def _local_at_prime(b1: int, A: int, b2: int, p: int) -> bool:
    g = (b2, 0, A, 0, b1)  # g(M) = b1 M^4 + A M^2 + b2, lowest first
    h = (b1, 0, A, 0, b2)  # h(e) = b2 e^4 + A e^2 + b1
    if p == 2:
        if _zp_soluble(g, 2, 0, 0):
            return True
    elif _top_level_odd(g, p):
        return True
    return _zp_soluble(h, p, 0, 1)


def local_solvable(hs: HomSpace, p: int | None) -> bool:
    """Local solvability at a prime p, or at the real place for p = None."""
    if p is None or p == math.inf:
        if hs.b1 > 0 or hs.b2 > 0:
            return True
        return hs.A > 0 and hs.A * hs.A - 4 * hs.b1 * hs.b2 >= 0
    return _local_at_prime(hs.b1, hs.A, hs.b2, int(p))


def bad_primes(A: int, B: int) -> list[int]:
    return sorted(set([2] + prime_divisors(B) + prime_divisors(A * A - 4 * B)))


def selmer_set(A: int, B: int) -> list[int]:
    """Squarefree b1 | B whose quartic is everywhere locally solvable."""
    primes = bad_primes(A, B)
    out = []
    for b1 in squarefree_divisors(B):
        hs = homspace(b1, A, B)
        if local_solvable(hs, None) and all(local_solvable(hs, p) for p in primes):
            out.append(b1)
    return out


def _sqf_mul(d1: int, d2: int) -> int:
    g = math.gcd(d1, d2)
    return (d1 // g) * (d2 // g)


def group_closure(gens: Iterable[int]) -> set[int]:
    """Subgroup of Q*/Q*^2 (squarefree representatives) generated by gens."""
    group = {1}
    for g in gens:
        g = squarefree_part(g)
        if g in group:
            continue
        group |= {_sqf_mul(h, g) for h in group}
    return group


def is_subgroup(elems: Iterable[int]) -> bool:
    s = set(elems)
    return 1 in s and all(_sqf_mul(x, y) in s for x in s for y in s)


def _log2(n: int) -> int:
    k = n.bit_length() - 1
    if 1 << k != n:
        raise AssertionError(f"{n} is not a power of 2")
    return k


# -- global search on the quartics ----------------------------------------


_SQUARE_TABLES = {m: np.isin(np.arange(m), (np.arange(m) ** 2) % m) for m in SIEVE_MODULI}


class _QuarticSieve:
    def __init__(self, hs: HomSpace):
        self.hs = hs
        self.tables = {}
        for m in SIEVE_MODULI:
            r = np.arange(m, dtype=np.int64)
            e = np.arange(m, dtype=np.int64)[:, None]
            r2 = (r * r) % m
            e2 = (e * e) % m
            vals = ((hs.b1 % m) * r2 % m * r2 + (hs.A % m) * r2 % m * e2 + (hs.b2 % m) * e2 % m * e2) % m
            self.tables[m] = _SQUARE_TABLES[m][vals]

    def search(self, Ms: np.ndarray, es: np.ndarray) -> Optional[tuple[int, int, int]]:
        """Smallest-height (M, e, N) over the grid Ms x es, coprime pairs only."""
        mask = np.ones((len(es), len(Ms)), dtype=bool)
        for m, table in self.tables.items():
            mask &= table[np.ix_(es % m, Ms % m)]
            if not mask.any():
                return None
        ii, jj = np.nonzero(mask)
        best = None
        for i, j in zip(ii.tolist(), jj.tolist()):
            e, M = int(es[i]), int(Ms[j])
            if math.gcd(M, e) != 1:
                continue
            val = self.hs.value(M, e)
            if val < 0:
                continue
            N = math.isqrt(val)
            if N * N == val:
                key = (max(M, e), e, M)
                if best is None or key < best[0]:
                    best = (key, (M, e, N))
        return None if best is None else best[1]


def _search_region(sieve: _QuarticSieve, lo: int, hi: int) -> Optional[tuple[int, int, int]]:
    """Search max(M, e) in (lo, hi], M, e >= 0."""
    found = []
    block = max(1, (1 << 20) // (hi + 1))
    # e <= lo: only M in (lo, hi]
    if lo >= 0:
        Ms = np.arange(lo + 1, hi + 1, dtype=np.int64)
        for start in range(0, lo + 1, block):
            es = np.arange(start, min(start + block, lo + 1), dtype=np.int64)
            r = sieve.search(Ms, es)
            if r:
                found.append(r)
    Ms = np.arange(0, hi + 1, dtype=np.int64)
    for start in range(lo + 1, hi + 1, block):
        es = np.arange(start, min(start + block, hi + 1), dtype=np.int64)
        r = sieve.search(Ms, es)
        if r:
            found.append(r)
    if not found:
        return None
    return min(found, key=lambda t: (max(t[0], t[1]), t[1], t[0]))


def search_homspace(hs: HomSpace, bound: int, start: int = -1) -> Optional[tuple[int, int, int]]:
    """Coprime (M, e) with 0 <= M, e <= bound and N^2 = quartic(M, e).

    Only even powers of M and e occur, so nonnegative values suffice. Pairs
    with max(M, e) <= start are assumed already searched.
    """
    if bound < 0:
        return None
    return _search_region(_QuarticSieve(hs), start, bound)


def lift_point(hs: HomSpace, sol: tuple[int, int, int]) -> Point:
    """(M, e, N) -> (b1 M^2 / e^2, b1 M N / e^3) on y^2 = x^3 + A x^2 + B x."""
    M, e, N = sol
    if e == 0:
        return INF
    return Point(Fraction(hs.b1 * M * M, e * e), Fraction(hs.b1 * M * N, e**3))


def dual_to_E(pair: IsogenyPair, P: Point) -> Point:
    """The dual isogeny E' -> E, (X, Y) -> (Y^2/4X^2, Y (B' - X^2) / 8X^2)."""
    if P.is_infinity or P.x == 0:
        return INF
    X, Y = P.x, P.y
    return Point(Y * Y / (4 * X * X), Y * (pair.B_dual - X * X) / (8 * X * X))


# -- rank bounds -----------------------------------------------------------


@dataclass
class RankResult:
    lower: int
    upper: Optional[int]
    status: str
    witnesses: list[Point] = field(default_factory=list)
    budget_used: int = 0
    selmer: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if self.upper is not None and self.lower > self.upper:
            raise AssertionError(f"lower {self.lower} > upper {self.upper}")

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status,
            "witnesses": [P.to_json() for P in self.witnesses],
            "budget_used": self.budget_used,
            "selmer": list(self.selmer) if self.selmer else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RankResult":
        return cls(
            lower=obj["lower"],
            upper=obj["upper"],
            status=obj["status"],
            witnesses=[Point.from_json(w) for w in obj.get("witnesses", [])],
            budget_used=obj.get("budget_used", 0),
            selmer=tuple(obj["selmer"]) if obj.get("selmer") else None,
        )


def _reduce_model(A: int, B: int) -> tuple[int, int, int]:
    """Largest u with u^2 | A and u^4 | B; returns (A/u^2, B/u^4, u)."""
    u = 1
    for p in prime_divisors(B):
        while B % p**4 == 0 and A % p**2 == 0:
            A //= p**2
            B //= p**4
            u *= p
    return A, B, u


@dataclass
class _Side:
    pair_A: int
    pair_B: int
    selmer: list[int]
    found: set[int]
    points: dict[int, Point]
    searched: dict[int, int]


def _descend(A: int, B: int, budget: int, stop_at_positive: bool = False):
    pair = isogenous_pair(A, B)
    sides = []
    for a_, b_ in ((pair.A, pair.B), (pair.A_dual, pair.B_dual)):
        sel = selmer_set(a_, b_)
        if not is_subgroup(sel):
            raise AssertionError(f"Selmer set not a group for A={a_}, B={b_}: {sel}")
        found = group_closure([1, b_])
        sides.append(_Side(a_, b_, sel, found, {}, {}))
    s, s2 = len(sides[0].selmer), len(sides[1].selmer)
    upper = _log2(s) + _log2(s2) - 2

    def lower() -> int:
        return _log2(len(sides[0].found)) + _log2(len(sides[1].found)) - 2

    bound = START_BOUND
    used = 0
    while lower() < upper and budget > 0:
        bound = min(bound, budget)
        for side in sides:
            for d in side.selmer:
                if d in side.found:
                    continue
                prev = side.searched.get(d, -1)
                hs = homspace(d, side.pair_A, side.pair_B)
                sol = search_homspace(hs, bound, prev)
                side.searched[d] = bound
                if sol is not None:
                    P = lift_point(hs, sol)
                    side.points[d] = P
                    side.found = group_closure(list(side.found) + [d])
                    if stop_at_positive and lower() >= 1:
                        break
            if stop_at_positive and lower() >= 1:
                break
        used = bound
        if lower() >= upper or bound >= budget or (stop_at_positive and lower() >= 1):
            break
        bound *= 2
    return pair, sides, lower(), upper, (s, s2), used


def _witnesses(pair: IsogenyPair, sides) -> list[Point]:
    E = pair.E
    pts = []
    for P in sides[0].points.values():
        if not P.is_infinity and P.x != 0:
            pts.append(P)
    for P in sides[1].points.values():
        Q = dual_to_E(pair, P)
        if not Q.is_infinity and Q.x != 0:
            pts.append(Q)
    out = []
    seen = set()
    for P in sorted(pts, key=lambda P: (P.naive_height(), P.x)):
        P = Point(P.x, abs(P.y))
        assert on_curve(E, P)
        if P.x in seen or not is_infinite_order(E, P):
            continue
        seen.add(P.x)
        out.append(P)
    return out


def rank_bounds(A: int, B: int, budget: int = DEFAULT_BUDGET, reduce: bool = True) -> RankResult:
    """Rank bounds for y^2 = x^3 + A x^2 + B x.

    budget caps the quartic search bound; bounds double from 16 up to it.
    """
    A, B = int(A), int(B)
    u = 1
    if reduce:
        A, B, u = _reduce_model(A, B)
    pair, sides, lo, up, sel, used = _descend(A, B, budget)
    wit = [_unscale(P, u) for P in _witnesses(pair, sides)]
    return RankResult(lo, up, EXACT if lo == up else UNDETERMINED, wit, used, sel)


def _unscale(P: Point, u: int) -> Point:
    if u == 1 or P.is_infinity:
        return P
    return Point(P.x * u * u, P.y * u**3)


def positive_rank_witness(A: int, B: int, budget: int = DEFAULT_BUDGET) -> Optional[Point]:
    """An infinite-order point with x != 0 on y^2 = x^3 + A x^2 + B x, if found."""
    from .ptsearch import SearchParams, first_infinite_order

    A, B = int(A), int(B)
    A0, B0, u = _reduce_model(A, B)
    pair, sides, lo, up, _, _ = _descend(A0, B0, budget, stop_at_positive=True)
    cands = [_unscale(P, u) for P in _witnesses(pair, sides)] if lo >= 1 else []
    if up == 0:
        return None
    E = Curve(A, B, 0)
    if A == 0:
        # Cheap direct search; keeps the smaller naive height on ties.
        P = first_infinite_order(E, SearchParams(M=2000, E=40))
        if P is not None:
            cands.append(P)
    if not cands:
        return None
    return min(cands, key=lambda P: (P.naive_height(), P.x))
