"""Sieved search for rational points on y^2 = x^3 + A4 x + A6.

Points are written x = m / e^2, y = n / e^3 with gcd(m, e) = 1, so a point
exists iff m^3 + A4 m e^4 + A6 e^6 is a perfect square. Candidates are
filtered by square-class tables modulo small primes before the exact test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .ellcurve import Curve, Point, is_infinite_order, on_curve
from .exactnum import primes_below

DEFAULT_SIEVE_PRIMES = tuple(primes_below(64))
_BLOCK = 1 << 20


@dataclass(frozen=True)
class SearchParams:
    M: int = 10**4
    E: int = 64
    primes: tuple[int, ...] = DEFAULT_SIEVE_PRIMES
    budget: Optional[int] = None  # max candidate (m, e) pairs examined
    sieve: bool = True

    def __post_init__(self) -> None:
        if self.M < 1 or self.E < 1:
            raise ValueError("bounds must be >= 1")


def _integral_model(c: Curve) -> tuple[int, int, int]:
    """(A4', A6', u) with A4' = A4 u^4, A6' = A6 u^6 integral."""
    if c.A2 != 0:
        raise ValueError("search_points needs A2 = 0")
    u = 1
    for q, k in ((c.A4, 4), (c.A6, 6)):
        den = q.denominator
        while (u**k * q).denominator != 1:
            u *= den
    return int(c.A4 * u**4), int(c.A6 * u**6), u


def _tables(A4: int, A6: int, moduli) -> dict[int, np.ndarray]:
    out = {}
    for p in moduli:
        sq = np.zeros(p, dtype=bool)
        sq[(np.arange(p) ** 2) % p] = True
        m = np.arange(p, dtype=np.int64)
        e = np.arange(p, dtype=np.int64)[:, None]
        e2 = e * e % p
        e4 = e2 * e2 % p
        e6 = e4 * e2 % p
        vals = (m * m % p * m + (A4 % p) * m % p * e4 + (A6 % p) * e6) % p
        out[p] = sq[vals]
    return out


def search_points(c: Curve, params: SearchParams = SearchParams()) -> list[Point]:
    """All points with x = m/e^2, |m| <= M, 1 <= e <= E, sorted by naive height.

    Returns one point per x (the one with y >= 0); negatives are implied.
    Scaling to an integral model is undone before returning.
    """
    A4, A6, u = _integral_model(c)
    tables = _tables(A4, A6, params.primes) if params.sieve else {}
    M = params.M * u * u if u > 1 else params.M
    ms = np.arange(-M, M + 1, dtype=np.int64)
    mods = {p: ms % p for p in tables}
    found: list[Point] = []
    examined = 0
    for e in range(1, params.E + 1):
        if params.budget is not None and examined >= params.budget:
            break
        mask = np.gcd(ms, e) == 1
        for p, table in tables.items():
            mask &= table[e % p][mods[p]]
        examined += len(ms)
        e2 = e * e
        e4 = e2 * e2
        e6 = e4 * e2
        for m in ms[mask].tolist():
            val = m * m * m + A4 * m * e4 + A6 * e6
            if val < 0:
                continue
            n = math.isqrt(val)
            if n * n == val:
                P = Point(Fraction(m, e2 * u * u), Fraction(n, e2 * e * u**3))
                assert on_curve(c, P)
                found.append(P)
    found.sort(key=lambda P: (P.naive_height(), P.x))
    return found


def first_infinite_order(c: Curve, params: SearchParams = SearchParams()) -> Optional[Point]:
    """Lowest naive height point of infinite order with x != 0, or None."""
    for P in search_points(c, params):
        if P.x != 0 and is_infinite_order(c, P):
            return P
    return None
