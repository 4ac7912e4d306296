"""Elliptic curves y^2 = x^3 + A2 x^2 + A4 x + A6 over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import RatLike, as_rat, rat_str

MAZUR_BOUND = 12


@dataclass(frozen=True)
class Curve:
    A2: Fraction
    A4: Fraction
    A6: Fraction

    def __init__(self, A2: RatLike = 0, A4: RatLike = 0, A6: RatLike = 0):
        object.__setattr__(self, "A2", as_rat(A2))
        object.__setattr__(self, "A4", as_rat(A4))
        object.__setattr__(self, "A6", as_rat(A6))
        if self.discriminant() == 0:
            raise ValueError(f"singular curve {self}")

    def rhs(self, x: Fraction) -> Fraction:
        return ((x + self.A2) * x + self.A4) * x + self.A6

    def discriminant(self) -> Fraction:
        a, b, c = self.A2, self.A4, self.A6
        # Discriminant of x^3 + a x^2 + b x + c, times 16.
        return 16 * (a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c)

    def short_coeffs(self) -> tuple[Fraction, Fraction]:
        """(a, b) of the short model X^3 + aX + b with X = x + A2/3."""
        a2, a4, a6 = self.A2, self.A4, self.A6
        return a4 - a2 * a2 / 3, a6 - a2 * a4 / 3 + 2 * a2**3 / 27

    def j_invariant(self) -> Fraction:
        a, b = self.short_coeffs()
        return 1728 * 4 * a**3 / (4 * a**3 + 27 * b * b)

    def __str__(self) -> str:
        terms = ["x^3"]
        for c, mono in ((self.A2, "x^2"), (self.A4, "x"), (self.A6, "")):
            if c:
                terms.append(f"{'-' if c < 0 else '+'} {rat_str(abs(c))}{('*' + mono) if mono else ''}")
        return "y^2 = " + " ".join(terms)


@dataclass(frozen=True)
class Point:
    """Affine point, or the point at infinity when ``x is None``."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    @classmethod
    def affine(cls, x: RatLike, y: RatLike) -> "Point":
        return cls(as_rat(x), as_rat(y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def naive_height(self) -> int:
        if self.x is None:
            return 0
        return max(abs(self.x.numerator), self.x.denominator)

    def __neg__(self) -> "Point":
        return self if self.x is None else Point(self.x, -self.y)

    def __str__(self) -> str:
        if self.x is None:
            return "O"
        return f"({rat_str(self.x)}, {rat_str(self.y)})"

    def to_json(self) -> list[str] | None:
        return None if self.x is None else [rat_str(self.x), rat_str(self.y)]

    @classmethod
    def from_json(cls, obj) -> "Point":
        return INF if obj is None else cls.affine(obj[0], obj[1])


INF = Point()


def on_curve(c: Curve, P: Point) -> bool:
    if P.is_infinity:
        return True
    return P.y * P.y == c.rhs(P.x)


def _check(c: Curve, *pts: Point) -> None:
    for P in pts:
        if not on_curve(c, P):
            raise ValueError(f"{P} is not on {c}")


def add(c: Curve, P: Point, R: Point) -> Point:
    """Chord-tangent addition."""
    _check(c, P, R)
    return _add(c, P, R)


def _add(c: Curve, P: Point, R: Point) -> Point:
    if P.is_infinity:
        return R
    if R.is_infinity:
        return P
    if P.x == R.x:
        if P.y != R.y or P.y == 0:
            return INF
        lam = (3 * P.x * P.x + 2 * c.A2 * P.x + c.A4) / (2 * P.y)
    else:
        lam = (R.y - P.y) / (R.x - P.x)
    x3 = lam * lam - c.A2 - P.x - R.x
    y3 = lam * (P.x - x3) - P.y
    return Point(x3, y3)


def neg(c: Curve, P: Point) -> Point:
    _check(c, P)
    return -P


def mul_scalar(c: Curve, P: Point, n: int) -> Point:
    _check(c, P)
    if n < 0:
        return mul_scalar(c, -P, -n)
    out, base = INF, P
    while n:
        if n & 1:
            out = _add(c, out, base)
        base = _add(c, base, base)
        n >>= 1
    return out


def torsion_order(c: Curve, P: Point) -> int | None:
    """Order of P if it is at most the Mazur bound, else None."""
    _check(c, P)
    Q = P
    for n in range(1, MAZUR_BOUND + 1):
        if Q.is_infinity:
            return n
        Q = _add(c, Q, P)
    return None


def is_infinite_order(c: Curve, P: Point) -> bool:
    """True iff nP != O for n <= 12 (then P has infinite order by Mazur)."""
    if P.is_infinity:
        raise ValueError("the point at infinity has finite order")
    return torsion_order(c, P) is None


def quartic_twist(P: Point, t: RatLike) -> Point:
    """(x, y) -> (t^2 x, t^3 y), from y^2 = x^3 + Bx to y^2 = x^3 + B t^4 x."""
    t = as_rat(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    if P.is_infinity:
        return P
    return Point(t * t * P.x, t**3 * P.y)


def twist_curve(c: Curve, t: RatLike) -> Curve:
    """Image curve of the scaling (x, y) -> (t^2 x, t^3 y)."""
    t = as_rat(t)
    return Curve(c.A2 * t**2, c.A4 * t**4, c.A6 * t**6)


def scale_point(P: Point, t: RatLike) -> Point:
    """Same map as :func:`quartic_twist`, valid on any curve family."""
    return quartic_twist(P, t)


@dataclass(frozen=True)
class WeightedSig:
    """f(l^w1 x, l^w2 y) = l^d f(x, y)."""

    w1: int
    w2: int
    d: int


def weighted_lift(sig: WeightedSig, witness: tuple[RatLike, RatLike], Q: RatLike, j: int) -> tuple[Fraction, Fraction]:
    """Scale a witness of f = c to a witness of f = c * Q^(d j)."""
    x, y = as_rat(witness[0]), as_rat(witness[1])
    Q = as_rat(Q)
    return x * Q ** (sig.w1 * j), y * Q ** (sig.w2 * j)


def bx_curve(B: RatLike) -> Curve:
    """y^2 = x^3 + B x."""
    return Curve(0, B, 0)


def mordell_curve(k: RatLike) -> Curve:
    """y^2 = x^3 + k."""
    return Curve(0, 0, k)


def isomorphism_scale(c1: Curve, c2: Curve) -> Fraction | None:
    """Return u with short(c2) = u-scaled short(c1) (a2 = u^4 a1, b2 = u^6 b1).

    None when the curves are not isomorphic over Q.
    """
    a1, b1 = c1.short_coeffs()
    a2, b2 = c2.short_coeffs()
    from .exactnum import rational_root

    if a1 == 0 and a2 == 0:
        cands = [rational_root(b2 / b1, 6)] if b1 and b2 else []
    elif b1 == 0 and b2 == 0:
        cands = [rational_root(a2 / a1, 4)] if a1 and a2 else []
    else:
        if not (a1 and a2 and b1 and b2):
            return None
        r = rational_root((b2 * a1) / (b1 * a2), 2)
        cands = [r] if r is not None else []
    for u in cands:
        if u is None:
            continue
        for s in (u, -u):
            if a2 == s**4 * a1 and b2 == s**6 * b1:
                return s
    return None


def map_isomorphism(c1: Curve, c2: Curve, u: Fraction, P: Point) -> Point:
    """Carry P on c1 to c2 through the short models with scale u."""
    if P.is_infinity:
        return P
    X = P.x + c1.A2 / 3
    X2 = u * u * X
    return Point(X2 - c2.A2 / 3, u**3 * P.y)
