"""Dense univariate polynomials over Q, resultants and discriminants.

Multivariate identities are never expanded symbolically; they are checked
as black-box evaluators with :func:`identity_check`.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exactnum import RatLike, as_rat

log = logging.getLogger(__name__)


class PoleError(ZeroDivisionError):
    """An evaluator was asked for a value at one of its poles."""


class Poly:
    """Polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RatLike] = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: RatLike) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: RatLike) -> Fraction:
        return eval_poly(self, x)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out, base = Poly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: RatLike) -> "Poly":
        c = as_rat(c)
        return Poly([c * a for a in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lc
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + other.degree] / lc
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(q), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self.scale(1 / self.lc) if self.coeffs else self

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out


def eval_poly(p: Poly, x: RatLike) -> Fraction:
    """Horner evaluation."""
    x = as_rat(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def resultant(f: Poly, g: Poly) -> Fraction:
    """Res(f, g) by the subresultant PRS (Brown-Traub / Collins)."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    m, n = f.degree, g.degree
    if m < n:
        sign = -1 if (m * n) % 2 else 1
        return sign * resultant(g, f)
    if n == 0:
        return g.lc**m
    sign = 1
    A, B = f, g
    g_ = Fraction(1)
    h = Fraction(1)
    while True:
        da, db = A.degree, B.degree
        delta = da - db
        if (da * db) % 2:
            sign = -sign
        # Pseudo-remainder: lc(B)^(delta+1) * A mod B.
        R = (A.scale(B.lc ** (delta + 1))) % B
        if R.is_zero():
            return Fraction(0)
        A = B
        B = R.scale(1 / (g_ * h**delta))
        g_ = A.lc
        h = h ** (1 - delta) * g_**delta if delta else h
        if B.degree == 0:
            db = A.degree
            h = h ** (1 - db) * B.lc**db
            return sign * h


def discriminant_u(p: Poly) -> Fraction:
    """Disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p)."""
    d = p.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


@dataclass(frozen=True)
class RatFunc1:
    """Univariate rational function kept with coprime numerator/denominator."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def make(cls, num: Poly | Sequence[RatLike], den: Poly | Sequence[RatLike] = (1,)) -> "RatFunc1":
        num = num if isinstance(num, Poly) else Poly(num)
        den = den if isinstance(den, Poly) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(Poly(), Poly([1]))
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        c = den.lc
        return cls(num.scale(1 / c), den.scale(1 / c))

    @classmethod
    def poly(cls, coeffs: Sequence[RatLike]) -> "RatFunc1":
        return cls.make(Poly(coeffs))

    def __call__(self, y: RatLike) -> Fraction:
        d = eval_poly(self.den, y)
        if d == 0:
            raise PoleError(f"pole at {y}")
        return eval_poly(self.num, y) / d

    def __mul__(self, other: "RatFunc1") -> "RatFunc1":
        return RatFunc1.make(self.num * other.num, self.den * other.den)

    def __sub__(self, other: "RatFunc1") -> "RatFunc1":
        return RatFunc1.make(self.num * other.den - other.num * self.den, self.den * other.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()


def random_rational(rng: random.Random, bound: int = 10**4) -> Fraction:
    """Numerator and denominator uniform in [1, bound], uniform sign."""
    q = Fraction(rng.randint(1, bound), rng.randint(1, bound))
    return q if rng.random() < 0.5 else -q


Evaluator = Callable[..., Fraction]


def identity_check(
    lhs: Evaluator,
    rhs: Evaluator,
    nvars: int,
    trials: int = 20,
    degree_bound: int = 64,
    seed: int = 0,
) -> bool:
    """Compare two rational expressions at random rational points.

    Denominators are drawn from [1, max(10^4, 2 * degree_bound)], a set
    larger than the degree bound. Poles (PoleError / ZeroDivisionError on
    either side) are resampled; more than 10 * trials resamples is a failure.
    """
    rng = random.Random(seed)
    bound = max(10**4, 2 * degree_bound)
    log.debug("identity_check seed=%d trials=%d nvars=%d", seed, trials, nvars)
    done = resamples = 0
    while done < trials:
        pt = [random_rational(rng, bound) for _ in range(nvars)]
        try:
            left, right = lhs(*pt), rhs(*pt)
        except ZeroDivisionError:
            resamples += 1
            if resamples > 10 * trials:
                return False
            continue
        if left != right:
            log.info("identity mismatch at %s", pt)
            return False
        done += 1
    return True
