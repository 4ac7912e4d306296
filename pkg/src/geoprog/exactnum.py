"""Integers, reduced rationals and the small amount of elementary number
theory the rest of the package leans on.

Python's ``int`` already is an arbitrary-precision signed integer and
``fractions.Fraction`` keeps itself reduced with a positive denominator, so
they serve directly as the ``Int`` and ``Rat`` types.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Rat = Fraction
RatLike = Union[int, Fraction, str]

TRIAL_LIMIT = 10**6

_SMALL_PRIMES: list[int] = []


def as_rat(value: RatLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(q: Fraction) -> str:
    """Exact ``num/den`` string (just ``num`` for integers)."""
    q = as_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def primes_below(n: int) -> list[int]:
    """Primes < n by a plain sieve of Eratosthenes."""
    if n <= 2:
        return []
    sieve = bytearray([1]) * n
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def _small_primes() -> list[int]:
    if not _SMALL_PRIMES:
        _SMALL_PRIMES.extend(primes_below(TRIAL_LIMIT))
    return _SMALL_PRIMES


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases.

    Deterministic below 3.3e24, which covers every input this package
    produces; beyond that it is a strong probable-prime test.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out, rng)
        _split(r, out, rng)
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __str__(self) -> str:
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


@lru_cache(maxsize=65536)
def factor(n: int) -> Factorization:
    """Factor a nonzero integer: trial division to 10^6, then Pollard rho."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < TRIAL_LIMIT * TRIAL_LIMIT:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found, random.Random(m))
    return Factorization(sign, tuple(sorted(found.items())))


def prime_divisors(n: int) -> list[int]:
    return factor(n).primes() if n else []


def is_prime(p: int) -> bool:
    if p < TRIAL_LIMIT:
        return p >= 2 and factor(p).factors == ((p, 1),)
    return is_probable_prime(p)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer (no primality check)."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q: RatLike, p: int) -> int:
    """v_p(q) for a nonzero rational q and a prime p."""
    q = as_rat(q)
    if q == 0:
        raise ValueError("valuation of 0 is undefined")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return valuation(q.numerator, p) - valuation(q.denominator, p)


def squarefree_part(n: int) -> int:
    """The squarefree integer d (with the sign of n) with n = d * k^2."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    d = -1 if n < 0 else 1
    for p, e in factor(n).factors:
        if e % 2:
            d *= p
    return d


def is_square(q: RatLike) -> bool:
    q = as_rat(q)
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    return ra * ra == a and rb * rb == b


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of an integer, or None."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = integer_root(-n, k)
        return None if r is None else -r
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k)) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement keeps this exact for huge inputs.
    r = max(r, 1)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def rational_root(q: RatLike, k: int) -> Fraction | None:
    q = as_rat(q)
    num = integer_root(q.numerator, k)
    den = integer_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def is_power(q: RatLike, k: int) -> bool:
    return rational_root(q, k) is not None


@dataclass(frozen=True)
class SolutionLevel:
    """Trivial, Level(e) or Proper (Level(1))."""

    kind: str
    e: int | None = None

    @classmethod
    def trivial(cls) -> "SolutionLevel":
        return cls("trivial", None)

    @classmethod
    def level(cls, e: int) -> "SolutionLevel":
        return cls("proper", 1) if e == 1 else cls("level", e)

    @property
    def is_proper(self) -> bool:
        return self.kind == "proper"

    def __str__(self) -> str:
        if self.kind == "level":
            return f"Level({self.e})"
        return self.kind.capitalize()


def classify_solution_level(Q: RatLike, d: int) -> SolutionLevel:
    """Classify the quotient Q of a solution for a function of weighted degree d.

    Trivial when Q is a d-th power. Otherwise the largest e | d, e < d such
    that Q is an e-th power and some prime has valuation exactly +-e. When no
    e satisfies that literally (e.g. Q = 8, d = 4) the level falls back to
    gcd(g, d) where g is the gcd of all valuations.
    """
    Q = as_rat(Q)
    if Q in (0, 1, -1):
        raise ValueError("Q must not be -1, 0 or 1")
    if d < 2:
        raise ValueError("d must be at least 2")
    if is_power(Q, d):
        return SolutionLevel.trivial()
    vals = [e for _, e in factor(Q.numerator).factors] + [
        -e for _, e in factor(Q.denominator).factors
    ]
    for e in sorted((k for k in range(1, d) if d % k == 0), reverse=True):
        if is_power(Q, e) and any(abs(v) == e for v in vals):
            return SolutionLevel.level(e)
    g = 0
    for v in vals:
        g = math.gcd(g, v)
    return SolutionLevel.level(math.gcd(g, d) if g else 1)


def fourth_power_free_part(a: int) -> tuple[int, int]:
    """Return (b, t) with a = b * t^4 and b fourth-power-free, t > 0."""
    if a == 0:
        raise ValueError("a must be nonzero")
    b = -1 if a < 0 else 1
    t = 1
    for p, e in factor(a).factors:
        t *= p ** (e // 4)
        b *= p ** (e % 4)
    return b, t


def decompose_124(a: int) -> tuple[int, int, int]:
    """Write a fourth-power-free a > 0 as q1 * q2^2 * q3^3 (squarefree, coprime)."""
    if a <= 0:
        raise ValueError("a must be positive")
    q = [1, 1, 1]
    for p, e in factor(a).factors:
        if e >= 4:
            raise ValueError(f"{a} is divisible by {p}^4")
        q[e - 1] *= p
    return q[0], q[1], q[2]


def canonicalize_pair(a: RatLike, Q: RatLike) -> tuple[int, int]:
    """Integral representative (p q^3, u v^3) of (a, Q) = (p/q, u/v)."""
    a, Q = as_rat(a), as_rat(Q)
    if a == 0 or Q == 0:
        raise ValueError("a and Q must be nonzero")
    return a.numerator * a.denominator**3, Q.numerator * Q.denominator**3


def squarefree_divisors(n: int, signed: bool = True) -> list[int]:
    """All squarefree divisors of n, optionally with both signs."""
    divs = [1]
    for p in prime_divisors(n):
        divs += [d * p for d in divs]
    if signed:
        divs += [-d for d in divs]
    return sorted(divs, key=lambda d: (abs(d), d < 0))


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
