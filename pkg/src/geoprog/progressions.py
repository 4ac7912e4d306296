"""Explicit witnesses for G(a, Q) inside value sets of rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exactnum import RatLike, as_rat, decompose_124, fourth_power_free_part, rat_str
from .polynom import PoleError, RatFunc1

Func = Callable[[Fraction, Fraction], Fraction]


@dataclass
class WitnessSet:
    """Entries (i, x_i, y_i) with f(x_i, y_i) = a * Q^i."""

    f_name: str
    f: Func
    a: Fraction
    Q: Fraction
    entries: list[tuple[int, Fraction, Fraction]] = field(default_factory=list)

    def failures(self) -> list[int]:
        bad = []
        for i, x, y in self.entries:
            try:
                ok = self.f(x, y) == self.a * self.Q**i
            except ZeroDivisionError:
                ok = False
            if not ok:
                bad.append(i)
        return bad

    def validate(self) -> bool:
        return bool(self.entries) and not self.failures()

    def to_json(self) -> dict:
        return {
            "f": self.f_name,
            "a": rat_str(self.a),
            "Q": rat_str(self.Q),
            "witnesses": [{"i": i, "x": rat_str(x), "y": rat_str(y)} for i, x, y in self.entries],
            "valid": self.validate(),
        }


def f_cubic_ratio(x: Fraction, y: Fraction) -> Fraction:
    """(y^2 - x^3) / x."""
    return (y * y - x**3) / x


def f_mordell(x: Fraction, y: Fraction) -> Fraction:
    """y^2 - x^3."""
    return y * y - x**3


def f_power_ratio(d: int) -> Func:
    return lambda x, y: (y * y - x**d) / x


def f_power_diff(d: int) -> Func:
    return lambda x, y: y * y - x**d


def f_sum_cubes(x: Fraction, y: Fraction) -> Fraction:
    return x**3 + y**3


# -- one variable ----------------------------------------------------------


def linear_progression(A: RatLike, B: RatLike, t: RatLike, T: RatLike, n: int) -> WitnessSet:
    """Orbit v_0 = t, v_k = (AT + 1) v_{k-1} + BT of f(x) = Ax + B.

    f(v_k) = f(t) (AT + 1)^k. The y slot of every entry is 0.
    """
    A, B, t, T = map(as_rat, (A, B, t, T))
    if A == 0:
        raise ValueError("A must be nonzero")
    Q = A * T + 1
    if Q in (0, 1, -1):
        raise ValueError(f"degenerate quotient AT + 1 = {Q}")
    f0 = A * t + B
    if f0 == 0:
        raise ValueError("f(t) = 0 gives the zero progression")
    ws = WitnessSet(f"{rat_str(A)}*x + {rat_str(B)}", lambda x, _y: A * x + B, f0, Q)
    v = t
    for k in range(n + 1):
        ws.entries.append((k, v, Fraction(0)))
        v = Q * v + B * T
    return ws


# -- Moebius in x --------------------------------------------------------


def class1_function(g1: RatFunc1, g2: RatFunc1, h1: RatFunc1, h2: RatFunc1) -> Func:
    def f(x: Fraction, y: Fraction) -> Fraction:
        den = x * h1(y) + h2(y)
        if den == 0:
            raise PoleError("f undefined")
        return (x * g1(y) + g2(y)) / den

    return f


def _y_scan():
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        k += 1


def class1_witness(
    g1: RatFunc1,
    g2: RatFunc1,
    h1: RatFunc1,
    h2: RatFunc1,
    a: RatLike,
    Q: RatLike,
    i: int,
    y: Optional[RatLike] = None,
) -> tuple[Fraction, Fraction]:
    """x with (x g1(y) + g2(y)) / (x h1(y) + h2(y)) = a Q^i.

    Without y the scan 0, 1, -1, 2, ... picks the first usable value.
    """
    if (g1 * h2 - h1 * g2).is_zero():
        raise ValueError("g1 h2 = h1 g2: f does not depend on x")
    target = as_rat(a) * as_rat(Q) ** i
    f = class1_function(g1, g2, h1, h2)
    candidates = [as_rat(y)] if y is not None else _y_scan()
    for k, yy in enumerate(candidates):
        if k > 10000:
            break
        try:
            den = target * h1(yy) - g1(yy)
            if den == 0:
                continue
            x = (g2(yy) - target * h2(yy)) / den
            if f(x, yy) == target:
                return x, yy
        except ZeroDivisionError:
            continue
    raise ValueError("denominator vanishes at the chosen y")


def class1_progression(g1, g2, h1, h2, a: RatLike, Q: RatLike, n: int) -> WitnessSet:
    a, Q = as_rat(a), as_rat(Q)
    if a == 0 or Q in (0, 1, -1):
        raise ValueError("need a != 0 and Q not in {-1, 0, 1}")
    ws = WitnessSet("(x g1 + g2)/(x h1 + h2)", class1_function(g1, g2, h1, h2), a, Q)
    for i in range(n + 1):
        x, y = class1_witness(g1, g2, h1, h2, a, Q, i)
        ws.entries.append((i, x, y))
    return ws


# -- binary quadratic forms -----------------------------------------------


def compose(d: Fraction, P: tuple[Fraction, Fraction], R: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """(r, s) * (p, q) = (rp - d s q, rq + s p), multiplicative for x^2 + d y^2."""
    r, s = P
    p, q = R
    return r * p - d * s * q, r * q + s * p


def class2_progression(
    u: RatLike,
    v: RatLike,
    w: RatLike,
    seed_a: tuple[RatLike, RatLike],
    seed_Q: tuple[RatLike, RatLike],
    n: int,
) -> WitnessSet:
    """Witnesses for f = u x^2 + v x y + w y^2 along G(F(r,s)/4u, F(u2,v2)).

    Here F = X^2 + d Y^2, d = 4uw - v^2 and 4u f(x, y) = F(2ux + vy, y).
    """
    u, v, w = map(as_rat, (u, v, w))
    r, s = map(as_rat, seed_a)
    u2, v2 = map(as_rat, seed_Q)

    def f(x, y):
        return u * x * x + v * x * y + w * y * y

    name = f"{rat_str(u)}*x^2 + {rat_str(v)}*x*y + {rat_str(w)}*y^2"
    if u == 0 and w != 0:
        # Swap the roles of x and y.
        swapped = class2_progression(w, v, u, seed_a, seed_Q, n)
        ws = WitnessSet(name, f, swapped.a, swapped.Q)
        ws.entries = [(i, y, x) for i, x, y in swapped.entries]
        return ws
    if u == 0 and w == 0:
        if v == 0:
            raise ValueError("f is identically zero")
        d = -v * v
        a = r * r + d * s * s
        Q = u2 * u2 + d * v2 * v2
        _check_seed(a, Q)
        ws = WitnessSet(name, f, a, Q)
        ws.entries = [(i, a * Q**i / v, Fraction(1)) for i in range(n + 1)]
        return ws
    d = 4 * u * w - v * v
    Fa = r * r + d * s * s
    Q = u2 * u2 + d * v2 * v2
    _check_seed(Fa, Q)
    ws = WitnessSet(name, f, Fa / (4 * u), Q)
    X, Y = r, s
    for i in range(n + 1):
        ws.entries.append((i, (X - v * Y) / (2 * u), Y))
        X, Y = compose(d, (X, Y), (u2, v2))
    return ws


def _check_seed(a: Fraction, Q: Fraction) -> None:
    if a == 0:
        raise ValueError("seed gives a = 0")
    if Q in (0, 1, -1):
        raise ValueError(f"seed gives degenerate Q = {Q}")


# -- ratio of forms with |d1 - d2| = 1 -----------------------------------


def eval_form(coeffs: Sequence[RatLike], x: Fraction, y: Fraction) -> Fraction:
    """sum c_k x^(d-k) y^k for a form of degree d = len(coeffs) - 1."""
    d = len(coeffs) - 1
    return sum((as_rat(c) * x ** (d - k) * y**k for k, c in enumerate(coeffs)), Fraction(0))


def class3_witness(
    f1: Sequence[RatLike], f2: Sequence[RatLike], u: RatLike, v: RatLike, Q: RatLike, i: int
) -> tuple[Fraction, Fraction]:
    """(u Q^(s i), v Q^(s i)) with s = d1 - d2 = +-1, so f = f(u, v) Q^i."""
    s = (len(f1) - 1) - (len(f2) - 1)
    if abs(s) != 1:
        raise ValueError("need |deg f1 - deg f2| = 1")
    u, v, Q = map(as_rat, (u, v, Q))
    if eval_form(f2, u, v) == 0 or eval_form(f1, u, v) == 0:
        raise ValueError("need f(u, v) finite and nonzero")
    k = Q ** (s * i)
    return u * k, v * k


def class3_progression(f1, f2, u: RatLike, v: RatLike, Q: RatLike, n: int) -> WitnessSet:
    u, v, Q = map(as_rat, (u, v, Q))

    def f(x, y):
        return eval_form(f1, x, y) / eval_form(f2, x, y)

    ws = WitnessSet("f1/f2", f, f(u, v), Q)
    for i in range(n + 1):
        ws.entries.append((i, *class3_witness(f1, f2, u, v, Q, i)))
    return ws


# -- weighted (2, d) constructions ----------------------------------------

RATIO = "ratio"  # f = (y^2 - x^d) / x, quotient Q^(d-1)
DIFFERENCE = "difference"  # f = y^2 - x^d, quotient Q^d


def bihomo_construct(
    d: int,
    variant: str,
    Q: RatLike,
    p0: RatLike,
    p1: RatLike,
    q0: RatLike,
    q1: RatLike,
    n: int = 5,
) -> WitnessSet:
    """Solve f(x1, y1) = f(x0, y0) * ratio with x_i = p_i T, y_i = q_i T^m.

    m = (d - 1)/2. The two seeds are spread to every index by
    X_i = x_(i mod 2) Q^(2 floor(i/2)), Y_i = y_(i mod 2) Q^(d floor(i/2)).
    """
    if d < 3 or d % 2 == 0:
        raise ValueError("d must be odd and >= 3")
    Q, p0, p1, q0, q1 = map(as_rat, (Q, p0, p1, q0, q1))
    if Q in (0, 1, -1):
        raise ValueError("Q must not be -1, 0 or 1")
    m = (d - 1) // 2
    if variant == RATIO:
        R = Q ** (d - 1)
        den = p0 * p1 * (p1 ** (d - 1) - p0 ** (d - 1) * R)
        if den == 0:
            raise ValueError("degenerate seed: vanishing denominator")
        T = (p0 * q1 * q1 - p1 * q0 * q0 * R) / den
        if T == 0 or p0 == 0:
            raise ValueError("degenerate seed: T = 0")
        a = T ** (d - 2) * (q0 * q0 - p0**d * T) / p0
        f, name = f_power_ratio(d), f"(y^2 - x^{d})/x"
    elif variant == DIFFERENCE:
        R = Q**d
        den = p1**d - R * p0**d
        if den == 0:
            raise ValueError("degenerate seed: vanishing denominator")
        T = (q1 * q1 - R * q0 * q0) / den
        if T == 0:
            raise ValueError("degenerate seed: T = 0")
        a = T ** (d - 1) * (q0 * q0 - p0**d * T)
        f, name = f_power_diff(d), f"y^2 - x^{d}"
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if a == 0:
        raise ValueError("degenerate seed: a = 0")
    xs = (p0 * T, p1 * T)
    ys = (q0 * T**m, q1 * T**m)
    ws = WitnessSet(name, f, a, R)
    for i in range(n + 1):
        k = i // 2
        ws.entries.append((i, xs[i % 2] * Q ** (2 * k), ys[i % 2] * Q ** (d * k)))
    return ws


def cq2_a(Q: int, u: int, v: int) -> int:
    s, t = 3 * Q * Q - 1, 3 * Q * Q + 1
    return 768 * Q**3 * s * s * t * t * (3 * Q * u * u - v * v) * (3 * Q**3 * v * v - u * u)


def cq2_family(Q: int, u: int, v: int, n: int = 3) -> tuple[int, WitnessSet]:
    """a(u, v) > 0 with explicit witnesses for G(a, Q^2) in V_((y^2 - x^3)/x)."""
    if Q in (0, 1, -1):
        raise ValueError("Q must not be -1, 0 or 1")
    if not (v * v < 3 * Q * u * u and 3 * Q**3 * v * v > u * u):
        raise ValueError("v outside the positivity interval")
    s, t = 3 * Q * Q - 1, 3 * Q * Q + 1
    ws = bihomo_construct(
        3, RATIO, Q, Fraction(3, 4), Fraction(1, 4 * Q), 3 * s * t * u, -s * t * v, n=n
    )
    a = cq2_a(Q, u, v)
    if ws.a != a:
        raise AssertionError(f"construction gives a = {ws.a}, closed form {a}")
    return a, ws


# -- the killer quotient ---------------------------------------------------


@dataclass
class KillerProof:
    a: int
    q1: int
    q2: int
    q3: int
    Q: int
    t: int  # aQ = t^4
    twisted_B: Fraction

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "q": [self.q1, self.q2, self.q3],
            "Q": self.Q,
            "aQ": self.a * self.Q,
            "fourth_root": self.t,
            "twisted_curve": f"y^2 = x^3 + {rat_str(self.twisted_B)}*x",
        }


def killer_Q(a: int) -> tuple[int, KillerProof]:
    """Q = q1^3 q2^2 q3 with aQ a fourth power, so E_1(a, Q) ~ y^2 = x^3 + x."""
    if a <= 0:
        raise ValueError("a must be positive")
    if fourth_power_free_part(a)[1] != 1:
        raise ValueError("a must be fourth-power-free")
    if a == 1:
        raise ValueError("a = 1 is excluded: aQ is a fourth power already for Q = 1")
    q1, q2, q3 = decompose_124(a)
    Q = q1**3 * q2**2 * q3
    t = q1 * q2 * q3
    if a * Q != t**4:
        raise AssertionError("a Q is not a fourth power")
    twisted = Fraction(a * Q) / Fraction(t) ** 4
    return Q, KillerProof(a, q1, q2, q3, Q, t, twisted)
