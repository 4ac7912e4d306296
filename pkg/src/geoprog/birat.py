"""Birational maps: x^3 + y^3 = A, quartics with a rational point, and the
fixed-a machinery for f(x, y) = (y^2 - x^3)/x.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .ellcurve import Curve, INF, Point, on_curve, isomorphism_scale, map_isomorphism
from .exactnum import RatLike, as_rat, is_square, lcm_all, rational_root
from .polynom import Poly, discriminant_u
from .progressions import WitnessSet, f_cubic_ratio, f_sum_cubes

log = logging.getLogger(__name__)


class MapUndefined(ValueError):
    """The birational map is not defined at the given point."""


# -- x^3 + y^3 = A  <->  Y^2 = X^3 - 432 A^2 --------------------------------


def cubic_curve(A: RatLike) -> Curve:
    A = as_rat(A)
    return Curve(0, 0, -432 * A * A)


def weierstrass_to_cubic(A: RatLike, P: Point) -> tuple[Fraction, Fraction]:
    """(X, Y) -> ((36A + Y)/(6X), (36A - Y)/(6X))."""
    A = as_rat(A)
    if not on_curve(cubic_curve(A), P):
        raise ValueError(f"{P} is not on Y^2 = X^3 - 432A^2")
    if P.is_infinity or P.x == 0:
        raise MapUndefined("X = 0")
    return (36 * A + P.y) / (6 * P.x), (36 * A - P.y) / (6 * P.x)


def cubic_to_weierstrass(A: RatLike, x: RatLike, y: RatLike) -> Point:
    """(x, y) -> (12A/(x + y), 36A (x - y)/(x + y)); inverse of the map above."""
    A, x, y = map(as_rat, (A, x, y))
    if x**3 + y**3 != A:
        raise ValueError(f"({x}, {y}) is not on x^3 + y^3 = {A}")
    if x + y == 0:
        raise MapUndefined("x + y = 0")
    P = Point(12 * A / (x + y), 36 * A * (x - y) / (x + y))
    assert on_curve(cubic_curve(A), P)
    return P


def integer_scale(ws: WitnessSet, n: Optional[int] = None) -> tuple[int, WitnessSet]:
    """Clear denominators of the witnesses i = 0..n of a homogeneous cubic.

    D = lcm of all denominators; (D x_i, D y_i) are integers with values
    D^3 a Q^i.
    """
    entries = [e for e in ws.entries if n is None or e[0] <= n]
    if any(x == 0 or y == 0 for _, x, y in entries):
        raise ValueError("witnesses must be nonzero")
    D = lcm_all(v.denominator for _, x, y in entries for v in (x, y))
    out = WitnessSet(ws.f_name, ws.f, ws.a * D**3, ws.Q, [(i, x * D, y * D) for i, x, y in entries])
    return D, out


def sum_of_cubes_progression(A: RatLike, Q: RatLike, points: Sequence[Point]) -> WitnessSet:
    """Witnesses for x^3 + y^3 = A Q^i from points on Y^2 = X^3 - 432 (A Q^i)^2."""
    A, Q = as_rat(A), as_rat(Q)
    ws = WitnessSet("x^3 + y^3", f_sum_cubes, A, Q)
    for i, P in enumerate(points):
        ws.entries.append((i, *weierstrass_to_cubic(A * Q**i, P)))
    return ws


# -- quartic with a rational point ----------------------------------------


@dataclass(frozen=True)
class QuarticCurve:
    """Y^2 = c4 u^4 + c3 u^3 + c2 u^2 + c1 u + c0, c0 = q^2 != 0."""

    c4: Fraction
    c3: Fraction
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self) -> None:
        if self.c0 == 0 or not is_square(self.c0):
            raise ValueError("c0 must be a nonzero square")
        if discriminant_u(self.poly()) == 0:
            raise ValueError("singular quartic")

    @classmethod
    def make(cls, c4, c3, c2, c1, c0) -> "QuarticCurve":
        return cls(*map(as_rat, (c4, c3, c2, c1, c0)))

    @property
    def q(self) -> Fraction:
        return rational_root(self.c0, 2)

    def poly(self) -> Poly:
        return Poly([self.c0, self.c1, self.c2, self.c3, self.c4])

    def contains(self, u: RatLike, Y: RatLike) -> bool:
        return as_rat(Y) ** 2 == self.poly()(u)


@dataclass(frozen=True)
class QuarticMap:
    quartic: QuarticCurve
    curve: Curve
    forward: Callable[[Fraction, Fraction], Point]
    inverse: Callable[[Point], tuple[Fraction, Fraction]]


def quartic_to_weierstrass(qc: QuarticCurve) -> QuarticMap:
    """Birational model of a quartic with marked point (0, q).

    Classical construction for Y^2 = a u^4 + b u^3 + c u^2 + d u + q^2 giving
    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6, then completing the
    square to reach y'^2 = x^3 + A2 x^2 + A4 x + A6. The marked point goes
    to infinity and (0, -q) to a finite point.
    """
    a, b, c, d, q = qc.c4, qc.c3, qc.c2, qc.c1, qc.q
    a1 = d / q
    a2 = c - d * d / (4 * q * q)
    a3 = 2 * q * b
    a4 = -4 * q * q * a
    a6 = a2 * a4
    curve = Curve(a2 + a1 * a1 / 4, a4 + a1 * a3 / 2, a6 + a3 * a3 / 4)

    def forward(u: RatLike, Y: RatLike) -> Point:
        u, Y = as_rat(u), as_rat(Y)
        if not qc.contains(u, Y):
            raise ValueError(f"({u}, {Y}) is not on the quartic")
        if u == 0:
            if Y == q:
                return INF
            x, y = -a2, a1 * a2 - a3
        else:
            x = (2 * q * (Y + q) + d * u) / (u * u)
            y = (4 * q * q * (Y + q) + 2 * q * (d * u + c * u * u) - d * d * u * u / (2 * q)) / u**3
        P = Point(x, y + (a1 * x + a3) / 2)
        assert on_curve(curve, P)
        return P

    def inverse(P: Point) -> tuple[Fraction, Fraction]:
        if not on_curve(curve, P):
            raise ValueError(f"{P} is not on {curve}")
        if P.is_infinity:
            return Fraction(0), q
        x = P.x
        y = P.y - (a1 * x + a3) / 2
        if (x, y) == (-a2, a1 * a2 - a3):
            return Fraction(0), -q
        if y == 0:
            raise MapUndefined("point lies over a point at infinity of the quartic")
        u = (2 * q * (x + c) - d * d / (2 * q)) / y
        Y = -q + u * (u * x - d) / (2 * q)
        if not qc.contains(u, Y):
            raise MapUndefined(f"{P} has no affine preimage")
        return u, Y

    return QuarticMap(qc, curve, forward, inverse)


# -- fixed a: the curves C_a(p, v) and E_a(p, v) ---------------------------


def f1_value(a, p, v) -> Fraction:
    a, p, v = map(as_rat, (a, p, v))
    return a * p**3 * (p * p + a) ** 3 * v**4


def f2_value(a, p, v) -> Fraction:
    a, p, v = map(as_rat, (a, p, v))
    k = (p * p + a) * p * v * v
    return a * p * (p * p + a) * (k - 1) * (k + 1)


def fa_quartic_coeffs(a, p, v) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
    """Coefficients (c4, c3, c2, c1, c0) of F_a(p, v, u) as a quartic in u."""
    a, p, v = map(as_rat, (a, p, v))
    s = p * p + a
    c4 = a**6 * p**6 * v**6
    c2 = -2 * a**3 * p * s * (p * p * s * s * v**4 - 2) * v * v
    c0 = s**6 * v**6
    return c4, Fraction(0), c2, Fraction(0), c0


def fa_value(a, p, v, u) -> Fraction:
    c4, _, c2, _, c0 = fa_quartic_coeffs(a, p, v)
    u = as_rat(u)
    return (c4 * u * u + c2) * u * u + c0


def da_closed_form(a, p, v) -> Fraction:
    """2^12 a^18 p^10 (a + p^2)^10 v^20 (p^2 (p^2 + a)^2 v^4 - 1)^2."""
    a, p, v = map(as_rat, (a, p, v))
    s = a + p * p
    return 2**12 * a**18 * p**10 * s**10 * v**20 * (p * p * s * s * v**4 - 1) ** 2


def w_factor(a, p, u) -> Fraction:
    """a^3 p^3 u^2 - (p^2 + a)^3, the leading factor of the C_a equation."""
    a, p, u = map(as_rat, (a, p, u))
    return a**3 * p**3 * u * u - (p * p + a) ** 3


def q_from_u(a: RatLike, p: RatLike, u: RatLike) -> Fraction:
    """Q_a(p, u) = 4 a^2 p (p^2 + a) u^2 / (a^3 p^3 u^2 - (p^2 + a)^3)^2."""
    a, p, u = map(as_rat, (a, p, u))
    W = w_factor(a, p, u)
    if W == 0:
        raise ZeroDivisionError("a^3 p^3 u^2 = (p^2 + a)^3")
    return 4 * a * a * p * (p * p + a) * u * u / (W * W)


def g1(a, v, y) -> Fraction:
    return (y * y - v**6) / (a * v * v)


def g2(a, p, q) -> Fraction:
    return (p**3 + a * p) / (q * q)


def g3(a, r, s) -> Fraction:
    return a * r / (s * s - r**3)


def q_param(a, p, u) -> Fraction:
    return -w_factor(a, p, u) / (2 * a * u)


def s_param(a, p, u) -> Fraction:
    a, p, u = map(as_rat, (a, p, u))
    return (a**3 * p**3 * u * u + (p * p + a) ** 3) / (2 * u)


def r_param(a, p) -> Fraction:
    a, p = as_rat(a), as_rat(p)
    return a * p * (p * p + a)


@dataclass(frozen=True)
class FixedAInstance:
    a: Fraction
    p: Fraction
    v: Fraction
    f1: Fraction
    f2: Fraction
    E: Curve
    quartic: QuarticCurve
    r: Fraction
    degenerate: bool  # p (p^2 + a) is a square

    def on_ca(self, u: RatLike, y: RatLike) -> bool:
        u, y = as_rat(u), as_rat(y)
        return w_factor(self.a, self.p, u) ** 2 * y * y == fa_value(self.a, self.p, self.v, u)

    def to_json(self) -> dict:
        from .exactnum import rat_str

        return {
            "a": rat_str(self.a),
            "p": rat_str(self.p),
            "v": rat_str(self.v),
            "f1": rat_str(self.f1),
            "f2": rat_str(self.f2),
            "r": rat_str(self.r),
            "curve": str(self.E),
            "quartic": [rat_str(c) for c in (self.quartic.c4, self.quartic.c3, self.quartic.c2, self.quartic.c1, self.quartic.c0)],
            "degenerate": self.degenerate,
        }


def build_fixeda(a: RatLike, p: RatLike, v: RatLike) -> FixedAInstance:
    a, p, v = map(as_rat, (a, p, v))
    if a == 0 or v == 0 or p * (p * p + a) == 0:
        raise ValueError("need a != 0, v != 0, p (p^2 + a) != 0")
    degenerate = is_square(p * (p * p + a))
    if degenerate:
        log.warning("p (p^2 + a) = %s is a square: degenerate specialization", p * (p * p + a))
    f1, f2 = f1_value(a, p, v), f2_value(a, p, v)
    E = Curve(-(f1 + f2), f1 * f2, 0)
    quartic = QuarticCurve(*fa_quartic_coeffs(a, p, v))
    return FixedAInstance(a, p, v, f1, f2, E, quartic, r_param(a, p), degenerate)


def ca_to_ea(inst: FixedAInstance) -> tuple[Callable[[Fraction, Fraction], Point], Callable[[Point], tuple[Fraction, Fraction]]]:
    """Maps between C_a(p, v) (as (u, y)) and E_a(p, v): Y^2 = X (X - f1)(X - f2)."""
    qm = quartic_to_weierstrass(inst.quartic)
    scale = isomorphism_scale(qm.curve, inst.E)
    if scale is None:
        raise AssertionError("quartic model is not isomorphic to E_a(p, v)")
    back = 1 / scale

    def forward(u: RatLike, y: RatLike) -> Point:
        u, y = as_rat(u), as_rat(y)
        Y = w_factor(inst.a, inst.p, u) * y
        return map_isomorphism(qm.curve, inst.E, scale, qm.forward(u, Y))

    def inverse(P: Point) -> tuple[Fraction, Fraction]:
        u, Y = qm.inverse(map_isomorphism(inst.E, qm.curve, back, P))
        W = w_factor(inst.a, inst.p, u)
        if W == 0:
            raise MapUndefined("leading factor vanishes")
        return u, Y / W

    return forward, inverse


def witnesses_from_point(
    inst: FixedAInstance, u: RatLike, y: RatLike, P0: Optional[Point] = None
) -> WitnessSet:
    """Witnesses for f = (y^2 - x^3)/x at i = 1, 2, 3 (and i = 0 given P0)."""
    u, y = as_rat(u), as_rat(y)
    if u == 0:
        raise ValueError("u must be nonzero")
    if not inst.on_ca(u, y):
        raise ValueError(f"({u}, {y}) is not on C_a(p, v)")
    a, p, v = inst.a, inst.p, inst.v
    Q = q_from_u(a, p, u)
    q, s, r = q_param(a, p, u), s_param(a, p, u), inst.r
    ws = WitnessSet("(y^2 - x^3)/x", f_cubic_ratio, a, Q)
    if P0 is not None:
        if P0.is_infinity or P0.x == 0 or not on_curve(Curve(0, a, 0), P0):
            raise ValueError("P0 must be an affine point with x != 0 on y^2 = x^3 + a x")
        ws.entries.append((0, P0.x, P0.y))
    ws.entries += [(1, v * v, y), (2, p * Q, q * Q * Q), (3, r * Q * Q, s * Q**3)]
    return ws


# -- the C'_Q system --------------------------------------------------------


def cprime_quadrics(Q, ps, qs) -> tuple[Fraction, Fraction]:
    Q = as_rat(Q)
    p0, p1, p2, p3 = map(as_rat, ps)
    q0, q1, q2, q3 = map(as_rat, qs)
    e1 = (
        p1 * p2 * Q * (p1 * p1 * Q - p2 * p2) * q0 * q0
        + p0 * p2 * (p2 * p2 - p0 * p0 * Q * Q) * q1 * q1
        + p0 * p1 * (p0 * p0 * Q - p1 * p1) * q2 * q2
    )
    e2 = (
        p2 * p3 * Q * (p2 * p2 * Q - p3 * p3) * q1 * q1
        + p1 * p3 * (p3 * p3 - p1 * p1 * Q * Q) * q2 * q2
        + p1 * p2 * (p1 * p1 * Q - p2 * p2) * q3 * q3
    )
    return e1, e2


def t_chain(Q, ps, qs) -> list[Fraction]:
    """The three expressions for T from consecutive pairs (i, i + 1)."""
    Q = as_rat(Q)
    ps, qs = list(map(as_rat, ps)), list(map(as_rat, qs))
    out = []
    for i in range(3):
        pi, pj, qi, qj = ps[i], ps[i + 1], qs[i], qs[i + 1]
        out.append((pi * qj * qj - Q * pj * qi * qi) / (pi * pj * (pj * pj - Q * pi * pi)))
    return out


def cprime_a(Q, ps, qs) -> Fraction:
    Q = as_rat(Q)
    p0, p1 = as_rat(ps[0]), as_rat(ps[1])
    q0, q1 = as_rat(qs[0]), as_rat(qs[1])
    num = (p1**3 * q0 * q0 - p0**3 * q1 * q1) * (p1 * q0 * q0 * Q - p0 * q1 * q1)
    return -num / (p0 * p0 * p1 * p1 * (p1 * p1 - p0 * p0 * Q) ** 2)


@dataclass
class CPrimeResult:
    ok: bool
    T: Optional[Fraction]
    a: Optional[Fraction]
    residuals: tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        from .exactnum import rat_str

        return {
            "ok": self.ok,
            "T": None if self.T is None else rat_str(self.T),
            "a": None if self.a is None else rat_str(self.a),
            "residuals": [rat_str(r) for r in self.residuals],
        }


def cprime_check(Q: RatLike, ps: Sequence[RatLike], qs: Sequence[RatLike]) -> CPrimeResult:
    """Membership of (p, q) in C'_Q; on success the common T and the value a."""
    res = cprime_quadrics(Q, ps, qs)
    if res != (0, 0):
        return CPrimeResult(False, None, None, res)
    Ts = t_chain(Q, ps, qs)
    if len(set(Ts)) != 1:
        raise AssertionError(f"T chain disagrees: {Ts}")
    T = Ts[0]
    a = cprime_a(Q, ps, qs)
    Q = as_rat(Q)
    for i in range(4):
        x, y = as_rat(ps[i]) * T, as_rat(qs[i]) * T
        if f_cubic_ratio(x, y) != a * Q**i:
            raise AssertionError(f"f(x_{i}, y_{i}) != a Q^{i}")
    return CPrimeResult(True, T, a, res)


# -- identity suite ---------------------------------------------------------


def _resample_on_degenerate(fn):
    def wrapped(*args):
        try:
            return fn(*args)
        except (ValueError, MapUndefined) as exc:
            raise ZeroDivisionError(str(exc)) from exc

    return wrapped


def _cprime_forward(Q, p0, p1, q0, q1, T):
    """cprime_check on (x_i/T, y_i/T) from a constructed length-4 witness set."""
    from .progressions import RATIO, bihomo_construct

    ws = bihomo_construct(3, RATIO, Q, p0, p1, q0, q1, n=3)
    if not ws.validate() or T == 0 or any(x == 0 for _, x, _ in ws.entries):
        raise ValueError("degenerate seed")
    ps = [x / T for _, x, _ in ws.entries]
    qs = [y / T for _, _, y in ws.entries]
    res = cprime_check(ws.Q, ps, qs)
    return (res.ok, res.T, res.a), (True, T, ws.a)


def identity_suite(trials: int = 20, seed: int = 0) -> list[tuple[str, bool]]:
    """Exact random-point checks of the fixed-a identities and the C'_Q system."""
    from .polynom import identity_check

    def disc(a, p, v):
        return discriminant_u(Poly(fa_quartic_coeffs(a, p, v)[::-1]))

    def g2_of_q(a, p, u):
        return g2(a, p, q_param(a, p, u))

    def g3_of_rs(a, p, u):
        return g3(a, r_param(a, p), s_param(a, p, u))

    def ca_lhs(a, p, v, u, y):
        W = w_factor(a, p, u)
        return W * W * y * y - fa_value(a, p, v, u)

    def ca_rhs(a, p, v, u, y):
        W = w_factor(a, p, u)
        return a * v * v * W * W * (g1(a, v, y) - q_from_u(a, p, u))

    forward = _resample_on_degenerate(_cprime_forward)
    return [
        ("D_a = Disc_u(F_a)", identity_check(disc, da_closed_form, 3, trials, seed=seed)),
        ("g2(p, q) = g3(r, s)", identity_check(g2_of_q, g3_of_rs, 3, trials, seed=seed)),
        ("g3(r, s) = Q_a(p, u)", identity_check(g3_of_rs, q_from_u, 3, trials, seed=seed)),
        ("C_a equation <=> g1 = Q_a", identity_check(ca_lhs, ca_rhs, 5, trials, seed=seed)),
        (
            "C'_Q T-chain and a-formula",
            identity_check(lambda *t: forward(*t)[0], lambda *t: forward(*t)[1], 6, trials, seed=seed),
        ),
    ]
