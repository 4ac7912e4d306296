import math
import random
from fractions import Fraction

import pytest

from geoprog.birat import (
    MapUndefined,
    QuarticCurve,
    build_fixeda,
    ca_to_ea,
    cprime_check,
    cubic_curve,
    cubic_to_weierstrass,
    identity_suite,
    integer_scale,
    q_from_u,
    quartic_to_weierstrass,
    sum_of_cubes_progression,
    weierstrass_to_cubic,
    witnesses_from_point,
)
from geoprog.ellcurve import Curve, Point, bx_curve, isomorphism_scale, mul_scalar, on_curve
from geoprog.polynom import random_rational
from geoprog.progressions import RATIO, bihomo_construct, f_cubic_ratio

F = Fraction
S = [Point.affine(28, 80), Point.affine(172, 2080), Point.affine(2353, 113975)]
P_CUBES = [(F(37, 21), F(17, 21)), (F(449, 129), F(-71, 129)), (F(124559, 14118), F(-103391, 14118))]

U0 = F(4204567, 4146944)
Y0 = F(-1592941018808, 199115595007)


def test_cubic_map_examples():
    for i, (P, expected) in enumerate(zip(S, P_CUBES)):
        A = 6 * 7**i
        x, y = weierstrass_to_cubic(A, P)
        assert (x, y) == expected
        assert x**3 + y**3 == A
        assert cubic_to_weierstrass(A, x, y) == P


def test_cubic_map_roundtrip():
    E = cubic_curve(6)
    for n in range(1, 21):
        P = mul_scalar(E, S[0], n)
        if P.is_infinity or P.x == 0:
            continue
        x, y = weierstrass_to_cubic(6, P)
        assert cubic_to_weierstrass(6, x, y) == P


def test_cubic_map_undefined():
    with pytest.raises(MapUndefined):
        cubic_to_weierstrass(0, 1, -1)
    with pytest.raises(ValueError):
        cubic_to_weierstrass(6, 1, 1)
    with pytest.raises(ValueError):
        weierstrass_to_cubic(6, Point.affine(172, 2080))  # lies on the A = 42 curve


def test_integer_scale():
    ws = sum_of_cubes_progression(6, 7, S)
    assert ws.validate()
    D, iws = integer_scale(ws, 2)
    assert D == math.lcm(21, 129, 14118)
    assert all(x.denominator == 1 and y.denominator == 1 for _, x, y in iws.entries)
    assert [x**3 + y**3 for _, x, y in iws.entries] == [6 * D**3 * 7**i for i in range(3)]
    D0, _ = integer_scale(ws, 0)
    assert D0 == 21


def test_integer_scale_identity_on_integers():
    ws = sum_of_cubes_progression(6, 7, S)
    ws.entries = [(0, F(2), F(1))]
    ws.a = F(9)
    D, out = integer_scale(ws)
    assert D == 1 and out.entries == ws.entries


def test_quartic_marked_point():
    qc = QuarticCurve.make(1, 0, 0, 0, 1)
    qm = quartic_to_weierstrass(qc)
    assert qm.forward(0, 1).is_infinity
    assert qm.inverse(qm.forward(0, -1)) == (0, -1)


def test_quartic_random_roundtrip():
    rng = random.Random(3)
    checked = 0
    while checked < 10:
        c = [random_rational(rng, 30) for _ in range(4)]
        q = random_rational(rng, 30)
        try:
            qc = QuarticCurve.make(c[0], c[1], c[2], c[3], q * q)
        except ValueError:
            continue
        qm = quartic_to_weierstrass(qc)
        P = qm.forward(0, -q)
        for n in range(1, 4):
            R = mul_scalar(qm.curve, P, n)
            if R.is_infinity:
                break
            try:
                u, Y = qm.inverse(R)
            except MapUndefined:
                continue
            assert qc.contains(u, Y)
            assert qm.forward(u, Y) == R
            checked += 1


def test_fixeda_example():
    inst = build_fixeda(3, 4, 2)
    assert (inst.f1, inst.f2) == (21070848, 21070620)
    assert inst.f1 - inst.f2 == 228 == inst.r
    assert inst.on_ca(U0, Y0)
    assert q_from_u(3, 4, U0) == 19 * F(476639376, 199115595007) ** 2


def test_quartic_model_is_the_curve():
    inst = build_fixeda(3, 4, 2)
    qm = quartic_to_weierstrass(inst.quartic)
    assert isomorphism_scale(qm.curve, Curve(-(inst.f1 + inst.f2), inst.f1 * inst.f2, 0)) is not None
    forward, inverse = ca_to_ea(inst)
    P = forward(U0, Y0)
    assert P.x == F(732246016, 9)
    assert abs(P.y) == F(14683034857472, 27)
    assert inverse(P) == (U0, Y0)
    for n in (2, 3):
        R = mul_scalar(inst.E, P, n)
        assert forward(*inverse(R)) == R


def test_witnesses_from_point():
    inst = build_fixeda(3, 4, 2)
    ws = witnesses_from_point(inst, U0, Y0, Point.affine(1, 2))
    assert ws.validate()
    xs = {i: x for i, x, _ in ws.entries}
    assert xs[1] == 4
    assert xs[2] == F(17266067201278872576, 199115595007**2)
    assert xs[3] == F(57 * 8633033600639436288**2, 39647020174991643330049**2)
    assert f_cubic_ratio(*[(x, y) for i, x, y in ws.entries if i == 1][0]) == 3 * ws.Q
    for i, x, y in ws.entries:
        assert on_curve(bx_curve(3 * ws.Q**i), Point(x, y))
    assert witnesses_from_point(inst, U0, -Y0).validate()
    with pytest.raises(ValueError):
        witnesses_from_point(inst, U0, Y0 + 1)


def test_degenerate_flag(caplog):
    assert not build_fixeda(5, 4, 1).degenerate  # 4 * 21 = 84
    assert build_fixeda(3, 1, 1).degenerate  # 1 * 4 = 4
    assert "square" in caplog.text
    with pytest.raises(ValueError):
        build_fixeda(3, 4, 0)


def test_cprime_forward_construction():
    ws = bihomo_construct(3, RATIO, 2, 1, 3, 2, 5, n=3)
    T = F(7, 3)
    ps = [x / T for _, x, _ in ws.entries]
    qs = [y / T for _, _, y in ws.entries]
    res = cprime_check(ws.Q, ps, qs)
    assert res.ok and res.T == T and res.a == ws.a


def test_cprime_generator_points():
    xs = [F(289, 25), F(2), F(18), F(4716544, 18225)]
    ys = [F(-5712, 125), F(14), F(96), F(10271916928, 2460375)]
    res = cprime_check(2, xs, ys)
    assert res.ok and res.T == 1 and res.a == 47


def test_cprime_printed_data_reported():
    res = cprime_check(2, [F(289, 25), 14, 96, F(4716544, 18225)], [F(-5712, 125), 14, 96, F(10271916928, 2460375)])
    assert not res.ok and res.T is None and res.residuals[0] == F(-742709558072832, 15625)


def test_cprime_random_is_off():
    rng = random.Random(1)
    for _ in range(20):
        ps = [random_rational(rng, 50) for _ in range(4)]
        qs = [random_rational(rng, 50) for _ in range(4)]
        assert not cprime_check(random_rational(rng, 9), ps, qs).ok


def test_identity_suite():
    assert all(ok for _, ok in identity_suite(trials=20, seed=1))
