from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geoprog.ellcurve import Point, bx_curve, on_curve
from geoprog.exactnum import fourth_power_free_part, integer_root
from geoprog.polynom import RatFunc1
from geoprog.progressions import (
    DIFFERENCE,
    RATIO,
    bihomo_construct,
    class1_progression,
    class2_progression,
    class3_progression,
    compose,
    cq2_a,
    cq2_family,
    f_cubic_ratio,
    killer_Q,
    linear_progression,
)

from trials import BUILDERS, run_trials


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_random_constructions_validate(name):
    ok, bad, _ = run_trials(BUILDERS[name], trials=100, seed=11)
    assert (ok, bad) == (100, 0)


def test_linear_orbit():
    ws = linear_progression(2, 1, 3, 1, 3)  # f = 2x + 1, Q = 3
    assert ws.a == 7 and ws.Q == 3
    assert [x for _, x, _ in ws.entries] == [3, 10, 31, 94]
    with pytest.raises(ValueError):
        linear_progression(1, 0, 1, 0, 2)  # Q = 1


def test_class1_simple():
    one, y = RatFunc1.poly([1]), RatFunc1.poly([0, 1])
    ws = class1_progression(one, y, RatFunc1.poly([0]), one, 3, 2, 4)  # f = x + y
    assert ws.validate()
    with pytest.raises(ValueError):
        class1_progression(one, one, one, one, 3, 2, 2)  # independent of x


def test_compose_is_multiplicative():
    d = Fraction(5)
    P, R = (Fraction(2), Fraction(3)), (Fraction(-1), Fraction(4))
    F = lambda t: t[0] ** 2 + d * t[1] ** 2
    assert F(compose(d, P, R)) == F(P) * F(R)


def test_class2_seed_with_zero_s():
    # x^2 + y^2: d = 4, F = X^2 + 4 Y^2, a = F(2, 0)/4, Q = F(1, 1)
    ws = class2_progression(1, 0, 1, (2, 0), (1, 1), 4)
    assert ws.a == 1 and ws.Q == 5 and ws.validate()


def test_class2_bilinear():
    ws = class2_progression(0, 3, 0, (2, 1), (2, 1), 3)
    assert ws.validate()


def test_class3():
    ws = class3_progression([1, 0, 1], [1, 1], 1, 2, 5, 3)  # (x^2 + y^2)/(x + y)
    assert ws.a == Fraction(5, 3) and ws.validate()
    with pytest.raises(ValueError):
        class3_progression([1, 0, 0, 1], [1, 1], 1, 2, 5, 3)


def test_bihomo_degenerate():
    with pytest.raises(ValueError):
        bihomo_construct(4, RATIO, 2, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        bihomo_construct(3, RATIO, 1, 1, 2, 3, 4)


def test_bihomo_points_lie_on_curves():
    ws = bihomo_construct(3, RATIO, 2, 1, 3, 2, 5, n=3)
    for i, x, y in ws.entries:
        assert on_curve(bx_curve(ws.a * ws.Q**i), Point(x, y))


def test_cq2_closed_form():
    a, ws = cq2_family(2, 1, 2)
    assert a == cq2_a(2, 1, 2) == 23871344640
    assert ws.Q == 4 and ws.validate() and len(ws.entries) == 4
    with pytest.raises(ValueError):
        cq2_family(2, 1, 5)


@settings(max_examples=60)
@given(st.integers(2, 10**6))
def test_killer_quotient(a):
    if fourth_power_free_part(a)[1] != 1:
        return
    Q, proof = killer_Q(a)
    t = integer_root(a * Q, 4)
    assert t is not None and t == proof.t
    assert proof.twisted_B == 1


def test_killer_rejects():
    with pytest.raises(ValueError):
        killer_Q(1)
    with pytest.raises(ValueError):
        killer_Q(32)


def test_witness_json():
    ws = bihomo_construct(3, DIFFERENCE, 2, 1, 3, 2, 5, n=1)
    obj = ws.to_json()
    assert obj["valid"] and obj["witnesses"][0]["i"] == 0
    assert f_cubic_ratio(Fraction(2), Fraction(14)) == 94
