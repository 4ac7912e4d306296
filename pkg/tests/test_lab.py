from fractions import Fraction

import pytest

from geoprog import lab
from geoprog.birat import build_fixeda
from geoprog.ellcurve import Curve, Point, is_infinite_order, mordell_curve, on_curve
from geoprog.store import Store

MORDELL_POINTS = [(-2, 5), (Fraction(1, 4), Fraction(65, 8)), (4, 14), (-2, -16), (16, 68), (Fraction(48217, 5041), Fraction(-15728083, 357911))]


def test_membership_bx47():
    res = lab.membership(47, 2)
    assert res.verdict == lab.MEMBER
    assert [(i, r.lower, r.upper) for i, r in res.ranks] == [(0, 1, 1), (1, 2, 2), (2, 1, 1), (3, 1, 1)]
    assert res.witnesses().validate()


def test_membership_rank_zero():
    res = lab.membership(1, 2)
    assert res.verdict == lab.NONMEMBER
    assert res.ranks[0][1].upper == 0


def test_membership_mordell():
    res = lab.membership(33, 2, lab.MORDELL)
    assert res.verdict == lab.MEMBER
    assert len(res.ranks) == 6 and res.witnesses().validate()
    # rank 0 curve y^2 = x^3 + 1: search cannot prove it, so never NonMember
    assert lab.membership(1, 2, lab.MORDELL).verdict == lab.UNDETERMINED


def test_mordell_points_fit_a33():
    for i, (x, y) in enumerate(MORDELL_POINTS):
        P = Point.affine(x, y)
        assert on_curve(mordell_curve(33 * 2**i), P)
        assert not on_curve(mordell_curve(3 * 2**i), P)
        assert is_infinite_order(mordell_curve(33 * 2**i), P)


def test_cache_hit_is_identical(tmp_path):
    store = Store(tmp_path / "c.jsonl")
    fresh = lab.membership(94, 3, budget=256)
    first = lab.membership(94, 3, budget=256, store=store)
    again = lab.membership(94, 3, budget=256, store=Store(tmp_path / "c.jsonl"))
    assert fresh.to_json() == first.to_json() == again.to_json()


def test_twisted_a_uses_cache(tmp_path):
    store = Store(tmp_path / "c.jsonl")
    lab.bx_rank(47, 256, store)
    r = lab.bx_rank(47 * 81, 256, store)
    assert r.lower == 1
    assert all(on_curve(Curve(0, 47 * 81, 0), P) for P in r.witnesses)
    assert len(store) == 1


def test_compute_R():
    confirmed, unresolved = lab.compute_R(15)
    assert confirmed == [3, 5, 8, 9, 13, 14, 15] and unresolved == []


@pytest.mark.parametrize("a, m", [(47, 2), (20, 3), (8, 5)])
def test_m_values(a, m):
    res = lab.compute_m(a, 10)
    assert (res.value, res.exact) == (m, True)


def test_m_of_three():
    res = lab.compute_m(3, 17)
    assert res.value == 17
    for i, (x, y) in enumerate([(1, 2), (25, 130), (Fraction(121, 25), Fraction(8206, 125)), (Fraction(49, 121), Fraction(102830, 1331))]):
        assert on_curve(Curve(0, 3 * 17**i, 0), Point.affine(x, y))


def test_m_not_in_R():
    res = lab.compute_m(1, 5)
    assert res.value is None and res.in_R is False


def test_proper_quotients():
    qs = lab.proper_quotients(17)
    assert 4 not in qs and 9 not in qs and 16 not in qs
    assert 8 in qs and 12 in qs


def test_average():
    assert lab.average_A([17], 1) == 17
    assert lab.average_A([17, 17], 2) == 17
    assert lab.average_A([17, 17, 5, 17, 15], 5) == Fraction(71, 5)
    with pytest.raises(ValueError):
        lab.average_A([17], 2)


def test_c2_equals_c8_small_range():
    c2 = lab.compute_CQ(2, 50, budget=256)
    c8 = lab.compute_CQ(8, 50, budget=256)
    resolved = {r.a for r in c2.rows if r.verdict != lab.UNDETERMINED} & {r.a for r in c8.rows if r.verdict != lab.UNDETERMINED}
    v2 = {r.a: r.verdict for r in c2.rows}
    v8 = {r.a: r.verdict for r in c8.rows}
    assert all(v2[a] == v8[a] for a in resolved)
    assert c2.confirmed == [47]
    table = c2.counting()
    assert table[-1][1] == 1 and table[45][1] == 0


def test_pool_matches_serial():
    pairs = [(a, 3) for a in range(15, 25)]
    serial = lab.run_memberships(pairs, budget=64)
    pooled = lab.run_memberships(pairs, budget=64, workers=2)
    assert [m.to_json() for m, _ in serial] == [m.to_json() for m, _ in pooled]


def test_intersection_of_one_is_cq():
    confirmed, _ = lab.intersections(3, 3, 40, budget=256)
    assert confirmed == lab.compute_CQ(3, 40, budget=256).confirmed == [20, 31, 35, 37, 40]


def test_conjecture_scan_example():
    inst = build_fixeda(3, 4, 2)
    P = Point.affine(Fraction(732246016, 9), Fraction(14683034857472, 27))
    assert on_curve(inst.E, P) and is_infinite_order(inst.E, P)
    hit = lab.conjecture32_scan(3, [4], [2])
    assert (hit.p0, hit.v0) == (4, 2)
    assert hit.witnesses is not None and hit.witnesses.validate()
    assert lab.conjecture32_scan(3, budget=0) is None


@pytest.mark.parametrize("a", [5, 8, 13, 14])
def test_conjecture_scan_grid(a):
    hit = lab.conjecture32_scan(a)
    assert hit is not None and hit.witnesses.validate()


def test_curve_rank_general():
    r = lab.curve_rank(Curve(0, 0, -8))  # 2-torsion (2, 0), rank 0
    assert (r.lower, r.upper) == (0, 0)
    r = lab.curve_rank(Curve(-3, 2, 0))  # x (x - 1)(x - 2) translated roots
    assert r.upper is not None
    r = lab.curve_rank(Curve(0, 0, 3))  # no rational 2-torsion: search only
    assert r.lower == 1 and r.upper is None and r.witnesses == [Point.affine(1, 2)]


def test_sixth_power_free():
    assert lab.sixth_power_free_part(33 * 64) == (33, 2)
    assert lab.sixth_power_free_part(-128) == (-2, 2)
