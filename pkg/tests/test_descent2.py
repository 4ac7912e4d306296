import itertools
import time

import pytest
from hypothesis import given, settings, strategies as st

from geoprog.descent2 import (
    EXACT,
    UNDETERMINED,
    HomSpace,
    RankResult,
    group_closure,
    homspace,
    is_subgroup,
    isogenous_pair,
    lift_point,
    local_solvable,
    positive_rank_witness,
    rank_bounds,
    search_homspace,
    selmer_set,
)
from geoprog.ellcurve import Curve, Point, bx_curve, is_infinite_order, on_curve, quartic_twist


def _square_class(w, p, k):
    """True / False if w mod p^k decides squareness in Q_p, else None."""
    w %= p**k
    if w == 0:
        return None
    j = 0
    while w % p == 0:
        w //= p
        j += 1
    room = k - j
    if j % 2:
        return False if room >= 1 else None
    if p == 2:
        return (w % 8 == 1) if room >= 3 else None
    return pow(w, (p - 1) // 2, p) == 1


def brute_local(hs, p, k):
    """Scan primitive (M, e) mod p^k; True/False when decided, else None."""
    mod = p**k
    undecided = False
    for M, e in itertools.product(range(mod), repeat=2):
        if M % p == 0 and e % p == 0:
            continue
        s = _square_class(hs.value(M, e), p, k)
        if s:
            return True
        if s is None:
            undecided = True
    return None if undecided else False


coef = st.integers(min_value=-30, max_value=30)


@settings(max_examples=60, deadline=None)
@given(coef.filter(bool), coef, coef.filter(bool), st.sampled_from([(2, 5), (3, 4), (5, 3), (7, 2)]))
def test_local_solvability_against_brute_force(b1, A, b2, pk):
    p, k = pk
    hs = HomSpace(b1, b2, A)
    if A * A - 4 * b1 * b2 == 0:
        return
    expected = brute_local(hs, p, k)
    if expected is not None:
        assert local_solvable(hs, p) == expected


def test_real_place():
    assert local_solvable(HomSpace(-1, -1, 0), None) is False
    assert local_solvable(HomSpace(-1, -1, 3), None) is True
    assert local_solvable(HomSpace(-1, 5, 0), None) is True


def test_global_points_are_locally_solvable():
    for B in (47, 94, 188, 376, 3):
        A = 0
        for b1 in selmer_set(A, B):
            sol = search_homspace(homspace(b1, A, B), 64)
            if sol is not None:
                P = lift_point(homspace(b1, A, B), sol)
                assert on_curve(Curve(A, B, 0), P)


def test_selmer_sets_are_subgroups():
    for B in (1, 2, 3, 47, 94, 257, 17, 34, -5, 210):
        for A in (0, 1, -3):
            try:
                pair = isogenous_pair(A, B)
            except ValueError:
                continue
            assert is_subgroup(selmer_set(A, B))
            assert is_subgroup(selmer_set(pair.A_dual, pair.B_dual))


def test_group_closure():
    assert group_closure([2, 3]) == {1, 2, 3, 6}
    assert group_closure([8, 2]) == {1, 2}


@pytest.mark.parametrize(
    "B, rank, witness",
    [
        (47, 1, ("289/25", "5712/125")),
        (94, 2, ("2", "14")),
        (188, 1, ("18", "96")),
        (376, 1, None),
        (1, 0, None),
    ],
)
def test_known_ranks(B, rank, witness):
    res = rank_bounds(0, B)
    assert (res.lower, res.upper, res.status) == (rank, rank, EXACT)
    E = bx_curve(B)
    for P in res.witnesses:
        assert on_curve(E, P) and P.x != 0 and is_infinite_order(E, P)
    if witness:
        assert Point.affine(*witness) in res.witnesses


def test_257_is_undetermined():
    t0 = time.perf_counter()
    res = rank_bounds(0, 257)
    assert (res.lower, res.upper, res.status, res.witnesses) == (0, 2, UNDETERMINED, [])
    assert time.perf_counter() - t0 < 60


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([3, 5, 6, 47, 94, 20]), st.integers(1, 3))
def test_twist_invariance(B, t):
    base = rank_bounds(0, B, budget=256)
    twisted = rank_bounds(0, B * t**4, budget=256)
    assert (base.lower, base.upper) == (twisted.lower, twisted.upper)
    assert [quartic_twist(P, t) for P in base.witnesses] == twisted.witnesses


def test_raw_model_agrees():
    assert rank_bounds(0, 47 * 16, reduce=False).lower == 1


def test_budget_monotone():
    lo = rank_bounds(0, 89 * 8, budget=16)
    hi = rank_bounds(0, 89 * 8, budget=1024)
    assert lo.lower <= hi.lower and hi.upper <= lo.upper


def test_positive_rank_witness():
    assert positive_rank_witness(0, 3) == Point.affine(1, 2)
    assert positive_rank_witness(0, 51) == Point.affine(25, 130)
    assert positive_rank_witness(0, 1) is None


def test_rankresult_json():
    r = rank_bounds(0, 94)
    assert RankResult.from_json(r.to_json()) == r
