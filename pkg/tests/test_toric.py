import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from effgen.lattice import RationalPolygon, lattice_points
from effgen.toric import (FanError, NotKltError, PairData, TorusDivisor, blow_up,
                          canonical_divisor, curve_pair_intersection, curve_self_intersection,
                          degree_on, from_rays, h0, hirzebruch_jung_rays, intersect, is_big,
                          is_cartier, is_nef, is_pseudoeffective, is_smooth, minimal_resolution,
                          numerically_equivalent, pair_discrepancy, pullback, pushforward,
                          section_polytope)

from helpers import (P2, continued_fraction_self_intersections, hirzebruch, random_fan,
                     smooth_tower)

seeds = st.integers(0, 10**6)


# -- fans -------------------------------------------------------------------

def test_plane_and_hirzebruch_fans():
    X = from_rays(P2)
    assert X.picard_number == 1 and is_smooth(X)
    F = hirzebruch(3)
    assert F.picard_number == 2 and is_smooth(F)


def test_incomplete_fans_rejected():
    with pytest.raises(FanError):
        from_rays([(1, 0), (1, 1)])
    with pytest.raises(FanError):
        from_rays([(1, 0), (0, 1), (1, 1)])  # all rays in a half-plane


def test_strict_mode_rejects_non_primitive():
    with pytest.raises(FanError, match="primitive"):
        from_rays([(2, 0), (0, 1), (-1, -1)], strict=True)
    assert from_rays([(2, 0), (0, 1), (-1, -1)]).rays[0] == (1, 0)


def test_singular_fan_detected():
    assert not is_smooth(from_rays([(1, 0), (0, 1), (-1, -2)]))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_iterated_blow_ups_stay_smooth(seed):
    assert is_smooth(smooth_tower(random.Random(seed), 8)[-1])


# -- intersection theory ------------------------------------------------------

def test_self_intersections_on_plane_and_Fr():
    X = from_rays(P2)
    assert all(curve_self_intersection(X, r) == 1 for r in X.rays)
    for r in (3, 5):
        F = hirzebruch(r)
        assert curve_self_intersection(F, (0, 1)) == -r
        assert curve_self_intersection(F, (0, -1)) == r
        assert curve_self_intersection(F, (1, 0)) == 0


def test_exceptional_curve_of_blow_up():
    X = from_rays(P2)
    Y, res = blow_up(X, 0)
    (w,) = res.inserted_rays
    assert w == (1, 1)
    assert curve_self_intersection(Y, w) == -1
    assert res.discrepancy[w] == 1


def test_blow_up_of_singular_cone_inserts_primitive_sum():
    X = from_rays([(1, 0), (1, 2), (-1, 0), (0, -1)])
    i = X.index((1, 0))
    assert X.cone(i) == ((1, 0), (1, 2))
    _, res = blow_up(X, i)
    assert res.inserted_rays == ((1, 1),)


def test_canonical_class():
    X = from_rays(P2)
    K = canonical_divisor(X)
    assert all(c == -1 for _, c in K.items())
    assert intersect(K, X.prime((1, 0))) == -3
    assert intersect(K, K) == 9
    F0 = hirzebruch(0)
    K0 = canonical_divisor(F0)
    assert intersect(K0, K0) == 8


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_noether_on_smooth_surfaces(seed):
    # K^2 + rho = 10 on every smooth complete toric surface
    X = smooth_tower(random.Random(seed), random.Random(seed).randint(3, 9))[-1]
    K = canonical_divisor(X)
    assert intersect(K, K) + X.picard_number == 10


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_principal_divisors_are_numerically_trivial(seed):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 7))
    m = (rng.randint(-3, 3), rng.randint(-3, 3))
    P = X.zero().principal_shift(m)
    assert all(degree_on(P, r) == 0 for r in X.rays)
    assert curve_pair_intersection(X, X.rays[0], X.rays[1]) == Fraction(1, X.cone_dets()[0])


def test_intersection_is_symmetric_bilinear():
    X = from_rays([(1, 0), (1, 3), (-1, 1), (-1, -2)])
    D = X.divisor({(1, 0): Fraction(1, 2), (-1, 1): 3})
    E = X.divisor({(1, 3): 2, (-1, -2): Fraction(-1, 3)})
    assert intersect(D, E) == intersect(E, D)
    assert intersect(D * 2 + E, E) == 2 * intersect(D, E) + intersect(E, E)


# -- positivity and polytopes -------------------------------------------------

def test_positivity_examples():
    X = from_rays(P2)
    H = X.prime((-1, -1))
    assert is_nef(H) and is_big(H) and is_pseudoeffective(H)
    F3 = hirzebruch(3)
    assert not is_nef(-canonical_divisor(F3))
    assert not is_pseudoeffective(X.prime((1, 0)) * -1)


def test_section_polytope_examples():
    X = from_rays(P2)
    P = section_polytope(X.prime((-1, -1)))
    assert P.same_set(RationalPolygon.from_vertices([(0, 0), (1, 0), (0, 1)]))
    assert len(lattice_points(P)) == 3 and h0(X.prime((-1, -1))) == 3
    Z = section_polytope(X.zero())
    assert lattice_points(Z) == {(0, 0)} and Z.dimension == 0
    assert section_polytope(X.prime((1, 0)) * -1).is_empty


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_section_polytope_scales(seed, m):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 6))
    D = TorusDivisor.on(X, [Fraction(rng.randint(-2, 4), rng.randint(1, 3)) for _ in X.rays])
    P, Pm = section_polytope(D), section_polytope(D * m)
    assert Pm.same_set(P.scale(m))


def test_cartier_detection():
    X = from_rays([(1, 0), (-1, 3), (0, -1)])
    D = X.prime((1, 0))
    assert not is_cartier(D)
    assert is_cartier(D * 3)
    assert is_cartier(canonical_divisor(hirzebruch(2)))


# -- pullback, resolution, discrepancy ----------------------------------------

@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pullback_preserves_intersections(seed):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 6))
    Z = minimal_resolution(X).source
    D = TorusDivisor.on(X, [rng.randint(-2, 3) for _ in X.rays])
    E = TorusDivisor.on(X, [rng.randint(-2, 3) for _ in X.rays])
    assert intersect(pullback(D, Z), pullback(E, Z)) == intersect(D, E)
    assert pushforward(pullback(D, Z), X) == D
    for w in set(Z.rays) - set(X.rays):
        assert degree_on(pullback(D, Z), w) == 0


def test_resolution_of_smooth_surface_is_identity():
    assert minimal_resolution(from_rays(P2)).is_identity


@pytest.mark.parametrize("r", [2, 3, 4, 5, 7])
def test_A_type_cone_resolution(r):
    X = from_rays([(1, 0), (1, r), (0, 1), (-1, -1)])
    assert [d for d in X.cone_dets() if d > 1] == [r]
    res = minimal_resolution(X)
    assert len(res.inserted_rays) == r - 1
    assert all(a == 0 for a in res.discrepancy.values())
    assert all(pair_discrepancy(res, X.zero(), w) == 0 for w in res.inserted_rays)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 7])
def test_one_over_r_11_cone_resolution(r):
    # the cone spanned by (1,0) and (-1,r) is the 1/r(1,1) point
    X = from_rays([(1, 0), (-1, r), (0, -1)])
    rays = hirzebruch_jung_rays((1, 0), (-1, r))
    assert rays == [(0, 1)]
    res = minimal_resolution(X)
    w = (0, 1)
    assert w in res.inserted_rays
    assert res.discrepancy[w] == -1 + Fraction(2, r)
    assert curve_self_intersection(res.source, w) == -r


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 40), st.integers(1, 39))
def test_hirzebruch_jung_matches_continued_fraction(n, q):
    q = q % n
    if q == 0 or math.gcd(n, q) != 1:
        return
    # the cone spanned by (1,0) and (-q,n) is the cyclic quotient 1/n(1,q)
    u, v = (1, 0), (-q, n)
    rays = hirzebruch_jung_rays(u, v)
    Z = from_rays([u, *rays, v, (0, -1)])
    selfs = [curve_self_intersection(Z, w) for w in rays]
    q_inv = pow(q, -1, n)
    assert selfs == continued_fraction_self_intersections(n, q)
    assert selfs[::-1] == continued_fraction_self_intersections(n, q_inv)
    assert all(s <= -2 for s in selfs)  # minimal: no (-1)-curves


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_minimal_resolution_is_smooth_and_minimal(seed):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 6), box=6)
    res = minimal_resolution(X)
    Z = res.source
    assert is_smooth(Z)
    for w in res.inserted_rays:
        assert curve_self_intersection(Z, w) <= -2
        assert res.discrepancy[w] <= 0


def test_pair_discrepancy_of_smooth_blow_up():
    X = from_rays(P2)
    _, res = blow_up(X, 0)
    (w,) = res.inserted_rays
    assert pair_discrepancy(res, X.zero(), w) == 1
    B = X.divisor({(1, 0): Fraction(1, 2), (0, 1): Fraction(1, 3)})
    assert pair_discrepancy(res, B, w) == 1 - Fraction(1, 2) - Fraction(1, 3)


def test_pair_discrepancy_flags_non_klt_boundary():
    X = from_rays(P2)
    _, res = blow_up(X, 0)
    with pytest.raises(NotKltError):
        pair_discrepancy(res, X.divisor({(1, 0): 1}), res.inserted_rays[0])


def test_pair_data_validates_boundary():
    X = from_rays(P2)
    with pytest.raises(ValueError):
        PairData(X, X.divisor({(1, 0): Fraction(3, 2)}))
    pair = PairData(X, X.divisor({(1, 0): Fraction(1, 2)}))
    assert pair.is_klt()
    assert not PairData(X, X.divisor({(1, 0): 1})).is_klt()


def test_numerical_equivalence_of_hyperplanes():
    X = from_rays(P2)
    assert numerically_equivalent(X.prime((1, 0)), X.prime((-1, -1)))
