import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from effgen.instances import build_Fr, build_Xr
from effgen.lattice import LatticePoint, lattice_points
from effgen.mmp import zariski
from effgen.rings import (GenerationCertificate, HypothesisError, adjoint_multigraded_generation,
                          generation_degree, is_base_point_free, multiplication_surjective,
                          stable_base_locus_check, uncovered)
from effgen.toric import TorusDivisor, from_rays, section_polytope

from helpers import P2, adjoint_shape, random_fan, random_nef, smooth_tower, tensor_image

seeds = st.integers(0, 10**6)


def test_plane_hyperplane_ring_is_polynomial():
    X = from_rays(P2)
    cert = generation_degree(X.prime((-1, -1)))
    assert cert.generation_degree == 1
    assert len(cert.basis) == 3
    assert cert.verify()


def test_half_integral_segment_needs_degree_two():
    X = from_rays([(1, 0), (0, 1), (-1, 0), (0, -1)])
    D = X.divisor({(-1, 0): Fraction(1, 2)})
    P = section_polytope(D)
    assert sorted(P.vertices) == [(0, 0), (Fraction(1, 2), 0)]
    cert = generation_degree(D)
    assert cert.generation_degree == 2
    assert cert.basis == {(1, (0, 0)), (2, (1, 0))}


def test_rational_triangle_generation_degree():
    # P_D is the triangle (0,0), (1/2,0), (0,-1/4)
    X = from_rays([(1, 0), (-1, 2), (0, -1)])
    D = X.divisor({(-1, 2): Fraction(1, 2)})
    assert generation_degree(D).generation_degree == 4


def test_empty_ring_rejected():
    X = from_rays(P2)
    with pytest.raises(ValueError):
        generation_degree(X.prime((1, 0)) * -1)


@pytest.mark.parametrize("r", [3, 5])
def test_Xr_generation_degree_at_least_r(r):
    cert = generation_degree(build_Xr(r).pair.log_canonical() * 2)
    assert cert.generation_degree >= r
    assert cert.verify()


def test_certificate_minimality():
    cert = generation_degree(build_Xr(3).pair.log_canonical() * 2)
    top = cert.generation_degree
    truncated = frozenset(b for b in cert.basis if b[0] < top)
    broken = GenerationCertificate(cert.divisor, top - 1, truncated, cert.horizon_checked)
    assert not broken.verify()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_generation_degree_is_translation_invariant(seed):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 5), box=3)
    D = TorusDivisor.on(X, [Fraction(rng.randint(0, 2), rng.randint(1, 2)) for _ in X.rays])
    if not section_polytope(D).vertices:
        return
    m = (rng.randint(-3, 3), rng.randint(-3, 3))
    assert generation_degree(D).generation_degree == \
        generation_degree(D.principal_shift(m)).generation_degree


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_adjoint_bpf_divisors_generate_in_low_degree(seed):
    rng = random.Random(seed)
    tower = smooth_tower(rng, rng.randint(3, 8))
    L = random_nef(rng, tower)
    assume(adjoint_shape(L, rng) is not None)
    assert generation_degree(L).generation_degree <= 4


# -- multiplication maps --------------------------------------------------------

def test_plane_multiplication():
    X = from_rays(P2)
    H = X.prime((-1, -1))
    assert multiplication_surjective(H * 3, H)
    assert multiplication_surjective(X.zero(), H * 5)


def test_non_surjective_witness():
    # on P(1,1,2), sections of D_(0,1)+D_(0,1): the degree-2 generator is missing
    X = from_rays([(1, 0), (0, 1), (-1, -2)])
    D = X.prime((-1, -2))
    res = multiplication_surjective(D, D)
    assert not res
    w = res.witness
    assert section_polytope(D * 2).contains(w)
    assert w not in tensor_image(lattice_points(section_polytope(D)),
                                 lattice_points(section_polytope(D)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_surjectivity_matches_tensor_oracle(seed):
    rng = random.Random(seed)
    X = random_fan(rng, rng.randint(3, 6))
    G = TorusDivisor.on(X, [rng.randint(-1, 3) for _ in X.rays])
    L = TorusDivisor.on(X, [rng.randint(-1, 3) for _ in X.rays])
    PG, PL = lattice_points(section_polytope(G)), lattice_points(section_polytope(L))
    if len(PG) > 200 or len(PL) > 200:
        return
    oracle = lattice_points(section_polytope(G + L)) <= tensor_image(PG, PL)
    assert bool(multiplication_surjective(G, L)) == oracle


def test_multiplication_requires_integral_divisors():
    X = from_rays(P2)
    with pytest.raises(ValueError):
        multiplication_surjective(X.prime((1, 0)) * Fraction(1, 2), X.prime((1, 0)))


# -- multigraded generation ------------------------------------------------------

def test_single_ample_adjoint_divisor():
    Y = smooth_tower(random.Random(3), 5)[-1]
    L = TorusDivisor.on(Y, [1] * len(Y)) * 2  # -2K on a toric surface is often ample
    if not is_base_point_free(L):
        L = random_nef(random.Random(3), smooth_tower(random.Random(3), 5))
    cert = adjoint_multigraded_generation([L], 4)
    assert cert.success and cert.box == 10


def test_repeated_divisor_reduces_to_single_case():
    X = from_rays(P2)
    H = X.prime((-1, -1))
    assert adjoint_multigraded_generation([H, H], 4, box=7).success


def test_non_bpf_divisor_rejected():
    X = from_rays([(1, 0), (0, 1), (-1, -2)])
    with pytest.raises(HypothesisError):
        adjoint_multigraded_generation([X.prime((1, 0))], 4)


def test_uncovered_point_is_reported():
    target = {LatticePoint(0, 0), LatticePoint(1, 1), LatticePoint(2, 2)}
    A = {LatticePoint(0, 0), LatticePoint(2, 2)}
    assert uncovered(target, A, [LatticePoint(0, 0)]) == (1, 1)
    assert uncovered(target, A | {LatticePoint(1, 1)}, [LatticePoint(0, 0)]) is None


# -- stable base locus ------------------------------------------------------------

def test_bpf_divisor_has_empty_base_locus():
    X = from_rays(P2)
    rep = stable_base_locus_check(generation_degree(X.prime((1, 0)) * 2))
    assert rep.ok and not rep.base_support and not rep.negative_support


def test_certificate_required():
    with pytest.raises(ValueError):
        stable_base_locus_check(None)


@pytest.mark.parametrize("r", [3, 5])
def test_Xr_base_locus(r):
    cert = generation_degree(build_Xr(r).pair.log_canonical() * 2)
    rep = stable_base_locus_check(cert)
    assert rep.ok
    assert math.factorial(cert.generation_degree) % r == 0
    assert rep.base_support == {(1, i) for i in range(1, r)}


@pytest.mark.parametrize("r", [3, 5])
def test_Fr_base_locus(r):
    inst = build_Fr(r)
    cert = generation_degree(inst.pair.log_canonical())
    rep = stable_base_locus_check(cert)
    assert rep.ok
    assert rep.base_support == {(0, 1)}
    assert math.factorial(cert.generation_degree) % r == 0
    assert zariski(inst.pair.log_canonical()).negative * rep.q == rep.scaled_fix
