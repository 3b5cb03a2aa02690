"""Instance generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from effgen.lattice import LatticePoint, RationalPolygon
from effgen.rings import is_base_point_free
from effgen.toric import (PairData, ToricSurface, TorusDivisor, blow_up, canonical_divisor,
                          from_rays, is_big, is_cartier, is_nef, is_pseudoeffective, pullback)

P2 = ((1, 0), (0, 1), (-1, -1))


def hirzebruch(a: int) -> ToricSurface:
    return from_rays([(1, 0), (0, 1), (-1, a), (0, -1)])


def smooth_tower(rng: random.Random, n_rays: int) -> list[ToricSurface]:
    """A chain of smooth surfaces from P^2 or F_a, each a blow-up of the last."""
    X = from_rays(P2) if rng.random() < 0.5 else hirzebruch(rng.randint(0, 3))
    tower = [X]
    while len(X) < n_rays:
        X, _ = blow_up(X, rng.randrange(len(X)))
        tower.append(X)
    return tower


def random_smooth_surface(rng: random.Random, max_rays: int = 8) -> ToricSurface:
    return smooth_tower(rng, rng.randint(3, max_rays))[-1]


def random_fan(rng: random.Random, n_rays: int, box: int = 4) -> ToricSurface:
    """Complete (possibly singular) fan with ``n_rays`` primitive rays."""
    while True:
        rays = set()
        while len(rays) < n_rays:
            v = (rng.randint(-box, box), rng.randint(-box, box))
            if v != (0, 0) and math.gcd(*v) == 1:
                rays.add(v)
        try:
            return from_rays(rays, strict=True)
        except ValueError:
            continue


def _nef_on(rng: random.Random, X: ToricSurface, hi: int, tries: int = 400) -> TorusDivisor:
    for _ in range(tries):
        D = TorusDivisor.on(X, [rng.randint(0, hi) for _ in X.rays])
        if D.support and is_nef(D) and is_cartier(D):
            return D
    return X.zero()


def random_nef(rng: random.Random, tower: list[ToricSurface], hi: int = 2,
               big: bool = True) -> TorusDivisor:
    """Integral nef Cartier divisor on ``tower[-1]``: a sum of pullbacks of
    nef divisors found on earlier (smaller) stages of the tower."""
    X = tower[-1]
    D = X.zero()
    stages = [0] if big else []
    stages += [rng.randrange(len(tower)) for _ in range(rng.randint(0, 2))]
    for j in stages:
        S = tower[j]
        N = _nef_on(rng, S, hi)
        if j == 0 and big:
            while not is_big(N):
                N = _nef_on(rng, S, hi)
        D = D + pullback(N, X)
    return D


def adjoint_shape(L: TorusDivisor, rng: random.Random, a_choices=(1, 2, 3)):
    """Find ``a`` and an invariant boundary ``B`` (coefficients in [0, 1))
    with ``M = L/a - K - B`` nef, so ``L ~ a(K + B + M)`` with ``M`` carried by
    a general member.  Returns the klt pair or ``None``."""
    X = L.surface
    K = canonical_divisor(X)
    for a in a_choices:
        for _ in range(8):
            B = TorusDivisor.on(X, [Fraction(rng.randint(0, 2), 3) for _ in X.rays])
            M = L * Fraction(1, a) - K - B
            if is_nef(M):
                pair = PairData(X, B, M)
                assert pair.log_canonical() * a == L
                return a, pair
    return None


def random_pseudoeffective(rng: random.Random) -> TorusDivisor:
    """Rational pseudo-effective divisor on a random (possibly singular) surface."""
    while True:
        X = random_fan(rng, rng.randint(3, 7)) if rng.random() < 0.5 else \
            smooth_tower(rng, rng.randint(3, 8))[-1]
        D = TorusDivisor.on(X, [Fraction(rng.randint(-2, 5), rng.randint(1, 4)) for _ in X.rays])
        if is_pseudoeffective(D):
            return D


def adjoint_bpf_family(rng: random.Random, k: int, max_rays: int = 8, hi: int = 2):
    """``k`` nef base point free divisors of adjoint shape on one smooth
    surface with at most ``max_rays`` rays, or ``None`` if a draw fails."""
    tower = smooth_tower(rng, rng.randint(3, max_rays))
    Ls = []
    for _ in range(k):
        L = random_nef(rng, tower, hi=hi, big=not Ls or rng.random() < 0.5)
        if not L.support or not is_base_point_free(L) or adjoint_shape(L, rng) is None:
            return None
        Ls.append(L)
    return Ls


def enumerate_family(seed: int, count: int, k_choices=(1, 2), max_rays: int = 8, hi: int = 2):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        fam = adjoint_bpf_family(rng, rng.choice(k_choices), max_rays, hi)
        if fam is not None:
            out.append(fam)
    return out


# ---------------------------------------------------------------------------
# oracles


def brute_lattice_points(P: RationalPolygon, box: int = 20) -> set[LatticePoint]:
    """Scan the whole box and test every half-plane directly."""
    out = set()
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            if all(n[0] * x + n[1] * y + c >= 0 for n, c in P.halfspaces):
                out.add(LatticePoint(x, y))
    return out


def tensor_image(G_points, L_points) -> set[tuple[int, int]]:
    """Span of all products of monomial sections: exponent vectors add."""
    return {(g[0] + l[0], g[1] + l[1]) for g in G_points for l in L_points}


def continued_fraction_self_intersections(n: int, q: int) -> list[int]:
    """Minus the Hirzebruch-Jung continued fraction of n/q: the
    self-intersections of the minimal resolution of 1/n(1, q)."""
    out = []
    a, b = n, q
    while b:
        c = -(-a // b)
        out.append(-c)
        a, b = b, c * b - a
    return out


# acceptance results, printed in the terminal summary by conftest
ACCEPTANCE_LOG: list[tuple[int, bool, str]] = []
