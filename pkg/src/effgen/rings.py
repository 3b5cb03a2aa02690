"""Section rings of torus-invariant divisors as graded semigroups of lattice
points: generation degrees, multiplication maps and stable base loci."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import (LatticePoint, PointedCone3, generated_layers, hilbert_basis,
                      lattice_points)
from .mmp import fix_linear_system, zariski
from .toric import (TorusDivisor, is_cartier, is_nef, is_smooth, section_polytope)


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationCertificate:
    divisor: TorusDivisor
    generation_degree: int
    basis: frozenset[tuple[int, LatticePoint]]
    horizon_checked: int

    def verify(self, horizon: int | None = None) -> bool:
        """Re-check that the basis spans every graded lattice point up to the
        horizon and that no basis element is redundant."""
        horizon = self.horizon_checked if horizon is None else horizon
        P = section_polytope(self.divisor)
        reach = generated_layers(self.basis, horizon)
        for h in range(1, horizon + 1):
            if lattice_points(P.scale(h)) != reach[h]:
                return False
        for b in self.basis:
            rest = self.basis - {b}
            if b[1] in generated_layers(rest, b[0])[b[0]]:
                return False
        return True


def generation_degree(D: TorusDivisor) -> GenerationCertificate:
    """Largest degree of a minimal generator of ``R(X, D)``."""
    P = section_polytope(D)
    if P.is_empty:
        raise ValueError("no multiple of D is effective")
    cone = PointedCone3.over_polygon(P)
    horizon = cone.degree_bound()
    basis = hilbert_basis(cone, horizon)
    deg = max(h for h, _ in basis)
    return GenerationCertificate(D, deg, frozenset(basis), horizon)


@dataclass(frozen=True)
class SurjectivityResult:
    surjective: bool
    witness: LatticePoint | None = None

    def __bool__(self):
        return self.surjective


def uncovered(target: set[LatticePoint], A: set[LatticePoint],
              B: Sequence[LatticePoint]) -> LatticePoint | None:
    """Smallest point of ``target`` outside ``A + B``, or ``None``."""
    for p in sorted(target):
        if not any(LatticePoint(p.x - b.x, p.y - b.y) in A for b in B):
            return p
    return None


def multiplication_surjective(G: TorusDivisor, L: TorusDivisor) -> SurjectivityResult:
    """Is ``H^0(G) (x) H^0(L) -> H^0(G+L)`` onto?  Monomials are lattice points."""
    if not (G.is_integral() and L.is_integral()):
        raise ValueError("G and L must be integral")
    missing = uncovered(lattice_points(section_polytope(G + L)),
                        lattice_points(section_polytope(G)),
                        sorted(lattice_points(section_polytope(L))))
    return SurjectivityResult(missing is None, missing)


def is_base_point_free(L: TorusDivisor) -> bool:
    """Integral, Cartier and nef: on a complete toric variety that is bpf."""
    return L.is_integral() and is_cartier(L) and is_nef(L)


@dataclass(frozen=True)
class MultigradedCertificate:
    divisors: tuple[TorusDivisor, ...]
    degree_bound: int
    box: int
    witness_failures: tuple[tuple[tuple[int, ...], int, LatticePoint], ...] = ()

    @property
    def success(self) -> bool:
        return not self.witness_failures


def adjoint_multigraded_generation(L_list: Sequence[TorusDivisor], bound: int,
                                   box: int | None = None) -> MultigradedCertificate:
    """Check that ``R(X; L_1..L_k)`` is generated in multidegrees ``<= bound``.

    Every multidegree ``m`` in ``[0, box]^k`` with ``m_l > bound`` must be
    reached from ``m - e_l`` by multiplication with ``H^0(L_l)``.
    """
    if not L_list:
        raise ValueError("need at least one divisor")
    for i, L in enumerate(L_list):
        if not is_base_point_free(L):
            raise HypothesisError(f"L_{i + 1} is not base-point-free")
    if box is None:
        box = 2 * (bound + 1)
    k = len(L_list)
    X = L_list[0].surface
    cache: dict[tuple[int, ...], set[LatticePoint]] = {}

    def sections(m):
        if m not in cache:
            D = X.zero()
            for c, L in zip(m, L_list):
                if c:
                    D = D + L * c
            cache[m] = lattice_points(section_polytope(D))
        return cache[m]

    gens = [sorted(sections(tuple(int(i == j) for j in range(k)))) for i in range(k)]
    failures = []
    for m in itertools.product(range(box + 1), repeat=k):
        for l in range(k):
            if m[l] <= bound:
                continue
            lower = sections(m[:l] + (m[l] - 1,) + m[l + 1:])
            missing = uncovered(sections(m), lower, gens[l])
            if missing is not None:
                failures.append((m, l, missing))
    return MultigradedCertificate(tuple(L_list), bound, box, tuple(failures))


@dataclass(frozen=True)
class BaseLocusReport:
    q: int
    base_support: frozenset
    negative_support: frozenset
    scaled_fix: TorusDivisor
    integral: bool

    @property
    def ok(self) -> bool:
        return self.base_support == self.negative_support and self.integral


def stable_base_locus_check(cert: GenerationCertificate | None, m: int | None = None) -> BaseLocusReport:
    """With ``R(X, D)`` generated in degree ``m`` and ``q = m!``, compare the
    divisorial base locus of ``|qD|`` to the support of the asymptotic fixed
    part, and test integrality of ``q * Fix(D)``."""
    if cert is None:
        raise ValueError("a generation certificate is required")
    D = cert.divisor
    if m is None:
        m = cert.generation_degree
    if m < cert.generation_degree:
        raise ValueError("certificate does not cover degree m")
    if not D.is_integral():
        raise ValueError("D must be integral")
    q = math.factorial(m)
    fixed = fix_linear_system(D, q)
    N = zariski(D).negative
    qN = N * q
    integral = qN.is_integral() and (is_smooth(D.surface) or is_cartier(qN))
    return BaseLocusReport(q, fixed.support, N.support, qN, integral)
