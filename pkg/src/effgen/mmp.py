"""The (K+B)-minimal model program on toric surfaces, Zariski decompositions
and fixed parts of linear systems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .lattice import (ceil_frac, floor_frac, is_negative_definite, lattice_columns,
                      solve_exact)
from .toric import (PairData, Ray, ToricSurface, TorusDivisor, canonical_divisor,
                    cone_coordinates, curve_pair_intersection, curve_self_intersection,
                    degree_on, det2, is_cartier, is_nef, is_pseudoeffective, is_smooth,
                    minimal_resolution, pullback, pushforward, section_polytope)

Outcome = Literal["minimal-model", "mori-fibration", "not-pseudoeffective"]


class NotContractibleError(ValueError):
    pass


class NotPseudoEffectiveError(ValueError):
    pass


@dataclass(frozen=True)
class ContractionStep:
    contracted_ray: Ray
    self_intersection: Fraction
    degree: Fraction  # (K+B) . C at the time of contraction
    neighbours: tuple[Ray, Ray]
    weights: tuple[Fraction, Fraction]  # ray = w0*left + w1*right


@dataclass(frozen=True)
class LTMResult:
    source: PairData
    model: ToricSurface
    pushed_boundary: TorusDivisor
    exceptional: TorusDivisor
    steps: tuple[ContractionStep, ...]
    outcome: Outcome

    @property
    def contracted(self) -> tuple[Ray, ...]:
        return tuple(s.contracted_ray for s in self.steps)

    @property
    def pushed_mobile(self) -> TorusDivisor:
        return pushforward(self.source.mobile, self.model)

    def log_canonical_on_model(self) -> TorusDivisor:
        return canonical_divisor(self.model) + self.pushed_boundary + self.pushed_mobile


def contract_ray(X: ToricSurface, B: TorusDivisor, ray) -> tuple[ToricSurface, TorusDivisor, ContractionStep]:
    """Remove ``ray`` from the fan; the boundary is pushed forward."""
    ray = tuple(ray)
    if B.surface != X:
        raise ValueError("boundary is not on the surface")
    left, right = X.neighbours(ray)
    if len(X) <= 3 or det2(left, right) <= 0:
        raise NotContractibleError(f"not contractible: removing {ray} leaves no complete fan")
    Y = ToricSurface(tuple(r for r in X.rays if r != ray))
    K = canonical_divisor(X) + B
    step = ContractionStep(
        ray, curve_self_intersection(X, ray), degree_on(K, ray), (left, right),
        cone_coordinates(left, right, ray))
    return Y, pushforward(B, Y), step


def run_ltm(pair: PairData, order: Literal["forward", "reverse"] = "forward") -> LTMResult:
    """Contract (K+B)-negative curves of negative self-intersection until none
    remain.  Ties are broken by ray position (smallest index first, or largest
    with ``order='reverse'``)."""
    X = pair.surface
    boundary, mobile = pair.boundary, pair.mobile
    steps: list[ContractionStep] = []
    while True:
        K = canonical_divisor(X) + boundary + mobile
        rays = list(X.rays) if order == "forward" else list(reversed(X.rays))
        cands = [r for r in rays
                 if degree_on(K, r) < 0 and curve_self_intersection(X, r) < 0]
        if not cands:
            break
        r = cands[0]
        X, boundary, step = contract_ray(X, boundary, r)
        mobile = pushforward(mobile, X)
        steps.append(step)
    K = canonical_divisor(X) + boundary + mobile
    if is_nef(K):
        outcome: Outcome = "minimal-model"
    elif any(degree_on(K, r) < 0 and curve_self_intersection(X, r) == 0 for r in X.rays):
        outcome = "mori-fibration"
    else:
        outcome = "not-pseudoeffective"
    KX = pair.log_canonical()
    E = KX - pullback(K, pair.surface)
    return LTMResult(pair, X, boundary, E, tuple(steps), outcome)


# ---------------------------------------------------------------------------
# Zariski decomposition


@dataclass(frozen=True)
class ZariskiDecomp:
    positive: TorusDivisor
    negative: TorusDivisor
    support: frozenset[Ray]

    def gram(self) -> list[list[Fraction]]:
        X = self.positive.surface
        rays = [r for r in X.rays if r in self.support]
        return [[curve_pair_intersection(X, a, b) for b in rays] for a in rays]

    def axioms(self) -> dict[str, bool]:
        P, N = self.positive, self.negative
        return {
            "positive_nef": is_nef(P),
            "orthogonal": all(degree_on(P, r) == 0 for r in self.support),
            "negative_effective": N.is_effective(),
            "negative_definite": not self.support or is_negative_definite(self.gram()),
        }


def zariski(D: TorusDivisor, order: Literal["forward", "reverse"] = "forward") -> ZariskiDecomp:
    """Fujita's procedure: grow the support one negative curve at a time and
    re-solve the Gram system exactly until the positive part is nef."""
    X = D.surface
    if not is_pseudoeffective(D):
        raise NotPseudoEffectiveError("divisor is not pseudo-effective")
    rays = list(X.rays) if order == "forward" else list(reversed(X.rays))
    support: list[Ray] = []
    P, N = D, X.zero()
    while True:
        neg = [r for r in rays if r not in support and degree_on(P, r) < 0]
        if not neg:
            break
        support.append(neg[0])
        gram = [[curve_pair_intersection(X, a, b) for b in support] for a in support]
        rhs = [degree_on(D, r) for r in support]
        sol = solve_exact(gram, rhs)
        if sol is None or not sol.unique:
            raise ArithmeticError("negative part has a degenerate Gram matrix")
        N = TorusDivisor.on(X, dict(zip(support, sol.x)))
        P = D - N
    return ZariskiDecomp(P, N, frozenset(r for r in support if N[r] != 0))


# ---------------------------------------------------------------------------
# fixed parts


class EmptyLinearSystemError(ValueError):
    pass


def fix_linear_system(D: TorusDivisor, q: int) -> TorusDivisor:
    """Fixed divisor of ``|qD|``: the minimum of each invariant coefficient
    over all members ``qD + div(chi^u)``."""
    qD = D * q
    if not qD.is_integral():
        raise ValueError(f"{q}D is not integral")
    P = section_polytope(qD)
    X = D.surface
    mins: list[int | None] = [None] * len(X)
    for x, lo, hi in lattice_columns(P):
        for i, (r, c) in enumerate(qD.items()):
            # <(x, y), r> + c is linear in y; minimum at a column end
            base = r[0] * x + int(c)
            v = base + r[1] * (lo if r[1] >= 0 else hi)
            if mins[i] is None or v < mins[i]:
                mins[i] = v
    if mins[0] is None:
        raise EmptyLinearSystemError(f"|{q}D| empty")
    return TorusDivisor(X, tuple(Fraction(m) for m in mins))


def linear_system_nonempty(D: TorusDivisor, q: int) -> bool:
    qD = D * q
    return qD.is_integral() and next(lattice_columns(section_polytope(qD)), None) is not None


@dataclass(frozen=True)
class FixReport:
    limit: TorusDivisor
    gaps: dict[int, TorusDivisor]
    index: int  # q divisible by this are expected to have zero gap

    @property
    def all_nonnegative(self) -> bool:
        return all(g.is_effective() for g in self.gaps.values())

    def zero_gap_at(self) -> list[int]:
        return [q for q, g in self.gaps.items() if not g.support]


def cartier_index(D: TorusDivisor) -> int:
    """Smallest c >= 1 with cD integral and Cartier."""
    bound = math.lcm(D.denominator(), *D.surface.cone_dets())
    for c in range(1, bound + 1):
        if bound % c == 0 and is_cartier(D * c):
            return c
    return bound


def asymptotic_fix(D: TorusDivisor, horizon: int) -> FixReport:
    """The asymptotic fixed part (exact, via Zariski) plus its sampled
    approximations ``Fix|qD| / q`` for admissible ``q <= horizon``."""
    gaps = {}
    for q in range(1, horizon + 1):
        if linear_system_nonempty(D, q):
            gaps[q] = fix_linear_system(D, q) * Fraction(1, q)
    if not gaps:
        raise EmptyLinearSystemError(f"no non-empty multiple up to {horizon}")
    z = zariski(D)
    N = z.negative
    index = math.lcm(D.denominator(), N.denominator(), cartier_index(z.positive))
    return FixReport(N, {q: f - N for q, f in gaps.items()}, index)


# ---------------------------------------------------------------------------
# minimal resolution factorisation


def _contraction_order(X: ToricSurface, drop: set[Ray], smooth_blowdowns: bool) -> list[Ray]:
    order = []
    drop = set(drop)
    while drop:
        for r in X.rays:
            if r not in drop:
                continue
            s = curve_self_intersection(X, r)
            if (s == -1 and is_smooth(X)) if smooth_blowdowns else s < 0:
                left, right = X.neighbours(r)
                if det2(left, right) > 0 and len(X) > 3:
                    break
        else:
            raise NotContractibleError("no admissible contraction order")
        order.append(r)
        drop.discard(r)
        X = ToricSurface(tuple(x for x in X.rays if x != r))
    return order


def factor_through_minimal_resolution(ltm: LTMResult) -> tuple[list[Ray], list[Ray]]:
    """Split ``X -> Y`` as ``X -g-> Z -h-> Y`` with ``Z`` the minimal resolution.

    Returns the rays contracted by ``g`` (an ordered sequence of smooth
    blow-downs) and by ``h``.
    """
    if ltm.outcome != "minimal-model":
        raise ValueError("factorisation needs a minimal-model outcome")
    X = ltm.source.surface
    res = minimal_resolution(ltm.model)
    Z = res.source
    missing = set(Z.rays) - set(X.rays)
    if missing:
        raise ValueError(f"source does not dominate the minimal resolution: {sorted(missing)}")
    g = _contraction_order(X, set(X.rays) - set(Z.rays), smooth_blowdowns=True)
    h = _contraction_order(Z, set(res.inserted_rays), smooth_blowdowns=False)
    return g, h
