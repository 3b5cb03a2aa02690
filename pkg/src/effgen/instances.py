"""Worked surface instances: the iterated blow-up ``X_r`` and the Hirzebruch
surface ``F_r``, with their expected fixed parts, plus a checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .mmp import asymptotic_fix, run_ltm, zariski
from .rings import generation_degree
from .toric import (PairData, ToricSurface, TorusDivisor, canonical_divisor,
                    curve_self_intersection, degree_on, from_rays, is_nef)
from .basket import BasketPoint, ThreefoldModel


@dataclass(frozen=True)
class ExampleInstance:
    name: str
    pair: PairData
    expected: dict[str, Any] = field(default_factory=dict)
    labels: dict[str, Any] = field(default_factory=dict)

    @property
    def surface(self) -> ToricSurface:
        return self.pair.surface

    @property
    def boundary_class(self) -> TorusDivisor:
        return self.pair.total


class ThresholdError(ValueError):
    def __init__(self, msg, minimal):
        super().__init__(msg)
        self.minimal = minimal


def xr_surface(r: int) -> ToricSurface:
    """Blow up the plane r times at infinitely near invariant points.

    The i-th exceptional curve is the ray (1, i): e_1..e_{r-1} form a chain
    of (-2)-curves and e_r is the last (-1)-curve.
    """
    if r < 1:
        raise ValueError("r >= 1")
    return from_rays([(1, 0), *[(1, i) for i in range(1, r + 1)], (0, 1), (-1, -1)])


def _xr_classes(X: ToricSurface, r: int):
    e = {i: X.prime((1, i)) for i in range(1, r + 1)}
    h = X.prime((-1, -1))
    G = X.zero()
    for i in range(1, r + 1):
        G = G + e[i] * Fraction(i, r)
    return e, h, G


def xr_nef_threshold(r: int) -> int:
    """Smallest positive integer a with a*h - 2r*G nef (found by sweeping a)."""
    X = xr_surface(r)
    e, h, G = _xr_classes(X, r)
    a = 1
    while not is_nef(h * a - G * (2 * r)):
        a += 1
    return a


def xr_default_a(r: int) -> int:
    """Smallest a above the nef threshold for which K + B is also
    non-negative on the invariant curves outside the exceptional chain."""
    X = xr_surface(r)
    e, h, G = _xr_classes(X, r)
    half = X.divisor({(1, i): Fraction(1, 2) for i in range(1, r + 1)})
    others = [ray for ray in X.rays if ray[0] != 1 or ray[1] == 0]
    a = xr_nef_threshold(r)
    while True:
        KB = canonical_divisor(X) + h * a - G * (2 * r) + half
        if all(degree_on(KB, ray) >= 0 for ray in others):
            return a
        a += 1


def build_Xr(r: int, a_nef: int | None = None) -> ExampleInstance:
    if r < 2:
        raise ValueError("r >= 2 required")
    X = xr_surface(r)
    e, h, G = _xr_classes(X, r)
    threshold = xr_nef_threshold(r)
    if a_nef is None:
        a_nef = xr_default_a(r)
    if a_nef < threshold:
        raise ThresholdError(f"a*h - 2rG is not nef for a={a_nef}; minimal a is {threshold}",
                             threshold)
    mobile = h * a_nef - G * (2 * r)
    boundary = X.divisor({(1, i): Fraction(1, 2) for i in range(1, r + 1)})
    pair = PairData(X, boundary, mobile)
    E = X.zero()
    for i in range(1, r):
        E = E + e[i] * Fraction(r - i, 2 * r)
    expected = {
        "exceptional": E,
        "contracted": frozenset((1, i) for i in range(1, r)),
        "self_intersections": {(1, i): Fraction(-2 if i < r else -1) for i in range(1, r + 1)},
        "fix_index": 2 * r,
        "generation_lower_bound": r,  # for R(X, 2(K+B)) when r is prime
    }
    return ExampleInstance(f"X_{r}", pair, expected, {"r": r, "a_nef": a_nef, "G": G, "h": h})


def build_Fr(r: int) -> ExampleInstance:
    if r < 3:
        raise ValueError("r >= 3 required")
    X = from_rays([(1, 0), (0, 1), (-1, r), (0, -1)])
    S, H = (0, 1), (0, -1)
    boundary = X.divisor({S: 1})
    mobile = X.prime(H) * 2
    pair = PairData(X, boundary, mobile)
    expected = {
        "fix": X.divisor({S: Fraction(2, r)}),
        "S2": Fraction(-r),
        "H2": Fraction(r),
        "fix_index": r,
    }
    return ExampleInstance(f"F_{r}", pair, expected, {"r": r, "S": S, "H": H})


def threefold_example_basket(r: int) -> ThreefoldModel:
    """Basket of the isolated 1/r(1,1,r-1) point: a single cyclic point."""
    return ThreefoldModel((BasketPoint.cyclic(r),))


@dataclass
class VerifyReport:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def mismatches(self) -> list[str]:
        return [f"{n}: {d}" for n, ok, d in self.checks if not ok]


def verify(inst: ExampleInstance, generation: bool = False, horizon: int | None = None) -> VerifyReport:
    """Run the surface pipeline on ``inst`` and compare exactly."""
    rep = VerifyReport(inst.name)
    exp = inst.expected
    X = inst.surface
    D = inst.pair.log_canonical()
    ltm = run_ltm(inst.pair)
    z = zariski(D)
    rep.add("ltm_outcome", ltm.outcome == "minimal-model", ltm.outcome)
    if "exceptional" in exp:
        rep.add("ltm_exceptional", ltm.exceptional == exp["exceptional"], str(ltm.exceptional))
        rep.add("zariski_negative", z.negative == exp["exceptional"], str(z.negative))
    if "contracted" in exp:
        rep.add("contracted", frozenset(ltm.contracted) == exp["contracted"],
                str(ltm.contracted))
    if "self_intersections" in exp:
        got = {r: curve_self_intersection(X, r) for r in exp["self_intersections"]}
        rep.add("self_intersections", got == exp["self_intersections"], str(got))
    if "fix" in exp:
        rep.add("zariski_negative", z.negative == exp["fix"], str(z.negative))
        rep.add("ltm_exceptional", ltm.exceptional == exp["fix"], str(ltm.exceptional))
    if "S2" in exp:
        S, H = inst.labels["S"], inst.labels["H"]
        rep.add("S2", curve_self_intersection(X, S) == exp["S2"])
        rep.add("H2", curve_self_intersection(X, H) == exp["H2"])
    limit = exp.get("exceptional", exp.get("fix"))
    idx = exp["fix_index"]
    fix = asymptotic_fix(D, horizon or 2 * idx)
    rep.add("fix_limit", fix.limit == limit, str(fix.limit))
    rep.add("fix_gaps_nonnegative", fix.all_nonnegative)
    zero_at = [q for q in fix.gaps if q % idx == 0]
    rep.add("fix_gap_zero_at_index", bool(zero_at) and all(not fix.gaps[q].support for q in zero_at),
            str(zero_at))
    if generation and "generation_lower_bound" in exp:
        cert = generation_degree(D * 2)
        rep.add("generation_degree", cert.generation_degree >= exp["generation_lower_bound"],
                str(cert.generation_degree))
    return rep
