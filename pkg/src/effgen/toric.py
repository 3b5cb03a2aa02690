"""Complete toric surfaces given by 2D fans, and their torus-invariant divisors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .lattice import (RationalPolygon, as_fraction, ccw_sorted, det2, lattice_points)

Ray = tuple[int, int]


class FanError(ValueError):
    pass


class NotKltError(ValueError):
    pass


def primitive(v) -> Ray:
    g = math.gcd(int(v[0]), int(v[1]))
    if g == 0:
        raise FanError("zero vector is not a ray")
    return int(v[0]) // g, int(v[1]) // g


@dataclass(frozen=True)
class ToricSurface:
    """Complete fan with primitive rays in counterclockwise order."""

    rays: tuple[Ray, ...]

    def __post_init__(self):
        rays = tuple((int(r[0]), int(r[1])) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if len(rays) < 3:
            raise FanError("a complete fan needs at least 3 rays")
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        for r in rays:
            if math.gcd(*r) != 1:
                raise FanError(f"ray {r} is not primitive")
        if ccw_sorted(rays) != list(rays):
            # allow any cyclic rotation of the sorted order
            s = ccw_sorted(rays)
            k = s.index(rays[0])
            if s[k:] + s[:k] != list(rays):
                raise FanError("rays are not in counterclockwise order")
        for i in range(len(rays)):
            d = det2(rays[i], rays[(i + 1) % len(rays)])
            if d <= 0:
                raise FanError(
                    f"cone ({rays[i]}, {rays[(i + 1) % len(rays)]}) is not strictly convex; "
                    "fan is not complete")

    def __len__(self):
        return len(self.rays)

    @property
    def picard_number(self) -> int:
        return len(self.rays) - 2

    def index(self, ray) -> int:
        try:
            return self.rays.index(tuple(ray))
        except ValueError:
            raise KeyError(f"{tuple(ray)} is not a ray of this surface") from None

    def neighbours(self, ray) -> tuple[Ray, Ray]:
        i = self.index(ray)
        n = len(self.rays)
        return self.rays[i - 1], self.rays[(i + 1) % n]

    def cone(self, i: int) -> tuple[Ray, Ray]:
        return self.rays[i % len(self)], self.rays[(i + 1) % len(self)]

    def cone_dets(self) -> list[int]:
        return [det2(*self.cone(i)) for i in range(len(self))]

    def containing_cone(self, v) -> int:
        """Index ``i`` of the cone ``(rays[i], rays[i+1])`` containing ``v``."""
        for i in range(len(self)):
            a, b = self.cone(i)
            if det2(a, v) >= 0 and det2(v, b) >= 0:
                return i
        raise FanError(f"{v} lies in no cone")  # pragma: no cover - complete fans

    def divisor(self, coeffs: Mapping | Iterable = ()) -> "TorusDivisor":
        return TorusDivisor.on(self, coeffs)

    def zero(self) -> "TorusDivisor":
        return TorusDivisor.on(self, {})

    def prime(self, ray) -> "TorusDivisor":
        return TorusDivisor.on(self, {tuple(ray): 1})


def from_rays(rays: Iterable, strict: bool = False) -> ToricSurface:
    """Validate a complete fan, normalising rays to primitive ccw order.

    With ``strict=True`` non-primitive input rays are rejected instead of
    being normalised.
    """
    rays = [tuple(int(c) for c in r) for r in rays]
    if len(rays) < 3:
        raise FanError("a complete fan needs at least 3 rays")
    prim = []
    for r in rays:
        p = primitive(r)
        if strict and p != r:
            raise FanError(f"ray {r} is not primitive")
        prim.append(p)
    if len(set(prim)) != len(prim):
        raise FanError("duplicate rays")
    return ToricSurface(tuple(ccw_sorted(prim)))


@dataclass(frozen=True)
class TorusDivisor:
    """Rational combination of the torus-invariant prime divisors."""

    surface: ToricSurface
    coeffs: tuple[Fraction, ...]

    @classmethod
    def on(cls, X: ToricSurface, coeffs: Mapping | Iterable = ()) -> "TorusDivisor":
        if isinstance(coeffs, Mapping):
            vals = [Fraction(0)] * len(X)
            for ray, c in coeffs.items():
                vals[X.index(tuple(ray))] = as_fraction(c)
        else:
            vals = [as_fraction(c) for c in coeffs]
            if len(vals) != len(X):
                raise ValueError("coefficient list does not match the rays")
        return cls(X, tuple(vals))

    def __getitem__(self, ray) -> Fraction:
        return self.coeffs[self.surface.index(ray)]

    def items(self):
        return zip(self.surface.rays, self.coeffs)

    def as_dict(self) -> dict[Ray, Fraction]:
        return dict(self.items())

    def _check(self, other):
        if other.surface != self.surface:
            raise ValueError("divisors live on different surfaces")

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        self._check(other)
        return TorusDivisor(self.surface, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        self._check(other)
        return TorusDivisor(self.surface, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TorusDivisor(self.surface, tuple(-a for a in self.coeffs))

    def __mul__(self, k) -> "TorusDivisor":
        k = as_fraction(k)
        return TorusDivisor(self.surface, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    @property
    def support(self) -> frozenset[Ray]:
        return frozenset(r for r, c in self.items() if c != 0)

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coeffs))

    def round_down(self) -> "TorusDivisor":
        return TorusDivisor(self.surface, tuple(Fraction(math.floor(c)) for c in self.coeffs))

    def principal_shift(self, u) -> "TorusDivisor":
        """``self + div(chi^u)``; linearly equivalent for integral ``u``."""
        return TorusDivisor(self.surface, tuple(
            c + u[0] * r[0] + u[1] * r[1] for r, c in self.items()))

    def __str__(self):
        parts = [f"{c}*D{r}" for r, c in self.items() if c != 0]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# intersection theory


def is_smooth(X: ToricSurface) -> bool:
    return all(d == 1 for d in X.cone_dets())


def curve_self_intersection(X: ToricSurface, ray) -> Fraction:
    prev, nxt = X.neighbours(ray)
    ray = tuple(ray)
    return -Fraction(det2(prev, nxt), det2(prev, ray) * det2(ray, nxt))


def curve_pair_intersection(X: ToricSurface, ray_i, ray_j) -> Fraction:
    ray_i, ray_j = tuple(ray_i), tuple(ray_j)
    if ray_i == ray_j:
        return curve_self_intersection(X, ray_i)
    i, j = X.index(ray_i), X.index(ray_j)
    n = len(X)
    if (i + 1) % n == j:
        return Fraction(1, det2(ray_i, ray_j))
    if (j + 1) % n == i:
        return Fraction(1, det2(ray_j, ray_i))
    return Fraction(0)


def intersection_matrix(X: ToricSurface) -> list[list[Fraction]]:
    return [[curve_pair_intersection(X, a, b) for b in X.rays] for a in X.rays]


def degree_on(D: TorusDivisor, ray) -> Fraction:
    """Intersection number ``D . D_ray``."""
    X = D.surface
    ray = tuple(ray)
    prev, nxt = X.neighbours(ray)
    return (D[ray] * curve_self_intersection(X, ray)
            + D[prev] * curve_pair_intersection(X, prev, ray)
            + (D[nxt] * curve_pair_intersection(X, nxt, ray) if nxt != prev else 0))


def intersect(D: TorusDivisor, E: TorusDivisor) -> Fraction:
    D._check(E)
    return sum((c * degree_on(D, r) for r, c in E.items() if c), Fraction(0))


def numerically_equivalent(D: TorusDivisor, E: TorusDivisor) -> bool:
    return all(degree_on(D - E, r) == 0 for r in D.surface.rays)


def canonical_divisor(X: ToricSurface) -> TorusDivisor:
    return TorusDivisor(X, tuple(Fraction(-1) for _ in X.rays))


def section_polytope(D: TorusDivisor) -> RationalPolygon:
    return RationalPolygon(tuple((r, c) for r, c in D.items()))


def h0(D: TorusDivisor) -> int:
    return len(lattice_points(section_polytope(D.round_down())))


def is_nef(D: TorusDivisor) -> bool:
    return all(degree_on(D, r) >= 0 for r in D.surface.rays)


def is_big(D: TorusDivisor) -> bool:
    return section_polytope(D).dimension == 2


def is_pseudoeffective(D: TorusDivisor) -> bool:
    # D is Q-linearly equivalent to a non-negative combination of the D_rho
    # iff its rational section polygon is non-empty.
    return not section_polytope(D).is_empty


def is_cartier(D: TorusDivisor) -> bool:
    """Every cone carries an integral linear function matching ``-D``."""
    return all(
        all(c.denominator == 1 for c in _cone_character(D, i)) for i in range(len(D.surface)))


def _cone_character(D: TorusDivisor, i: int) -> tuple[Fraction, Fraction]:
    # m with <m, u> = -d_u on both rays of cone i
    X = D.surface
    u, v = X.cone(i)
    du, dv = D[u], D[v]
    det = det2(u, v)
    mx = Fraction(-du * v[1] + dv * u[1], det)
    my = Fraction(-dv * u[0] + du * v[0], det)
    return mx, my


def cone_coordinates(u, v, w) -> tuple[Fraction, Fraction]:
    """``(alpha, beta)`` with ``w = alpha*u + beta*v``."""
    d = det2(u, v)
    return Fraction(det2(w, v), d), Fraction(det2(u, w), d)


# ---------------------------------------------------------------------------
# blow-ups and resolutions


@dataclass(frozen=True)
class ResolutionMap:
    """Toric birational morphism ``source -> target`` adding ``inserted_rays``.

    ``discrepancy`` holds ``a(E, target)`` for every inserted ray.
    """

    source: ToricSurface
    target: ToricSurface
    inserted_rays: tuple[Ray, ...]
    discrepancy: Mapping[Ray, Fraction] = field(default_factory=dict)

    @property
    def is_identity(self) -> bool:
        return not self.inserted_rays

    def pullback(self, D: TorusDivisor) -> TorusDivisor:
        if D.surface != self.target:
            raise ValueError("divisor is not on the target")
        return pullback(D, self.source)


def pullback(D: TorusDivisor, finer: ToricSurface) -> TorusDivisor:
    """Pull back a Q-Cartier divisor along a refinement of its fan."""
    Y = D.surface
    coeffs = {}
    for w in finer.rays:
        if w in Y.rays:
            coeffs[w] = D[w]
            continue
        i = Y.containing_cone(w)
        u, v = Y.cone(i)
        alpha, beta = cone_coordinates(u, v, w)
        coeffs[w] = alpha * D[u] + beta * D[v]
    return TorusDivisor.on(finer, coeffs)


def pushforward(D: TorusDivisor, coarser: ToricSurface) -> TorusDivisor:
    return TorusDivisor.on(coarser, {r: D[r] for r in coarser.rays})


def discrepancy_at(target: ToricSurface, boundary: TorusDivisor | None, w) -> Fraction:
    """``a(E_w, target, boundary)`` for a ray ``w`` not in the target fan."""
    if boundary is None:
        boundary = target.zero()
    K = canonical_divisor(target) + boundary
    i = target.containing_cone(w)
    u, v = target.cone(i)
    alpha, beta = cone_coordinates(u, v, w)
    return -1 - (alpha * K[u] + beta * K[v])


def _refine(Y: ToricSurface, new_rays: Iterable[Ray]) -> ToricSurface:
    return ToricSurface(tuple(ccw_sorted(set(Y.rays) | set(new_rays))))


def blow_up(X: ToricSurface, cone_index: int) -> tuple[ToricSurface, ResolutionMap]:
    if not 0 <= cone_index < len(X):
        raise IndexError("no such cone")
    u, v = X.cone(cone_index)
    w = primitive((u[0] + v[0], u[1] + v[1]))
    Y = _refine(X, [w])
    res = ResolutionMap(Y, X, (w,), {w: discrepancy_at(X, None, w)})
    return Y, res


def hirzebruch_jung_rays(u: Ray, v: Ray) -> list[Ray]:
    """Rays of the minimal resolution of the cone ``(u, v)``, from ``u`` to ``v``."""
    out = []
    while True:
        d = det2(u, v)
        if d <= 0:
            raise FanError("cone is not strictly convex")
        if d == 1:
            return out
        w0 = _unimodular_partner(u)
        # v = k*u + d*w0
        k = det2(v, w0) // det2(u, w0)
        assert (k * u[0] + d * w0[0], k * u[1] + d * w0[1]) == v
        t = -((-k) // d)  # ceil(k / d)
        w = (w0[0] + t * u[0], w0[1] + t * u[1])
        out.append(w)
        u = w


def _unimodular_partner(u: Ray) -> Ray:
    # w with det(u, w) = 1
    g, s, t = _xgcd(u[0], u[1])
    # s*u0 + t*u1 = 1 ; det(u, (-t, s)) = u0*s + u1*t
    assert g == 1
    return -t, s


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def minimal_resolution(Y: ToricSurface) -> ResolutionMap:
    new: list[Ray] = []
    for i in range(len(Y)):
        new.extend(hirzebruch_jung_rays(*Y.cone(i)))
    Z = _refine(Y, new) if new else Y
    disc = {w: discrepancy_at(Y, None, w) for w in new}
    return ResolutionMap(Z, Y, tuple(new), disc)


def pair_discrepancy(resolution: ResolutionMap, B: TorusDivisor, ray) -> Fraction:
    """``a(E, Y, B)`` for an exceptional ray of ``resolution``."""
    ray = tuple(ray)
    Y = resolution.target
    if B.surface != Y:
        raise ValueError("boundary must live on the target")
    if ray not in resolution.inserted_rays:
        raise KeyError(f"{ray} is not exceptional for this resolution")
    u, v = Y.cone(Y.containing_cone(ray))
    for r in (u, v):
        if B[r] >= 1:
            raise NotKltError(
                f"boundary coefficient {B[r]} >= 1 on {r}: pair may not be klt at this point")
    return discrepancy_at(Y, B, ray)


# ---------------------------------------------------------------------------
# pairs


@dataclass(frozen=True)
class PairData:
    """A toric pair ``(X, B)`` with ``B = boundary + mobile``.

    ``boundary`` is the torus-invariant part, coefficients in ``[0, 1]``.
    ``mobile`` is the numerical class of a general member of a nef linear
    system; its support contains no invariant curve, so it only enters through
    intersection numbers and linear-equivalence-invariant quantities.
    """

    surface: ToricSurface
    boundary: TorusDivisor
    mobile: TorusDivisor | None = None

    def __post_init__(self):
        if self.boundary.surface != self.surface:
            raise ValueError("boundary is not on the surface")
        for r, c in self.boundary.items():
            if not 0 <= c <= 1:
                raise ValueError(f"boundary coefficient {c} on {r} outside [0, 1]")
        if self.mobile is None:
            object.__setattr__(self, "mobile", self.surface.zero())
        elif self.mobile.surface != self.surface:
            raise ValueError("mobile part is not on the surface")
        elif not is_nef(self.mobile):
            raise ValueError("mobile part must be nef to have a general member")

    @property
    def total(self) -> TorusDivisor:
        return self.boundary + self.mobile

    def log_canonical(self) -> TorusDivisor:
        return canonical_divisor(self.surface) + self.total

    def is_klt(self) -> bool:
        """klt certification for log smooth pairs: smooth surface, all < 1."""
        return is_smooth(self.surface) and all(c < 1 for c in self.boundary.coeffs)

    @property
    def support(self) -> frozenset[Ray]:
        return self.boundary.support
