"""Exact 2D/3D convex-lattice primitives.

Everything here works over :class:`fractions.Fraction`; no floating point is
used anywhere.  Polygons are stored in H-representation and their vertices are
derived on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, NamedTuple, Sequence


class LatticePoint(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticePoint(self.x - other[0], self.y - other[1])


class UnboundedRegionError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings.  Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def det2(u, v) -> int | Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence]) -> list[tuple[Fraction, Fraction]]:
    """Counterclockwise hull (monotone chain), collinear points dropped."""
    pts = sorted({(Fraction(p[0]), Fraction(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


Halfspace = tuple[tuple[int, int], Fraction]


@dataclass(frozen=True)
class RationalPolygon:
    """The set ``{u : <u, normal> >= -offset for every halfspace}``.

    Empty and lower-dimensional polygons are ordinary values.  ``vertices`` is
    the counterclockwise vertex list (empty when the region is empty or
    unbounded).
    """

    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[tuple[Fraction, Fraction], ...] = field(init=False, compare=False)
    bounded: bool = field(init=False, compare=False)

    def __post_init__(self):
        hs = tuple((
            (int(n[0]), int(n[1])), as_fraction(c)) for n, c in self.halfspaces)
        object.__setattr__(self, "halfspaces", hs)
        bounded = self._recession_trivial()
        feasible = self._feasible()
        if not feasible:
            bounded = True
        object.__setattr__(self, "bounded", bounded)
        verts: tuple = ()
        if feasible and bounded:
            verts = tuple(self._enumerate_vertices())
        object.__setattr__(self, "vertices", verts)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> "RationalPolygon":
        hull = convex_hull(points)
        if not hull:
            return cls((((1, 0), Fraction(-1)), ((-1, 0), Fraction(0))))
        hs: list[Halfspace] = []
        if len(hull) == 1:
            (x, y), = hull
            hs = [((1, 0), -x), ((-1, 0), x), ((0, 1), -y), ((0, -1), y)]
        elif len(hull) == 2:
            p, q = hull
            n = _primitive_normal(q[0] - p[0], q[1] - p[1])
            c = -(n[0] * p[0] + n[1] * p[1])
            hs = [(n, c), ((-n[0], -n[1]), -c)]
            d = (q[0] - p[0], q[1] - p[1])
            t = _primitive_direction(d)
            hs.append((t, -(t[0] * p[0] + t[1] * p[1])))
            hs.append(((-t[0], -t[1]), t[0] * q[0] + t[1] * q[1]))
        else:
            for i, p in enumerate(hull):
                q = hull[(i + 1) % len(hull)]
                n = _primitive_normal(q[0] - p[0], q[1] - p[1])
                hs.append((n, -(n[0] * p[0] + n[1] * p[1])))
        return cls(tuple(hs))

    # -- geometry ---------------------------------------------------------
    def contains(self, u) -> bool:
        return all(n[0] * u[0] + n[1] * u[1] >= -c for n, c in self.halfspaces)

    @property
    def is_empty(self) -> bool:
        return self.bounded and not self.vertices

    @property
    def dimension(self) -> int:
        if self.is_empty:
            return -1
        if not self.bounded:
            return 2 if len(self.halfspaces) == 0 else self._unbounded_dim()
        return min(len(self.vertices) - 1, 2)

    def scale(self, m) -> "RationalPolygon":
        m = as_fraction(m)
        if m < 0:
            raise ValueError("scale factor must be non-negative")
        return RationalPolygon(tuple((n, c * m) for n, c in self.halfspaces))

    def translate(self, t) -> "RationalPolygon":
        return RationalPolygon(tuple(
            (n, c - n[0] * t[0] - n[1] * t[1]) for n, c in self.halfspaces))

    def same_set(self, other: "RationalPolygon") -> bool:
        if not (self.bounded and other.bounded):
            raise UnboundedRegionError("unbounded region")
        return sorted(self.vertices) == sorted(other.vertices)

    def column_range(self, x) -> tuple[Fraction, Fraction] | None:
        """Exact y-interval of the polygon at abscissa ``x`` (None if empty)."""
        lo, hi = None, None
        for (a, b), c in self.halfspaces:
            rhs = -c - a * x
            if b == 0:
                if rhs > 0:
                    return None
                continue
            bound = Fraction(rhs) / b
            if b > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is None or hi is None:
            raise UnboundedRegionError("unbounded region")
        if lo > hi:
            return None
        return lo, hi

    def x_range(self) -> tuple[Fraction, Fraction] | None:
        if not self.bounded:
            raise UnboundedRegionError("unbounded region")
        if not self.vertices:
            return None
        xs = [v[0] for v in self.vertices]
        return min(xs), max(xs)

    # -- internals --------------------------------------------------------
    def _recession_trivial(self) -> bool:
        if not self.halfspaces:
            return False
        normals = [n for n, _ in self.halfspaces]
        for a, b in normals:
            for d in ((-b, a), (b, -a)):
                if all(p * d[0] + q * d[1] >= 0 for p, q in normals):
                    return False
        return True

    def _unbounded_dim(self) -> int:
        # only used for diagnostics; a feasible unbounded region is 1D only if
        # it is contained in a line, i.e. an opposite pair with equal offsets
        pairs = {}
        for n, c in self.halfspaces:
            pairs.setdefault(n, []).append(c)
        for n, cs in pairs.items():
            neg = (-n[0], -n[1])
            if neg in pairs and min(cs) + min(pairs[neg]) == 0:
                return 1
        return 2

    def _feasible(self) -> bool:
        # Fourier-Motzkin elimination of y, then check the x-interval.
        lower, upper, free = [], [], []
        for (a, b), c in self.halfspaces:
            # a x + b y >= -c
            if b > 0:
                lower.append((Fraction(-a, b), Fraction(-c) / b))   # y >= p x + q
            elif b < 0:
                upper.append((Fraction(-a, b), Fraction(-c) / b))   # y <= p x + q
            else:
                free.append((a, c))
        for p1, q1 in lower:
            for p2, q2 in upper:
                # p2 x + q2 >= p1 x + q1
                free.append((p2 - p1, q2 - q1))
        xlo, xhi = None, None
        for a, c in free:
            if a == 0:
                if c < 0:
                    return False
            elif a > 0:
                v = Fraction(-c) / a
                xlo = v if xlo is None or v > xlo else xlo
            else:
                v = Fraction(-c) / a
                xhi = v if xhi is None or v < xhi else xhi
        return xlo is None or xhi is None or xlo <= xhi

    def _enumerate_vertices(self):
        cands = set()
        hs = self.halfspaces
        for i in range(len(hs)):
            (a1, b1), c1 = hs[i]
            for j in range(i + 1, len(hs)):
                (a2, b2), c2 = hs[j]
                d = a1 * b2 - a2 * b1
                if d == 0:
                    continue
                # a1 x + b1 y = -c1 ; a2 x + b2 y = -c2
                x = Fraction(-c1 * b2 + c2 * b1) / d
                y = Fraction(-a1 * c2 + a2 * c1) / d
                if self.contains((x, y)):
                    cands.add((x, y))
        return convex_hull(cands)


def _primitive_normal(dx, dy) -> tuple[int, int]:
    # inward normal for a counterclockwise edge direction (dx, dy)
    return _primitive_direction((-dy, dx))


def _primitive_direction(d) -> tuple[int, int]:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    den = math.lcm(dx.denominator, dy.denominator)
    a, b = int(dx * den), int(dy * den)
    g = math.gcd(a, b)
    return a // g, b // g


def lattice_points(P: RationalPolygon) -> set[LatticePoint]:
    """Integer points of a bounded polygon, scanned column by column."""
    if not P.bounded:
        raise UnboundedRegionError("unbounded region")
    xr = P.x_range()
    if xr is None:
        return set()
    out = set()
    for x in range(ceil_frac(xr[0]), floor_frac(xr[1]) + 1):
        yr = P.column_range(x)
        if yr is None:
            continue
        for y in range(ceil_frac(yr[0]), floor_frac(yr[1]) + 1):
            out.add(LatticePoint(x, y))
    return out


def lattice_columns(P: RationalPolygon):
    """Yield ``(x, ylo, yhi)`` integer columns without materialising points."""
    if not P.bounded:
        raise UnboundedRegionError("unbounded region")
    xr = P.x_range()
    if xr is None:
        return
    for x in range(ceil_frac(xr[0]), floor_frac(xr[1]) + 1):
        yr = P.column_range(x)
        if yr is None:
            continue
        lo, hi = ceil_frac(yr[0]), floor_frac(yr[1])
        if lo <= hi:
            yield x, lo, hi


def minkowski_point_sum(A: Iterable, B: Iterable) -> set[LatticePoint]:
    B = list(B)
    return {LatticePoint(a[0] + b[0], a[1] + b[1]) for a in A for b in B}


# ---------------------------------------------------------------------------
# graded cones


GradedPoint = tuple[int, LatticePoint]


@dataclass(frozen=True)
class PointedCone3:
    """Cone in Z x Z^2 spanned by ``(height, point)`` generators, heights >= 1.

    The lattice points at height ``h`` are the integer points of ``h * Q``
    where ``Q`` is the convex hull of ``point / height`` over the generators.
    """

    generators: tuple[GradedPoint, ...]

    def __post_init__(self):
        gens = []
        for h, p in self.generators:
            if int(h) < 1:
                raise ValueError("cone is not pointed: generator height must be >= 1")
            gens.append((int(h), LatticePoint(int(p[0]), int(p[1]))))
        if not gens:
            raise ValueError("cone needs at least one generator")
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def over_polygon(cls, P: RationalPolygon) -> "PointedCone3":
        """Cone over ``{1} x P`` generated by the primitive vertex rays."""
        if not P.bounded:
            raise ValueError("cone is not pointed: unbounded polygon")
        if P.is_empty:
            raise ValueError("empty polygon spans no cone")
        gens = []
        for vx, vy in P.vertices:
            h = math.lcm(vx.denominator, vy.denominator)
            gens.append((h, LatticePoint(int(vx * h), int(vy * h))))
        return cls(tuple(gens))

    @property
    def slice(self) -> RationalPolygon:
        return RationalPolygon.from_vertices(
            [(Fraction(p.x, h), Fraction(p.y, h)) for h, p in self.generators])

    def extreme_generators(self) -> list[GradedPoint]:
        Q = self.slice
        out = []
        for vx, vy in Q.vertices:
            h = math.lcm(vx.denominator, vy.denominator)
            out.append((h, LatticePoint(int(vx * h), int(vy * h))))
        return out

    def points_at(self, h: int) -> set[LatticePoint]:
        if h == 0:
            return {LatticePoint(0, 0)}
        return lattice_points(self.slice.scale(h))

    def degree_bound(self) -> int:
        """Height beyond which no Hilbert basis element can occur.

        Every basis element is a basis element of some simplicial subcone of a
        fan triangulation, hence lies in that subcone's half-open
        parallelepiped; its height is at most the sum of the three generator
        heights.  This never exceeds the sum over all extreme generators.
        """
        ext = self.extreme_generators()
        hs = [h for h, _ in ext]
        if len(hs) <= 3:
            return sum(hs)
        return max(hs[0] + hs[i] + hs[i + 1] for i in range(1, len(hs) - 1))


def hilbert_basis(C: PointedCone3, bound: int | None = None) -> set[GradedPoint]:
    """Minimal generating set of the semigroup of lattice points of ``C``.

    Degree-by-degree saturation: an element of height ``h`` is reducible iff it
    is a basis element of smaller height plus a semigroup element.
    """
    if bound is None:
        bound = C.degree_bound()
    basis_by_h: dict[int, set[LatticePoint]] = {}
    layers: dict[int, set[LatticePoint]] = {0: {LatticePoint(0, 0)}}
    for h in range(1, bound + 1):
        layer = C.points_at(h)
        layers[h] = layer
        reducible: set[LatticePoint] = set()
        for h1, elems in basis_by_h.items():
            rest = layers[h - h1]
            for b in elems:
                for s in rest:
                    p = LatticePoint(b.x + s.x, b.y + s.y)
                    if p in layer:
                        reducible.add(p)
        new = layer - reducible
        if new:
            basis_by_h[h] = new
    return {(h, p) for h, ps in basis_by_h.items() for p in ps}


def generated_layers(basis: Iterable[GradedPoint], horizon: int) -> dict[int, set[LatticePoint]]:
    """All non-negative integral combinations of ``basis`` up to ``horizon``."""
    by_h: dict[int, list[LatticePoint]] = {}
    for h, p in basis:
        by_h.setdefault(h, []).append(LatticePoint(*p))
    reach: dict[int, set[LatticePoint]] = {0: {LatticePoint(0, 0)}}
    for h in range(1, horizon + 1):
        cur: set[LatticePoint] = set()
        for hb, elems in by_h.items():
            if hb > h:
                continue
            for s in reach[h - hb]:
                for b in elems:
                    cur.add(LatticePoint(s.x + b.x, s.y + b.y))
        reach[h] = cur
    return reach


# ---------------------------------------------------------------------------
# exact linear algebra


@dataclass(frozen=True)
class ExactSolution:
    x: tuple[Fraction, ...]
    kernel: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def unique(self) -> bool:
        return not self.kernel


def solve_exact(M: Sequence[Sequence], b: Sequence) -> ExactSolution | None:
    """Solve ``M x = b`` by Gauss-Jordan elimination over the rationals.

    Returns ``None`` when the system is inconsistent.  For singular consistent
    systems the particular solution has free variables set to zero and the
    kernel basis is attached.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if len(b) != rows:
        raise ValueError("dimension mismatch")
    A = [[as_fraction(v) for v in row] + [as_fraction(bi)] for row, bi in zip(M, b)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [vi - f * vr for vi, vr in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if A[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = A[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -A[i][f]
        kernel.append(tuple(v))
    return ExactSolution(tuple(x), tuple(kernel))


def is_negative_definite(G: Sequence[Sequence]) -> bool:
    """Sylvester's criterion on ``-G`` with exact leading minors."""
    n = len(G)
    for k in range(1, n + 1):
        if _det([[-as_fraction(G[i][j]) for j in range(k)] for i in range(k)]) <= 0:
            return False
    return True


def _det(A: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [vi - f * vc for vi, vc in zip(A[i], A[c])]
    return det


def angle_key(v) -> tuple:
    """Sort key for counterclockwise order starting at the positive x-axis."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half


def ccw_sorted(vectors: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    def cmp(u, v):
        hu, hv = angle_key(u), angle_key(v)
        if hu != hv:
            return hu - hv
        d = det2(u, v)
        return -1 if d > 0 else (1 if d < 0 else 0)

    return sorted((tuple(v) for v in vectors), key=cmp_to_key(cmp))
