"""Basket-level calculus for terminal threefold points.

No threefold geometry is represented: a point is its kind, index, axial
weight and basket, and weighted blow-ups of minimal discrepancy act as
rewriting rules on multisets of points.  Depth computed here is the minimum
length of a rule sequence reaching an all-Gorenstein state; it is a
model-level abstraction of the geometric depth.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

from .exact import evaluate
from .trace import BoundTrace, TraceBuilder

CYCLIC, CA, CAX4, CD2, OTHER = "cyclic", "cA/r", "cAx/4", "cD/2", "other"
KINDS = (CYCLIC, CA, CAX4, CD2, OTHER)


class RuleError(ValueError):
    pass


class UnsupportedSingularityError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BasketPoint:
    kind: str
    index: int
    axial_weight: int
    basket: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.index < 1 or self.axial_weight < 1:
            raise ValueError("index and axial weight must be positive")
        if any(b < 1 for b in self.basket):
            raise ValueError("basket entries must be positive")

    @classmethod
    def cyclic(cls, r: int) -> "BasketPoint":
        return cls(CYCLIC, r, 1, (r,))

    @classmethod
    def cA(cls, r: int, aw: int) -> "BasketPoint":
        return cls(CA, r, aw, (r,) * aw)

    @classmethod
    def cAx4(cls, aw: int) -> "BasketPoint":
        # Xi = 2 aw + 2
        return cls(CAX4, 4, aw, (4,) + (2,) * (aw - 1))

    @classmethod
    def cD2(cls, aw: int) -> "BasketPoint":
        # Xi = 2 aw, by analogy with cA/r; not asserted beyond index 2
        return cls(CD2, 2, aw, (2,) * aw)

    @classmethod
    def make(cls, kind: str, index: int | None = None, axial_weight: int = 1,
             basket: Sequence[int] | None = None) -> "BasketPoint":
        if kind == CYCLIC:
            return cls.cyclic(index)
        if kind == CA:
            return cls.cA(index, axial_weight)
        if kind == CAX4:
            return cls.cAx4(axial_weight)
        if kind == CD2:
            return cls.cD2(axial_weight)
        if basket is None:
            raise ValueError("kind 'other' needs an explicit basket")
        return cls(OTHER, index, axial_weight, tuple(basket))

    @property
    def xi(self) -> int:
        return sum(self.basket)

    @property
    def gorenstein(self) -> bool:
        return self.index == 1

    def __str__(self):
        if self.kind == CYCLIC:
            return f"cyclic {self.index}"
        if self.kind == CA:
            return f"cA/{self.index} aw {self.axial_weight}"
        return f"{self.kind} aw {self.axial_weight}"


def normalize(points: Iterable[BasketPoint]) -> tuple[BasketPoint, ...]:
    return tuple(sorted(p for p in points if not p.gorenstein))


@dataclass(frozen=True)
class ThreefoldModel:
    points: tuple[BasketPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", normalize(self.points))

    @property
    def gorenstein(self) -> bool:
        return not self.points


def xi(model: ThreefoldModel | Iterable[BasketPoint]) -> int:
    pts = model.points if isinstance(model, ThreefoldModel) else tuple(model)
    return sum(p.xi for p in pts)


def aw(model: ThreefoldModel | Iterable[BasketPoint]) -> int:
    pts = model.points if isinstance(model, ThreefoldModel) else tuple(model)
    return sum(p.axial_weight for p in pts)


# ---------------------------------------------------------------------------
# built-in blow-up rules


def apply_cAr_blowup(point: BasketPoint, k: int, a: int, b: int) -> tuple[BasketPoint, ...]:
    """Minimal-discrepancy blow-up of a cA/r point.

    Outputs cyclic points of indices ``a`` and ``b`` (``a + b = k r``) and, if
    ``k < aw``, a cA/r point of axial weight ``aw - k``.  Index-1 outputs are
    kept so that the raw Xi balance is visible.  A cyclic quotient point is
    treated as cA/r with axial weight 1.
    """
    if point.kind not in (CA, CYCLIC):
        raise RuleError(f"cA/r rule does not apply to {point.kind}")
    r, w = point.index, point.axial_weight
    if not (1 <= k <= w and a >= 1 and b >= 1 and a + b == k * r):
        raise RuleError(f"need a + b = k r with 1 <= k <= aw and a, b >= 1 (got k={k}, a={a}, b={b})")
    out = [BasketPoint.cyclic(a), BasketPoint.cyclic(b)]
    if k < w:
        out.append(BasketPoint.cA(r, w - k))
    return tuple(out)


def apply_cAx4_blowup(point: BasketPoint, k: int) -> tuple[BasketPoint, ...]:
    """Blow-up of a cAx/4 point: a cyclic point of index ``2k + 3`` and, when
    ``aw > k + 1``, a cD/2 point of axial weight ``aw - k - 1``."""
    if point.kind != CAX4:
        raise RuleError(f"cAx/4 rule does not apply to {point.kind}")
    if not 0 <= k <= point.axial_weight - 1:
        raise RuleError(f"need 0 <= k <= aw - 1 (got k={k}, aw={point.axial_weight})")
    out = [BasketPoint.cyclic(2 * k + 3)]
    if point.axial_weight > k + 1:
        out.append(BasketPoint.cD2(point.axial_weight - k - 1))
    return tuple(out)


def cAr_applications(point: BasketPoint):
    r, w = point.index, point.axial_weight
    for k in range(1, w + 1):
        for a in range(1, k * r // 2 + 1):
            yield ("cA/r", {"k": k, "a": a, "b": k * r - a}), apply_cAr_blowup(point, k, a, k * r - a)


def cAx4_applications(point: BasketPoint):
    for k in range(point.axial_weight):
        yield ("cAx/4", {"k": k}), apply_cAx4_blowup(point, k)


# ---------------------------------------------------------------------------
# registered rules


@dataclass(frozen=True)
class BlowupRule:
    """A blow-up rule given as data.

    ``params`` maps a parameter name to an inclusive ``(lo, hi)`` range whose
    ends are expressions in ``r`` (index), ``aw`` and earlier parameters.
    Each output is a mapping with ``kind``, ``index`` and optional
    ``axial_weight`` and ``when`` expressions.
    """

    name: str
    kind: str
    outputs: tuple[Mapping[str, object], ...]
    xi_delta: int
    index: int | None = None
    axial_weight: int | None = None
    params: tuple[tuple[str, object, object], ...] = ()
    constraints: tuple[str, ...] = ()
    provisional: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RuleError(f"unknown kind {self.kind!r}")
        if self.xi_delta < -2:
            raise RuleError("declared xi_delta must be >= -2")

    @classmethod
    def from_record(cls, rec: Mapping) -> "BlowupRule":
        try:
            params = rec.get("params", {}) or {}
            return cls(
                name=str(rec["name"]), kind=str(rec["kind"]),
                outputs=tuple(dict(o) for o in rec["outputs"]),
                xi_delta=int(rec["xi_delta"]),
                index=rec.get("index"), axial_weight=rec.get("axial_weight"),
                params=tuple((k, v[0], v[1]) for k, v in params.items()),
                constraints=tuple(rec.get("constraints", ()) or ()),
                provisional=bool(rec.get("provisional", False)))
        except KeyError as exc:
            raise RuleError(f"rule record missing field {exc}") from None

    def matches(self, p: BasketPoint) -> bool:
        return (p.kind == self.kind and (self.index is None or p.index == self.index)
                and (self.axial_weight is None or p.axial_weight == self.axial_weight))

    def _bindings(self, env, params):
        if not params:
            yield dict(env)
            return
        (name, lo, hi), rest = params[0], params[1:]
        lo_v, hi_v = _expr(lo, env), _expr(hi, env)
        for v in range(int(lo_v), int(hi_v) + 1):
            yield from self._bindings({**env, name: v}, rest)

    def applications(self, p: BasketPoint):
        if not self.matches(p):
            return
        base = {"r": p.index, "aw": p.axial_weight}
        for env in self._bindings(base, self.params):
            if not all(evaluate(c, env) for c in self.constraints):
                continue
            out = []
            for o in self.outputs:
                if "when" in o and not evaluate(str(o["when"]), env):
                    continue
                out.append(BasketPoint.make(
                    str(o["kind"]), int(_expr(o.get("index", 1), env)),
                    int(_expr(o.get("axial_weight", 1), env)),
                    o.get("basket")))
            delta = sum(q.xi for q in out) - p.xi
            if delta != self.xi_delta:
                raise RuleError(f"rule {self.name}: declared xi_delta {self.xi_delta}, "
                                f"instance {env} gives {delta}")
            yield (self.name, {k: env[k] for k, _, _ in self.params}), tuple(out)


def _expr(v, env):
    return v if isinstance(v, int) else evaluate(str(v), env)


class RuleSet:
    def __init__(self, rules: Iterable[BlowupRule] = ()):
        self.rules = list(rules)

    def register(self, rule: BlowupRule | Mapping) -> None:
        if not isinstance(rule, BlowupRule):
            rule = BlowupRule.from_record(rule)
        self.rules.append(rule)

    def applications(self, p: BasketPoint):
        if p.kind in (CA, CYCLIC):
            yield from cAr_applications(p)
        elif p.kind == CAX4:
            yield from cAx4_applications(p)
        for rule in self.rules:
            yield from rule.applications(p)

    def supports(self, p: BasketPoint) -> bool:
        return p.kind in (CA, CYCLIC, CAX4) or any(r.matches(p) for r in self.rules)


@dataclass(frozen=True)
class Application:
    point: BasketPoint
    rule: str
    params: Mapping[str, int]
    outputs: tuple[BasketPoint, ...]


@dataclass(frozen=True)
class WResolution:
    model: ThreefoldModel
    sequence: tuple[Application, ...]

    @property
    def length(self) -> int:
        return len(self.sequence)


def w_resolve(model: ThreefoldModel | Iterable[BasketPoint], rules: RuleSet | None = None) -> WResolution:
    """Minimum-length rule sequence to an all-Gorenstein state.

    Rules act on single points, so the minimum for a model is the sum of the
    per-point minima; each point's minimum is found by exhaustive memoised
    search over all rule instances.
    """
    if not isinstance(model, ThreefoldModel):
        model = ThreefoldModel(tuple(model))
    rules = rules or RuleSet()
    for p in model.points:
        if not rules.supports(p):
            raise UnsupportedSingularityError(f"unsupported singularity type: {p}")

    in_progress: set[BasketPoint] = set()

    @functools.lru_cache(maxsize=None)
    def best(p: BasketPoint):
        if p.gorenstein:
            return 0, ()
        if p in in_progress:
            return None
        in_progress.add(p)
        found = None
        for (name, params), outs in rules.applications(p):
            total, seq = 1, [Application(p, name, params, outs)]
            for q in outs:
                sub = best(q) if (q.gorenstein or rules.supports(q)) else None
                if sub is None:
                    break
                total += sub[0]
                seq.extend(sub[1])
            else:
                if found is None or total < found[0]:
                    found = (total, tuple(seq))
        in_progress.discard(p)
        return found

    seq: list[Application] = []
    for p in model.points:
        b = best(p)
        if b is None:
            raise UnsupportedSingularityError(f"no rule sequence resolves {p}")
        seq.extend(b[1])
    return WResolution(model, tuple(seq))


# ---------------------------------------------------------------------------
# MMP bookkeeping

StepKind = Literal["flip", "divisorial-to-curve", "divisorial-to-point"]
STEP_KINDS = ("flip", "divisorial-to-curve", "divisorial-to-point")


@dataclass(frozen=True)
class MMPRun:
    rho_start: int
    steps: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rho_start < 1:
            raise ValueError("rho_start >= 1")
        for s in self.steps:
            if s not in STEP_KINDS:
                raise ValueError(f"unknown step kind {s!r}")
        object.__setattr__(self, "steps", tuple(self.steps))


@dataclass(frozen=True)
class RunReport:
    valid: bool
    violations: tuple[str, ...]
    flips: int
    divisorial: int
    divisorial_to_point: int
    depth_bound: int
    difficulty_bound: int
    xi_budget: int
    rho_start: int

    @property
    def flips_bounded(self) -> bool:
        return self.flips <= self.divisorial <= self.rho_start - 1


def validate_mmp_run(run: MMPRun) -> RunReport:
    """Replay depth and difficulty ledgers along an MMP starting from a
    smooth threefold (both start at 0).

    Upper bounds move as follows: a flip lowers both by one, a divisorial
    contraction raises difficulty by at most one, and raises depth by at most
    one only when the centre is a point.  A negative bound is impossible.
    """
    dep = dif = 0
    flips = div = div_pt = 0
    violations = []
    for i, s in enumerate(run.steps):
        if s == "flip":
            flips += 1
            dep -= 1
            dif -= 1
            if dif < 0:
                violations.append(f"step {i}: flip with difficulty bound 0 (difficulty would go negative)")
            if dep < 0:
                violations.append(f"step {i}: flip with depth bound 0 (depth must strictly drop)")
            dep, dif = max(dep, 0), max(dif, 0)
        else:
            div += 1
            dif += 1
            if s == "divisorial-to-point":
                div_pt += 1
                dep += 1
    if div > run.rho_start - 1:
        violations.append(f"{div} divisorial contractions exceed rho - 1 = {run.rho_start - 1}")
    return RunReport(not violations, tuple(violations), flips, div, div_pt, dep, dif,
                     2 * div_pt, run.rho_start)


def xi_bound(rho: int) -> BoundTrace:
    """Upper bound for Xi of the output of a K-MMP from a smooth threefold."""
    if rho < 1:
        raise ValueError("rho >= 1")
    t = TraceBuilder(rho=rho)
    t.step("depth", "rho", "depth-ledger",
           "dep(Y) <= #divisorial contractions <= rho(X)")
    t.step("xi", "2 * depth", "xi-depth", "Xi(Z) <= 2 dep(Z)")
    return t.build()


def xi_balance(point: BasketPoint, outputs: Iterable[BasketPoint]) -> int:
    """Raw Xi change of one rule application (index-1 outputs included)."""
    return sum(q.xi for q in outputs) - point.xi


def model_after(model: ThreefoldModel, app: Application) -> ThreefoldModel:
    pts = Counter(model.points)
    if pts[app.point] == 0:
        raise ValueError("point not in model")
    pts[app.point] -= 1
    return ThreefoldModel(tuple(pts.elements()) + app.outputs)
