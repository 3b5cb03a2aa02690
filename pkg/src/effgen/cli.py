"""Command-line front end.

Inputs are YAML documents (JSON is accepted too); rationals are written as
integers or ``"p/q"`` strings and floats are rejected.  ``--format machine``
prints one JSON certificate per run; ``check`` re-validates such a
certificate.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from typing import Any

import jsonschema
import yaml

from . import __version__
from .basket import (BasketPoint, MMPRun, RuleSet, ThreefoldModel, apply_cAr_blowup,
                     apply_cAx4_blowup, aw, validate_mmp_run, w_resolve, xi)
from .bounds import CALCULATORS
from .instances import build_Fr, build_Xr, verify
from .lattice import LatticePoint, as_fraction, lattice_points
from .mmp import (ZariskiDecomp, asymptotic_fix, factor_through_minimal_resolution,
                  fix_linear_system, run_ltm, zariski)
from .rings import (GenerationCertificate, adjoint_multigraded_generation, generation_degree,
                    multiplication_surjective, stable_base_locus_check)
from .toric import (FanError, PairData, ToricSurface, TorusDivisor, canonical_divisor,
                    curve_self_intersection, degree_on, from_rays, h0, intersect, is_big,
                    is_cartier, is_nef, is_pseudoeffective, is_smooth, minimal_resolution,
                    pullback, section_polytope)
from .trace import BoundTrace


class InputError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


class VerificationFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# schemas

RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
RAY = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
DIVISOR = {"oneOf": [
    {"type": "object", "additionalProperties": RATIONAL},
    {"type": "array", "items": {"type": "array", "prefixItems": [RAY, RATIONAL],
                                "minItems": 2, "maxItems": 2}},
]}
SURFACE = {"type": "object", "required": ["rays"],
           "properties": {"rays": {"type": "array", "items": RAY, "minItems": 3}}}
EXAMPLE = {"type": "object", "required": ["name", "r"],
           "properties": {"name": {"enum": ["Xr", "Fr"]}, "r": {"type": "integer"},
                          "a_nef": {"type": "integer"}}}
POINT = {"type": "object", "required": ["kind"],
         "properties": {"kind": {"enum": ["cyclic", "cA/r", "cAx/4", "cD/2", "other"]},
                        "index": {"type": "integer", "minimum": 1},
                        "axial_weight": {"type": "integer", "minimum": 1},
                        "basket": {"type": "array", "items": {"type": "integer"}}}}


def _obj(required=(), **props):
    return {"type": "object", "required": list(required), "properties": props}


SCHEMAS = {
    "fan": _obj(["surface"], surface=SURFACE),
    "divisor": _obj(["surface", "D"], surface=SURFACE, D=DIVISOR),
    "mmp": {"oneOf": [_obj(["surface", "boundary"], surface=SURFACE, boundary=DIVISOR,
                           mobile=DIVISOR),
                      _obj(["example"], example=EXAMPLE)]},
    "zariski": {"oneOf": [_obj(["surface", "D"], surface=SURFACE, D=DIVISOR),
                          _obj(["example"], example=EXAMPLE)]},
    "fix": {"oneOf": [_obj(["surface", "D"], surface=SURFACE, D=DIVISOR,
                           q={"type": "integer", "minimum": 1}),
                      _obj(["example"], example=EXAMPLE, q={"type": "integer", "minimum": 1})]},
    "genring": {"oneOf": [_obj(["surface", "D"], surface=SURFACE, D=DIVISOR),
                          _obj(["example"], example=EXAMPLE,
                               multiple={"type": "integer", "minimum": 1})]},
    "multsurj": {"oneOf": [
        _obj(["surface", "G", "L"], surface=SURFACE, G=DIVISOR, L=DIVISOR),
        _obj(["surface", "L_list"], surface=SURFACE,
             L_list={"type": "array", "items": DIVISOR, "minItems": 1},
             bound={"type": "integer", "minimum": 0}, box={"type": "integer", "minimum": 0}),
    ]},
    "basket": {"oneOf": [
        _obj(["points"], points={"type": "array", "items": POINT},
             rules={"type": "array", "items": {"type": "object"}}),
        _obj(["run"], run=_obj(["rho", "steps"], rho={"type": "integer", "minimum": 1},
                                steps={"type": "array", "items": {
                                    "enum": ["flip", "divisorial-to-curve",
                                             "divisorial-to-point"]}})),
        _obj(["blowup"], blowup=_obj(["point", "rule"], point=POINT,
                                      rule={"enum": ["cA/r", "cAx/4"]},
                                      params={"type": "object"})),
    ]},
}


def validate_schema(command: str, doc: Any) -> None:
    schema = SCHEMAS.get(command)
    if schema is None:
        return
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InputError(path, err.message)


# ---------------------------------------------------------------------------
# (de)serialisation


def rat(v: Fraction) -> str:
    return str(Fraction(v))


def ray_key(r) -> str:
    return f"{r[0]},{r[1]}"


def ser_divisor(D: TorusDivisor) -> dict[str, str]:
    return {ray_key(r): rat(c) for r, c in D.items()}


def ser_surface(X: ToricSurface) -> dict:
    return {"rays": [list(r) for r in X.rays]}


def parse_surface(doc, path="surface", strict=True) -> ToricSurface:
    try:
        return from_rays([tuple(r) for r in doc["rays"]], strict=strict)
    except FanError as exc:
        raise InputError(f"{path}/rays", str(exc)) from None


def parse_ray(s: str, path: str):
    try:
        x, y = (int(t) for t in s.split(","))
    except ValueError:
        raise InputError(path, f"bad ray key {s!r}; expected 'x,y'") from None
    return x, y


def parse_divisor(X: ToricSurface, doc, path: str) -> TorusDivisor:
    entries = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            entries.append((parse_ray(k, f"{path}/{k}"), v, f"{path}/{k}"))
    else:
        for i, (r, v) in enumerate(doc):
            entries.append((tuple(r), v, f"{path}/{i}"))
    coeffs = {}
    for ray, v, p in entries:
        if ray not in X.rays:
            raise InputError(p, f"{ray} is not a ray of the surface")
        try:
            coeffs[ray] = as_fraction(v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(p, str(exc)) from None
    return TorusDivisor.on(X, coeffs)


def load_example(doc):
    name, r = doc["name"], doc["r"]
    try:
        if name == "Xr":
            return build_Xr(r, doc.get("a_nef"))
        return build_Fr(r)
    except ValueError as exc:
        raise InputError("example", str(exc)) from None


def _pair_from(doc) -> PairData:
    if "example" in doc:
        return load_example(doc["example"]).pair
    X = parse_surface(doc["surface"])
    B = parse_divisor(X, doc["boundary"], "boundary")
    M = parse_divisor(X, doc["mobile"], "mobile") if "mobile" in doc else None
    try:
        return PairData(X, B, M)
    except ValueError as exc:
        raise InputError("boundary", str(exc)) from None


def _divisor_from(doc, key="D") -> TorusDivisor:
    if "example" in doc:
        inst = load_example(doc["example"])
        return inst.pair.log_canonical() * doc.get("multiple", 1)
    X = parse_surface(doc["surface"])
    return parse_divisor(X, doc[key], key)


def ser_point(p: BasketPoint) -> dict:
    return {"kind": p.kind, "index": p.index, "axial_weight": p.axial_weight,
            "basket": list(p.basket)}


def parse_point(doc, path) -> BasketPoint:
    try:
        kind = doc["kind"]
        if kind in ("cyclic", "cA/r") and "index" not in doc:
            raise InputError(f"{path}/index", "required for this kind")
        return BasketPoint.make(kind, doc.get("index"), doc.get("axial_weight", 1),
                                doc.get("basket"))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(path, str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def cmd_fan(doc, opts):
    X = parse_surface(doc["surface"])
    K = canonical_divisor(X)
    return {
        "surface": ser_surface(X),
        "smooth": is_smooth(X),
        "picard_number": X.picard_number,
        "cone_determinants": X.cone_dets(),
        "self_intersections": {ray_key(r): rat(curve_self_intersection(X, r)) for r in X.rays},
        "K_squared": rat(intersect(K, K)),
    }


def cmd_divisor(doc, opts):
    D = _divisor_from(doc)
    P = section_polytope(D)
    out = {
        "surface": ser_surface(D.surface),
        "D": ser_divisor(D),
        "nef": is_nef(D), "big": is_big(D), "pseudoeffective": is_pseudoeffective(D),
        "cartier": is_cartier(D),
        "degrees": {ray_key(r): rat(degree_on(D, r)) for r in D.surface.rays},
        "section_polytope": [[rat(x), rat(y)] for x, y in P.vertices],
        "h0": h0(D),
    }
    return out


def ser_ltm(ltm) -> dict:
    return {
        "outcome": ltm.outcome,
        "contracted": [ray_key(r) for r in ltm.contracted],
        "steps": [{"ray": ray_key(s.contracted_ray), "self_intersection": rat(s.self_intersection),
                   "degree": rat(s.degree)} for s in ltm.steps],
        "model": ser_surface(ltm.model),
        "pushed_boundary": ser_divisor(ltm.pushed_boundary),
        "pushed_mobile": ser_divisor(ltm.pushed_mobile),
        "exceptional": ser_divisor(ltm.exceptional),
    }


def cmd_mmp(doc, opts):
    pair = _pair_from(doc)
    ltm = run_ltm(pair)
    out = {"surface": ser_surface(pair.surface), "boundary": ser_divisor(pair.boundary),
           "mobile": ser_divisor(pair.mobile), **ser_ltm(ltm)}
    if ltm.outcome == "minimal-model":
        g, h = factor_through_minimal_resolution(ltm)
        out["factorisation"] = {"g": [ray_key(r) for r in g], "h": [ray_key(r) for r in h]}
    return out


def ser_zariski(z: ZariskiDecomp) -> dict:
    return {"positive": ser_divisor(z.positive), "negative": ser_divisor(z.negative),
            "support": sorted(ray_key(r) for r in z.support)}


def cmd_zariski(doc, opts):
    D = _divisor_from(doc)
    if not is_pseudoeffective(D):
        raise InputError("D", "divisor is not pseudo-effective")
    z = zariski(D)
    return {"surface": ser_surface(D.surface), "D": ser_divisor(D), **ser_zariski(z),
            "axioms": z.axioms()}


def cmd_fix(doc, opts):
    D = _divisor_from(doc)
    if "q" in doc:
        q = doc["q"]
        if not (D * q).is_integral():
            raise InputError("q", f"{q}D is not integral")
        F = fix_linear_system(D, q)
        return {"surface": ser_surface(D.surface), "D": ser_divisor(D), "q": q,
                "fixed": ser_divisor(F)}
    rep = asymptotic_fix(D, opts.horizon)
    return {"surface": ser_surface(D.surface), "D": ser_divisor(D), "horizon": opts.horizon,
            "limit": ser_divisor(rep.limit), "index": rep.index,
            "gaps": {str(q): ser_divisor(g) for q, g in rep.gaps.items()},
            "all_nonnegative": rep.all_nonnegative, "zero_gap_at": rep.zero_gap_at()}


def cmd_genring(doc, opts):
    D = _divisor_from(doc)
    cert = generation_degree(D)
    out = {"surface": ser_surface(D.surface), "D": ser_divisor(D),
           "generation_degree": cert.generation_degree,
           "horizon_checked": cert.horizon_checked,
           "basis": sorted([h, p.x, p.y] for h, p in cert.basis)}
    if D.is_integral():
        rep = stable_base_locus_check(cert)
        out["stable_base_locus"] = {"q": rep.q,
                                    "base_support": sorted(ray_key(r) for r in rep.base_support),
                                    "negative_support": sorted(ray_key(r) for r in rep.negative_support),
                                    "q_fix_integral": rep.integral, "ok": rep.ok}
    return out


def cmd_multsurj(doc, opts):
    X = parse_surface(doc["surface"])
    if "L_list" in doc:
        Ls = [parse_divisor(X, d, f"L_list/{i}") for i, d in enumerate(doc["L_list"])]
        for i, L in enumerate(Ls):
            if not L.is_integral():
                raise InputError(f"L_list/{i}", "divisor must be integral")
        try:
            cert = adjoint_multigraded_generation(Ls, doc.get("bound", 4), doc.get("box"))
        except ValueError as exc:
            raise InputError("L_list", str(exc)) from None
        out = {"surface": ser_surface(X), "L_list": [ser_divisor(L) for L in Ls],
               "bound": cert.degree_bound, "box": cert.box, "success": cert.success,
               "failures": [{"multidegree": list(m), "l": l, "witness": [w.x, w.y]}
                            for m, l, w in cert.witness_failures]}
        if not cert.success:
            raise VerificationFailure(out)
        return out
    G = parse_divisor(X, doc["G"], "G")
    L = parse_divisor(X, doc["L"], "L")
    for name, D in (("G", G), ("L", L)):
        if not D.is_integral():
            raise InputError(name, "divisor must be integral")
    res = multiplication_surjective(G, L)
    return {"surface": ser_surface(X), "G": ser_divisor(G), "L": ser_divisor(L),
            "surjective": res.surjective,
            "witness": None if res.witness is None else [res.witness.x, res.witness.y]}


def _ser_app(a) -> dict:
    return {"point": ser_point(a.point), "rule": a.rule, "params": dict(a.params),
            "outputs": [ser_point(q) for q in a.outputs]}


def cmd_basket(doc, opts):
    if "run" in doc:
        rep = validate_mmp_run(MMPRun(doc["run"]["rho"], tuple(doc["run"]["steps"])))
        out = {"run": doc["run"], "valid": rep.valid, "violations": list(rep.violations),
               "flips": rep.flips, "divisorial": rep.divisorial,
               "divisorial_to_point": rep.divisorial_to_point, "xi_budget": rep.xi_budget,
               "depth_bound": rep.depth_bound}
        return out
    if "blowup" in doc:
        b = doc["blowup"]
        p = parse_point(b["point"], "blowup/point")
        params = b.get("params", {})
        try:
            if b["rule"] == "cA/r":
                outs = apply_cAr_blowup(p, params.get("k"), params.get("a"), params.get("b"))
            else:
                outs = apply_cAx4_blowup(p, params.get("k"))
        except (ValueError, TypeError) as exc:
            raise InputError("blowup/params", str(exc)) from None
        return {"blowup": {"point": ser_point(p), "rule": b["rule"], "params": params},
                "outputs": [ser_point(q) for q in outs],
                "xi_before": p.xi, "xi_after": sum(q.xi for q in outs),
                "xi_delta": sum(q.xi for q in outs) - p.xi}
    points = [parse_point(d, f"points/{i}") for i, d in enumerate(doc["points"])]
    rules = RuleSet()
    for i, rec in enumerate(doc.get("rules", [])):
        try:
            rules.register(rec)
        except ValueError as exc:
            raise InputError(f"rules/{i}", str(exc)) from None
    model = ThreefoldModel(tuple(points))
    try:
        res = w_resolve(model, rules)
    except ValueError as exc:
        raise InputError("points", str(exc)) from None
    return {"points": [ser_point(p) for p in model.points], "rules": doc.get("rules", []),
            "xi": xi(model), "aw": aw(model), "depth": res.length,
            "sequence": [_ser_app(a) for a in res.sequence],
            "xi_le_2depth": xi(model) <= 2 * res.length}


def cmd_bounds(doc, opts):
    name = opts.calculator
    kwargs = {}
    for key in ("n", "k", "epsilon", "a", "p", "rho", "reading"):
        v = getattr(opts, key, None)
        if v is not None:
            kwargs[key] = v
    if "epsilon" in kwargs:
        try:
            kwargs["epsilon"] = as_fraction(kwargs["epsilon"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError("--epsilon", str(exc)) from None
    fn = CALCULATORS[name]
    try:
        tr = fn(**kwargs)
    except TypeError as exc:
        raise InputError(f"bounds {name}", str(exc)) from None
    except ValueError as exc:
        raise InputError(f"bounds {name}", str(exc)) from None
    return {"calculator": name, "trace": tr.as_dict(), "value": tr.as_dict()["value"]}


def cmd_examples_verify(doc, opts):
    if doc and "example" in doc:
        insts = [load_example(doc["example"])]
    else:
        insts = [build_Xr(r) for r in (2, 3, 5, 7)] + [build_Fr(r) for r in (3, 5, 7)]
    reports = []
    for inst in insts:
        rep = verify(inst)
        reports.append({"name": rep.name, "ok": rep.ok,
                        "checks": [{"check": n, "ok": ok, "detail": d} for n, ok, d in rep.checks]})
    out = {"reports": reports, "ok": all(r["ok"] for r in reports)}
    if not out["ok"]:
        raise VerificationFailure(out)
    return out


COMMANDS = {
    "fan": cmd_fan, "divisor": cmd_divisor, "mmp": cmd_mmp, "zariski": cmd_zariski,
    "fix": cmd_fix, "genring": cmd_genring, "multsurj": cmd_multsurj, "basket": cmd_basket,
    "bounds": cmd_bounds, "examples-verify": cmd_examples_verify,
}


# ---------------------------------------------------------------------------
# certificate checking


def _surface_of(cert, key="surface"):
    return parse_surface(cert[key], key)


def _div(X, d, path):
    return parse_divisor(X, d, path)


def check_certificate(cert: dict) -> list[str]:
    """Re-validate a certificate from its recorded data; returns problems."""
    cmd = cert.get("command")
    res = cert.get("result", {})
    problems: list[str] = []
    if cmd == "zariski":
        X = _surface_of(res)
        D, P, N = (_div(X, res[k], k) for k in ("D", "positive", "negative"))
        support = {parse_ray(s, "support") for s in res["support"]}
        z = ZariskiDecomp(P, N, frozenset(support))
        if P + N != D:
            problems.append("D != P + N")
        if N.support != support:
            problems.append("support mismatch")
        problems += [f"axiom {k} fails" for k, ok in z.axioms().items() if not ok]
    elif cmd == "mmp":
        X = _surface_of(res)
        Y = _surface_of(res, "model")
        B, M, E = (_div(X, res[k], k) for k in ("boundary", "mobile", "exceptional"))
        BY, MY = _div(Y, res["pushed_boundary"], "pushed_boundary"), _div(Y, res["pushed_mobile"], "pushed_mobile")
        KX = canonical_divisor(X) + B + M
        KY = canonical_divisor(Y) + BY + MY
        if not set(Y.rays) <= set(X.rays):
            problems.append("model fan is not a coarsening")
        if KX != pullback(KY, X) + E:
            problems.append("K_X + B != f^*(K_Y + B_Y) + E")
        if not E.is_effective():
            problems.append("E is not effective")
        if set(X.rays) - set(Y.rays) != {parse_ray(s, "contracted") for s in res["contracted"]}:
            problems.append("contracted rays mismatch")
        if res["outcome"] == "minimal-model" and not is_nef(KY):
            problems.append("K_Y + B_Y not nef")
    elif cmd == "genring":
        X = _surface_of(res)
        D = _div(X, res["D"], "D")
        basis = frozenset((h, LatticePoint(x, y)) for h, x, y in res["basis"])
        gc = GenerationCertificate(D, res["generation_degree"], basis, res["horizon_checked"])
        if max(h for h, _ in basis) != res["generation_degree"]:
            problems.append("generation degree is not the top basis degree")
        if not gc.verify():
            problems.append("basis does not minimally generate up to the horizon")
    elif cmd == "fix":
        X = _surface_of(res)
        D = _div(X, res["D"], "D")
        if "q" in res:
            q = res["q"]
            F = _div(X, res["fixed"], "fixed")
            qD = D * q
            pts = lattice_points(section_polytope(qD))
            if pts != lattice_points(section_polytope(qD - F)):
                problems.append("F is not contained in every member")
            for r in X.rays:
                vals = [p[0] * r[0] + p[1] * r[1] + qD[r] for p in pts]
                if min(vals) != F[r]:
                    problems.append(f"coefficient on {r} not attained")
        else:
            N = _div(X, res["limit"], "limit")
            z = zariski(D)
            if z.negative != N:
                problems.append("limit is not the Zariski negative part")
            for q, g in res["gaps"].items():
                if not _div(X, g, f"gaps/{q}").is_effective():
                    problems.append(f"negative gap at q={q}")
    elif cmd == "multsurj":
        X = _surface_of(res)
        if "L_list" in res:
            Ls = [_div(X, d, f"L_list/{i}") for i, d in enumerate(res["L_list"])]
            c = adjoint_multigraded_generation(Ls, res["bound"], res["box"])
            if c.success != res["success"]:
                problems.append("multigraded result differs")
        else:
            G, L = _div(X, res["G"], "G"), _div(X, res["L"], "L")
            if res["surjective"]:
                if not multiplication_surjective(G, L):
                    problems.append("map is not surjective")
            else:
                w = tuple(res["witness"])
                PG = lattice_points(section_polytope(G))
                PL = section_polytope(L)
                if not section_polytope(G + L).contains(w):
                    problems.append("witness is not a section of G + L")
                if any(PL.contains((w[0] - g[0], w[1] - g[1])) for g in PG):
                    problems.append("witness is in the image")
    elif cmd == "basket":
        if "run" in res:
            rep = validate_mmp_run(MMPRun(res["run"]["rho"], tuple(res["run"]["steps"])))
            if rep.valid != res["valid"] or rep.xi_budget != res["xi_budget"]:
                problems.append("run report differs")
        elif "blowup" in res:
            if res["xi_after"] - res["xi_before"] != res["xi_delta"]:
                problems.append("xi balance inconsistent")
        else:
            state = [parse_point(d, f"points/{i}") for i, d in enumerate(res["points"])]
            rules = RuleSet()
            for rec in res.get("rules", []):
                rules.register(rec)
            for i, a in enumerate(res["sequence"]):
                p = parse_point(a["point"], f"sequence/{i}/point")
                outs = tuple(parse_point(q, f"sequence/{i}/outputs") for q in a["outputs"])
                legal = any(o == outs for (_, _), o in rules.applications(p))
                if p not in state or not legal:
                    problems.append(f"illegal application at step {i}")
                    break
                state.remove(p)
                state.extend(q for q in outs if not q.gorenstein)
            if state:
                problems.append("sequence does not reach a Gorenstein state")
            if len(res["sequence"]) != res["depth"]:
                problems.append("depth does not match sequence length")
    elif cmd == "bounds":
        tr = BoundTrace.from_dict(res["trace"])
        try:
            if tr.replay() != tr.value:
                problems.append("trace does not replay to its value")
        except ArithmeticError as exc:
            problems.append(str(exc))
    elif cmd in ("fan", "divisor", "examples-verify"):
        again = COMMANDS[cmd](cert.get("input") or {}, argparse.Namespace(**cert.get("options", {})))
        if again != res:
            problems.append("recomputed result differs")
    else:
        raise InputError("command", f"unknown certificate command {cmd!r}")
    return problems


# ---------------------------------------------------------------------------
# driver


def _jsonable(v):
    if isinstance(v, Fraction):
        return rat(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def render(doc: dict, fmt: str) -> str:
    doc = _jsonable(doc)
    if fmt == "machine":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict) and v and all(not isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{prefix}: " + ", ".join(f"{k}={x}" for k, x in v.items()))
        elif isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), x)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix}: {v}")

    walk("", doc)
    return "\n".join(lines) + "\n"


def _reject_floats(v, path="<root>"):
    if isinstance(v, float):
        raise InputError(path, "floating-point values are not allowed; use 'p/q'")
    if isinstance(v, dict):
        for k, x in v.items():
            _reject_floats(x, f"{path}/{k}" if path != "<root>" else str(k))
    elif isinstance(v, list):
        for i, x in enumerate(v):
            _reject_floats(x, f"{path}/{i}" if path != "<root>" else str(i))


def read_input(path: str | None):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise InputError("--input", str(exc)) from None
    except yaml.YAMLError as exc:
        raise InputError("--input", f"unparseable document: {exc}") from None
    doc = doc or {}
    if not isinstance(doc, dict):
        raise InputError("<root>", "document must be a mapping")
    _reject_floats(doc)
    return doc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="effgen", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="YAML/JSON input document")
        p.add_argument("--format", choices=("table", "machine"), default="table")
        p.add_argument("--horizon", type=int, default=24)
        p.add_argument("--seed", type=int, default=0)
        return p

    for name in COMMANDS:
        p = common(sub.add_parser(name))
        if name == "bounds":
            p.add_argument("calculator", choices=sorted(CALCULATORS))
            p.add_argument("--n", type=int)
            p.add_argument("--k", type=int)
            p.add_argument("--epsilon")
            p.add_argument("--a", type=int)
            p.add_argument("--p", type=int)
            p.add_argument("--rho", type=int)
            p.add_argument("--reading", choices=("safe", "outer", "inner"))
    common(sub.add_parser("check"))
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    random.seed(opts.seed)
    try:
        doc = read_input(opts.input)
        if opts.command == "check":
            if "command" not in doc or "result" not in doc:
                raise InputError("<root>", "not a certificate (needs 'command' and 'result')")
            problems = check_certificate(doc)
            report = {"command": "check", "checked": doc["command"], "ok": not problems,
                      "problems": problems}
            out.write(render(report, opts.format))
            return 0 if not problems else 1
        validate_schema(opts.command, doc)
        result = COMMANDS[opts.command](doc, opts)
        options = {"horizon": opts.horizon, "seed": opts.seed}
        if opts.command == "bounds":
            options.update({k: getattr(opts, k) for k in
                            ("calculator", "n", "k", "epsilon", "a", "p", "rho", "reading")})
        cert = {"command": opts.command, "version": __version__, "input": doc,
                "options": options, "result": result}
        out.write(render(cert, opts.format))
        return 0
    except InputError as exc:
        err.write(f"input error: {exc}\n")
        return 2
    except VerificationFailure as exc:
        payload = exc.args[0]
        out.write(render({"command": opts.command, "result": payload, "ok": False}, opts.format))
        return 1
    except (FanError, KeyError) as exc:
        err.write(f"input error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
