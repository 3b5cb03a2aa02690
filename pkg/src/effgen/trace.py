from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import evaluate


@dataclass(frozen=True)
class TraceStep:
    """One derivation step: ``name = formula`` evaluated in the running env.

    ``statement`` identifies the result the step instantiates and ``anchor``
    is the formula or conclusion it uses.
    """

    name: str
    formula: str
    value: Any
    statement: str
    anchor: str
    note: str = ""


@dataclass(frozen=True)
class BoundTrace:
    value: Any
    inputs: dict[str, Any]
    steps: tuple[TraceStep, ...]
    flags: tuple[str, ...] = ()
    alternatives: dict[str, Any] = field(default_factory=dict)

    def replay(self) -> Any:
        """Re-evaluate every formula from the inputs; raises on drift."""
        env = dict(self.inputs)
        for s in self.steps:
            v = evaluate(s.formula, env)
            if v != s.value:
                raise ArithmeticError(f"step {s.name}: recorded {s.value}, replayed {v}")
            env[s.name] = v
        return env[self.steps[-1].name]

    @property
    def statements(self) -> list[str]:
        return [s.statement for s in self.steps]

    @property
    def anchors(self) -> list[str]:
        return [s.anchor for s in self.steps]

    def as_dict(self) -> dict:
        return {
            "value": _ser(self.value),
            "inputs": {k: _ser(v) for k, v in self.inputs.items()},
            "steps": [{"name": s.name, "formula": s.formula, "value": _ser(s.value),
                       "statement": s.statement, "anchor": s.anchor, "note": s.note}
                      for s in self.steps],
            "flags": list(self.flags),
            "alternatives": {k: _ser(v) for k, v in self.alternatives.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BoundTrace":
        return cls(
            _de(d["value"]), {k: _de(v) for k, v in d["inputs"].items()},
            tuple(TraceStep(s["name"], s["formula"], _de(s["value"]), s["statement"],
                            s["anchor"], s.get("note", "")) for s in d["steps"]),
            tuple(d.get("flags", ())),
            {k: _de(v) for k, v in d.get("alternatives", {}).items()})


class TraceBuilder:
    def __init__(self, **inputs):
        self.inputs = dict(inputs)
        self.env = dict(inputs)
        self.steps: list[TraceStep] = []

    def step(self, name: str, formula: str, statement: str, anchor: str, note: str = ""):
        v = evaluate(formula, self.env)
        self.env[name] = v
        self.steps.append(TraceStep(name, formula, v, statement, anchor, note))
        return v

    def build(self, flags=(), alternatives=None) -> BoundTrace:
        return BoundTrace(self.steps[-1].value, self.inputs, tuple(self.steps), tuple(flags),
                          dict(alternatives or {}))


def _ser(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


def _de(v):
    if isinstance(v, str) and "/" in v:
        return Fraction(v)
    return v
