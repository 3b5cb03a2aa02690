"""A tiny exact-arithmetic expression evaluator.

Used to keep bound traces and blow-up rule records as pure data: formulas are
strings evaluated over ints/Fractions with a whitelist of operations.
"""

from __future__ import annotations

import ast
import math
import operator
from fractions import Fraction
from typing import Mapping

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: lambda a, b: Fraction(a) / Fraction(b),
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Lt: operator.lt, ast.LtE: operator.le, ast.Gt: operator.gt,
    ast.GtE: operator.ge, ast.Eq: operator.eq, ast.NotEq: operator.ne,
}


def _lcm_range(n):
    return math.lcm(*range(1, int(n) + 1))


def _ceil(q):
    q = Fraction(q)
    return -((-q.numerator) // q.denominator)


FUNCTIONS = {
    "factorial": lambda n: math.factorial(int(n)),
    "lcm_range": _lcm_range,
    "ceil": _ceil,
    "max": max,
    "min": min,
}


def evaluate(expr: str, env: Mapping[str, object]):
    tree = ast.parse(expr, mode="eval")
    return _eval(tree.body, env)


def _eval(node, env):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"only integer literals allowed, got {node.value!r}")
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise NameError(node.id)
        v = env[node.id]
        if isinstance(v, float):
            raise TypeError("floats are not allowed")
        return v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        res = _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
        if isinstance(res, Fraction) and res.denominator == 1:
            return int(res)
        return res
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval(comp, env)
            if type(op) not in _CMPOPS or not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.BoolOp) and isinstance(node.op, ast.And):
        return all(_eval(v, env) for v in node.values)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in FUNCTIONS:
        return FUNCTIONS[node.func.id](*(_eval(a, env) for a in node.args))
    raise ValueError(f"unsupported expression: {ast.dump(node)}")
