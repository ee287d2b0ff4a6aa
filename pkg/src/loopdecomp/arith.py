"""A tiny, safe evaluator for the parameter arithmetic used in catalog data.

Catalog records carry conditions such as ``p > n/2`` or ``2*m <= n+1`` and
group templates such as ``SU(2n+1)``.  Implicit multiplication (``2n``) is
accepted.  Division is exact (fractions), ``//`` is floor division.
"""

from __future__ import annotations

import ast
import operator
import re
from fractions import Fraction

from .errors import ParseError

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: lambda a, b: Fraction(a) / Fraction(b),
    ast.FloorDiv: operator.floordiv,
}
_CMPOPS = {
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


def _prepare(text: str) -> str:
    text = text.replace("≥", ">=").replace("≤", "<=").replace("≠", "!=")
    # a bare "=" is equality in catalog conditions
    text = re.sub(r"(?<![<>=!])=(?!=)", "==", text)
    # implicit multiplication: 2n, 3(n-1), )(
    text = re.sub(r"(\d)\s*([a-zA-Z(])", r"\1*\2", text)
    text = re.sub(r"\)\s*\(", ")*(", text)
    return text


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ParseError(f"unknown parameter {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            if type(op) not in _CMPOPS:
                break
            right = _eval(comp, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        else:
            return True
    if isinstance(node, ast.BoolOp):
        vals = [_eval(v, env) for v in node.values]
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    raise ParseError(f"unsupported syntax in {ast.dump(node)}")


def evaluate(text: str, **env):
    try:
        tree = ast.parse(_prepare(text.strip()), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}") from exc
    value = _eval(tree, env)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def holds(condition: str, **env) -> bool:
    return bool(evaluate(condition, **env))


def integer(text: str, **env) -> int:
    value = evaluate(text, **env)
    if isinstance(value, Fraction) or isinstance(value, bool):
        raise ParseError(f"{text!r} is not an integer for {env}")
    return value
