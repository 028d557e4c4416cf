"""Compile-time constant evaluation.

Constants are plain Python values (int, float, str, bool, list); the
NOT_CONSTANT sentinel marks everything else.  Propagation through
variables is deliberately single-level so that "constant" stays
predictable for users.
"""

from __future__ import annotations

from ..syntax.nodes import (
    BoolLit, FloatLit, IntLit, ListLit, Negation, Reference, StringLit,
)


class _NotConstant:
    def __repr__(self):
        return "NOT_CONSTANT"

    def __bool__(self):
        return False


NOT_CONSTANT = _NotConstant()


def is_constant(value) -> bool:
    return value is not NOT_CONSTANT


def eval_const(expr, env=None, _ref_depth=0):
    """Evaluate `expr` to a constant, or NOT_CONSTANT.

    `env` maps variable names to their (sole) defining expressions.
    """
    if isinstance(expr, (IntLit, FloatLit, StringLit, BoolLit)):
        return expr.value
    if isinstance(expr, Negation):
        inner = eval_const(expr.operand, env, _ref_depth)
        if isinstance(inner, bool) or not isinstance(inner, (int, float)):
            return NOT_CONSTANT
        return -inner
    if isinstance(expr, ListLit):
        elements = [eval_const(e, env, _ref_depth) for e in expr.elements]
        if any(e is NOT_CONSTANT for e in elements):
            return NOT_CONSTANT
        return elements
    if isinstance(expr, Reference):
        if env is None or _ref_depth >= 1:
            return NOT_CONSTANT
        defining = env.get(expr.name)
        if defining is None:
            return NOT_CONSTANT
        return eval_const(defining, env, _ref_depth + 1)
    return NOT_CONSTANT  # calls, lambdas, member accesses
