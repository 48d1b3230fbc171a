"""Bhaskara-style rational approximations of sine and cosine.

PDDL+ has no trigonometric functions, so launch velocities are written with
these rational forms.  The numeric functions and the expression builders use
the same operation order so a planner evaluating the expanded expression gets
bit-identical results.
"""

import math

from .core import BinOp, Const

PI = math.pi


class DomainError(ValueError):
    pass


def sin_b(x):
    if not -1e-12 <= x <= PI + 1e-12:
        raise DomainError(f"sin_b is defined on [0, pi], got {x!r}")
    return 16 * x * (PI - x) / (5 * PI * PI - 4 * x * (PI - x))


def cos_b(x):
    half = PI / 2
    if not -half - 1e-12 <= x <= half + 1e-12:
        raise DomainError(f"cos_b is defined on [-pi/2, pi/2], got {x!r}")
    return (PI * PI - 4 * x * x) / (PI * PI + x * x)


def sin_expr(arg):
    """Expression tree for ``sin_b(arg)``."""
    pi = Const(PI)
    num = BinOp("*", BinOp("*", Const(16.0), arg), BinOp("-", pi, arg))
    den = BinOp("-", BinOp("*", BinOp("*", Const(5.0), pi), pi),
                BinOp("*", BinOp("*", Const(4.0), arg), BinOp("-", pi, arg)))
    return BinOp("/", num, den)


def cos_expr(arg):
    """Expression tree for ``cos_b(arg)``."""
    pi = Const(PI)
    pi2 = BinOp("*", pi, pi)
    num = BinOp("-", pi2, BinOp("*", BinOp("*", Const(4.0), arg), arg))
    den = BinOp("+", pi2, BinOp("*", arg, arg))
    return BinOp("/", num, den)
