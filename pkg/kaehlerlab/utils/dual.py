"""Forward-mode dual numbers.

A ``Dual`` carries a value and a first-order perturbation. Both parts may
themselves be duals, which gives exact second derivatives (including mixed
partials) by nesting two independent perturbations. Scalar maps written with
plain arithmetic and the functions below (``sin``, ``exp``, ...) can be fed
either floats or duals.
"""

import math
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import ExprDomainError

Scalar = Union[float, "Dual"]


class Dual:
    """Truncated Taylor number ``val + eps·ε`` with ``ε² = 0``."""

    __slots__ = ("val", "eps")

    def __init__(self, val: Scalar, eps: Scalar = 0.0):
        self.val = val
        self.eps = eps

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.eps!r})"

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.eps)

    def __pos__(self) -> "Dual":
        return self

    def __add__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other: Scalar) -> "Dual":
        return Dual(other - self.val, -self.eps)

    def __mul__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.eps + self.eps * other.val)
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Dual":
        return divide(self, other)

    def __rtruediv__(self, other: Scalar) -> "Dual":
        return divide(other, self)

    def __pow__(self, other: Scalar) -> "Dual":
        return power(self, other)

    def __rpow__(self, other: Scalar) -> "Dual":
        return power(other, self)


def real_part(x: Scalar) -> float:
    """Innermost value of a (possibly nested) dual."""
    while isinstance(x, Dual):
        x = x.val
    return float(x)


def divide(a: Scalar, b: Scalar) -> Scalar:
    if real_part(b) == 0.0:
        raise ExprDomainError("division by zero")
    if isinstance(b, Dual):
        inv_val = divide(1.0, b.val)
        return a * Dual(inv_val, -b.eps * inv_val * inv_val)
    if isinstance(a, Dual):
        return Dual(divide(a.val, b), divide(a.eps, b))
    return a / b


def power(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(b, Dual):
        if real_part(a) <= 0.0:
            raise ExprDomainError("non-positive base with variable exponent")
        return exp(b * log(a))
    b = float(b)
    if isinstance(a, Dual):
        if b == 0.0:
            return Dual(power(a.val, 0.0), a.eps * 0.0)
        return Dual(power(a.val, b), b * power(a.val, b - 1.0) * a.eps)
    if a == 0.0 and b < 0.0:
        raise ExprDomainError("zero raised to a negative power")
    if a < 0.0 and not b.is_integer():
        raise ExprDomainError("negative base with non-integer exponent")
    return float(a) ** b


def sin(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(sin(x.val), cos(x.val) * x.eps)
    return math.sin(x)


def cos(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(cos(x.val), -sin(x.val) * x.eps)
    return math.cos(x)


def tan(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        c = cos(x.val)
        return Dual(tan(x.val), divide(x.eps, c * c))
    if math.cos(x) == 0.0:
        raise ExprDomainError("tan at a pole")
    return math.tan(x)


def exp(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, e * x.eps)
    return math.exp(x)


def log(x: Scalar) -> Scalar:
    if real_part(x) <= 0.0:
        raise ExprDomainError("log of non-positive value")
    if isinstance(x, Dual):
        return Dual(log(x.val), divide(x.eps, x.val))
    return math.log(x)


def sqrt(x: Scalar) -> Scalar:
    r = real_part(x)
    if r < 0.0 or (r == 0.0 and isinstance(x, Dual)):
        raise ExprDomainError("sqrt outside its differentiable domain")
    if isinstance(x, Dual):
        s = sqrt(x.val)
        return Dual(s, divide(x.eps, 2.0 * s))
    return math.sqrt(x)


def sinh(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(sinh(x.val), cosh(x.val) * x.eps)
    return math.sinh(x)


def cosh(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(cosh(x.val), sinh(x.val) * x.eps)
    return math.cosh(x)


def part(x: Scalar, *path: str) -> float:
    for attr in path:
        if isinstance(x, Dual):
            x = getattr(x, attr)
        elif attr == "eps":
            return 0.0
    return real_part(x)


ScalarMap = Callable[[Sequence[Scalar]], Sequence[Scalar]]


def jet1(fn: ScalarMap, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Value and Jacobian (outputs × inputs) of ``fn`` at ``point``."""
    x = [float(v) for v in point]
    n = len(x)
    value: List[float] = []
    columns = []
    for i in range(n):
        args = [Dual(x[k], 1.0 if k == i else 0.0) for k in range(n)]
        out = fn(args)
        if i == 0:
            value = [part(c) for c in out]
        columns.append([part(c, "eps") for c in out])
    if n == 0:
        value = [real_part(c) for c in fn([])]
    jac = np.array(columns, dtype=float).T if columns else np.zeros((len(value), 0))
    return np.array(value, dtype=float), jac


def jet2(fn: ScalarMap, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, Jacobian and Hessian (outputs × inputs × inputs) of ``fn``.

    Each pair ``i <= j`` is one evaluation with two nested perturbations:
    the inner dual seeds direction ``i``, the outer one direction ``j``.
    """
    x = [float(v) for v in point]
    n = len(x)
    value = None
    jac_cols: List[List[float]] = [[] for _ in range(n)]
    hess = None
    for i in range(n):
        for j in range(i, n):
            args = [
                Dual(Dual(x[k], 1.0 if k == i else 0.0), Dual(1.0 if k == j else 0.0, 0.0))
                for k in range(n)
            ]
            out = list(fn(args))
            if value is None:
                value = np.array([part(c, "val", "val") for c in out])
                hess = np.zeros((len(out), n, n))
            if i == j:
                jac_cols[i] = [part(c, "val", "eps") for c in out]
            for a, c in enumerate(out):
                h = part(c, "eps", "eps")
                hess[a, i, j] = h
                hess[a, j, i] = h
    if value is None:
        value = np.array([real_part(c) for c in fn([])])
        return value, np.zeros((len(value), 0)), np.zeros((len(value), 0, 0))
    jac = np.array(jac_cols, dtype=float).T
    return value, jac, hess
