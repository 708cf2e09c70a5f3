"""Scalar expressions for user-defined immersion components.

Grammar (closed function set, standard precedence)::

    expression := term (('+' | '-') term)*
    term       := unary (('*' | '/') unary)*
    unary      := '-' unary | power
    power      := atom ('^' unary)?          # right associative, binds tighter than unary minus
    atom       := NUMBER | 'pi' | IDENT | FUNC '(' expression ')' | '(' expression ')'
    FUNC       := sin | cos | tan | exp | log | sqrt | sinh | cosh

Trees are immutable; evaluation is pure and works on floats or duals, so the
same evaluator yields values, first derivatives and second derivatives.
"""

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Sequence, Set, Tuple, Union

import numpy as np

from ..errors import ExprDomainError, ExprSyntaxError, UnboundVariableError
from . import dual
from .dual import Dual, Scalar

FUNCTIONS: Dict[str, Callable[[Scalar], Scalar]] = {
    "sin": dual.sin,
    "cos": dual.cos,
    "tan": dual.tan,
    "exp": dual.exp,
    "log": dual.log,
    "sqrt": dual.sqrt,
    "sinh": dual.sinh,
    "cosh": dual.cosh,
}

BINARY_OPS = ("+", "-", "*", "/", "^")

# Finite-difference steps of the cross-checking oracle, relative to max(1, |x|).
FD_STEP_FIRST = 1e-5
FD_STEP_SECOND = 1e-4


@dataclass(frozen=True)
class Const:
    value: float
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a FUNCTIONS key
    arg: "Expr"
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    offset: int = field(default=-1, compare=False)


Expr = Union[Const, Var, Unary, Binary]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, ident, op, end
    text: str
    offset: int


def _tokenize(src: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        match = _TOKEN.match(src, pos)
        if match is None or match.end() == pos:
            start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {src[start]!r}", _byte_offset(src, start))
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), _byte_offset(src, start)))
        pos = match.end()
    tokens.append(_Token("end", "", len(src.encode("utf-8"))))
    return tokens


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


class _Parser:
    def __init__(self, tokens: List[_Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> Expr:
        tree = self.expression()
        if self.current.kind != "end":
            if self.at_op(")"):
                raise ExprSyntaxError("unbalanced parentheses: unexpected ')'", self.current.offset)
            raise ExprSyntaxError(f"unexpected token {self.current.text!r}", self.current.offset)
        return tree

    def expression(self) -> Expr:
        left = self.term()
        while self.at_op("+", "-"):
            op = self.advance()
            left = Binary(op.text, left, self.term(), op.offset)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at_op("*", "/"):
            op = self.advance()
            left = Binary(op.text, left, self.unary(), op.offset)
        return left

    def unary(self) -> Expr:
        if self.at_op("-"):
            op = self.advance()
            return Unary("neg", self.unary(), op.offset)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            op = self.advance()
            return Binary("^", base, self.unary(), op.offset)
        return base

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "num":
            self.advance()
            return Const(float(token.text), token.offset)
        if token.kind == "ident":
            self.advance()
            if self.at_op("("):
                if token.text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function '{token.text}'", token.offset)
                arg = self.parenthesized()
                return Unary(token.text, arg, token.offset)
            if token.text == "pi":
                return Const(math.pi, token.offset)
            if token.text in FUNCTIONS:
                raise ExprSyntaxError(f"function '{token.text}' needs an argument", token.offset)
            return Var(token.text, token.offset)
        if self.at_op("("):
            return self.parenthesized()
        if token.kind == "end":
            raise ExprSyntaxError("unexpected end of expression", token.offset)
        raise ExprSyntaxError(f"unexpected token {token.text!r}", token.offset)

    def parenthesized(self) -> Expr:
        opening = self.advance()
        inner = self.expression()
        if not self.at_op(")"):
            raise ExprSyntaxError("unbalanced parentheses: missing ')'", opening.offset)
        self.advance()
        return inner


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(_tokenize(src)).parse()


def to_source(e: Expr) -> str:
    """Print ``e`` fully parenthesized; ``parse(to_source(e)) == e``."""
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_source(e.arg)})"
        return f"{e.op}({to_source(e.arg)})"
    return f"({to_source(e.left)} {e.op} {to_source(e.right)})"


def variables(e: Expr) -> Set[str]:
    """Free variable names of ``e``."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return variables(e.arg)
    if isinstance(e, Binary):
        return variables(e.left) | variables(e.right)
    return set()


def _evaluate(e: Expr, env: Mapping[str, Scalar]) -> Scalar:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariableError(e.name, e.offset)
        return env[e.name]
    if isinstance(e, Unary):
        arg = _evaluate(e.arg, env)
        if e.op == "neg":
            return -arg
        try:
            return FUNCTIONS[e.op](arg)
        except ExprDomainError as exc:
            raise ExprDomainError(f"{e.op}: {exc}", e.offset) from None
    left = _evaluate(e.left, env)
    right = _evaluate(e.right, env)
    try:
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            return dual.divide(left, right)
        return dual.power(left, right)
    except ExprDomainError as exc:
        raise ExprDomainError(f"'{e.op}': {exc}", e.offset) from None


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    """IEEE double evaluation of ``e`` with every variable bound in ``env``."""
    return dual.real_part(_evaluate(e, {k: float(v) for k, v in env.items()}))


def evaluate_scalar(e: Expr, env: Mapping[str, Scalar]) -> Scalar:
    """Evaluate over floats or duals (used by the jet machinery)."""
    return _evaluate(e, env)


def deriv(e: Expr, var: str, env: Mapping[str, float], order: int = 1) -> float:
    """Exact first or second partial derivative of ``e`` in ``var``."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if var not in env:
        raise UnboundVariableError(var)
    local: Dict[str, Scalar] = {k: float(v) for k, v in env.items()}
    x = local[var]
    if order == 1:
        local[var] = Dual(x, 1.0)
        return dual.part(_evaluate(e, local), "eps")
    local[var] = Dual(Dual(x, 1.0), Dual(1.0, 0.0))
    return dual.part(_evaluate(e, local), "eps", "eps")


def central_difference(e: Expr, var: str, env: Mapping[str, float], order: int = 1) -> float:
    """Finite-difference oracle for :func:`deriv`."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    x = float(env[var])
    step = (FD_STEP_FIRST if order == 1 else FD_STEP_SECOND) * max(1.0, abs(x))

    def at(value: float) -> float:
        shifted = dict(env)
        shifted[var] = value
        return evaluate(e, shifted)

    if order == 1:
        return (at(x + step) - at(x - step)) / (2.0 * step)
    return (at(x + step) - 2.0 * at(x) + at(x - step)) / (step * step)


def component_map(exprs: Sequence[Expr], names: Sequence[str]) -> Callable[[Sequence[Scalar]], List[Scalar]]:
    """Turn component expressions into a map usable by :func:`dual.jet2`."""
    names = tuple(names)

    def evaluate_components(args: Sequence[Scalar]) -> List[Scalar]:
        env = dict(zip(names, args))
        return [_evaluate(e, env) for e in exprs]

    return evaluate_components


def gradient(e: Expr, names: Sequence[str], env: Mapping[str, float]) -> np.ndarray:
    point = [float(env[name]) for name in names]
    fixed = {k: float(v) for k, v in env.items() if k not in names}

    def scalar(args: Sequence[Scalar]) -> List[Scalar]:
        return [_evaluate(e, {**fixed, **dict(zip(names, args))})]

    _, jac = dual.jet1(scalar, point)
    return jac[0]


def hessian(e: Expr, names: Sequence[str], env: Mapping[str, float]) -> np.ndarray:
    point = [float(env[name]) for name in names]
    fixed = {k: float(v) for k, v in env.items() if k not in names}

    def scalar(args: Sequence[Scalar]) -> List[Scalar]:
        return [_evaluate(e, {**fixed, **dict(zip(names, args))})]

    _, _, hess = dual.jet2(scalar, point)
    return hess[0]


def parse_components(sources: Sequence[str]) -> Tuple[Expr, ...]:
    """Parse a list of component strings, naming the failing component on error."""
    parsed = []
    for index, src in enumerate(sources):
        try:
            parsed.append(parse(src))
        except ExprSyntaxError as exc:
            raise ExprSyntaxError(f"component {index} ({src!r}): {exc}") from None
    return tuple(parsed)
