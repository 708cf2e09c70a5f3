import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kaehlerlab.errors import ExprDomainError, ExprSyntaxError, UnboundVariableError
from kaehlerlab.utils import expr
from kaehlerlab.utils.expr import Binary, Const, Unary, Var


def test_parse_variable():
    assert expr.parse("u") == Var("u")


def test_parse_product_of_cosines():
    tree = expr.parse("cos(u)*cos(v)")
    assert tree == Binary("*", Unary("cos", Var("u")), Unary("cos", Var("v")))


def test_precedence_and_evaluation():
    assert expr.evaluate(expr.parse("u^2+3*v"), {"u": 2, "v": 1}) == 7.0


def test_power_is_right_associative_and_binds_over_minus():
    assert expr.evaluate(expr.parse("2^3^2"), {}) == 512.0
    assert expr.evaluate(expr.parse("-u^2"), {"u": 3}) == -9.0


@pytest.mark.parametrize(
    "src, env, expected",
    [
        ("5", {"u": 1.0}, 5.0),
        ("sin(u)", {"u": 0.0}, 0.0),
        ("log(u)", {"u": 1.0}, 0.0),
        ("sqrt(u)*cosh(0)", {"u": 4.0}, 2.0),
        ("pi/2", {}, math.pi / 2),
    ],
)
def test_evaluate(src, env, expected):
    assert expr.evaluate(expr.parse(src), env) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "src, offset",
    [
        ("u +* v", 3),
        ("(u + v", 0),
        ("u $ v", 2),
    ],
)
def test_syntax_errors_carry_offset(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        expr.parse(src)
    assert info.value.offset == offset


def test_unknown_function():
    with pytest.raises(ExprSyntaxError, match="unknown function 'foo'"):
        expr.parse("foo(u)")


def test_empty_expression():
    with pytest.raises(ExprSyntaxError):
        expr.parse("   ")


def test_domain_errors_name_the_node():
    with pytest.raises(ExprDomainError) as info:
        expr.evaluate(expr.parse("1 + log(u)"), {"u": -1.0})
    assert info.value.offset == 4
    with pytest.raises(ExprDomainError):
        expr.evaluate(expr.parse("1/(u-u)"), {"u": 2.0})


def test_unbound_variable():
    with pytest.raises(UnboundVariableError) as info:
        expr.evaluate(expr.parse("u + w"), {"u": 1.0})
    assert info.value.name == "w"


def test_first_and_second_derivatives():
    assert expr.deriv(expr.parse("u"), "u", {"u": 0.3}) == 1.0
    assert expr.deriv(expr.parse("u^2"), "u", {"u": -7.5}, order=2) == pytest.approx(2.0, abs=1e-12)
    e = expr.parse("sin(u)*v")
    env = {"u": 0.7, "v": 2.0}
    assert expr.deriv(e, "u", env) == pytest.approx(2.0 * math.cos(0.7), abs=1e-14)
    assert expr.deriv(e, "u", env) == pytest.approx(expr.central_difference(e, "u", env), abs=1e-6)


def test_deriv_rejects_order_three():
    with pytest.raises(ValueError):
        expr.deriv(expr.parse("u"), "u", {"u": 1.0}, order=3)


def test_gradient_and_hessian_of_quadratic():
    e = expr.parse("u^2*v + 3*u*v - v^2")
    env = {"u": 1.5, "v": -0.5}
    grad = expr.gradient(e, ["u", "v"], env)
    hess = expr.hessian(e, ["u", "v"], env)
    assert grad == pytest.approx([2 * 1.5 * -0.5 + 3 * -0.5, 1.5**2 + 3 * 1.5 + 1.0], abs=1e-12)
    np.testing.assert_allclose(hess, [[2 * -0.5, 2 * 1.5 + 3], [2 * 1.5 + 3, -2.0]], atol=1e-12)


def test_variables():
    assert expr.variables(expr.parse("u*cos(t) + pi")) == {"u", "t"}


LEAVES = st.one_of(
    st.sampled_from([Var("u"), Var("v")]),
    st.floats(min_value=0.1, max_value=1.5, allow_nan=False).map(Const),
)
SAFE_FUNCTIONS = ["sin", "cos", "exp", "sinh", "cosh", "neg"]


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from(SAFE_FUNCTIONS), children).map(lambda t: Unary(t[0], t[1])),
        st.tuples(st.sampled_from(["+", "-", "*"]), children, children).map(lambda t: Binary(t[0], t[1], t[2])),
    )


TREES = st.recursive(LEAVES, _extend, max_leaves=6)


@given(TREES)
@settings(max_examples=100, deadline=None)
def test_print_then_parse_round_trip(tree):
    assert expr.parse(expr.to_source(tree)) == tree


@given(
    TREES,
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-1.0, max_value=1.0),
)
@settings(max_examples=50, deadline=None)
def test_dual_derivative_matches_central_difference(tree, u, v):
    env = {"u": u, "v": v}
    try:
        value = expr.evaluate(tree, env)
        exact = expr.deriv(tree, "u", env)
        approx = expr.central_difference(tree, "u", env)
    except OverflowError:
        assume(False)
    assume(math.isfinite(value) and abs(value) <= 1e6)
    assert abs(exact - approx) <= 1e-6 * (1.0 + abs(value)) + 1e-6 * abs(exact)


def test_evaluation_is_deterministic():
    e = expr.parse("exp(sin(u)) * cosh(v) / (1 + u^2)")
    env = {"u": 0.123, "v": -0.77}
    assert expr.evaluate(e, env) == expr.evaluate(e, env)
