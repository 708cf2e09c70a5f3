import math

import numpy as np
import pytest

from kaehlerlab.errors import ExprDomainError
from kaehlerlab.utils import dual
from kaehlerlab.utils.dual import Dual


def test_product_rule():
    x = Dual(3.0, 1.0)
    y = x * x * x
    assert y.val == 27.0
    assert y.eps == 27.0


def test_divide_by_zero_is_a_domain_error():
    with pytest.raises(ExprDomainError):
        dual.divide(Dual(1.0, 1.0), Dual(0.0, 1.0))


def test_log_of_negative():
    with pytest.raises(ExprDomainError):
        dual.log(Dual(-1.0, 1.0))


def test_jet1_of_polar_map():
    def polar(x):
        r, t = x
        return [r * dual.cos(t), r * dual.sin(t)]

    value, jac = dual.jet1(polar, [2.0, 0.5])
    assert value == pytest.approx([2 * math.cos(0.5), 2 * math.sin(0.5)])
    expected = [[math.cos(0.5), -2 * math.sin(0.5)], [math.sin(0.5), 2 * math.cos(0.5)]]
    assert jac == pytest.approx(np.array(expected), abs=1e-14)


def test_jet2_mixed_partials():
    def f(x):
        u, v = x
        return [u * u * v + dual.exp(u * v)]

    u, v = 0.4, -1.3
    _, jac, hess = dual.jet2(f, [u, v])
    e = math.exp(u * v)
    assert jac[0] == pytest.approx([2 * u * v + v * e, u * u + u * e], abs=1e-13)
    expected = np.array(
        [
            [2 * v + v * v * e, 2 * u + e + u * v * e],
            [2 * u + e + u * v * e, u * u * e],
        ]
    )
    assert hess[0] == pytest.approx(expected, abs=1e-12)
    assert hess[0][0, 1] == hess[0][1, 0]


def test_real_part_of_nested_dual():
    assert dual.real_part(Dual(Dual(1.5, 2.0), Dual(3.0, 4.0))) == 1.5
