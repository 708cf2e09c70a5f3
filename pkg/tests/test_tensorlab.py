import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kaehlerlab.errors import NotOrthonormalError, NotPositiveDefiniteError, RankDeficiencyError
from kaehlerlab.utils.tensorlab import (
    MetricMatrix,
    fix_sign,
    gram,
    gram_schmidt,
    orthonormal_complement,
    project,
    solve_spd,
)


def _close(vectors, expected):
    assert len(vectors) == len(expected)
    for v, e in zip(vectors, expected):
        assert v == pytest.approx(np.asarray(e, dtype=float), abs=1e-12)


@pytest.mark.parametrize(
    "vectors, expected",
    [
        ([(1, 0), (0, 1)], [(1, 0), (0, 1)]),
        ([(2, 0), (0, 3)], [(1, 0), (0, 1)]),
        ([(1, 1), (0, 1)], [np.array([1, 1]) / np.sqrt(2), np.array([-1, 1]) / np.sqrt(2)]),
    ],
)
def test_gram_schmidt_examples(vectors, expected):
    _close(gram_schmidt([np.array(v, float) for v in vectors], np.eye(2)), expected)


def test_gram_schmidt_names_dependent_vector():
    with pytest.raises(RankDeficiencyError) as info:
        gram_schmidt([np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([1.0, 1.0, 0])], np.eye(3))
    assert info.value.index == 2


def test_complement_of_first_axis():
    added = orthonormal_complement([np.array([1.0, 0, 0, 0])], np.eye(4))
    assert len(added) == 3
    assert np.abs(gram(added, np.eye(4)) - np.eye(3)).max() < 1e-12
    assert all(abs(v[0]) < 1e-12 for v in added)


def test_complement_of_full_basis_is_empty():
    assert orthonormal_complement(list(np.eye(3)), np.eye(3)) == []


def test_complement_of_diagonal_vector():
    e = np.array([1.0, 1.0, 0, 0]) / np.sqrt(2)
    added = orthonormal_complement([e], np.eye(4))
    assert len(added) == 3
    assert max(abs(v @ e) for v in added) < 1e-10


def test_complement_rejects_non_orthonormal_input():
    with pytest.raises(NotOrthonormalError):
        orthonormal_complement([np.array([2.0, 0.0])], np.eye(2))


@pytest.mark.parametrize(
    "matrix, b, expected",
    [
        (np.eye(3), [1.0, -2.0, 3.0], [1.0, -2.0, 3.0]),
        (np.diag([2.0, 4.0]), [2.0, 4.0], [1.0, 1.0]),
        (np.array([[2.0, 1.0], [1.0, 2.0]]), [3.0, 3.0], [1.0, 1.0]),
    ],
)
def test_solve_spd(matrix, b, expected):
    assert solve_spd(matrix, np.array(b)) == pytest.approx(expected, abs=1e-12)


def test_solve_spd_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        solve_spd(np.array([[1.0, 2.0], [2.0, 1.0]]), np.ones(2))


def test_metric_matrix_validation():
    with pytest.raises(NotPositiveDefiniteError):
        MetricMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        MetricMatrix(np.diag([1.0, -1.0]))


def test_project_and_fix_sign():
    frame = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])]
    assert project(frame, np.eye(3), np.array([1.0, 2.0, 3.0])) == pytest.approx([1.0, 2.0, 0.0])
    assert fix_sign(np.array([0.0, -2.0, 1.0])) == pytest.approx([0.0, 2.0, -1.0])


def _random_spd(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d))
    return a @ a.T + d * np.eye(d), rng


@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=8))
@settings(max_examples=40, deadline=None)
def test_gram_schmidt_orthonormal_for_random_metric(seed, d):
    g, rng = _random_spd(seed, d)
    k = int(rng.integers(1, d + 1))
    basis = gram_schmidt(list(rng.normal(size=(k, d))), g)
    assert np.abs(gram(basis, g) - np.eye(k)).max() <= 1e-9
    frame = basis + orthonormal_complement(basis, g)
    assert np.abs(gram(frame, g) - np.eye(d)).max() <= 1e-8
