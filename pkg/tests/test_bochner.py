import numpy as np
import pytest

from kaehlerlab.errors import PreconditionError
from kaehlerlab.geometry.ambient import complex_structure, curvature_at, make_ambient, sample_points
from kaehlerlab.geometry.bochner import (
    bochner_residual,
    cr_orthogonal_pair,
    identity_w33,
    lm_tensors_at,
    reconstruct_curvature,
    symmetry_audit,
)


def test_reconstruction_on_model_ambients(any_ambient, rng):
    for p in sample_points(any_ambient, rng, 20, radius=0.6):
        assert bochner_residual(any_ambient, p) <= 1e-5


@pytest.mark.parametrize("m, wrong", [(2, (3, 4, 5)), (3, (1, 4, 5))])
def test_dimension_calibration(m, wrong):
    ambient = make_ambient("fubini_study", m)
    p = np.linspace(-0.2, 0.25, ambient.dim)
    assert bochner_residual(ambient, p) <= 1e-5
    for d in wrong:
        assert bochner_residual(ambient, p, dimension=d) > 1e-2


def test_dimension_one_below_ambient_coincides_on_space_forms(fs2):
    # L = 3d/((d+1)(d+2)) g on FS2, equal to g/2 for d = 1 and d = 2
    p = np.array([0.1, -0.2, 0.3, 0.05])
    assert bochner_residual(fs2, p, dimension=1) <= 1e-5


def test_l_is_a_multiple_of_g_on_fs2(fs2):
    p = np.array([0.3, 0.1, -0.2, 0.4])
    tensors = lm_tensors_at(fs2, p)
    g = curvature_at(fs2, p).metric
    # Ric = 6g, tau = 24 and d = 2 give L = g/2
    assert np.abs(tensors.L - 0.5 * g).max() <= 1e-5


def test_symmetry_audit(any_ambient, rng):
    for p in sample_points(any_ambient, rng, 3, radius=0.6):
        report = symmetry_audit(any_ambient, p)
        assert report.passed, [(r.label, r.value) for r in report.results]


@pytest.mark.parametrize("m", [2, 3])
def test_symmetries_hold_across_the_whole_hyperbolic_ball(m, rng):
    ambient = make_ambient("complex_hyperbolic", m)
    for p in sample_points(ambient, rng, 20):
        report = symmetry_audit(ambient, p)
        assert report.passed, [(r.label, r.value) for r in report.results]
        assert bochner_residual(ambient, p) <= 1e-5


def test_l_is_j_invariant_to_roundoff(ch2):
    p = np.array([0.5, -0.3, 0.4, 0.2])
    tensors = lm_tensors_at(ch2, p)
    j = complex_structure(2)
    np.testing.assert_allclose(j.T @ tensors.L @ j, tensors.L, atol=1e-12)
    np.testing.assert_allclose(tensors.M, -tensors.M.T, atol=1e-12)


def test_reconstructed_tensor_matches_holomorphic_curvature(fs2):
    p = np.zeros(4)
    rebuilt = reconstruct_curvature(fs2, p)
    x = np.array([1.0, 0.0, 0.0, 0.0])
    jx = np.array([0.0, 1.0, 0.0, 0.0])
    assert np.einsum("abcd,a,b,c,d->", rebuilt, x, jx, jx, x) == pytest.approx(4.0, abs=1e-4)


@pytest.mark.parametrize("kind, expected", [("fubini_study", -2.0), ("complex_hyperbolic", 2.0)])
def test_identity_w33(kind, expected, rng):
    ambient = make_ambient(kind, 2)
    for p in sample_points(ambient, rng, 5, radius=0.5):
        x, z = cr_orthogonal_pair(ambient, p, rng)
        result = identity_w33(ambient, p, x, z)
        assert result.residual <= 1e-5
        assert result.lhs == pytest.approx(expected, abs=1e-4)


def test_identity_w33_rejects_non_orthogonal_pair(fs2):
    x = np.array([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(PreconditionError) as info:
        identity_w33(fs2, np.zeros(4), x, x)
    assert info.value.residual == pytest.approx(1.0)
