import numpy as np
import pytest

from kaehlerlab.errors import DomainError
from kaehlerlab.geometry.ambient import (
    christoffel_at,
    complex_structure,
    complex_structure_at,
    curvature_at,
    einstein_residual,
    holomorphic_sectional_curvature,
    kaehler_audit,
    make_ambient,
    metric_at,
    metric_derivatives_at,
    sample_points,
    sectional_curvature,
)


def test_make_ambient_validates():
    with pytest.raises(ValueError, match="Unknown ambient kind"):
        make_ambient("sphere", 2)
    with pytest.raises(ValueError):
        make_ambient("flat", 1)


def test_labels(flat2, fs2, ch2):
    assert (flat2.label, fs2.label, ch2.label) == ("FLAT2", "FS2", "CH2")
    assert make_ambient("fubini_study", 3).dim == 6


def test_complex_structure_squares_to_minus_identity():
    j = complex_structure(3)
    assert np.array_equal(j @ j, -np.eye(6))
    assert j[1, 0] == 1.0 and j[0, 1] == -1.0


def test_ch_chart_is_the_unit_ball(ch2):
    with pytest.raises(DomainError):
        metric_at(ch2, [0.8, 0.0, 0.7, 0.0])
    with pytest.raises(DomainError):
        metric_at(ch2, [0.1, 0.2])


def test_metric_is_identity_at_origin(any_ambient):
    g = metric_at(any_ambient, np.zeros(any_ambient.dim)).array
    assert g == pytest.approx(np.eye(any_ambient.dim), abs=1e-15)


def test_kaehler_audit_passes(any_ambient, rng):
    sample = sample_points(any_ambient, rng, 20, radius=0.7)
    report = kaehler_audit(any_ambient, sample)
    assert report.passed, [(r.label, r.value) for r in report.results if not r.passed]
    assert report["j_squared"].value <= 1e-12


@pytest.mark.parametrize("kind, sign", [("fubini_study", 1.0), ("complex_hyperbolic", -1.0)])
def test_space_form_curvature(kind, sign, rng):
    ambient = make_ambient(kind, 2)
    for p in sample_points(ambient, rng, 5, radius=0.6):
        curvature = curvature_at(ambient, p)
        assert np.abs(curvature.ricci - sign * 6.0 * curvature.metric).max() <= 1e-4
        assert curvature.tau == pytest.approx(sign * 24.0, abs=1e-3)
        g = metric_at(ambient, p)
        x = rng.normal(size=4)
        x /= g.norm(x)
        assert holomorphic_sectional_curvature(ambient, p, x) == pytest.approx(sign * 4.0, abs=1e-4)


def test_flat_ambient_has_zero_curvature(flat2):
    curvature = curvature_at(flat2, [0.3, -0.2, 1.5, 0.4])
    assert np.abs(curvature.riemann).max() <= 1e-12


def test_totally_real_plane_in_fs2_has_curvature_one(fs2):
    p = np.zeros(4)
    assert sectional_curvature(fs2, p, np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])) == pytest.approx(
        1.0, abs=1e-4
    )


def test_einstein_constant(fs2):
    lam, residual = einstein_residual(fs2, [0.2, 0.1, -0.3, 0.05])
    assert lam == pytest.approx(6.0, abs=1e-4)
    assert residual <= 1e-4


def test_sample_points_stay_in_chart(ch2, rng):
    for p in sample_points(ch2, rng, 50, radius=2.0):
        assert ch2.contains(p)


@pytest.mark.parametrize("kind", ["fubini_study", "complex_hyperbolic"])
def test_christoffel_symbols_vanish_at_the_chart_origin(kind):
    ambient = make_ambient(kind, 2)
    assert np.abs(christoffel_at(ambient, [0.0, 0.0, 0.0, 0.0])).max() <= 1e-12
    assert np.abs(christoffel_at(ambient, [0.2, -0.1, 0.3, 0.1])).max() > 1e-3


def test_metric_derivatives_match_central_differences(fs2):
    p = np.array([0.3, -0.2, 0.1, 0.4])
    dg = metric_derivatives_at(fs2, p)
    h = 1e-5
    for c in range(4):
        step = np.zeros(4)
        step[c] = h
        fd = (metric_at(fs2, p + step).array - metric_at(fs2, p - step).array) / (2 * h)
        assert dg[c] == pytest.approx(fd, abs=1e-8)


def test_complex_structure_at_checks_the_chart(ch2):
    assert np.array_equal(complex_structure_at(ch2, [0.1, 0.0, 0.2, 0.0]), complex_structure(2))
    with pytest.raises(DomainError):
        complex_structure_at(ch2, [0.9, 0.0, 0.9, 0.0])
