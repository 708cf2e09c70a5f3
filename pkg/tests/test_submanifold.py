import math

import numpy as np
import pytest

from kaehlerlab.errors import (
    DomainError,
    NotOrthonormalError,
    PreconditionError,
    RankDeficiencyError,
    UnboundVariableError,
)
from kaehlerlab.geometry.ambient import make_ambient
from kaehlerlab.geometry.submanifold import (
    SubmanifoldKind,
    adapted_frame_at,
    classify,
    codazzi_residual_at,
    codazzi_tensor_residual,
    extrinsic_audit,
    extrinsic_data_at,
    gauss_residual_at,
    gauss_tensor_residual,
    geometry_at,
    induced_metric_at,
    intrinsic_curvature_at,
    make_immersion,
    remix_frame,
)

from .helpers import tangent_sample

SPHERE_POINT = [1.0, 1.2, 2.0]


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_round_sphere_closed_forms(flat2, r):
    sphere = make_immersion(flat2, "SPH3", params={"r": r})
    data = extrinsic_data_at(sphere, SPHERE_POINT)
    assert data.h_norm == pytest.approx(1.0 / r, abs=1e-6)
    assert data.omega_norm_sq == pytest.approx(3.0 / r**2, abs=1e-5)
    curvature = intrinsic_curvature_at(sphere, SPHERE_POINT)
    assert curvature.k_plane == pytest.approx(1.0 / r**2, abs=1e-4)
    assert curvature.rho == pytest.approx(3.0 / r**2, abs=1e-3)


def test_induced_metric_of_sphere(sphere):
    a, b, _ = SPHERE_POINT
    h = induced_metric_at(sphere, SPHERE_POINT).array
    expected = np.diag([1.0, math.sin(a) ** 2, (math.sin(a) * math.sin(b)) ** 2])
    assert h == pytest.approx(expected, abs=1e-12)


def test_adapted_frame_is_orthonormal(sphere):
    frame = adapted_frame_at(sphere, SPHERE_POINT)
    full = frame.full
    assert np.abs(full.T @ frame.metric @ full - np.eye(4)).max() <= 1e-10
    assert (frame.n, frame.codim) == (3, 1)


@pytest.mark.parametrize("theta", [0.3, 0.7, 1.2])
def test_slant_planes(flat2, theta, rng):
    slant = make_immersion(flat2, "SLANT", params={"theta": theta})
    found = classify(slant, tangent_sample(slant, rng, 3), rng=rng)
    assert found.kind is SubmanifoldKind.SLANT
    assert found.theta == pytest.approx(theta, abs=1e-6)
    assert extrinsic_data_at(slant, [0.2, -0.4]).t_norm_sq == pytest.approx(2 * math.cos(theta) ** 2, abs=1e-8)


@pytest.mark.parametrize(
    "name, kind",
    [
        ("LAGR2", SubmanifoldKind.ANTI_INVARIANT),
        ("CLINE", SubmanifoldKind.INVARIANT),
        ("CRW", SubmanifoldKind.CR),
    ],
)
def test_classification_of_fixtures(flat2, name, kind, rng):
    immersion = make_immersion(flat2, name)
    assert classify(immersion, tangent_sample(immersion, rng, 3), rng=rng).kind is kind


def test_classify_needs_eight_samples_per_point(lagr2):
    with pytest.raises(ValueError):
        classify(lagr2, [[0.0, 0.0]], k=4)


def _gauss_suite():
    flat2, fs2 = make_ambient("flat", 2), make_ambient("fubini_study", 2)
    return [
        make_immersion(flat2, "SPH3"),
        make_immersion(flat2, "SLANT", params={"theta": 0.7}),
        make_immersion(flat2, "LAGR2"),
        make_immersion(flat2, "CRW"),
        make_immersion(fs2, "CLINE"),
    ]


@pytest.mark.parametrize("immersion", _gauss_suite(), ids=lambda s: f"{s.label}-{s.ambient.label}")
def test_gauss_and_codazzi(immersion, rng):
    for u in tangent_sample(immersion, rng, 3):
        assert gauss_tensor_residual(immersion, u) <= 1e-4
        tangent = adapted_frame_at(immersion, u).tangent
        for _ in range(5):
            x, y, z, w = (tangent @ rng.normal(size=immersion.n) for _ in range(4))
            assert gauss_residual_at(immersion, u, x, y, z, w) <= 1e-4
        assert codazzi_tensor_residual(immersion, u) <= 1e-3


def test_gauss_rejects_normal_vectors(sphere):
    frame = adapted_frame_at(sphere, SPHERE_POINT)
    e = frame.tangent[:, 0]
    with pytest.raises(PreconditionError, match="not tangent"):
        gauss_residual_at(sphere, SPHERE_POINT, frame.normal[:, 0], e, e, e)


def test_complex_line_in_fs2_has_holomorphic_curvature(fs_line, rng):
    for u in tangent_sample(fs_line, rng, 3):
        assert intrinsic_curvature_at(fs_line, u).k_plane == pytest.approx(4.0, abs=1e-4)
        assert extrinsic_data_at(fs_line, u).omega_norm_sq <= 1e-10


def test_extrinsic_data_is_frame_invariant(sphere, rng):
    frame = adapted_frame_at(sphere, SPHERE_POINT)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    base = extrinsic_data_at(sphere, SPHERE_POINT, frame)
    mixed = extrinsic_data_at(sphere, SPHERE_POINT, remix_frame(frame, q))
    assert mixed.omega_norm_sq == pytest.approx(base.omega_norm_sq, abs=1e-10)
    assert mixed.h_norm == pytest.approx(base.h_norm, abs=1e-10)
    assert mixed.t_norm_sq == pytest.approx(base.t_norm_sq, abs=1e-10)


def test_remix_rejects_non_orthogonal(sphere):
    frame = adapted_frame_at(sphere, SPHERE_POINT)
    with pytest.raises(NotOrthonormalError):
        remix_frame(frame, 2.0 * np.eye(3))


@pytest.mark.parametrize("immersion_name", ["SPH3", "CRW", "SLANT"])
def test_extrinsic_audit_passes(flat2, immersion_name, rng):
    immersion = make_immersion(flat2, immersion_name)
    for u in tangent_sample(immersion, rng, 2):
        report = extrinsic_audit(immersion, u, rng)
        assert report.passed, [(r.label, r.value) for r in report.results]


def test_expression_immersion_matches_builtin(fs2):
    custom = make_immersion(fs2, components=["u", "v", "0", "0"])
    assert custom.variables == ("u", "v")
    assert custom.box == ((-1.0, 1.0), (-1.0, 1.0))
    u = [0.3, -0.2]
    assert intrinsic_curvature_at(custom, u).k_plane == pytest.approx(4.0, abs=1e-4)


def test_expression_immersion_errors(flat2):
    with pytest.raises(RankDeficiencyError):
        make_immersion(flat2, components=["u+v", "u+v", "0", "0"])
    with pytest.raises(UnboundVariableError):
        make_immersion(flat2, components=["u", "v", "0", "0"], variables=["u"])
    with pytest.raises(ValueError, match="components"):
        make_immersion(flat2, components=["u", "v", "0"])


def test_points_outside_the_chart_box(sphere):
    with pytest.raises(DomainError):
        geometry_at(sphere, [5.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        geometry_at(sphere, [1.0, 1.0])


def test_degenerate_plane(sphere):
    with pytest.raises(ValueError, match="Degenerate plane"):
        intrinsic_curvature_at(sphere, SPHERE_POINT, plane=(1, 1))


def test_codazzi_residual_for_tangent_triples(sphere, rng):
    tangent = adapted_frame_at(sphere, SPHERE_POINT).tangent
    for _ in range(3):
        x, y, z = (tangent @ rng.normal(size=3) for _ in range(3))
        assert codazzi_residual_at(sphere, SPHERE_POINT, x, y, z) <= 1e-3
    with pytest.raises(PreconditionError, match="not tangent"):
        normal = adapted_frame_at(sphere, SPHERE_POINT).normal[:, 0]
        codazzi_residual_at(sphere, SPHERE_POINT, normal, tangent[:, 0], tangent[:, 1])
