"""L and M tensors of a Bochner-Kaehler ambient and the curvature they determine."""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import PreconditionError
from ..report import CheckReport
from .ambient import AmbientSpace, complex_structure, curvature_at, metric_at
from .curvature import CurvatureData, symmetry_residuals

W33_PRECONDITION_TOL = 1e-8


@dataclass(frozen=True)
class BochnerTensors:
    L: np.ndarray
    M: np.ndarray
    ambient: AmbientSpace
    point: Tuple[float, ...]
    dimension: int

    def l_form(self, y: np.ndarray, z: np.ndarray) -> float:
        return float(y @ self.L @ z)

    def m_form(self, y: np.ndarray, z: np.ndarray) -> float:
        return float(y @ self.M @ z)


def lm_tensors_at(
    ambient: AmbientSpace,
    p: Sequence[float],
    dimension: Optional[int] = None,
    curvature: Optional[CurvatureData] = None,
) -> BochnerTensors:
    """L = Ric/(2d+4) − tau·g/(2(2d+2)(2d+4)) and M(Y, Z) = −L(Y, JZ).

    ``d`` defaults to the ambient complex dimension ``m``; ``tau`` is the
    trace scalar curvature. L is replaced by its J-invariant part.
    """
    d = ambient.m if dimension is None else int(dimension)
    curvature = curvature or curvature_at(ambient, p)
    g = curvature.metric
    j = complex_structure(ambient.m)
    lt = curvature.ricci / (2 * d + 4) - curvature.tau * g / (2.0 * (2 * d + 2) * (2 * d + 4))
    lt = 0.5 * (lt + lt.T)
    lt = 0.5 * (lt + j.T @ lt @ j)
    return BochnerTensors(
        L=lt,
        M=-lt @ j,
        ambient=ambient,
        point=tuple(float(v) for v in p),
        dimension=d,
    )


def assemble_curvature(lt: np.ndarray, mt: np.ndarray, g: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Bochner-flat curvature tensor built from L, M and the metric."""
    gj = j.T @ g  # gj[x, w] = g(J∂x, ∂w)
    e = np.einsum
    return (
        e("yz,xw->xyzw", lt, g)
        - e("xz,yw->xyzw", lt, g)
        + e("xw,yz->xyzw", lt, g)
        - e("yw,xz->xyzw", lt, g)
        + e("yz,xw->xyzw", mt, gj)
        - e("xz,yw->xyzw", mt, gj)
        + e("xw,yz->xyzw", mt, gj)
        - e("yw,xz->xyzw", mt, gj)
        - 2.0 * e("xy,zw->xyzw", mt, gj)
        - 2.0 * e("zw,xy->xyzw", mt, gj)
    )


def reconstruct_curvature(
    ambient: AmbientSpace,
    p: Sequence[float],
    tensors: Optional[BochnerTensors] = None,
) -> np.ndarray:
    tensors = tensors or lm_tensors_at(ambient, p)
    g = metric_at(ambient, p).array
    return assemble_curvature(tensors.L, tensors.M, g, complex_structure(ambient.m))


def bochner_residual(ambient: AmbientSpace, p: Sequence[float], dimension: Optional[int] = None) -> float:
    curvature = curvature_at(ambient, p)
    tensors = lm_tensors_at(ambient, p, dimension=dimension, curvature=curvature)
    rebuilt = reconstruct_curvature(ambient, p, tensors)
    return float(np.max(np.abs(curvature.riemann - rebuilt)))


def symmetry_audit(ambient: AmbientSpace, p: Sequence[float], tol: float = 1e-9) -> CheckReport:
    tensors = lm_tensors_at(ambient, p)
    lt, mt = tensors.L, tensors.M
    j = complex_structure(ambient.m)
    report = CheckReport("bochner.symmetries")
    report.add("l_symmetry", np.max(np.abs(lt - lt.T)), tolerance=tol)
    report.add("l_j_invariance", np.max(np.abs(j.T @ lt @ j - lt)), tolerance=tol)
    # L(Y, JZ) + L(JY, Z)
    report.add("l_skew", np.max(np.abs(lt @ j + j.T @ lt)), tolerance=tol)
    report.add("m_antisymmetry", np.max(np.abs(mt + mt.T)), tolerance=tol)
    rebuilt = reconstruct_curvature(ambient, p, tensors)
    report.add("reconstruction_symmetry", max(symmetry_residuals(rebuilt).values()), tolerance=tol)
    return report


class W33Result(NamedTuple):
    lhs: float
    rhs: float
    residual: float


def identity_w33(
    ambient: AmbientSpace,
    p: Sequence[float],
    x: np.ndarray,
    z: np.ndarray,
    tol: float = W33_PRECONDITION_TOL,
) -> W33Result:
    """R(X, JX, Z, JZ) against −2M(X, JX)g(Z, Z) − 2M(Z, JZ)g(X, X)."""
    x, z = np.asarray(x, dtype=float), np.asarray(z, dtype=float)
    g = metric_at(ambient, p)
    j = complex_structure(ambient.m)
    checks = {
        "g(X,X) - 1": g.inner(x, x) - 1.0,
        "g(Z,Z) - 1": g.inner(z, z) - 1.0,
        "g(X,Z)": g.inner(x, z),
        "g(X,JZ)": g.inner(x, j @ z),
    }
    for label, value in checks.items():
        if abs(value) > tol:
            raise PreconditionError(f"X, Z are not a CR-orthogonal unit pair: {label} = {value:.3e}", abs(value))
    curvature = curvature_at(ambient, p)
    tensors = lm_tensors_at(ambient, p, curvature=curvature)
    lhs = curvature.lowered(x, j @ x, z, j @ z)
    rhs = -2.0 * tensors.m_form(x, j @ x) * g.inner(z, z) - 2.0 * tensors.m_form(z, j @ z) * g.inner(x, x)
    return W33Result(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs))


def cr_orthogonal_pair(
    ambient: AmbientSpace, p: Sequence[float], rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Random unit X, Z with g(X, Z) = g(X, JZ) = 0."""
    g = metric_at(ambient, p)
    j = complex_structure(ambient.m)
    x = rng.normal(size=ambient.dim)
    x = x / g.norm(x)
    jx = j @ x
    z = rng.normal(size=ambient.dim)
    for _ in range(2):
        z = z - g.inner(x, z) * x - g.inner(jx, z) * jx
    return x, z / g.norm(z)
