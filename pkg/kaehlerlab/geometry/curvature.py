"""Levi-Civita connection and curvature assembled from a metric and its first derivatives.

Index conventions used throughout the package:

- ``dg[c, a, b]`` is the partial derivative of ``g_ab`` along coordinate ``c``.
- ``gamma[k, i, j]`` is the Christoffel symbol with upper index ``k``.
- ``riemann[x, y, z, w] = g(R(∂x, ∂y)∂z, ∂w)`` with
  ``R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]``; the unit sphere has
  ``riemann[x, y, y, x] = +1`` on orthonormal pairs.
- ``ricci[y, z] = g^{xw} riemann[x, y, z, w]``.

Christoffel symbols come from analytic first derivatives; their derivative
is the only finite-difference layer, taken with the five-point central
stencil.
"""

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

FD_STEP = 1e-5
# (offset in steps, weight) pairs of the first-derivative stencils
STENCILS = {
    2: ((1, 0.5), (-1, -0.5)),
    4: ((2, -1.0 / 12.0), (1, 8.0 / 12.0), (-1, -8.0 / 12.0), (-2, 1.0 / 12.0)),
}


def fd_step(x: float) -> float:
    return FD_STEP * max(1.0, abs(float(x)))


def central_jacobian(
    fn: Callable[[np.ndarray], np.ndarray], point: np.ndarray, accuracy: int = 2
) -> np.ndarray:
    """``out[c, ...]`` = central difference of ``fn`` along coordinate ``c``.

    ``accuracy`` 2 is the three-point stencil, 4 the five-point one.
    """
    if accuracy not in STENCILS:
        raise ValueError(f"Unsupported stencil accuracy {accuracy}; expected one of {sorted(STENCILS)}")
    point = np.asarray(point, dtype=float)
    slices = []
    for c in range(point.shape[0]):
        step = fd_step(point[c])
        total = 0.0
        for offset, weight in STENCILS[accuracy]:
            shifted = point.copy()
            shifted[c] += offset * step
            total = total + weight * np.asarray(fn(shifted))
        slices.append(total / step)
    return np.stack(slices)


def christoffel_from(ginv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    lowered = 0.5 * (dg + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg))
    gamma = np.einsum("kl,ijl->kij", ginv, lowered)
    return 0.5 * (gamma + np.einsum("kji->kij", gamma))


def riemann_up(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """``rup[l, k, i, j]``: component ``l`` of ``R(∂i, ∂j)∂k``."""
    return (
        np.einsum("iljk->lkij", dgamma)
        - np.einsum("jlik->lkij", dgamma)
        + np.einsum("lim,mjk->lkij", gamma, gamma)
        - np.einsum("ljm,mik->lkij", gamma, gamma)
    )


def lower_riemann(g: np.ndarray, rup: np.ndarray) -> np.ndarray:
    return np.einsum("wl,lkij->ijkw", g, rup)


def ricci_from(ginv: np.ndarray, riemann: np.ndarray) -> np.ndarray:
    ricci = np.einsum("iw,ijkw->jk", ginv, riemann)
    return 0.5 * (ricci + ricci.T)


@dataclass(frozen=True)
class CurvatureData:
    """Curvature of a Riemannian metric at one chart point."""

    riemann: np.ndarray
    ricci: np.ndarray
    tau: float
    rho_half: float
    metric: np.ndarray
    christoffel: np.ndarray

    def lowered(self, x: np.ndarray, y: np.ndarray, z: np.ndarray, w: np.ndarray) -> float:
        return float(np.einsum("abcd,a,b,c,d->", self.riemann, x, y, z, w))

    def sectional(self, x: np.ndarray, y: np.ndarray) -> float:
        return sectional(self.riemann, self.metric, x, y)


def curvature_data(
    point: np.ndarray,
    metric: np.ndarray,
    inverse: np.ndarray,
    christoffel_fn: Callable[[np.ndarray], np.ndarray],
) -> CurvatureData:
    gamma = christoffel_fn(point)
    dgamma = central_jacobian(christoffel_fn, point, accuracy=4)
    riemann = lower_riemann(metric, riemann_up(gamma, dgamma))
    ricci = ricci_from(inverse, riemann)
    tau = float(np.einsum("ab,ab->", inverse, ricci))
    return CurvatureData(
        riemann=riemann,
        ricci=ricci,
        tau=tau,
        rho_half=0.5 * tau,
        metric=metric,
        christoffel=gamma,
    )


def sectional(riemann: np.ndarray, g: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Sectional curvature of the plane spanned by ``x`` and ``y``."""
    gxx, gyy, gxy = x @ g @ x, y @ g @ y, x @ g @ y
    area = gxx * gyy - gxy * gxy
    if area <= 1e-14 * max(gxx * gyy, 1e-300):
        raise ValueError("Degenerate plane: vectors are linearly dependent")
    return float(np.einsum("abcd,a,b,c,d->", riemann, x, y, y, x) / area)


def symmetry_residuals(riemann: np.ndarray) -> Dict[str, float]:
    """Algebraic symmetries of a lowered curvature tensor."""
    if riemann.size == 0:
        return {"antisymmetry_12": 0.0, "antisymmetry_34": 0.0, "pair_swap": 0.0, "bianchi": 0.0}
    bianchi = riemann + np.einsum("yzxw->xyzw", riemann) + np.einsum("zxyw->xyzw", riemann)
    return {
        "antisymmetry_12": float(np.max(np.abs(riemann + np.einsum("yxzw->xyzw", riemann)))),
        "antisymmetry_34": float(np.max(np.abs(riemann + np.einsum("xywz->xyzw", riemann)))),
        "pair_swap": float(np.max(np.abs(riemann - np.einsum("zwxy->xyzw", riemann)))),
        "bianchi": float(np.max(np.abs(bianchi))),
    }
