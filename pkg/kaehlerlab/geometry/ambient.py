"""Kaehler model spaces: flat C^m, Fubini–Study CP^m and the complex hyperbolic ball.

Chart coordinates are real pairs ``z_j = x[2j] + i·x[2j+1]``. All three
metrics share one closed form with curvature sign ``c``::

    g_{jk̄} = ((1 + c|z|²)δ_jk − c·z̄_j z_k) / (1 + c|z|²)²

which is realified so that the constant chart structure ``J`` (multiplication
by ``i``) is an isometry.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError
from ..report import CheckReport
from ..utils import dual
from ..utils.dual import Scalar
from ..utils.tensorlab import MetricMatrix, inverse_spd
from .curvature import (
    CurvatureData,
    christoffel_from,
    curvature_data,
    sectional,
    symmetry_residuals,
)


class AmbientKind(str, Enum):
    FLAT = "flat"
    FUBINI_STUDY = "fubini_study"
    COMPLEX_HYPERBOLIC = "complex_hyperbolic"


CURVATURE_SIGN: Dict[AmbientKind, int] = {
    AmbientKind.FLAT: 0,
    AmbientKind.FUBINI_STUDY: 1,
    AmbientKind.COMPLEX_HYPERBOLIC: -1,
}

LABEL_PREFIX: Dict[AmbientKind, str] = {
    AmbientKind.FLAT: "FLAT",
    AmbientKind.FUBINI_STUDY: "FS",
    AmbientKind.COMPLEX_HYPERBOLIC: "CH",
}


@dataclass(frozen=True)
class AmbientSpace:
    kind: AmbientKind
    m: int
    c: int

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def label(self) -> str:
        return f"{LABEL_PREFIX[self.kind]}{self.m}"

    @property
    def domain(self) -> str:
        if self.kind is AmbientKind.COMPLEX_HYPERBOLIC:
            return f"open unit ball in R^{self.dim}"
        return f"all of R^{self.dim}"

    def contains(self, p: Sequence[float]) -> bool:
        x = np.asarray(p, dtype=float)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            return False
        if self.kind is AmbientKind.COMPLEX_HYPERBOLIC:
            return float(x @ x) < 1.0
        return True

    def check_point(self, p: Sequence[float]) -> np.ndarray:
        x = np.asarray(p, dtype=float)
        if x.shape != (self.dim,):
            raise DomainError(f"{self.label} expects a point with {self.dim} coordinates, got shape {x.shape}")
        if not self.contains(x):
            raise DomainError(f"Point {np.round(x, 6).tolist()} lies outside the {self.label} chart ({self.domain})")
        return x

    def metric_components(self, x: Sequence[Scalar]) -> List[List[Scalar]]:
        """Realified metric entries as plain arithmetic on floats or duals."""
        m, c = self.m, self.c
        s = sum(xi * xi for xi in x)
        denom = 1.0 + c * s
        denom_sq = denom * denom
        g: List[List[Scalar]] = [[0.0] * (2 * m) for _ in range(2 * m)]
        for j in range(m):
            for k in range(m):
                re = x[2 * j] * x[2 * k] + x[2 * j + 1] * x[2 * k + 1]
                im = x[2 * j] * x[2 * k + 1] - x[2 * j + 1] * x[2 * k]
                delta = 1.0 if j == k else 0.0
                a = dual.divide(denom * delta - c * re, denom_sq)
                b = dual.divide(-c * im, denom_sq)
                g[2 * j][2 * k] = a
                g[2 * j + 1][2 * k + 1] = a
                g[2 * j + 1][2 * k] = -b
                g[2 * j][2 * k + 1] = b
        return g


AmbientLike = Union[str, AmbientKind]


def make_ambient(kind: AmbientLike, m: int = 2) -> AmbientSpace:
    try:
        kind = AmbientKind(kind)
    except ValueError:
        known = ", ".join(k.value for k in AmbientKind)
        raise ValueError(f"Unknown ambient kind '{kind}'; expected one of: {known}") from None
    if int(m) != m or m < 2:
        raise ValueError(f"Complex dimension m must be an integer >= 2, got {m}")
    return AmbientSpace(kind=kind, m=int(m), c=CURVATURE_SIGN[kind])


def complex_structure(m: int) -> np.ndarray:
    """J(a, b, ...) = (−b, a, ...) on every complex coordinate pair."""
    j = np.zeros((2 * m, 2 * m))
    for k in range(m):
        j[2 * k + 1, 2 * k] = 1.0
        j[2 * k, 2 * k + 1] = -1.0
    return j


def _metric_array(ambient: AmbientSpace, x: np.ndarray) -> np.ndarray:
    return np.array(ambient.metric_components([float(v) for v in x]), dtype=float)


def metric_at(ambient: AmbientSpace, p: Sequence[float]) -> MetricMatrix:
    x = ambient.check_point(p)
    return MetricMatrix(_metric_array(ambient, x))


def metric_derivatives_at(ambient: AmbientSpace, p: Sequence[float]) -> np.ndarray:
    """``dg[c, a, b]``: exact first derivatives via dual numbers."""
    x = ambient.check_point(p)
    return _metric_derivatives(ambient, x)


def _metric_derivatives(ambient: AmbientSpace, x: np.ndarray) -> np.ndarray:
    d = ambient.dim

    def flat(args: Sequence[Scalar]) -> List[Scalar]:
        return [entry for row in ambient.metric_components(args) for entry in row]

    _, jac = dual.jet1(flat, x)
    return jac.T.reshape(d, d, d)


def complex_structure_at(ambient: AmbientSpace, p: Sequence[float]) -> np.ndarray:
    ambient.check_point(p)
    return complex_structure(ambient.m)


def _christoffel(ambient: AmbientSpace, x: np.ndarray) -> np.ndarray:
    g = _metric_array(ambient, x)
    return christoffel_from(inverse_spd(g), _metric_derivatives(ambient, x))


def christoffel_at(ambient: AmbientSpace, p: Sequence[float]) -> np.ndarray:
    return _christoffel(ambient, ambient.check_point(p))


def curvature_at(ambient: AmbientSpace, p: Sequence[float]) -> CurvatureData:
    x = ambient.check_point(p)
    g = _metric_array(ambient, x)
    if ambient.kind is AmbientKind.FLAT:
        d = ambient.dim
        zeros = np.zeros((d, d))
        return CurvatureData(
            riemann=np.zeros((d, d, d, d)),
            ricci=zeros,
            tau=0.0,
            rho_half=0.0,
            metric=g,
            christoffel=np.zeros((d, d, d)),
        )
    return curvature_data(x, g, inverse_spd(g), lambda y: _christoffel(ambient, y))


def nabla_j(ambient: AmbientSpace, p: Sequence[float]) -> np.ndarray:
    """``out[c, a, b]``: components of ∇_c J (J is constant in the chart)."""
    gamma = christoffel_at(ambient, p)
    j = complex_structure(ambient.m)
    return np.einsum("acd,db->cab", gamma, j) - np.einsum("ad,dcb->cab", j, gamma)


def einstein_residual(
    ambient: AmbientSpace, p: Sequence[float], curvature: Optional[CurvatureData] = None
) -> Tuple[float, float]:
    """Fitted λ = tau/2m and ‖Ric − λg‖∞."""
    curvature = curvature or curvature_at(ambient, p)
    lam = curvature.tau / ambient.dim
    return lam, float(np.max(np.abs(curvature.ricci - lam * curvature.metric)))


def sectional_curvature(ambient: AmbientSpace, p: Sequence[float], x: np.ndarray, y: np.ndarray) -> float:
    curvature = curvature_at(ambient, p)
    return sectional(curvature.riemann, curvature.metric, np.asarray(x, float), np.asarray(y, float))


def holomorphic_sectional_curvature(ambient: AmbientSpace, p: Sequence[float], x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return sectional_curvature(ambient, p, x, complex_structure(ambient.m) @ x)


def sample_points(
    ambient: AmbientSpace, rng: np.random.Generator, count: int, radius: float = 1.0
) -> List[np.ndarray]:
    """Uniform draws from the ball of ``radius`` (clipped inside the chart)."""
    if ambient.kind is AmbientKind.COMPLEX_HYPERBOLIC:
        radius = min(radius, 0.8)
    points = []
    for _ in range(count):
        direction = rng.normal(size=ambient.dim)
        direction /= np.linalg.norm(direction)
        r = radius * rng.uniform() ** (1.0 / ambient.dim)
        points.append(r * direction)
    return points


def kaehler_audit(
    ambient: AmbientSpace,
    sample: Sequence[Sequence[float]],
    exact_tol: float = 1e-12,
    tol: float = 1e-6,
) -> CheckReport:
    """Residuals of the Kaehler structure and of the curvature symmetries over a sample."""
    j = complex_structure(ambient.m)
    worst: Dict[str, float] = {
        "j_squared": float(np.max(np.abs(j @ j + np.eye(ambient.dim)))),
        "j_isometry": 0.0,
        "nabla_j": 0.0,
        "antisymmetry_12": 0.0,
        "antisymmetry_34": 0.0,
        "pair_swap": 0.0,
        "bianchi": 0.0,
        "j_invariance": 0.0,
    }
    for p in sample:
        g = metric_at(ambient, p).array
        worst["j_isometry"] = max(worst["j_isometry"], float(np.max(np.abs(j.T @ g @ j - g))))
        worst["nabla_j"] = max(worst["nabla_j"], float(np.max(np.abs(nabla_j(ambient, p)))))
        curvature = curvature_at(ambient, p)
        for name, value in symmetry_residuals(curvature.riemann).items():
            worst[name] = max(worst[name], value)
        rotated = np.einsum("pa,qb,pqkw->abkw", j, j, curvature.riemann)
        worst["j_invariance"] = max(worst["j_invariance"], float(np.max(np.abs(rotated - curvature.riemann))))

    report = CheckReport("ambient.kaehler")
    for name, value in worst.items():
        bound = exact_tol if name in ("j_squared", "j_isometry") else tol
        report.add(name, value, tolerance=bound)
    report.measure("points", len(sample))
    return report
