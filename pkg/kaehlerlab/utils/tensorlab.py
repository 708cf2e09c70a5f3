"""Small dense linear algebra: metric-orthonormal frames, complements and SPD solves.

Frames are passed around as sequences of 1-D arrays; helpers that need a
matrix stack them as columns.
"""

from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from ..errors import NotOrthonormalError, NotPositiveDefiniteError, RankDeficiencyError

# Shared by every frame builder in the package.
PIVOT_TOLERANCE = 1e-10
ORTHONORMAL_TOLERANCE = 1e-8
SYMMETRY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    """Symmetric positive-definite bilinear form on R^d."""

    array: np.ndarray

    def __post_init__(self):
        a = np.array(self.array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotPositiveDefiniteError(f"Metric must be square, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
        if asym > SYMMETRY_TOLERANCE * scale:
            raise NotPositiveDefiniteError(f"Metric is not symmetric (residual {asym:.3e})")
        if a.size and float(np.min(np.linalg.eigvalsh(a))) <= 0.0:
            raise NotPositiveDefiniteError("Metric has a non-positive eigenvalue")
        a.setflags(write=False)
        object.__setattr__(self, "array", a)

    @classmethod
    def identity(cls, dim: int) -> "MetricMatrix":
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x) @ self.array @ np.asarray(y))

    def norm(self, x: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))


MetricLike = Union[MetricMatrix, np.ndarray]


def as_metric(g: MetricLike) -> MetricMatrix:
    return g if isinstance(g, MetricMatrix) else MetricMatrix(np.asarray(g, dtype=float))


def gram(vectors: Sequence[np.ndarray], g: MetricLike) -> np.ndarray:
    """Matrix of pairwise inner products g(v_i, v_j)."""
    g = as_metric(g)
    if len(vectors) == 0:
        return np.zeros((0, 0))
    stacked = np.column_stack(vectors)
    return stacked.T @ g.array @ stacked


def gram_schmidt(
    vectors: Sequence[np.ndarray], g: MetricLike, tol: float = PIVOT_TOLERANCE
) -> List[np.ndarray]:
    """Modified Gram–Schmidt with one re-orthogonalization pass.

    Raises :class:`RankDeficiencyError` naming the first vector whose residual
    after projection falls below ``tol`` relative to its own length.
    """
    g = as_metric(g)
    basis: List[np.ndarray] = []
    for index, vector in enumerate(vectors):
        v = np.array(vector, dtype=float)
        original = g.norm(v)
        for _ in range(2):
            for e in basis:
                v = v - g.inner(e, v) * e
        length = g.norm(v)
        if original == 0.0 or length <= tol * original:
            raise RankDeficiencyError(index)
        basis.append(v / length)
    return basis


def check_orthonormal(vectors: Sequence[np.ndarray], g: MetricLike, tol: float = ORTHONORMAL_TOLERANCE) -> float:
    """Largest deviation of the Gram matrix from the identity; raises above ``tol``."""
    deviation = 0.0
    if len(vectors):
        deviation = float(np.max(np.abs(gram(vectors, g) - np.eye(len(vectors)))))
    if deviation > tol:
        raise NotOrthonormalError(f"Frame is not orthonormal (Gram residual {deviation:.3e})")
    return deviation


def orthonormal_complement(
    basis: Sequence[np.ndarray], g: MetricLike, tol: float = ORTHONORMAL_TOLERANCE
) -> List[np.ndarray]:
    """Complete an orthonormal set to a full g-orthonormal frame.

    Candidates are the standard basis vectors; at each step the candidate
    with the largest residual after projection is taken (lowest index on
    ties), so the result is deterministic.
    """
    g = as_metric(g)
    check_orthonormal(basis, g, tol)
    d = g.dim
    frame = [np.array(b, dtype=float) for b in basis]
    added: List[np.ndarray] = []
    remaining = list(range(d))
    while len(frame) < d:
        best_index, best_vector, best_length = -1, None, -1.0
        for k in remaining:
            v = np.zeros(d)
            v[k] = 1.0
            for _ in range(2):
                for e in frame:
                    v = v - g.inner(e, v) * e
            length = g.norm(v)
            if length > best_length:
                best_index, best_vector, best_length = k, v, length
        if best_length <= PIVOT_TOLERANCE:
            raise RankDeficiencyError(len(frame), "Could not extend frame: candidates exhausted")
        remaining.remove(best_index)
        unit = best_vector / best_length
        frame.append(unit)
        added.append(unit)
    return added


def solve_spd(a: MetricLike, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` by Cholesky; ``b`` may be a vector or a matrix of columns."""
    matrix = a.array if isinstance(a, MetricMatrix) else np.asarray(a, dtype=float)
    try:
        lower = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {exc}") from None
    y = np.linalg.solve(lower, np.asarray(b, dtype=float))
    return np.linalg.solve(lower.T, y)


def inverse_spd(a: MetricLike) -> np.ndarray:
    matrix = a.array if isinstance(a, MetricMatrix) else np.asarray(a, dtype=float)
    inv = solve_spd(matrix, np.eye(matrix.shape[0]))
    return 0.5 * (inv + inv.T)


def project(frame: Sequence[np.ndarray], g: MetricLike, v: np.ndarray) -> np.ndarray:
    """g-orthogonal projection of ``v`` onto the span of an orthonormal frame."""
    g = as_metric(g)
    out = np.zeros_like(np.asarray(v, dtype=float))
    for e in frame:
        out = out + g.inner(e, v) * e
    return out


def fix_sign(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip ``v`` so that its first non-negligible component is positive."""
    v = np.asarray(v, dtype=float)
    for component in v:
        if abs(component) > tol:
            return v if component > 0 else -v
    return v
