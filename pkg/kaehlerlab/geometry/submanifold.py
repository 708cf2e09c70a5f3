"""Immersed submanifolds of a model ambient.

Per-point data flow::

    geometry_at   φ, ∂φ, ∂²φ, ambient g/Γ, induced metric, projectors
    adapted_frame_at   Gram–Schmidt tangents + deterministic normal complement
    extrinsic_data_at  ω, H, shape operators, T/F split
    intrinsic_curvature_at  Levi-Civita of the induced metric, one FD layer

Frames are stored as matrices whose columns are ambient vectors.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError, NotOrthonormalError, PreconditionError, UnboundVariableError
from ..report import CheckReport
from ..utils import dual, expr
from ..utils.dual import ScalarMap
from ..utils.tensorlab import (
    ORTHONORMAL_TOLERANCE,
    check_orthonormal,
    fix_sign,
    gram_schmidt,
    inverse_spd,
    MetricMatrix,
    orthonormal_complement,
)
from .ambient import AmbientSpace, _christoffel, _metric_array, _metric_derivatives, complex_structure, curvature_at
from .curvature import CurvatureData, central_jacobian, christoffel_from, curvature_data, sectional

RANK_TOLERANCE = 1e-8
TANGENCY_TOLERANCE = 1e-8
CLASSIFY_TOLERANCE = 1e-6

Box = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True, eq=False)
class Immersion:
    ambient: AmbientSpace
    n: int
    mapping: ScalarMap
    variables: Tuple[str, ...]
    box: Box
    name: str = "custom"
    params: Dict[str, float] = field(default_factory=dict)
    sample_box: Optional[Box] = None
    log_warping: Optional[ScalarMap] = None
    components: Tuple[str, ...] = ()

    @property
    def sampling_box(self) -> Box:
        return self.sample_box or self.box

    @property
    def center(self) -> np.ndarray:
        return np.array([0.5 * (lo + hi) for lo, hi in self.sampling_box])

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        shown = ", ".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({shown})"

    def contains(self, u: Sequence[float]) -> bool:
        u = np.asarray(u, dtype=float)
        return u.shape == (self.n,) and all(lo <= ui <= hi for ui, (lo, hi) in zip(u, self.box))

    def check_point(self, u: Sequence[float]) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise DomainError(f"{self.label} expects {self.n} chart coordinates, got shape {u.shape}")
        if not self.contains(u):
            raise DomainError(f"Chart point {np.round(u, 6).tolist()} lies outside the box of {self.label}")
        return u

    def image(self, u: Sequence[float]) -> np.ndarray:
        return np.array([dual.real_part(c) for c in self.mapping([float(v) for v in u])])


def _validate(immersion: Immersion) -> Immersion:
    if immersion.n < 1:
        raise ValueError("Immersion needs at least one chart variable")
    if len(immersion.box) != immersion.n:
        raise ValueError(f"Chart box has {len(immersion.box)} ranges for {immersion.n} variables")
    for name, (lo, hi) in zip(immersion.variables, immersion.box):
        if not lo < hi:
            raise ValueError(f"Empty chart range for '{name}': [{lo}, {hi}]")
    center = immersion.center
    x = immersion.image(center)
    if x.shape != (immersion.ambient.dim,):
        raise ValueError(
            f"{immersion.label} has {x.shape[0]} components; ambient {immersion.ambient.label} needs {immersion.ambient.dim}"
        )
    immersion.ambient.check_point(x)
    _, jac = dual.jet1(immersion.mapping, center)
    gram_schmidt(list(jac.T), np.eye(immersion.ambient.dim), tol=RANK_TOLERANCE)
    return immersion


def make_immersion(
    ambient: AmbientSpace,
    builtin: Optional[str] = None,
    *,
    params: Optional[Dict[str, float]] = None,
    components: Optional[Sequence[str]] = None,
    variables: Optional[Sequence[str]] = None,
    box: Optional[Sequence[Sequence[float]]] = None,
) -> Immersion:
    """Build a validated immersion from a builtin fixture or component expressions.

    Expression immersions take their chart variables from ``variables``
    (default: the sorted free variables) and their chart box from ``box``
    (default: [-1, 1] per variable).
    """
    if builtin is not None and components is not None:
        raise ValueError("Give either a builtin fixture or component expressions, not both")
    if builtin is not None:
        from .fixtures import build_fixture

        return _validate(build_fixture(builtin, ambient, params or {}, box))
    if components is None:
        raise ValueError("An immersion needs a builtin name or a list of components")

    trees = expr.parse_components(list(components))
    free = set().union(*(expr.variables(t) for t in trees)) if trees else set()
    names = tuple(variables) if variables is not None else tuple(sorted(free))
    for name in sorted(free - set(names)):
        raise UnboundVariableError(name)
    chart = tuple((float(lo), float(hi)) for lo, hi in box) if box is not None else tuple((-1.0, 1.0) for _ in names)
    immersion = Immersion(
        ambient=ambient,
        n=len(names),
        mapping=expr.component_map(trees, names),
        variables=names,
        box=chart,
        name="expr",
        components=tuple(components),
    )
    return _validate(immersion)


@dataclass(frozen=True)
class PointGeometry:
    u: np.ndarray
    x: np.ndarray
    jac: np.ndarray
    hess: np.ndarray
    metric: np.ndarray
    dmetric: np.ndarray
    inverse: np.ndarray
    christoffel: np.ndarray
    j: np.ndarray
    induced: np.ndarray
    induced_inverse: np.ndarray
    tangent_projector: np.ndarray

    @property
    def normal_projector(self) -> np.ndarray:
        return np.eye(self.x.shape[0]) - self.tangent_projector

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Chart coefficients of a tangent vector."""
        return self.induced_inverse @ (self.jac.T @ (self.metric @ v))

    def ambient_connection(self) -> np.ndarray:
        """``out[a, i, j]``: ∇̄ of ∂jφ along ∂iφ."""
        return self.hess + np.einsum("abc,bi,cj->aij", self.christoffel, self.jac, self.jac)

    def normal_second_derivatives(self) -> np.ndarray:
        return np.einsum("ab,bij->aij", self.normal_projector, self.ambient_connection())

    def induced_derivatives(self) -> np.ndarray:
        """``dh[k, i, j]``: exact chart derivatives of the induced metric."""
        return (
            np.einsum("abc,ak,bi,cj->kij", self.dmetric, self.jac, self.jac, self.jac)
            + np.einsum("bki,bc,cj->kij", self.hess, self.metric, self.jac)
            + np.einsum("bi,bc,ckj->kij", self.jac, self.metric, self.hess)
        )


def _geometry(immersion: Immersion, u: np.ndarray) -> PointGeometry:
    ambient = immersion.ambient
    value, jac, hess = dual.jet2(immersion.mapping, u)
    x = ambient.check_point(value)
    g = _metric_array(ambient, x)
    ginv = inverse_spd(g)
    induced = jac.T @ g @ jac
    induced = 0.5 * (induced + induced.T)
    induced_inverse = inverse_spd(induced)
    return PointGeometry(
        u=np.asarray(u, dtype=float),
        x=x,
        jac=jac,
        hess=hess,
        metric=g,
        dmetric=_metric_derivatives(ambient, x),
        inverse=ginv,
        christoffel=_christoffel(ambient, x),
        j=complex_structure(ambient.m),
        induced=induced,
        induced_inverse=induced_inverse,
        tangent_projector=jac @ induced_inverse @ jac.T @ g,
    )


def geometry_at(immersion: Immersion, u: Sequence[float]) -> PointGeometry:
    return _geometry(immersion, immersion.check_point(u))


def induced_metric_at(immersion: Immersion, u: Sequence[float]) -> MetricMatrix:
    geom = geometry_at(immersion, u)
    gram_schmidt(list(geom.jac.T), geom.metric, tol=RANK_TOLERANCE)
    return MetricMatrix(geom.induced)


@dataclass(frozen=True)
class AdaptedFrame:
    u: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    metric: np.ndarray

    @property
    def n(self) -> int:
        return self.tangent.shape[1]

    @property
    def codim(self) -> int:
        return self.normal.shape[1]

    @property
    def full(self) -> np.ndarray:
        return np.hstack([self.tangent, self.normal])


def adapted_frame_at(
    immersion: Immersion, u: Sequence[float], geometry: Optional[PointGeometry] = None
) -> AdaptedFrame:
    geom = geometry or geometry_at(immersion, u)
    tangent = gram_schmidt(list(geom.jac.T), geom.metric, tol=RANK_TOLERANCE)
    normal = [fix_sign(v) for v in orthonormal_complement(tangent, geom.metric)]
    d = geom.x.shape[0]
    full = tangent + normal
    check_orthonormal(full, geom.metric, ORTHONORMAL_TOLERANCE)
    return AdaptedFrame(
        u=geom.u,
        tangent=np.column_stack(tangent),
        normal=np.column_stack(normal) if normal else np.zeros((d, 0)),
        metric=geom.metric,
    )


def remix_frame(frame: AdaptedFrame, q: np.ndarray, normal_q: Optional[np.ndarray] = None) -> AdaptedFrame:
    """Rotate the tangent (and optionally normal) frame by orthogonal matrices."""
    for label, mix, size in (("tangent", q, frame.n), ("normal", normal_q, frame.codim)):
        if mix is None:
            continue
        mix = np.asarray(mix, dtype=float)
        if mix.shape != (size, size) or np.max(np.abs(mix.T @ mix - np.eye(size)), initial=0.0) > 1e-10:
            raise NotOrthonormalError(f"{label} mixing matrix is not orthogonal")
    return AdaptedFrame(
        u=frame.u,
        tangent=frame.tangent @ np.asarray(q, dtype=float),
        normal=frame.normal if normal_q is None else frame.normal @ np.asarray(normal_q, dtype=float),
        metric=frame.metric,
    )


@dataclass(frozen=True)
class ExtrinsicData:
    frame: AdaptedFrame
    coefficients: np.ndarray  # tangent = jac @ coefficients
    omega: np.ndarray  # omega[r, i, j]
    mean_curvature: np.ndarray  # normal-frame components of H
    mean_curvature_vector: np.ndarray
    h_norm: float
    omega_norm_sq: float
    t_matrix: np.ndarray  # g(J e_i, e_j)
    t_norm_sq: float
    f_matrix: np.ndarray  # g(J e_i, ν_r)

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def h_norm_sq(self) -> float:
        return self.h_norm * self.h_norm

    @property
    def shape_operators(self) -> np.ndarray:
        """B_r in the tangent frame; g(B_r e_i, e_j) = ω^r_ij."""
        return self.omega

    @property
    def f_vectors(self) -> np.ndarray:
        """Columns are the normal parts F e_i as ambient vectors."""
        return self.frame.normal @ self.f_matrix.T

    def shape_operator(self, v: np.ndarray) -> np.ndarray:
        """B_V for V given by its normal-frame components."""
        return np.einsum("r,rij->ij", np.asarray(v, dtype=float), self.omega)

    def second_form(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Normal-frame components of ω(X, Y) for tangent-frame coefficient vectors."""
        return np.einsum("rij,i,j->r", self.omega, a, b)


def extrinsic_data_at(
    immersion: Immersion,
    u: Sequence[float],
    frame: Optional[AdaptedFrame] = None,
    geometry: Optional[PointGeometry] = None,
) -> ExtrinsicData:
    geom = geometry or geometry_at(immersion, u)
    frame = frame or adapted_frame_at(immersion, u, geom)
    g, e, nu = geom.metric, frame.tangent, frame.normal
    coefficients = geom.induced_inverse @ geom.jac.T @ g @ e
    omega_coord = np.einsum("ar,ab,bkl->rkl", nu, g, geom.ambient_connection())
    omega = np.einsum("rkl,ki,lj->rij", omega_coord, coefficients, coefficients)
    n = frame.n
    mean = np.einsum("rii->r", omega) / n
    je = geom.j @ e
    t_matrix = je.T @ g @ e
    f_matrix = je.T @ g @ nu
    return ExtrinsicData(
        frame=frame,
        coefficients=coefficients,
        omega=omega,
        mean_curvature=mean,
        mean_curvature_vector=nu @ mean,
        h_norm=float(np.linalg.norm(mean)),
        omega_norm_sq=float(np.sum(omega * omega)),
        t_matrix=t_matrix,
        t_norm_sq=float(np.sum(t_matrix * t_matrix)),
        f_matrix=f_matrix,
    )


def extrinsic_audit(
    immersion: Immersion,
    u: Sequence[float],
    rng: np.random.Generator,
    tol: float = 1e-8,
    weingarten_tol: float = 1e-6,
) -> CheckReport:
    """Invariants of the extrinsic data at one point, plus a Weingarten cross-check."""
    geom = geometry_at(immersion, u)
    data = extrinsic_data_at(immersion, u, geometry=geom)
    report = CheckReport("submanifold.extrinsic")
    omega = data.omega
    report.add("omega_symmetry", np.max(np.abs(omega - np.einsum("rji->rij", omega)), initial=0.0), tolerance=tol)
    report.add("t_antisymmetry", np.max(np.abs(data.t_matrix + data.t_matrix.T)), tolerance=1e-9)
    report.add("t_norm_range", max(0.0, -data.t_norm_sq, data.t_norm_sq - data.n), tolerance=tol)
    worst = 0.0
    for _ in range(4):
        if data.frame.codim == 0:
            break
        v = rng.normal(size=data.frame.codim)
        a, b = rng.normal(size=data.n), rng.normal(size=data.n)
        lhs = float(data.second_form(a, b) @ v)
        rhs = float(a @ data.shape_operator(v) @ b)
        worst = max(worst, abs(lhs - rhs))
    report.add("shape_operator_duality", worst, tolerance=1e-9)
    report.add("weingarten", weingarten_residual_at(immersion, u, geom, data), tolerance=weingarten_tol)
    report.measure("h_norm", data.h_norm)
    report.measure("omega_norm_sq", data.omega_norm_sq)
    report.measure("t_norm_sq", data.t_norm_sq)
    return report


def _normal_projector(immersion: Immersion, u: np.ndarray) -> np.ndarray:
    return _geometry(immersion, u).normal_projector


def weingarten_residual_at(
    immersion: Immersion,
    u: Sequence[float],
    geometry: Optional[PointGeometry] = None,
    data: Optional[ExtrinsicData] = None,
) -> float:
    """Compare ω with shape operators from −(∇̄_X V)^T of normal-projected fields."""
    geom = geometry or geometry_at(immersion, u)
    data = data or extrinsic_data_at(immersion, u, geometry=geom)
    if data.frame.codim == 0:
        return 0.0
    dproj = central_jacobian(lambda v: _normal_projector(immersion, v), geom.u)
    worst = 0.0
    for r in range(data.frame.codim):
        nu = data.frame.normal[:, r]
        dv = np.einsum("cab,b->ac", dproj, nu)
        nabla_v = dv + np.einsum("abc,bk,c->ak", geom.christoffel, geom.jac, nu)
        shape_coord = -geom.jac.T @ geom.metric @ nabla_v
        shape_frame = data.coefficients.T @ shape_coord.T @ data.coefficients
        worst = max(worst, float(np.max(np.abs(shape_frame - data.omega[r]))))
    return worst


class SubmanifoldKind(str, Enum):
    INVARIANT = "invariant"
    ANTI_INVARIANT = "anti_invariant"
    SLANT = "slant"
    CR = "CR"
    GENERIC = "generic"


@dataclass(frozen=True)
class Classification:
    kind: SubmanifoldKind
    theta: Optional[float]
    theta_std: float
    max_tx: float
    max_fx: float
    spectrum: Tuple[float, ...]

    @property
    def label(self) -> str:
        if self.kind is SubmanifoldKind.SLANT:
            return f"slant({self.theta:.6f})"
        return self.kind.value

    @property
    def slant_angle(self) -> Optional[float]:
        """θ for the slant family: 0 invariant, π/2 anti-invariant."""
        if self.kind is SubmanifoldKind.INVARIANT:
            return 0.0
        if self.kind is SubmanifoldKind.ANTI_INVARIANT:
            return math.pi / 2
        return self.theta if self.kind is SubmanifoldKind.SLANT else None


def classify(
    immersion: Immersion,
    points: Sequence[Sequence[float]],
    k: int = 8,
    rng: Optional[np.random.Generator] = None,
    tol: float = CLASSIFY_TOLERANCE,
) -> Classification:
    if k < 8:
        raise ValueError(f"classify needs at least 8 tangent samples per point, got {k}")
    rng = rng or np.random.default_rng(0)
    thetas: List[float] = []
    max_tx = max_fx = 0.0
    spectra: List[float] = []
    cr_everywhere = True
    for u in points:
        data = extrinsic_data_at(immersion, u)
        t, f = data.t_matrix, data.f_matrix
        eig = np.linalg.eigvalsh(t.T @ t)
        spectra.extend(float(v) for v in eig)
        near_one = np.abs(eig - 1.0) <= tol
        near_zero = np.abs(eig) <= tol
        if not (np.all(near_one | near_zero) and near_one.any() and near_zero.any()):
            cr_everywhere = False
        for _ in range(k):
            a = rng.normal(size=data.n)
            a /= np.linalg.norm(a)
            tx = float(np.linalg.norm(a @ t))
            fx = float(np.linalg.norm(a @ f)) if f.size else 0.0
            max_tx, max_fx = max(max_tx, tx), max(max_fx, fx)
            thetas.append(math.acos(min(1.0, max(0.0, tx))))
    theta_bar = float(np.mean(thetas)) if thetas else 0.0
    theta_std = float(np.std(thetas)) if thetas else 0.0
    spectrum = tuple(sorted(set(round(v, 9) for v in spectra)))
    if max_fx <= tol:
        kind, theta = SubmanifoldKind.INVARIANT, 0.0
    elif max_tx <= tol:
        kind, theta = SubmanifoldKind.ANTI_INVARIANT, math.pi / 2
    elif theta_std <= tol and 0.0 < theta_bar < math.pi / 2:
        kind, theta = SubmanifoldKind.SLANT, theta_bar
    elif cr_everywhere and points:
        kind, theta = SubmanifoldKind.CR, None
    else:
        kind, theta = SubmanifoldKind.GENERIC, None
    return Classification(kind, theta, theta_std, max_tx, max_fx, spectrum)


def _intrinsic_christoffel(immersion: Immersion, u: np.ndarray) -> np.ndarray:
    geom = _geometry(immersion, u)
    return christoffel_from(geom.induced_inverse, geom.induced_derivatives())


def intrinsic_christoffel_at(immersion: Immersion, u: Sequence[float]) -> np.ndarray:
    return _intrinsic_christoffel(immersion, immersion.check_point(u))


Plane = Union[Tuple[int, int], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class IntrinsicCurvature:
    coordinate: CurvatureData
    riemann_frame: np.ndarray
    ricci_frame: np.ndarray
    rho: float
    k_plane: float
    plane: Tuple[np.ndarray, np.ndarray]

    @property
    def tau(self) -> float:
        return 2.0 * self.rho

    def sectional(self, a: np.ndarray, b: np.ndarray) -> float:
        return sectional(self.riemann_frame, np.eye(self.riemann_frame.shape[0]), a, b)


def frame_coefficients(geom: PointGeometry, frame: AdaptedFrame, v: np.ndarray, label: str = "vector") -> np.ndarray:
    """Tangent-frame coefficients of an ambient vector, which must be tangent."""
    v = np.asarray(v, dtype=float)
    off = geom.normal_projector @ v
    size = math.sqrt(max(float(v @ geom.metric @ v), 0.0))
    leak = math.sqrt(max(float(off @ geom.metric @ off), 0.0))
    if leak > TANGENCY_TOLERANCE * max(1.0, size):
        raise PreconditionError(f"{label} is not tangent to the submanifold", leak)
    return frame.tangent.T @ geom.metric @ v


def plane_coefficients(
    plane: Optional[Plane], geom: PointGeometry, frame: AdaptedFrame
) -> Tuple[np.ndarray, np.ndarray]:
    n = frame.n
    if n < 2:
        raise ValueError("Degenerate plane: a plane section needs n >= 2")
    if plane is None:
        plane = (0, 1)
    first, second = plane
    if isinstance(first, (int, np.integer)) and isinstance(second, (int, np.integer)):
        if first == second or not (0 <= first < n and 0 <= second < n):
            raise ValueError(f"Degenerate plane: frame indices {plane} for n = {n}")
        a, b = np.zeros(n), np.zeros(n)
        a[first], b[second] = 1.0, 1.0
        return a, b
    a = frame_coefficients(geom, frame, first, "plane vector 1")
    b = frame_coefficients(geom, frame, second, "plane vector 2")
    return a, b


def intrinsic_curvature_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    frame: Optional[AdaptedFrame] = None,
    geometry: Optional[PointGeometry] = None,
) -> IntrinsicCurvature:
    geom = geometry or geometry_at(immersion, u)
    frame = frame or adapted_frame_at(immersion, u, geom)
    coordinate = curvature_data(
        geom.u, geom.induced, geom.induced_inverse, lambda v: _intrinsic_christoffel(immersion, v)
    )
    c = geom.induced_inverse @ geom.jac.T @ geom.metric @ frame.tangent
    riemann_frame = np.einsum("ijkl,ia,jb,kc,ld->abcd", coordinate.riemann, c, c, c, c)
    ricci_frame = np.einsum("cabc->ab", riemann_frame)
    n = frame.n
    rho = float(sum(riemann_frame[i, j, j, i] for i in range(n) for j in range(i + 1, n)))
    if n >= 2:
        a, b = plane_coefficients(plane, geom, frame)
        k_plane = sectional(riemann_frame, np.eye(n), a, b)
    else:
        a = b = np.zeros(n)
        k_plane = 0.0
    return IntrinsicCurvature(
        coordinate=coordinate,
        riemann_frame=riemann_frame,
        ricci_frame=0.5 * (ricci_frame + ricci_frame.T),
        rho=rho,
        k_plane=k_plane,
        plane=(a, b),
    )


def ambient_curvature_in_frame(curvature: CurvatureData, frame: AdaptedFrame) -> np.ndarray:
    e = frame.tangent
    return np.einsum("pqrs,pa,qb,rc,sd->abcd", curvature.riemann, e, e, e, e)


@dataclass(frozen=True)
class PointBundle:
    """Everything the curvature identities need at one chart point."""

    geometry: PointGeometry
    frame: AdaptedFrame
    extrinsic: ExtrinsicData
    intrinsic: IntrinsicCurvature
    ambient_curvature: CurvatureData


def point_bundle(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    frame: Optional[AdaptedFrame] = None,
) -> PointBundle:
    geom = geometry_at(immersion, u)
    frame = frame or adapted_frame_at(immersion, u, geom)
    return PointBundle(
        geometry=geom,
        frame=frame,
        extrinsic=extrinsic_data_at(immersion, u, frame, geom),
        intrinsic=intrinsic_curvature_at(immersion, u, plane, frame, geom),
        ambient_curvature=curvature_at(immersion.ambient, geom.x),
    )


def gauss_tensor(bundle: PointBundle) -> np.ndarray:
    """Frame components of R − R̄ − g(ω(X,W),ω(Y,Z)) + g(ω(X,Z),ω(Y,W))."""
    omega = bundle.extrinsic.omega
    return (
        bundle.intrinsic.riemann_frame
        - ambient_curvature_in_frame(bundle.ambient_curvature, bundle.frame)
        - np.einsum("rad,rbc->abcd", omega, omega)
        + np.einsum("rac,rbd->abcd", omega, omega)
    )


def gauss_tensor_residual(immersion: Immersion, u: Sequence[float], bundle: Optional[PointBundle] = None) -> float:
    bundle = bundle or point_bundle(immersion, u)
    return float(np.max(np.abs(gauss_tensor(bundle))))


def gauss_residual_at(
    immersion: Immersion,
    u: Sequence[float],
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    w: np.ndarray,
    bundle: Optional[PointBundle] = None,
) -> float:
    bundle = bundle or point_bundle(immersion, u)
    geom, frame = bundle.geometry, bundle.frame
    coeffs = [frame_coefficients(geom, frame, v, label) for v, label in zip((x, y, z, w), "XYZW")]
    return abs(float(np.einsum("abcd,a,b,c,d->", gauss_tensor(bundle), *coeffs)))


def _normal_second_derivatives(immersion: Immersion, u: np.ndarray) -> np.ndarray:
    return _geometry(immersion, u).normal_second_derivatives()


def codazzi_tensor(immersion: Immersion, u: Sequence[float], bundle: Optional[PointBundle] = None) -> np.ndarray:
    """``res[a, c, k, l]``: Codazzi defect for coordinate fields X=∂c, Y=∂k, Z=∂l."""
    bundle = bundle or point_bundle(immersion, u)
    geom = bundle.geometry
    nproj = geom.normal_projector
    omega = geom.normal_second_derivatives()
    domega = central_jacobian(lambda v: _normal_second_derivatives(immersion, v), geom.u)
    nabla = np.einsum("cakl->ackl", domega) + np.einsum("abe,bc,ekl->ackl", geom.christoffel, geom.jac, omega)
    normal_part = np.einsum("ab,bckl->ackl", nproj, nabla)
    gamma_int = bundle.intrinsic.coordinate.christoffel
    covariant = (
        normal_part
        - np.einsum("pck,apl->ackl", gamma_int, omega)
        - np.einsum("pcl,akp->ackl", gamma_int, omega)
    )
    rbar = np.einsum("pqrb,pc,qk,rl->cklb", bundle.ambient_curvature.riemann, geom.jac, geom.jac, geom.jac)
    lhs = np.einsum("ab,bc,klmc->aklm", nproj, geom.inverse, rbar)
    return lhs - (covariant - np.einsum("akcl->ackl", covariant))


def codazzi_tensor_residual(immersion: Immersion, u: Sequence[float], bundle: Optional[PointBundle] = None) -> float:
    bundle = bundle or point_bundle(immersion, u)
    res = codazzi_tensor(immersion, u, bundle)
    c = bundle.extrinsic.coefficients
    frame_res = np.einsum("ackl,ci,kj,lo->aijo", res, c, c, c)
    norms = np.einsum("aijo,ab,bijo->ijo", frame_res, bundle.geometry.metric, frame_res)
    return float(np.sqrt(np.max(np.abs(norms))))


def codazzi_residual_at(
    immersion: Immersion,
    u: Sequence[float],
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    bundle: Optional[PointBundle] = None,
) -> float:
    bundle = bundle or point_bundle(immersion, u)
    geom, frame = bundle.geometry, bundle.frame
    for v, label in zip((x, y, z), "XYZ"):
        frame_coefficients(geom, frame, v, label)
    xc, yc, zc = (geom.coordinates(np.asarray(v, dtype=float)) for v in (x, y, z))
    vec = np.einsum("ackl,c,k,l->a", codazzi_tensor(immersion, u, bundle), xc, yc, zc)
    return math.sqrt(max(float(vec @ geom.metric @ vec), 0.0))
