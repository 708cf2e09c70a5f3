"""CR-warped products: distribution split, warping law, P/Q tensors and the warped inequalities."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import NotCRError, PreconditionError
from ..report import CheckReport
from ..utils import dual
from ..utils.tensorlab import fix_sign, gram_schmidt, orthonormal_complement
from .ambient import nabla_j
from .submanifold import (
    AdaptedFrame,
    ExtrinsicData,
    Immersion,
    PointGeometry,
    adapted_frame_at,
    extrinsic_data_at,
    geometry_at,
    intrinsic_christoffel_at,
    intrinsic_curvature_at,
)

SPLIT_TOLERANCE = 1e-6
MEMBERSHIP_TOLERANCE = 1e-8
THM4_CAVEAT = (
    "hypotheses of the compact dichotomy (compactness, shape-operator condition) NOT verified; "
    "integral argument out of scope"
)


@dataclass(frozen=True)
class DistributionSplit:
    u: np.ndarray
    d_frame: np.ndarray
    dperp_frame: np.ndarray
    jdperp_frame: np.ndarray
    nu_frame: np.ndarray
    d_coefficients: np.ndarray
    dperp_coefficients: np.ndarray
    spectrum: Tuple[float, ...]
    d_residual: float
    dperp_residual: float
    notes: Tuple[str, ...] = ()

    @property
    def p(self) -> int:
        return self.d_frame.shape[1] // 2

    @property
    def q(self) -> int:
        return self.dperp_frame.shape[1]

    @property
    def n(self) -> int:
        return 2 * self.p + self.q

    @property
    def basis(self) -> np.ndarray:
        """Tangent-frame coefficients of the split frame, D first."""
        return np.hstack([self.d_coefficients, self.dperp_coefficients])


class _SplitContext(NamedTuple):
    geometry: PointGeometry
    frame: AdaptedFrame
    extrinsic: ExtrinsicData
    split: DistributionSplit


def _split(immersion: Immersion, u: Sequence[float], tol: float = SPLIT_TOLERANCE) -> _SplitContext:
    geom = geometry_at(immersion, u)
    frame = adapted_frame_at(immersion, u, geom)
    data = extrinsic_data_at(immersion, u, frame, geom)
    t = data.t_matrix
    values, vectors = np.linalg.eigh(t @ t.T)
    spectrum = tuple(float(v) for v in values)
    ones = np.abs(values - 1.0) <= tol
    zeros = np.abs(values) <= tol
    if not np.all(ones | zeros) or int(np.sum(ones)) % 2:
        raise NotCRError(spectrum)
    d_coeff, dperp_coeff = vectors[:, ones], vectors[:, zeros]
    g, j = geom.metric, geom.j
    d_frame = frame.tangent @ d_coeff
    dperp_frame = frame.tangent @ dperp_coeff
    raw_jdperp = j @ dperp_frame
    normal_parts = geom.normal_projector @ raw_jdperp
    jd_list = gram_schmidt([normal_parts[:, k] for k in range(normal_parts.shape[1])], g)
    jdperp = np.column_stack(jd_list) if jd_list else np.zeros((geom.x.shape[0], 0))
    span = [frame.tangent[:, k] for k in range(frame.n)] + jd_list
    nu = [fix_sign(v) for v in orthonormal_complement(span, g)]

    d_residual = 0.0
    if d_frame.size:
        proj = d_frame @ d_frame.T @ g
        jd = j @ d_frame
        d_residual = float(np.max(np.abs(jd - proj @ jd)))
    dperp_residual = float(np.max(np.abs(geom.tangent_projector @ raw_jdperp), initial=0.0))

    notes: List[str] = []
    if dperp_frame.shape[1] == 0:
        notes.append("degenerate CR: q = 0 (invariant)")
    if d_frame.shape[1] == 0:
        notes.append("degenerate CR: 2p = 0 (anti-invariant)")
    split = DistributionSplit(
        u=geom.u,
        d_frame=d_frame,
        dperp_frame=dperp_frame,
        jdperp_frame=jdperp,
        nu_frame=np.column_stack(nu) if nu else np.zeros((geom.x.shape[0], 0)),
        d_coefficients=d_coeff,
        dperp_coefficients=dperp_coeff,
        spectrum=spectrum,
        d_residual=d_residual,
        dperp_residual=dperp_residual,
        notes=tuple(notes),
    )
    return _SplitContext(geom, frame, data, split)


def split_distributions_at(immersion: Immersion, u: Sequence[float], tol: float = SPLIT_TOLERANCE) -> DistributionSplit:
    return _split(immersion, u, tol).split


def split_report(immersion: Immersion, u: Sequence[float], tol: float = 1e-8) -> CheckReport:
    split = split_distributions_at(immersion, u)
    report = CheckReport("crwarp.split")
    report.add("d_j_invariance", split.d_residual, tolerance=tol)
    report.add("jdperp_normal", split.dperp_residual, tolerance=tol)
    report.measure("p", split.p)
    report.measure("q", split.q)
    report.measure("spectrum", list(split.spectrum))
    for message in split.notes:
        report.note(message)
    return report


class PQ(NamedTuple):
    P: np.ndarray
    Q: np.ndarray


def _pq(geom: PointGeometry, nj: np.ndarray, x: np.ndarray, y: np.ndarray) -> PQ:
    vec = np.einsum("cab,c,b->a", nj, x, y)
    tangent = geom.tangent_projector @ vec
    return PQ(P=tangent, Q=vec - tangent)


def pq_tensors_at(immersion: Immersion, u: Sequence[float], x: np.ndarray, y: np.ndarray) -> PQ:
    """Tangent and normal parts of (∇̄_X J)Y."""
    geom = geometry_at(immersion, u)
    for v, label in ((x, "X"), (y, "Y")):
        off = geom.normal_projector @ np.asarray(v, dtype=float)
        leak = math.sqrt(max(float(off @ geom.metric @ off), 0.0))
        if leak > MEMBERSHIP_TOLERANCE * max(1.0, float(np.linalg.norm(v))):
            raise PreconditionError(f"{label} is not tangent to the submanifold", leak)
    return _pq(geom, nabla_j(immersion.ambient, geom.x), np.asarray(x, float), np.asarray(y, float))


@dataclass
class WarpData:
    f: Optional[float]
    log_f_derivatives: np.ndarray
    log_f_analytic: Optional[np.ndarray]
    grad_norm_sq: float
    laplacian: Optional[float]
    p_norm_sq: float
    p_outside_d: float
    q_norm: float
    omega_jdperp: np.ndarray
    omega_nu: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)


def _connection(gamma_int: np.ndarray, xc: np.ndarray, zc: np.ndarray) -> np.ndarray:
    return np.einsum("kij,i,j->k", gamma_int, xc, zc)


def warp_data_at(immersion: Immersion, u: Sequence[float], context: Optional[_SplitContext] = None) -> WarpData:
    """Warping data along the D frame with D⊥ directions extended as constant chart fields."""
    context = context or _split(immersion, u)
    geom, frame, data, split = context
    gamma_int = intrinsic_christoffel_at(immersion, u)
    h = geom.induced
    d_chart = [geom.coordinates(split.d_frame[:, k]) for k in range(split.d_frame.shape[1])]
    z_chart = [geom.coordinates(split.dperp_frame[:, k]) for k in range(split.q)]

    derivatives = np.zeros(len(d_chart))
    worst = 0.0
    for i, xc in enumerate(d_chart):
        per_z = []
        for zc in z_chart:
            nabla = _connection(gamma_int, xc, zc)
            rate = float(nabla @ h @ zc) / float(zc @ h @ zc)
            per_z.append(rate)
            defect = nabla - rate * zc
            worst = max(worst, math.sqrt(max(float(defect @ h @ defect), 0.0)))
        if per_z:
            derivatives[i] = per_z[0]
            worst = max(worst, max(per_z) - min(per_z))

    analytic = laplacian = f = None
    if immersion.log_warping is not None:
        value, grad, hess = dual.jet2(immersion.log_warping, geom.u)
        f = math.exp(float(value[0]))
        analytic = np.array([float(grad[0] @ xc) for xc in d_chart])
        laplacian = float(
            sum(xc @ hess[0] @ xc - grad[0] @ _connection(gamma_int, xc, xc) for xc in d_chart)
        )

    nj = nabla_j(immersion.ambient, geom.x)
    p_sq = p_out = q_norm = 0.0
    d_proj = split.d_frame @ split.d_frame.T @ geom.metric
    for zk in range(split.q):
        z = split.dperp_frame[:, zk]
        for xk in range(split.d_frame.shape[1]):
            pq = _pq(geom, nj, z, split.d_frame[:, xk])
            p_sq += float(pq.P @ geom.metric @ pq.P)
            off = pq.P - d_proj @ pq.P
            p_out = max(p_out, math.sqrt(max(float(off @ geom.metric @ off), 0.0)))
            q_norm = max(q_norm, math.sqrt(max(float(pq.Q @ geom.metric @ pq.Q), 0.0)))

    omega_split = np.einsum("rij,ia,jb->rab", data.omega, split.basis, split.basis)
    omega_vectors = np.einsum("ar,rij->aij", frame.normal, omega_split)
    g = geom.metric
    residuals = {"warping_law": worst}
    if analytic is not None and analytic.size:
        residuals["warping_law_analytic"] = float(np.max(np.abs(analytic - derivatives)))
    return WarpData(
        f=f,
        log_f_derivatives=derivatives,
        log_f_analytic=analytic,
        grad_norm_sq=float(derivatives @ derivatives),
        laplacian=laplacian,
        p_norm_sq=p_sq,
        p_outside_d=p_out,
        q_norm=q_norm,
        omega_jdperp=np.einsum("ak,ab,bij->kij", split.jdperp_frame, g, omega_vectors),
        omega_nu=np.einsum("ak,ab,bij->kij", split.nu_frame, g, omega_vectors),
        residuals=residuals,
    )


def _require_fibers(split: DistributionSplit, what: str) -> None:
    if split.q == 0:
        raise PreconditionError(f"{what} needs a nontrivial D⊥ (q >= 1)")


def warping_check_at(immersion: Immersion, u: Sequence[float], tol: float = 1e-6) -> CheckReport:
    context = _split(immersion, u)
    _require_fibers(context.split, "The warping law")
    warp = warp_data_at(immersion, u, context)
    report = CheckReport("crwarp.w8")
    report.add("warping_law", warp.residuals["warping_law"], tolerance=tol)
    if "warping_law_analytic" in warp.residuals:
        report.add("warping_law_analytic", warp.residuals["warping_law_analytic"], tolerance=tol)
    report.measure("log_f_derivatives", warp.log_f_derivatives)
    report.measure("grad_norm_sq", warp.grad_norm_sq)
    if warp.f is not None:
        report.measure("f", warp.f)
        report.measure("laplacian_D", warp.laplacian)
    return report


def _member(split_frame: np.ndarray, g: np.ndarray, v: np.ndarray, label: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    inside = split_frame @ (split_frame.T @ g @ v)
    off = v - inside
    leak = math.sqrt(max(float(off @ g @ off), 0.0))
    size = math.sqrt(max(float(v @ g @ v), 0.0))
    if leak > MEMBERSHIP_TOLERANCE * max(1.0, size) or abs(size - 1.0) > MEMBERSHIP_TOLERANCE:
        raise PreconditionError(f"{label} must be a unit vector in its distribution", max(leak, abs(size - 1.0)))
    return v


def lemma2_check_at(
    immersion: Immersion,
    u: Sequence[float],
    x: Optional[np.ndarray] = None,
    z: Optional[np.ndarray] = None,
    w: Optional[np.ndarray] = None,
    tol: float = 1e-6,
) -> CheckReport:
    """The three mixed second-fundamental-form identities for X ∈ D and Z, W ∈ D⊥."""
    context = _split(immersion, u)
    geom, frame, data, split = context
    _require_fibers(split, "Mixed identities")
    if split.p == 0:
        raise PreconditionError("Mixed identities need a nontrivial D (p >= 1)")
    g, j = geom.metric, geom.j
    x = _member(split.d_frame, g, split.d_frame[:, 0] if x is None else x, "X")
    z = _member(split.dperp_frame, g, split.dperp_frame[:, 0] if z is None else z, "Z")
    w = _member(split.dperp_frame, g, split.dperp_frame[:, -1] if w is None else w, "W")
    warp = warp_data_at(immersion, u, context)
    nj = nabla_j(immersion.ambient, geom.x)

    def second_form(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        ca = frame.tangent.T @ g @ a
        cb = frame.tangent.T @ g @ b
        return frame.normal @ data.second_form(ca, cb)

    def on(frame_cols: np.ndarray, v: np.ndarray) -> np.ndarray:
        return frame_cols @ (frame_cols.T @ g @ v)

    def norm(v: np.ndarray) -> float:
        return math.sqrt(max(float(v @ g @ v), 0.0))

    jx = j @ x
    rate = float((warp.log_f_derivatives @ (split.d_frame.T @ g @ x)))
    p_z_jx = _pq(geom, nj, z, jx).P
    first = on(split.jdperp_frame, second_form(jx, z)) - j @ p_z_jx - rate * (j @ z)

    pq_zx = _pq(geom, nj, z, x)
    second = float(p_z_jx @ g @ w) - float(pq_zx.Q @ g @ (j @ w))

    omega_xz = second_form(x, z)
    omega_nu_xz = on(split.nu_frame, omega_xz)
    lhs = float(second_form(jx, z) @ g @ (j @ omega_xz)) - float(omega_nu_xz @ g @ omega_nu_xz)
    third = lhs - float(pq_zx.Q @ g @ (j @ omega_nu_xz))

    report = CheckReport("crwarp.lemma2")
    report.add("jdperp_component", norm(first), tolerance=tol)
    report.add("p_q_duality", abs(second), tolerance=tol)
    report.add("nu_component", abs(third), tolerance=tol)
    report.measure("X_log_f", rate)
    report.measure("omega_nu_norm_sq", float(omega_nu_xz @ g @ omega_nu_xz))
    return report


class Thm3Terms(NamedTuple):
    omega_norm_sq: float
    p_norm_sq: float
    q_grad_sq: float
    margin: float


def thm3_margin_at(immersion: Immersion, u: Sequence[float]) -> Thm3Terms:
    context = _split(immersion, u)
    _require_fibers(context.split, "The warped-product inequality")
    warp = warp_data_at(immersion, u, context)
    omega_sq = context.extrinsic.omega_norm_sq
    q_grad = context.split.q * warp.grad_norm_sq
    return Thm3Terms(omega_sq, warp.p_norm_sq, q_grad, omega_sq - warp.p_norm_sq - q_grad)


def thm3_report(immersion: Immersion, u: Sequence[float], tol: float = 1e-8) -> CheckReport:
    context = _split(immersion, u)
    _require_fibers(context.split, "The warped-product inequality")
    warp = warp_data_at(immersion, u, context)
    omega_sq = context.extrinsic.omega_norm_sq
    q_grad = context.split.q * warp.grad_norm_sq
    report = CheckReport("crwarp.thm3")
    report.add_margin("margin", omega_sq - warp.p_norm_sq - q_grad, tolerance=tol)
    report.add("p_in_d", warp.p_outside_d, tolerance=1e-6)
    report.add("q_vanishes", warp.q_norm, tolerance=1e-6)
    report.measure("omega_norm_sq", omega_sq)
    report.measure("P_norm_sq", warp.p_norm_sq)
    report.measure("q_grad_sq", q_grad)
    return report


class DistributionScalars(NamedTuple):
    rho_d: float
    rho_dperp: float
    rho_mixed: float
    rho_total: float


def distribution_scalars_at(immersion: Immersion, u: Sequence[float]) -> DistributionScalars:
    """Plane sums of intrinsic sectional curvature inside D, inside D⊥ and across."""
    context = _split(immersion, u)
    curvature = intrinsic_curvature_at(immersion, u, frame=context.frame, geometry=context.geometry)
    basis = context.split.basis
    r = np.einsum("abcd,ai,bj,ck,dl->ijkl", curvature.riemann_frame, basis, basis, basis, basis)
    size_d = context.split.d_frame.shape[1]
    n = basis.shape[0]
    sums = {"d": 0.0, "dperp": 0.0, "mixed": 0.0}
    for i in range(n):
        for k in range(i + 1, n):
            key = "d" if k < size_d else ("dperp" if i >= size_d else "mixed")
            sums[key] += float(r[i, k, k, i])
    return DistributionScalars(sums["d"], sums["dperp"], sums["mixed"], curvature.rho)


def thm4_dichotomy_report(immersion: Immersion, sample: Sequence[Sequence[float]]) -> CheckReport:
    """Static dimension report; the compact integral argument is not evaluated."""
    report = CheckReport("crwarp.thm4_report")
    report.note(THM4_CAVEAT)
    dims = set()
    rhos: List[float] = []
    grads: List[float] = []
    for u in sample:
        context = _split(immersion, u)
        dims.add((context.split.p, context.split.q))
        if context.split.q == 0 or context.split.p == 0:
            continue
        rhos.append(intrinsic_curvature_at(immersion, u, frame=context.frame, geometry=context.geometry).rho)
        grads.append(math.sqrt(warp_data_at(immersion, u, context).grad_norm_sq))
    if len(dims) != 1:
        report.note(f"split dimensions vary over the sample: {sorted(dims)}")
        report.measure("dimensions", sorted(dims))
        return report
    p, q = dims.pop()
    n = 2 * p + q
    report.measure("n", n)
    report.measure("p", p)
    report.measure("q", q)
    if p == 0 or q == 0:
        report.note(f"inapplicable: {'p' if p == 0 else 'q'} = 0")
        return report
    report.measure("n_plus_1_le_pq", n + 1 <= p * q)
    report.measure("two_n_plus_2_le_q_sq", 2 * (n + 1) <= q * q)
    report.measure("rho_min", min(rhos))
    report.measure("rho_max", max(rhos))
    report.measure("rho_positive_points", sum(1 for r in rhos if r > 0))
    report.measure("grad_log_f_max", max(grads))
    report.measure("grad_log_f_vanishes", max(grads) <= 1e-8)
    return report
