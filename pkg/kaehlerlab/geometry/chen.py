"""Chen-type inequalities for submanifolds of Bochner-Kaehler ambients.

Every margin is LHS − RHS of the stated inequality, reported unclamped.
``rho`` is the intrinsic scalar curvature summed over i < j; the Ricci
term is a double sum over the tangent frame and uses the ambient Ricci
tensor unless ``ric_source="intrinsic"``.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import PreconditionError
from ..report import CheckReport
from ..utils.tensorlab import orthonormal_complement
from .ambient import einstein_residual
from .bochner import lm_tensors_at
from .submanifold import (
    AdaptedFrame,
    Classification,
    Immersion,
    Plane,
    PointBundle,
    SubmanifoldKind,
    classify,
    point_bundle,
)

LEMMA_HYPOTHESIS_TOLERANCE = 1e-9
LEMMA_EQUALITY_TOLERANCE = 1e-9
EINSTEIN_TOLERANCE = 1e-6
EQUALITY_FORM_TOLERANCE = 1e-6
RIC_SOURCES = ("ambient", "intrinsic")
EINSTEIN_SOURCES = ("ambient", "submanifold")
COROLLARIES = ("einstein", "slant_einstein", "invariant", "anti_invariant")
DEGENERATE_NOTE = "degenerate: π = T_xW, coefficient (n−2) vanishes"


class LemmaResult(NamedTuple):
    holds: bool
    slack: float
    equality: bool


def chen_lemma(x: Sequence[float], b: float) -> LemmaResult:
    """If (Σxᵢ)² = (n−1)(Σxᵢ² + b) then 2x₁x₂ ≥ b, with equality iff x₁+x₂ = x₃ = … = xₙ."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise ValueError(f"chen_lemma needs at least two numbers, got {n}")
    lhs = float(np.sum(x)) ** 2
    rhs = (n - 1) * (float(x @ x) + b)
    if abs(lhs - rhs) > LEMMA_HYPOTHESIS_TOLERANCE * max(1.0, abs(lhs), abs(rhs)):
        raise PreconditionError(
            f"Lemma hypothesis fails: (Σx)² = {lhs:.12g} but (n−1)(Σx² + b) = {rhs:.12g}", abs(lhs - rhs)
        )
    slack = 2.0 * x[0] * x[1] - b
    scale = max(1.0, abs(b), float(x @ x))
    equality = bool(np.all(np.abs(x[0] + x[1] - x[2:]) <= LEMMA_EQUALITY_TOLERANCE))
    return LemmaResult(holds=bool(slack >= -1e-12 * scale), slack=float(slack), equality=equality)


def lemma_inputs(omega: np.ndarray, mean: np.ndarray) -> Tuple[np.ndarray, float]:
    """Diagonal of the shape operator along H (first normal when H = 0) and the b closing the hypothesis."""
    n = omega.shape[1]
    if n < 2:
        raise ValueError("Lemma inputs need a submanifold of dimension n >= 2")
    if omega.shape[0] == 0:
        x = np.zeros(n)
    else:
        norm = float(np.linalg.norm(mean))
        direction = mean / norm if norm > 1e-12 else np.eye(omega.shape[0])[0]
        x = np.einsum("r,rii->i", direction, omega)
    b = float(np.sum(x)) ** 2 / (n - 1) - float(x @ x)
    return x, b


def thm1_coefficient(n: int, t_norm_sq: float) -> float:
    return (5 * n * n + 31 * n + 26 + 3 * t_norm_sq) / (2.0 * (2 * n + 2) * (2 * n + 4))


def epsilon_coefficient(n: int, t_norm_sq: float) -> float:
    return 2.0 - (6 * n * n + 2 * n - 8 - 6 * t_norm_sq) / (2.0 * (2 * n + 2) * (2 * n + 4))


def sectional_coefficient(n: int) -> float:
    return (4 * n + 3) / ((2.0 * n + 2) * (2 * n + 4))


def mean_curvature_coefficient(n: int) -> float:
    return n * n * (n - 2) / (2.0 * (n - 1))


def ricci_coefficient(n: int) -> float:
    return 6.0 / (2.0 * (2 * n + 4))


def coefficient_identity_residual(n: int, t_norm_sq: float) -> float:
    return abs(thm1_coefficient(n, t_norm_sq) - sectional_coefficient(n) - 0.5 * epsilon_coefficient(n, t_norm_sq))


@dataclass(frozen=True)
class ChenTerms:
    n: int
    k_plane: float
    rho: float
    h_norm_sq: float
    omega_norm_sq: float
    t_norm_sq: float
    ric_term: float
    ric_term_ambient: float
    ric_term_intrinsic: float
    ric_plain: float
    ric_source: str
    coefficient: float
    epsilon: float
    epsilon_gauss: float
    margin: float
    degenerate: bool
    notes: Tuple[str, ...] = ()

    def rhs(self) -> float:
        return self.k_plane - self.margin

    def as_values(self) -> Dict[str, float]:
        return {
            "n": self.n,
            "K_pi": self.k_plane,
            "rho": self.rho,
            "H_norm_sq": self.h_norm_sq,
            "omega_norm_sq": self.omega_norm_sq,
            "t_norm_sq": self.t_norm_sq,
            "ric_term": self.ric_term,
            "ric_term_ambient": self.ric_term_ambient,
            "ric_term_intrinsic": self.ric_term_intrinsic,
            "coefficient": self.coefficient,
            "epsilon": self.epsilon,
            "rhs": self.rhs(),
        }


def _ricci_terms(bundle: PointBundle) -> Tuple[float, float, float]:
    """Ambient double sum, intrinsic double sum and the plain sum Σ Ric̄(eᵢ, Jeⱼ)."""
    e = bundle.frame.tangent
    t = bundle.extrinsic.t_matrix
    rj = e.T @ bundle.ambient_curvature.ricci @ bundle.geometry.j @ e
    ambient = float(np.einsum("ij,ji->", rj, t))
    intrinsic = float(np.einsum("ik,jk,ji->", bundle.intrinsic.ricci_frame, t, t))
    return ambient, intrinsic, float(np.sum(rj))


def _assemble(bundle: PointBundle, ric_source: str) -> ChenTerms:
    if ric_source not in RIC_SOURCES:
        raise ValueError(f"ric_source must be one of {RIC_SOURCES}, got '{ric_source}'")
    data, curvature = bundle.extrinsic, bundle.intrinsic
    n = data.n
    if n < 2:
        raise ValueError("Chen inequalities need a submanifold of dimension n >= 2")
    ambient, intrinsic, plain = _ricci_terms(bundle)
    ric = ambient if ric_source == "ambient" else intrinsic
    t_sq, h_sq, rho = data.t_norm_sq, data.h_norm_sq, curvature.rho
    coefficient = thm1_coefficient(n, t_sq)
    margin = (
        curvature.k_plane
        - coefficient * rho
        + mean_curvature_coefficient(n) * h_sq
        + ricci_coefficient(n) * ric
    )
    shift = n * n * (n - 2) / (n - 1.0)
    return ChenTerms(
        n=n,
        k_plane=curvature.k_plane,
        rho=rho,
        h_norm_sq=h_sq,
        omega_norm_sq=data.omega_norm_sq,
        t_norm_sq=t_sq,
        ric_term=ric,
        ric_term_ambient=ambient,
        ric_term_intrinsic=intrinsic,
        ric_plain=plain,
        ric_source=ric_source,
        coefficient=coefficient,
        epsilon=epsilon_coefficient(n, t_sq) * rho - shift * h_sq - (6.0 / (2 * n + 4)) * ric,
        epsilon_gauss=n * n * h_sq - data.omega_norm_sq - shift * h_sq,
        margin=margin,
        degenerate=n == 2,
        notes=(DEGENERATE_NOTE,) if n == 2 else (),
    )


def chen_terms_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    ric_source: str = "ambient",
    frame: Optional[AdaptedFrame] = None,
    bundle: Optional[PointBundle] = None,
) -> ChenTerms:
    bundle = bundle or point_bundle(immersion, u, plane, frame)
    return _assemble(bundle, ric_source)


def thm1_margin_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    ric_source: str = "ambient",
    frame: Optional[AdaptedFrame] = None,
) -> Tuple[float, ChenTerms]:
    terms = chen_terms_at(immersion, u, plane, ric_source, frame)
    return terms.margin, terms


def thm1_report(
    immersion: Immersion, u: Sequence[float], plane: Optional[Plane] = None, ric_source: str = "ambient", tol: float = 1e-8
) -> CheckReport:
    terms = chen_terms_at(immersion, u, plane, ric_source)
    report = CheckReport("chen.thm1")
    report.add_margin("margin", terms.margin, tolerance=tol)
    report.add("coefficient_identity", coefficient_identity_residual(terms.n, terms.t_norm_sq), tolerance=1e-12)
    for key, value in terms.as_values().items():
        report.measure(key, value)
    for message in terms.notes:
        report.note(message)
    return report


def proof_audit_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    tol: float = 1e-4,
    exact_tol: float = 1e-10,
) -> CheckReport:
    """Both sides of each step of the sectional-curvature bound argument under competing readings.

    Graded: the expansion of 2ρ with a single sum for L, the sectional
    expansion carrying the L(e₁, Je₂) term, and the ε bookkeeping identity.
    Everything else is a measurement.
    """
    bundle = point_bundle(immersion, u, plane)
    terms = _assemble(bundle, "ambient")
    data = bundle.extrinsic
    n, e, j = data.n, bundle.frame.tangent, bundle.geometry.j
    g = bundle.geometry.metric
    tensors = lm_tensors_at(immersion.ambient, bundle.geometry.x, curvature=bundle.ambient_curvature)
    l_frame = e.T @ tensors.L @ e
    lj = e.T @ tensors.L @ j @ e
    gj = e.T @ g @ j @ e
    l_trace = float(np.trace(l_frame))
    lj_sum = float(np.sum(lj * gj))
    gauss_part = n * n * terms.h_norm_sq - data.omega_norm_sq
    two_rho = 2.0 * terms.rho

    report = CheckReport("chen.proof_audit")
    single = 2 * (n - 1) * l_trace + 6.0 * lj_sum + gauss_part
    double = 2 * (n - 1) * n * l_trace + 6.0 * lj_sum + gauss_part
    report.add("scalar_expansion", abs(two_rho - single), tolerance=tol)
    report.measure("scalar_expansion_double_sum", abs(two_rho - double))
    report.measure("scalar_expansion_best", "single_sum" if abs(two_rho - single) <= abs(two_rho - double) else "double_sum")

    scale = max(1.0, n * n * terms.h_norm_sq, data.omega_norm_sq)
    epsilon_defect = abs(n * n * terms.h_norm_sq - (n - 1) * (terms.epsilon_gauss + data.omega_norm_sq))
    report.add("epsilon_identity", epsilon_defect, tolerance=exact_tol * scale)
    report.measure("epsilon_gap", abs(terms.epsilon - terms.epsilon_gauss))

    a, b = bundle.intrinsic.plane
    a = a / np.linalg.norm(a)
    b = b - (a @ b) * a
    b = b / np.linalg.norm(b)
    omega_aa = data.second_form(a, a)
    omega_bb = data.second_form(b, b)
    omega_ab = data.second_form(a, b)
    va, vb = e @ a, e @ b
    extrinsic_part = float(omega_aa @ omega_bb - omega_ab @ omega_ab)
    sectional_printed = float(va @ tensors.L @ va + vb @ tensors.L @ vb) + extrinsic_part
    sectional_full = sectional_printed + 6.0 * float(va @ tensors.L @ j @ vb) * float(va @ g @ j @ vb)
    report.add("sectional_expansion", abs(terms.k_plane - sectional_full), tolerance=tol)
    report.measure("sectional_expansion_dropped_term", abs(terms.k_plane - sectional_printed))

    conventions = {
        "intrinsic_rho": terms.rho,
        "ambient_tau": bundle.ambient_curvature.tau,
        "ambient_half_tau": bundle.ambient_curvature.rho_half,
    }
    from_rho = {
        name: abs(terms.k_plane - (sectional_coefficient(n) * rho + extrinsic_part))
        for name, rho in conventions.items()
    }
    for name, value in from_rho.items():
        report.measure(f"sectional_from_{name}", value)
    report.measure("sectional_from_best", min(from_rho, key=from_rho.get))

    ambient_trace = float(np.trace(e.T @ bundle.ambient_curvature.ricci @ e))
    report.measure("ricci_trace_ambient", ambient_trace)
    report.measure("ricci_trace_intrinsic", float(np.trace(bundle.intrinsic.ricci_frame)))
    for message in terms.notes:
        report.note(message)
    return report


@dataclass
class EqualityForm:
    alpha: float
    beta: float
    xi: float
    residual: float
    residuals: Dict[str, float] = field(default_factory=dict)
    first_normal: str = ""
    tol: float = EQUALITY_FORM_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def _pattern_fit(omega: np.ndarray, basis: np.ndarray, label: str, tol: float) -> EqualityForm:
    rotated = np.einsum("rs,rij->sij", basis, omega)
    n = omega.shape[1]
    values, vectors = np.linalg.eigh(rotated[0])
    best: Optional[EqualityForm] = None
    for i in range(n):
        for k in range(i + 1, n):
            rest = [idx for idx in range(n) if idx not in (i, k)]
            order = vectors[:, [i, k] + rest]
            alpha, beta = float(values[i]), float(values[k])
            residuals: Dict[str, float] = {}
            if rest:
                xi = float(np.mean(values[rest]))
                residuals["xi_spread"] = float(np.max(np.abs(values[rest] - xi)))
                residuals["alpha_beta_xi"] = abs(alpha + beta - xi)
            else:
                xi = alpha + beta
            other = 0.0
            for s in range(1, rotated.shape[0]):
                block = order.T @ rotated[s] @ order
                other = max(
                    other,
                    abs(block[0, 0] + block[1, 1]),
                    float(np.max(np.abs(block[:2, 2:]), initial=0.0)),
                    float(np.max(np.abs(block[2:, 2:]), initial=0.0)),
                )
            residuals["other_normals"] = other
            candidate = EqualityForm(alpha, beta, xi, max(residuals.values()), residuals, label, tol)
            if best is None or candidate.residual < best.residual:
                best = candidate
    return best


def equality_form_detect(
    immersion: Immersion,
    u: Sequence[float],
    tol: float = EQUALITY_FORM_TOLERANCE,
    bundle: Optional[PointBundle] = None,
) -> EqualityForm:
    """Best fit of the shape operators to the equality pattern over candidate normal frames.

    The first normal is tried along H and along each frame normal; the
    tangent frame is the eigenbasis of its shape operator with every
    eigen-pair tried as (α, β).
    """
    bundle = bundle or point_bundle(immersion, u)
    omega = bundle.extrinsic.omega
    codim, n = omega.shape[0], omega.shape[1]
    if codim == 0 or n < 2:
        return EqualityForm(0.0, 0.0, 0.0, 0.0, {}, "none", tol)
    candidates: List[Tuple[str, np.ndarray]] = []
    mean = bundle.extrinsic.mean_curvature
    if np.linalg.norm(mean) > 1e-12:
        candidates.append(("H", mean / np.linalg.norm(mean)))
    candidates.extend((f"nu{r + 1}", np.eye(codim)[r]) for r in range(codim))
    best: Optional[EqualityForm] = None
    for label, direction in candidates:
        rest = orthonormal_complement([direction], np.eye(codim))
        basis = np.column_stack([direction] + list(rest))
        fit = _pattern_fit(omega, basis, label, tol)
        if best is None or fit.residual < best.residual:
            best = fit
    return best


def equality_form_report(immersion: Immersion, u: Sequence[float], tol: float = EQUALITY_FORM_TOLERANCE) -> CheckReport:
    form = equality_form_detect(immersion, u, tol)
    report = CheckReport("chen.equality_form")
    report.add("pattern", form.residual, tolerance=tol)
    report.measure("alpha", form.alpha)
    report.measure("beta", form.beta)
    report.measure("xi", form.xi)
    report.measure("first_normal", form.first_normal)
    for key, value in form.residuals.items():
        report.measure(key, value)
    return report


def _slant_angle(
    immersion: Immersion, u: Sequence[float], classification: Optional[Classification], rng: Optional[np.random.Generator]
) -> float:
    classification = classification or classify(immersion, [u], rng=rng)
    theta = classification.slant_angle
    if theta is None:
        raise PreconditionError(
            f"Slant inequality needs a slant submanifold; {immersion.label} classifies as {classification.label}",
            classification.theta_std,
        )
    return theta


def thm2_report(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    classification: Optional[Classification] = None,
    rng: Optional[np.random.Generator] = None,
    tol: float = 1e-8,
) -> CheckReport:
    theta = _slant_angle(immersion, u, classification, rng)
    terms = chen_terms_at(immersion, u, plane)
    n, cos_t = terms.n, math.cos(theta)
    printed = (
        thm1_coefficient(n, cos_t * cos_t) * terms.rho
        - mean_curvature_coefficient(n) * terms.h_norm_sq
        - ricci_coefficient(n) * terms.ric_plain * cos_t
    )
    substituted = (
        thm1_coefficient(n, n * cos_t * cos_t) * terms.rho
        - mean_curvature_coefficient(n) * terms.h_norm_sq
        - ricci_coefficient(n) * terms.ric_term
    )
    report = CheckReport("chen.thm2")
    report.add_margin("margin", terms.k_plane - printed, tolerance=tol)
    report.measure("margin_substituted", terms.k_plane - substituted)
    report.measure("discrepancy", abs(printed - substituted))
    report.measure("theta", theta)
    report.measure("t_norm_sq", terms.t_norm_sq)
    for message in terms.notes:
        report.note(message)
    return report


def thm2_margin_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    classification: Optional[Classification] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    return thm2_report(immersion, u, plane, classification, rng)["margin"].value


def _einstein_constant(bundle: PointBundle, immersion: Immersion, source: str) -> Tuple[float, float]:
    if source == "ambient":
        return einstein_residual(immersion.ambient, bundle.geometry.x, bundle.ambient_curvature)
    if source == "submanifold":
        ricci = bundle.intrinsic.ricci_frame
        lam = float(np.trace(ricci)) / ricci.shape[0]
        return lam, float(np.max(np.abs(ricci - lam * np.eye(ricci.shape[0]))))
    raise ValueError(f"einstein_source must be one of {EINSTEIN_SOURCES}, got '{source}'")


def corollary_report(
    immersion: Immersion,
    u: Sequence[float],
    which: str,
    plane: Optional[Plane] = None,
    einstein_source: str = "ambient",
    classification: Optional[Classification] = None,
    rng: Optional[np.random.Generator] = None,
    tol: float = 1e-8,
) -> CheckReport:
    if which not in COROLLARIES:
        raise ValueError(f"Unknown corollary '{which}'; expected one of: {', '.join(COROLLARIES)}")
    bundle = point_bundle(immersion, u, plane)
    terms = _assemble(bundle, "ambient")
    n = terms.n
    report = CheckReport(f"chen.{which}")
    base = -mean_curvature_coefficient(n) * terms.h_norm_sq

    if which in ("einstein", "slant_einstein"):
        lam, residual = _einstein_constant(bundle, immersion, einstein_source)
        if residual > EINSTEIN_TOLERANCE:
            raise PreconditionError(f"{einstein_source} metric is not Einstein: |Ric − λg| = {residual:.3e}", residual)
        report.measure("lambda", lam)
        report.measure("einstein_residual", residual)
        if which == "einstein":
            t = terms.t_norm_sq
        else:
            cos_t = math.cos(_slant_angle(immersion, u, classification, rng))
            t = cos_t * cos_t
        rhs = thm1_coefficient(n, t) * terms.rho + base - 6.0 * lam / (2.0 * (2 * n + 4)) * t
    else:
        classification = classification or classify(immersion, [u], rng=rng)
        wanted = SubmanifoldKind.INVARIANT if which == "invariant" else SubmanifoldKind.ANTI_INVARIANT
        if classification.kind is not wanted:
            raise PreconditionError(
                f"Corollary '{which}' needs a {wanted.value} submanifold; got {classification.label}",
                classification.max_fx if which == "invariant" else classification.max_tx,
            )
        if which == "invariant":
            rhs = thm1_coefficient(n, 1.0) * terms.rho + base - ricci_coefficient(n) * terms.ric_plain
        else:
            rhs = thm1_coefficient(n, 0.0) * terms.rho + base

    report.add_margin("margin", terms.k_plane - rhs, tolerance=tol)
    report.measure("K_pi", terms.k_plane)
    report.measure("rho", terms.rho)
    report.measure("thm1_margin", terms.margin)
    for message in terms.notes:
        report.note(message)
    return report


def corollary_margin_at(
    immersion: Immersion,
    u: Sequence[float],
    plane: Optional[Plane] = None,
    which: str = "einstein",
    einstein_source: str = "ambient",
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, Optional[float]]:
    report = corollary_report(immersion, u, which, plane, einstein_source, rng=rng)
    return report["margin"].value, report.values.get("lambda")


def lemma1_report(immersion: Immersion, u: Sequence[float]) -> CheckReport:
    bundle = point_bundle(immersion, u)
    x, b = lemma_inputs(bundle.extrinsic.omega, bundle.extrinsic.mean_curvature)
    result = chen_lemma(x, b)
    report = CheckReport("chen.lemma1")
    report.add_margin("slack", result.slack, tolerance=1e-12 * max(1.0, abs(b), float(x @ x)))
    report.measure("equality", result.equality)
    report.measure("x", x)
    report.measure("b", b)
    return report
