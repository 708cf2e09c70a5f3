"""Check catalog: every name a run config may request, with its default tolerance and runner."""

from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional, Sequence

import numpy as np

from ..errors import PreconditionError
from ..geometry import bochner, chen, crwarp
from ..geometry.ambient import (
    AmbientSpace,
    curvature_at,
    einstein_residual,
    holomorphic_sectional_curvature,
    kaehler_audit,
    metric_at,
)
from ..geometry.submanifold import (
    Classification,
    Immersion,
    Plane,
    adapted_frame_at,
    classify,
    codazzi_tensor_residual,
    extrinsic_audit,
    gauss_residual_at,
    gauss_tensor_residual,
    point_bundle,
)
from ..report import CheckReport

GAUSS_TUPLES = 10


class Conventions(NamedTuple):
    ric_term: str = "ambient"
    einstein: str = "ambient"
    classify_tol: float = 1e-6


@dataclass
class CheckContext:
    """Inputs of one check evaluation.

    ``point`` is a chart point of the immersion, or an ambient chart point
    when the run has no immersion. Global checks read ``sample`` instead.
    """

    ambient: AmbientSpace
    immersion: Optional[Immersion]
    point: Optional[np.ndarray]
    rng: np.random.Generator
    tol: float
    conventions: Conventions = Conventions()
    sample: Sequence[np.ndarray] = ()
    classification: Optional[Classification] = None

    @property
    def ambient_point(self) -> np.ndarray:
        if self.immersion is not None:
            return self.immersion.image(self.point)
        return np.asarray(self.point, dtype=float)

    @property
    def surface(self) -> Immersion:
        if self.immersion is None:
            raise PreconditionError("This check needs an immersion; the config defines none")
        return self.immersion


Runner = Callable[[CheckContext], CheckReport]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    reference: str
    statement: str
    tolerance: Optional[float]
    runner: Runner
    needs_immersion: bool = True
    per_point: bool = True
    needs_classification: bool = False


def _random_plane(ctx: CheckContext) -> Optional[Plane]:
    """Random tangent plane when n > 2; the first frame plane otherwise."""
    immersion = ctx.surface
    if immersion.n <= 2:
        return None
    frame = adapted_frame_at(immersion, ctx.point)
    return (
        frame.tangent @ ctx.rng.normal(size=immersion.n),
        frame.tangent @ ctx.rng.normal(size=immersion.n),
    )


def _unit(ctx: CheckContext, g: np.ndarray) -> np.ndarray:
    x = ctx.rng.normal(size=ctx.ambient.dim)
    return x / np.sqrt(x @ g @ x)


def run_kaehler(ctx: CheckContext) -> CheckReport:
    return kaehler_audit(ctx.ambient, [ctx.ambient_point], tol=ctx.tol)


def run_ambient_curvature(ctx: CheckContext) -> CheckReport:
    p = ctx.ambient_point
    curvature = curvature_at(ctx.ambient, p)
    lam, residual = einstein_residual(ctx.ambient, p, curvature)
    g = metric_at(ctx.ambient, p).array
    h1 = holomorphic_sectional_curvature(ctx.ambient, p, _unit(ctx, g))
    h2 = holomorphic_sectional_curvature(ctx.ambient, p, _unit(ctx, g))
    report = CheckReport("ambient.curvature")
    report.add("einstein", residual, tolerance=ctx.tol)
    report.add("holomorphic_constancy", abs(h1 - h2), tolerance=ctx.tol)
    report.measure("tau", curvature.tau)
    report.measure("lambda", lam)
    report.measure("holomorphic_sectional", 0.5 * (h1 + h2))
    return report


def run_bochner_residual(ctx: CheckContext) -> CheckReport:
    report = CheckReport("bochner.residual")
    report.add("reconstruction", bochner.bochner_residual(ctx.ambient, ctx.ambient_point), tolerance=ctx.tol)
    return report


def run_bochner_symmetries(ctx: CheckContext) -> CheckReport:
    return bochner.symmetry_audit(ctx.ambient, ctx.ambient_point, tol=ctx.tol)


def run_w33(ctx: CheckContext) -> CheckReport:
    p = ctx.ambient_point
    x, z = bochner.cr_orthogonal_pair(ctx.ambient, p, ctx.rng)
    result = bochner.identity_w33(ctx.ambient, p, x, z)
    report = CheckReport("bochner.w33")
    report.add("identity", result.residual, tolerance=ctx.tol)
    report.measure("lhs", result.lhs)
    report.measure("rhs", result.rhs)
    return report


def run_extrinsic(ctx: CheckContext) -> CheckReport:
    return extrinsic_audit(ctx.surface, ctx.point, ctx.rng, tol=ctx.tol)


def run_classify(ctx: CheckContext) -> CheckReport:
    found = ctx.classification or classify(ctx.surface, ctx.sample, rng=ctx.rng, tol=ctx.conventions.classify_tol)
    report = CheckReport("submanifold.classify")
    report.measure("kind", found.label)
    report.measure("theta", found.theta)
    report.measure("theta_std", found.theta_std)
    report.measure("max_tx", found.max_tx)
    report.measure("max_fx", found.max_fx)
    report.measure("spectrum", list(found.spectrum))
    return report


def run_gauss(ctx: CheckContext) -> CheckReport:
    immersion, u = ctx.surface, ctx.point
    bundle = point_bundle(immersion, u)
    tangent = bundle.frame.tangent
    worst = 0.0
    for _ in range(GAUSS_TUPLES):
        x, y, z, w = (tangent @ ctx.rng.normal(size=immersion.n) for _ in range(4))
        worst = max(worst, gauss_residual_at(immersion, u, x, y, z, w, bundle))
    report = CheckReport("submanifold.gauss")
    report.add("tensor", gauss_tensor_residual(immersion, u, bundle), tolerance=ctx.tol)
    report.add("random_tuples", worst, tolerance=ctx.tol)
    return report


def run_codazzi(ctx: CheckContext) -> CheckReport:
    report = CheckReport("submanifold.codazzi")
    report.add("tensor", codazzi_tensor_residual(ctx.surface, ctx.point), tolerance=ctx.tol)
    return report


def run_lemma1(ctx: CheckContext) -> CheckReport:
    return chen.lemma1_report(ctx.surface, ctx.point)


def run_thm1(ctx: CheckContext) -> CheckReport:
    return chen.thm1_report(ctx.surface, ctx.point, _random_plane(ctx), ctx.conventions.ric_term, tol=ctx.tol)


def run_thm2(ctx: CheckContext) -> CheckReport:
    return chen.thm2_report(ctx.surface, ctx.point, _random_plane(ctx), ctx.classification, ctx.rng, tol=ctx.tol)


def _corollary(which: str) -> Runner:
    def run(ctx: CheckContext) -> CheckReport:
        return chen.corollary_report(
            ctx.surface,
            ctx.point,
            which,
            _random_plane(ctx),
            ctx.conventions.einstein,
            ctx.classification,
            ctx.rng,
            tol=ctx.tol,
        )

    return run


def run_proof_audit(ctx: CheckContext) -> CheckReport:
    return chen.proof_audit_at(ctx.surface, ctx.point, _random_plane(ctx), tol=ctx.tol)


def run_equality_form(ctx: CheckContext) -> CheckReport:
    return chen.equality_form_report(ctx.surface, ctx.point, tol=ctx.tol)


def run_split(ctx: CheckContext) -> CheckReport:
    return crwarp.split_report(ctx.surface, ctx.point, tol=ctx.tol)


def run_warping(ctx: CheckContext) -> CheckReport:
    return crwarp.warping_check_at(ctx.surface, ctx.point, tol=ctx.tol)


def run_lemma2(ctx: CheckContext) -> CheckReport:
    return crwarp.lemma2_check_at(ctx.surface, ctx.point, tol=ctx.tol)


def run_thm3(ctx: CheckContext) -> CheckReport:
    return crwarp.thm3_report(ctx.surface, ctx.point, tol=ctx.tol)


def run_thm4(ctx: CheckContext) -> CheckReport:
    return crwarp.thm4_dichotomy_report(ctx.surface, ctx.sample)


def run_pq(ctx: CheckContext) -> CheckReport:
    immersion, u = ctx.surface, ctx.point
    split = crwarp.split_distributions_at(immersion, u)
    vectors = np.hstack([split.d_frame, split.dperp_frame]).T
    g = metric_at(immersion.ambient, immersion.image(u)).array
    p_worst = q_worst = 0.0
    for x in vectors:
        for y in vectors:
            pq = crwarp.pq_tensors_at(immersion, u, x, y)
            p_worst = max(p_worst, float(np.sqrt(max(pq.P @ g @ pq.P, 0.0))))
            q_worst = max(q_worst, float(np.sqrt(max(pq.Q @ g @ pq.Q, 0.0))))
    report = CheckReport("crwarp.pq")
    report.add("p_norm", p_worst, tolerance=ctx.tol)
    report.add("q_norm", q_worst, tolerance=ctx.tol)
    return report


def run_scalars(ctx: CheckContext) -> CheckReport:
    scalars = crwarp.distribution_scalars_at(ctx.surface, ctx.point)
    parts = scalars.rho_d + scalars.rho_dperp + scalars.rho_mixed
    report = CheckReport("crwarp.scalars")
    report.add("plane_sum", abs(parts - scalars.rho_total), tolerance=ctx.tol)
    for key, value in scalars._asdict().items():
        report.measure(key, value)
    return report


_SPECS = [
    CheckSpec("ambient.kaehler", "Kaehler structure", "J² = −I, g(J·,J·) = g, ∇J = 0 and curvature symmetries", 1e-6, run_kaehler, needs_immersion=False),
    CheckSpec("ambient.curvature", "(a5)-(a6)", "Einstein metric with constant holomorphic sectional curvature", 1e-4, run_ambient_curvature, needs_immersion=False),
    CheckSpec("bochner.residual", "(a5)", "curvature rebuilt from Ricci through the L/M tensors", 1e-5, run_bochner_residual, needs_immersion=False),
    CheckSpec("bochner.symmetries", "(a8)", "L symmetric, J-invariant and skew; M antisymmetric", 1e-9, run_bochner_symmetries, needs_immersion=False),
    CheckSpec("bochner.w33", "(w33)", "R(X,JX,Z,JZ) through M for a CR-orthogonal unit pair", 1e-5, run_w33, needs_immersion=False),
    CheckSpec("submanifold.extrinsic", "(a1)-(a3), (a11)", "symmetry of ω, antisymmetry of T, shape-operator duality, Weingarten", 1e-8, run_extrinsic),
    CheckSpec("submanifold.classify", "Def 1", "invariant / anti-invariant / slant / CR / generic over the sample", None, run_classify, per_point=False, needs_classification=True),
    CheckSpec("submanifold.gauss", "(a4)", "Gauss equation on random tangent 4-tuples", 1e-4, run_gauss),
    CheckSpec("submanifold.codazzi", "(w34)", "Codazzi equation with the normal part of R̄", 1e-3, run_codazzi),
    CheckSpec("chen.lemma1", "Lemma 1", "algebraic lemma on the shape-operator diagonal along H", None, run_lemma1),
    CheckSpec("chen.thm1", "Thm 1 (t1)", "sectional curvature bound through ρ, ‖H‖², ‖T‖² and the Ricci term", 1e-8, run_thm1),
    CheckSpec("chen.thm2", "Thm 2", "slant form of the sectional curvature bound", 1e-8, run_thm2, needs_classification=True),
    CheckSpec("chen.cor1", "Cor 1", "bound in an Einstein ambient", 1e-8, _corollary("einstein")),
    CheckSpec("chen.cor2", "Cor 2", "slant bound in an Einstein ambient", 1e-8, _corollary("slant_einstein"), needs_classification=True),
    CheckSpec("chen.cor3", "Cor 3", "bound for invariant submanifolds", 1e-8, _corollary("invariant"), needs_classification=True),
    CheckSpec("chen.cor4", "Cor 4", "bound for anti-invariant submanifolds", 1e-8, _corollary("anti_invariant"), needs_classification=True),
    CheckSpec("chen.proof_audit", "(p5), (p13), (p17)", "intermediate identities of the sectional-curvature argument", 1e-4, run_proof_audit),
    CheckSpec("chen.equality_form", "(t2)-(t3)", "shape operators in the equality pattern", 1e-6, run_equality_form),
    CheckSpec("crwarp.split", "(w6)", "D ⊕ D⊥ split with JD⊥ normal", 1e-8, run_split),
    CheckSpec("crwarp.w8", "(w8)", "warping law ∇_X Z = X(log f) Z", 1e-6, run_warping),
    CheckSpec("crwarp.lemma2", "Lemma 2", "mixed second-fundamental-form identities", 1e-6, run_lemma2),
    CheckSpec("crwarp.thm3", "Thm 3", "‖ω‖² ≥ ‖P‖² + q‖∇ log f‖²", 1e-8, run_thm3),
    CheckSpec("crwarp.thm4_report", "Thm 4", "dimension and sign data for the compact dichotomy", None, run_thm4, per_point=False),
    CheckSpec("crwarp.pq", "(w9)", "tangent and normal parts of ∇J on the split frame", 1e-8, run_pq),
    CheckSpec("crwarp.scalars", "(w62)-(w63)", "scalar curvature split over D, D⊥ and mixed planes", 1e-8, run_scalars),
]

CATALOG: Dict[str, CheckSpec] = {spec.name: spec for spec in _SPECS}


def run_check(spec: CheckSpec, ctx: CheckContext) -> CheckReport:
    if spec.needs_immersion and ctx.immersion is None:
        raise PreconditionError(f"{spec.name} needs an immersion; the config defines none")
    report = spec.runner(ctx)
    report.name = spec.name
    return report
