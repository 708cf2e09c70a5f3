"""Builtin immersions with closed-form maps.

Maps are written over dual-capable scalars so ``jet2`` gives exact first and
second derivatives. Components beyond the first two complex coordinates are
padded with zeros when the ambient has m > 2.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..utils import dual
from ..utils.dual import Scalar, ScalarMap
from .ambient import AmbientKind, AmbientSpace

Box = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    summary: str
    variables: Tuple[str, ...]
    box: Box
    params: Dict[str, Tuple[float, str]]
    flat_only: bool
    factory: Callable[[Dict[str, float]], Tuple[ScalarMap, Optional[ScalarMap]]]
    sample_box: Optional[Box] = None

    @property
    def n(self) -> int:
        return len(self.variables)

    def schema(self) -> str:
        if not self.params:
            return "no parameters"
        return ", ".join(f"{k} (default {v[0]:g}): {v[1]}" for k, v in self.params.items())


def _sphere(params: Dict[str, float]):
    r = params["r"]

    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        a, b, c = x
        return [
            r * dual.cos(a),
            r * dual.sin(a) * dual.cos(b),
            r * dual.sin(a) * dual.sin(b) * dual.cos(c),
            r * dual.sin(a) * dual.sin(b) * dual.sin(c),
        ]

    return mapping, None


def _slant(params: Dict[str, float]):
    cos_t, sin_t = math.cos(params["theta"]), math.sin(params["theta"])

    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v = x
        return [u, v * cos_t, v * sin_t, 0.0 * u]

    return mapping, None


def _lagrangian(params: Dict[str, float]):
    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v = x
        return [u, 0.0 * u, v, 0.0 * u]

    return mapping, None


def _complex_line(params: Dict[str, float]):
    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v = x
        return [u, v, 0.0 * u, 0.0 * u]

    return mapping, None


def _cr_warped(params: Dict[str, float]):
    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v, t = x
        return [u * dual.cos(t), v * dual.cos(t), u * dual.sin(t), v * dual.sin(t)]

    def log_warping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v, _ = x
        return [0.5 * dual.log(u * u + v * v)]

    return mapping, log_warping


def _cr_product(params: Dict[str, float]):
    def mapping(x: Sequence[Scalar]) -> List[Scalar]:
        u, v, t = x
        return [u, v, t, 0.0 * u]

    def log_warping(x: Sequence[Scalar]) -> List[Scalar]:
        return [0.0 * x[0]]

    return mapping, log_warping


BUILTINS: Dict[str, FixtureSpec] = {
    spec.name: spec
    for spec in (
        FixtureSpec(
            "SPH3",
            "round 3-sphere of radius r in flat C^2 (hyperspherical chart)",
            ("a", "b", "c"),
            ((0.01, 3.13), (0.01, 3.13), (0.0, 6.28)),
            {"r": (1.0, "radius")},
            True,
            _sphere,
            sample_box=((0.4, 2.7), (0.4, 2.7), (0.1, 6.0)),
        ),
        FixtureSpec(
            "SLANT",
            "plane spanned by (1,0,0,0) and (0,cos θ,sin θ,0) in flat C^2",
            ("u", "v"),
            ((-1.0, 1.0), (-1.0, 1.0)),
            {"theta": (0.7, "slant angle in (0, π/2)")},
            True,
            _slant,
        ),
        FixtureSpec(
            "LAGR2",
            "totally real plane (u, 0, v, 0) in flat C^2",
            ("u", "v"),
            ((-1.0, 1.0), (-1.0, 1.0)),
            {},
            True,
            _lagrangian,
        ),
        FixtureSpec(
            "CLINE",
            "totally geodesic complex line z2 = 0 (any ambient)",
            ("u", "v"),
            ((-0.6, 0.6), (-0.6, 0.6)),
            {},
            False,
            _complex_line,
        ),
        FixtureSpec(
            "CRW",
            "CR-warped product (z cos t, z sin t), z = u + iv, warping |z|",
            ("u", "v", "t"),
            ((-3.0, 3.0), (-3.0, 3.0), (0.2, 1.2)),
            {},
            True,
            _cr_warped,
            sample_box=((0.5, 2.0), (-1.0, 1.0), (0.2, 1.2)),
        ),
        FixtureSpec(
            "CRPROD",
            "CR product (u, v, t, 0) in flat C^2, warping 1",
            ("u", "v", "t"),
            ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
            {},
            True,
            _cr_product,
        ),
    )
}


def resolve_params(spec: FixtureSpec, params: Dict[str, float]) -> Dict[str, float]:
    unknown = sorted(set(params) - set(spec.params))
    if unknown:
        raise ValueError(f"Unknown parameter(s) for {spec.name}: {', '.join(unknown)}")
    resolved = {k: float(params.get(k, default)) for k, (default, _) in spec.params.items()}
    if spec.name == "SPH3" and resolved["r"] <= 0:
        raise ValueError(f"SPH3 radius must be positive, got {resolved['r']}")
    return resolved


def _padded(mapping: ScalarMap, extra: int) -> ScalarMap:
    if extra == 0:
        return mapping

    def wrapped(x: Sequence[Scalar]) -> List[Scalar]:
        values = list(mapping(x))
        return values + [0.0 * x[0]] * extra

    return wrapped


def build_fixture(
    name: str,
    ambient: AmbientSpace,
    params: Dict[str, float],
    box: Optional[Sequence[Sequence[float]]] = None,
):
    from .submanifold import Immersion

    key = name.upper()
    if key not in BUILTINS:
        raise ValueError(f"Unknown builtin immersion '{name}'; known: {', '.join(BUILTINS)}")
    spec = BUILTINS[key]
    if spec.flat_only and ambient.kind is not AmbientKind.FLAT:
        raise ValueError(f"{spec.name} is only defined in a flat ambient, not {ambient.label}")
    resolved = resolve_params(spec, params)
    mapping, log_warping = spec.factory(resolved)
    chart = spec.box if box is None else tuple((float(lo), float(hi)) for lo, hi in box)
    return Immersion(
        ambient=ambient,
        n=spec.n,
        mapping=_padded(mapping, ambient.dim - 4),
        variables=spec.variables,
        box=chart,
        name=spec.name,
        params=resolved,
        sample_box=spec.sample_box if box is None else None,
        log_warping=log_warping,
    )
