"""Verify command: run the configured checks over the sample and collect a report."""

import zlib
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import typer

from .. import __version__
from ..config import RunConfig, load_config
from ..errors import ConfigError, KaehlerLabError, describe
from ..geometry.ambient import AmbientSpace, make_ambient, sample_points
from ..geometry.submanifold import Classification, Immersion, classify
from ..report import RunRecord, RunReport, inputs_digest, plain
from ..utils.logging import error, info, print_config_info, step, warning
from ..utils.paths import get_report_path
from .checks import CATALOG, CheckContext, CheckSpec, Conventions, run_check
from .report import emit_report

GLOBAL_INDEX = -1
EVALUATION_ERRORS = (KaehlerLabError, ValueError, ArithmeticError, np.linalg.LinAlgError)


def _grid(box: List[Tuple[float, float]], counts: List[int]) -> List[np.ndarray]:
    axes = [np.linspace(lo, hi, k) if k > 1 else np.array([0.5 * (lo + hi)]) for (lo, hi), k in zip(box, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return [np.array(p) for p in np.stack([m.ravel() for m in mesh], axis=1)]


def build_sample(
    config: RunConfig, ambient: AmbientSpace, immersion: Optional[Immersion], seed: int
) -> List[np.ndarray]:
    """Chart points of the immersion, or ambient points when there is none."""
    sample = config.sample
    dim = immersion.n if immersion is not None else ambient.dim
    if sample.mode == "points":
        points = [np.asarray(p, dtype=float) for p in sample.points]
        for p in points:
            if p.shape != (dim,):
                raise ConfigError(f"sample point {p.tolist()} needs {dim} coordinates")
        return points
    if sample.mode == "grid":
        if len(sample.grid) != dim:
            raise ConfigError(f"sample.grid lists {len(sample.grid)} counts for {dim} coordinates")
        if immersion is not None:
            return _grid(list(immersion.sampling_box), sample.grid)
        half = 0.9 / np.sqrt(dim)
        return _grid([(-half, half)] * dim, sample.grid)
    rng = np.random.default_rng(seed)
    if immersion is None:
        return sample_points(ambient, rng, sample.count)
    box = immersion.sampling_box
    return [np.array([rng.uniform(lo, hi) for lo, hi in box]) for _ in range(sample.count)]


def _evaluate(spec: CheckSpec, ctx: CheckContext, index: int, point: List[float], digest: str) -> RunRecord:
    try:
        report = run_check(spec, ctx)
    except EVALUATION_ERRORS as e:
        return RunRecord(
            check=spec.name,
            point_index=index,
            point=point,
            inputs_digest=digest,
            passed=False,
            error=plain(describe(e)),
        )
    return RunRecord.from_check(report, index, point, digest)


def _shared_classification(
    immersion: Immersion, points: List[np.ndarray], seed: int, tol: float
) -> Optional[Classification]:
    try:
        return classify(immersion, points, rng=np.random.default_rng([seed, 0]), tol=tol)
    except EVALUATION_ERRORS:
        return None


def run_config(
    config: Union[RunConfig, Path, str],
    tol_scale: float = 1.0,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> RunReport:
    """Run every requested check at every sample point; failures are recorded, never raised.

    ``config`` is a loaded run or the path of a TOML file to load.
    """
    if not isinstance(config, RunConfig):
        config = load_config(Path(config))
    if tol_scale <= 0:
        raise ConfigError(f"--tol-scale must be positive, got {tol_scale}")
    seed = seed if seed is not None else (config.sample.seed or 0)
    try:
        ambient = make_ambient(config.ambient.kind, config.ambient.m)
        immersion = config.immersion.build(ambient) if config.immersion.defined else None
    except ConfigError:
        raise
    except (KaehlerLabError, ValueError) as e:
        raise ConfigError(f"Cannot set up the run: {e}") from None

    points = build_sample(config, ambient, immersion, seed)
    conventions = Conventions(
        config.conventions.ric_term, config.conventions.einstein, config.conventions.classify_tol
    )
    specs = [CATALOG[name] for name in config.checks.names]
    classification = None
    if immersion is not None and any(s.needs_classification for s in specs):
        classification = _shared_classification(immersion, points, seed, conventions.classify_tol)

    tasks = []
    for spec in specs:
        base = config.checks.tolerances.get(spec.name, spec.tolerance)
        tol = (base or 0.0) * tol_scale
        indexed = list(enumerate(points)) if spec.per_point else [(GLOBAL_INDEX, None)]
        for index, point in indexed:
            rng = np.random.default_rng([seed, index + 1, zlib.crc32(spec.name.encode("utf-8"))])
            ctx = CheckContext(ambient, immersion, point, rng, tol, conventions, points, classification)
            shown = [] if point is None else [float(v) for v in point]
            digest = inputs_digest(
                spec.name, ambient.label, immersion.label if immersion else None, shown, tol, conventions, seed
            )
            tasks.append((spec, ctx, index, shown, digest))

    records: List[RunRecord] = []
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(_evaluate, *task): task for task in tasks}
        for future in as_completed(futures):
            spec, _, index, shown, digest = futures[future]
            try:
                records.append(future.result())
            except Exception as e:
                records.append(
                    RunRecord(spec.name, index, shown, digest, passed=False, error=plain(describe(e)))
                )

    echo = config.to_dict()
    echo["run"] = {"seed": seed, "tol_scale": tol_scale}
    report = RunReport(
        config=echo,
        records=records,
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=__version__,
    )
    report.sort()
    return report


def verify_main(
    config_path: Path,
    tol_scale: float = 1.0,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
    fmt: Optional[str] = None,
    output: Optional[str] = None,
) -> None:
    """Run a config file, print the report and save it as JSON."""
    try:
        config = load_config(config_path)
    except ConfigError as e:
        error(str(e))
        raise typer.Exit(1)

    fmt = fmt or config.output.format
    if fmt not in ("text", "json"):
        error(f"Unknown format '{fmt}'; expected text or json")
        raise typer.Exit(1)
    if fmt == "text":
        print_config_info(config)
        step(f"Running {len(config.checks.names)} check(s)")

    try:
        report = run_config(config, tol_scale=tol_scale, seed=seed, jobs=jobs)
    except ConfigError as e:
        error(str(e))
        raise typer.Exit(1)

    if fmt == "text":
        for check, note in sorted({(r.check, n) for r in report.records for n in r.notes}):
            warning(f"{check}: {note}")
    typer.echo(emit_report(report, fmt))

    path = get_report_path(config.source, output or config.output.path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json(), encoding="utf-8")
    if fmt == "text":
        info(f"JSON report written to {path}")

    if not report.ok:
        raise typer.Exit(1)
