from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
import logging
import math
import time

import numpy as np

from .analytic import lemma2_spectrum, theorem2_asymptotic_bound, theorem2_bound
from .config import RegimeConfig, with_overrides
from .errors import ConfigError, EigenCapError, SingularityError
from .graphs import average_degree, build_dgg, sample_rgg
from .laplacian import assemble
from .metrics import distance_report, ks_distance, levy_distance
from .spectra import eigenvalues_dense, graph_spectrum
from .render import write_report
from .tables import RunManifest, cdf_grid, ensure_dir, write_cdf_csv, write_rows_csv

logger = logging.getLogger(__name__)

# Window used to measure concentration of the spectrum at one.
DIRAC_WINDOW = (0.9, 1.1)

TRIAL_COLUMNS = (
    "regime",
    "n",
    "seed",
    "radius",
    "nominal_degree",
    "rgg_average_degree",
    "dgg_degree",
    "alpha",
    "levy",
    "levy_cubed",
    "ks",
    "theorem2_bound",
    "theorem2_asymptotic_bound",
    "bound_satisfied",
    "side_condition",
    "singular",
)


@dataclass(frozen=True)
class TrialResult:
    """
    One RGG-versus-lattice comparison.

    `wall_time` is kept out of trials.csv so that reruns are byte-identical;
    it is summed into the manifest timings instead.
    """

    regime: str
    n: int
    seed: int
    radius: float
    nominal_degree: float
    rgg_average_degree: float
    dgg_degree: float
    alpha: float
    levy: float
    levy_cubed: float
    ks: float
    theorem2_bound: float | None
    theorem2_asymptotic_bound: float | None
    bound_satisfied: bool | None
    side_condition: bool
    singular: bool = False
    wall_time: float = field(default=0.0, compare=False)

    def row(self) -> list[Any]:
        return [getattr(self, column) for column in TRIAL_COLUMNS]


@dataclass(frozen=True)
class SweepSummary:
    n: int
    trials: int
    singular: int
    mean_levy: float
    mean_levy_cubed: float
    std_levy_cubed: float
    bound_fraction: float | None

    def row(self) -> list[Any]:
        return [
            self.n,
            self.trials,
            self.singular,
            self.mean_levy,
            self.mean_levy_cubed,
            self.std_levy_cubed,
            self.bound_fraction,
        ]


SUMMARY_COLUMNS = (
    "n",
    "trials",
    "singular",
    "mean_levy",
    "mean_levy_cubed",
    "std_levy_cubed",
    "bound_fraction",
)


@dataclass
class SweepResult:
    config: RegimeConfig
    trials: list[TrialResult]
    summaries: list[SweepSummary]


def _side_condition(cfg: RegimeConfig, n: int) -> bool:
    """a_n >= 2d in the connectivity/dense regimes, gamma >= 2d in the thermodynamic one."""
    if cfg.regime == "thermodynamic":
        return cfg.gamma >= 2 * cfg.d
    return cfg.nominal_degree(n) >= 2 * cfg.d


def _check_eigen_cap(cfg: RegimeConfig, n: int) -> None:
    if n > cfg.eigen_cap:
        raise EigenCapError(
            f"RGG eigensolve at n={n} exceeds eigen_cap={cfg.eigen_cap}; lower n, raise "
            "eigen_cap, or set rgg: false to emit only lattice and analytic curves"
        )


def run_trial(cfg: RegimeConfig, n: int, seed: int) -> TrialResult:
    """
    Build the RGG for `seed` and the lattice graph with the same (n, r, d,
    metric, alpha), and compare their spectral distributions.

    Raises SingularityError when alpha = 0 and a vertex is isolated.
    """
    started = time.perf_counter()
    _check_eigen_cap(cfg, n)
    r = cfg.radius(n)
    metric = cfg.metric_spec

    rgg = sample_rgg(n, r, cfg.d, metric, seed)
    dgg = build_dgg(n, r, cfg.d, metric)
    rgg_esd = eigenvalues_dense(assemble(rgg, cfg.alpha), cap=cfg.eigen_cap)
    dgg_esd = graph_spectrum(dgg, cfg.alpha, cfg.eigen_cap)
    report = distance_report(rgg_esd, dgg_esd, cfg.tol)

    bound = asymptotic = satisfied = None
    if cfg.regime == "thermodynamic":
        bound = theorem2_bound(cfg.gamma, cfg.alpha)
        asymptotic = theorem2_asymptotic_bound(cfg.gamma)
        satisfied = report.levy_cubed <= bound

    result = TrialResult(
        regime=cfg.regime,
        n=n,
        seed=seed,
        radius=r,
        nominal_degree=cfg.nominal_degree(n),
        rgg_average_degree=average_degree(rgg),
        dgg_degree=average_degree(dgg),
        alpha=cfg.alpha,
        levy=report.levy,
        levy_cubed=report.levy_cubed,
        ks=report.ks,
        theorem2_bound=bound,
        theorem2_asymptotic_bound=asymptotic,
        bound_satisfied=satisfied,
        side_condition=_side_condition(cfg, n),
        wall_time=time.perf_counter() - started,
    )
    logger.info(
        "trial n=%d seed=%d: levy=%.6g levy^3=%.6g ks=%.6g",
        n,
        seed,
        result.levy,
        result.levy_cubed,
        result.ks,
    )
    return result


def _singular_trial(cfg: RegimeConfig, n: int, seed: int) -> TrialResult:
    r = cfg.radius(n)
    rgg = sample_rgg(n, r, cfg.d, cfg.metric_spec, seed)
    return TrialResult(
        regime=cfg.regime,
        n=n,
        seed=seed,
        radius=r,
        nominal_degree=cfg.nominal_degree(n),
        rgg_average_degree=average_degree(rgg),
        dgg_degree=average_degree(build_dgg(n, r, cfg.d, cfg.metric_spec)),
        alpha=cfg.alpha,
        levy=math.nan,
        levy_cubed=math.nan,
        ks=math.nan,
        theorem2_bound=None,
        theorem2_asymptotic_bound=None,
        bound_satisfied=None,
        side_condition=_side_condition(cfg, n),
        singular=True,
    )


def _sweep_job(job: tuple[RegimeConfig, int, int]) -> TrialResult:
    cfg, n, seed = job
    try:
        return run_trial(cfg, n, seed)
    except SingularityError as exc:
        logger.warning("trial n=%d seed=%d is singular: %s", n, seed, exc)
        return _singular_trial(cfg, n, seed)


def summarize(cfg: RegimeConfig, trials: list[TrialResult]) -> list[SweepSummary]:
    summaries = []
    for n in cfg.n:
        rows = [t for t in trials if t.n == n]
        regular = [t for t in rows if not t.singular]
        cubed = np.array([t.levy_cubed for t in regular], dtype=np.float64)
        levy = np.array([t.levy for t in regular], dtype=np.float64)
        fraction = None
        if cfg.regime == "thermodynamic" and regular:
            fraction = sum(bool(t.bound_satisfied) for t in regular) / len(regular)
        summaries.append(
            SweepSummary(
                n=n,
                trials=len(rows),
                singular=len(rows) - len(regular),
                mean_levy=float(levy.mean()) if levy.size else math.nan,
                mean_levy_cubed=float(cubed.mean()) if cubed.size else math.nan,
                std_levy_cubed=float(cubed.std()) if cubed.size else math.nan,
                bound_fraction=fraction,
            )
        )
    return summaries


def run_sweep(cfg: RegimeConfig, workers: int | None = None) -> SweepResult:
    """
    All trials of `cfg`: for every n, seeds base + 0 .. base + trials - 1.

    Trials run in a process pool when more than one worker is requested;
    results keep trial order regardless of completion order.
    """
    jobs = [(cfg, n, cfg.seed + index) for n in cfg.n for index in range(cfg.trials)]
    workers = workers or cfg.workers
    logger.info("sweep: %d trials on %d worker(s)", len(jobs), workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_sweep_job, jobs))
    else:
        trials = [_sweep_job(job) for job in jobs]
    return SweepResult(config=cfg, trials=trials, summaries=summarize(cfg, trials))


def _write_trials(result: SweepResult, out_dir: Path, manifest: RunManifest) -> list[Path]:
    trials_path = write_rows_csv(
        TRIAL_COLUMNS, (t.row() for t in result.trials), out_dir / "trials.csv"
    )
    summary_path = write_rows_csv(
        SUMMARY_COLUMNS, (s.row() for s in result.summaries), out_dir / "summary.csv"
    )
    manifest.timings["trials"] = sum(t.wall_time for t in result.trials)
    manifest.results["summaries"] = [
        dict(zip(SUMMARY_COLUMNS, s.row())) for s in result.summaries
    ]
    return [trials_path, summary_path]


def _finish(
    manifest: RunManifest,
    out_dir: Path,
    outputs: list[Path],
    summaries: list[SweepSummary],
) -> RunManifest:
    outputs.extend(write_report(manifest, summaries, out_dir))
    manifest.add_outputs(out_dir, outputs)
    manifest.write(out_dir)
    logger.info("wrote %d files and manifest to %s", len(outputs), out_dir)
    return manifest


def write_sweep(result: SweepResult, out_dir: Path) -> RunManifest:
    """Write trials.csv, summary.csv, the run report and manifest.json."""
    ensure_dir(out_dir)
    manifest = RunManifest(
        command="sweep", config=result.config.echo(), base_seed=result.config.seed
    )
    outputs = _write_trials(result, out_dir, manifest)
    return _finish(manifest, out_dir, outputs, result.summaries)


def _require_lattice_closed_form(cfg: RegimeConfig) -> None:
    if cfg.d != 1 or cfg.metric != "euclidean":
        raise ConfigError(
            "the analytic curve exists only for d = 1 with the euclidean metric, "
            f"got d={cfg.d}, metric={cfg.metric}"
        )


def _trials_for_figure(
    cfg: RegimeConfig, out_dir: Path, manifest: RunManifest
) -> tuple[list[Path], list[SweepSummary]]:
    if not cfg.rgg:
        return [], []
    result = run_sweep(cfg)
    return _write_trials(result, out_dir, manifest), result.summaries


def reproduce_fig2a(
    cfg: RegimeConfig, out_dir: Path, n_values: list[int] | None = None
) -> RunManifest:
    """
    Connectivity-regime CDF curves: one RGG and one lattice curve per n,
    plus trials.csv over `cfg.trials` seeds.

    The manifest records the Levy distance between the two curves and the
    share of each spectrum inside DIRAC_WINDOW.
    """
    if cfg.regime != "connectivity":
        raise ConfigError(f"fig2a needs regime connectivity, got {cfg.regime}")
    cfg = with_overrides(cfg, n=n_values)
    grid = cdf_grid(cfg.grid_points)
    ensure_dir(out_dir)
    manifest = RunManifest(command="fig2a", config=cfg.echo(), base_seed=cfg.seed)
    outputs: list[Path] = []

    for n in cfg.n:
        started = time.perf_counter()
        r = cfg.radius(n)
        dgg_esd = graph_spectrum(build_dgg(n, r, cfg.d, cfg.metric_spec), cfg.alpha, cfg.eigen_cap)
        outputs.append(write_cdf_csv(dgg_esd, grid, out_dir / "curves" / f"dgg_n{n}.csv"))
        entry: dict[str, Any] = {"radius": r, "dgg_dirac_mass": dgg_esd.mass_within(*DIRAC_WINDOW)}
        if cfg.rgg:
            _check_eigen_cap(cfg, n)
            rgg = sample_rgg(n, r, cfg.d, cfg.metric_spec, cfg.seed)
            rgg_esd = eigenvalues_dense(assemble(rgg, cfg.alpha), cap=cfg.eigen_cap)
            outputs.append(write_cdf_csv(rgg_esd, grid, out_dir / "curves" / f"rgg_n{n}.csv"))
            entry["rgg_dirac_mass"] = rgg_esd.mass_within(*DIRAC_WINDOW)
            entry["levy_rgg_dgg"] = levy_distance(rgg_esd, dgg_esd, cfg.tol)
        manifest.results[f"n={n}"] = entry
        manifest.timings[f"curves n={n}"] = time.perf_counter() - started
        logger.info("fig2a curves for n=%d written", n)

    trial_outputs, summaries = _trials_for_figure(cfg, out_dir, manifest)
    return _finish(manifest, out_dir, outputs + trial_outputs, summaries)


def reproduce_fig2b(
    cfg: RegimeConfig, out_dir: Path, n_values: list[int] | None = None
) -> RunManifest:
    """
    Thermodynamic-regime CDF curves: RGG and lattice curves per n, the
    limiting analytic curve sampled at `cfg.samples` frequencies, and
    trials.csv over `cfg.trials` seeds.
    """
    if cfg.regime != "thermodynamic":
        raise ConfigError(f"fig2b needs regime thermodynamic, got {cfg.regime}")
    _require_lattice_closed_form(cfg)
    cfg = with_overrides(cfg, n=n_values)
    grid = cdf_grid(cfg.grid_points)
    ensure_dir(out_dir)
    manifest = RunManifest(command="fig2b", config=cfg.echo(), base_seed=cfg.seed)

    started = time.perf_counter()
    analytic = lemma2_spectrum(cfg.gamma, cfg.alpha, cfg.samples)
    outputs = [write_cdf_csv(analytic, grid, out_dir / "curves" / "analytic.csv")]
    manifest.timings["analytic"] = time.perf_counter() - started
    manifest.results["theorem2_bound"] = theorem2_bound(cfg.gamma, cfg.alpha)
    manifest.results["theorem2_asymptotic_bound"] = theorem2_asymptotic_bound(cfg.gamma)

    for n in cfg.n:
        started = time.perf_counter()
        r = cfg.radius(n)
        dgg_esd = graph_spectrum(build_dgg(n, r, cfg.d, cfg.metric_spec), cfg.alpha, cfg.eigen_cap)
        outputs.append(write_cdf_csv(dgg_esd, grid, out_dir / "curves" / f"dgg_n{n}.csv"))
        entry: dict[str, Any] = {"radius": r, "ks_dgg_analytic": ks_distance(dgg_esd, analytic)}
        if cfg.rgg:
            _check_eigen_cap(cfg, n)
            rgg = sample_rgg(n, r, cfg.d, cfg.metric_spec, cfg.seed)
            rgg_esd = eigenvalues_dense(assemble(rgg, cfg.alpha), cap=cfg.eigen_cap)
            outputs.append(write_cdf_csv(rgg_esd, grid, out_dir / "curves" / f"rgg_n{n}.csv"))
            report = distance_report(rgg_esd, dgg_esd, cfg.tol)
            entry.update(
                {
                    "rgg_average_degree": average_degree(rgg),
                    "ks_rgg_analytic": ks_distance(rgg_esd, analytic),
                    "levy_cubed_rgg_dgg": report.levy_cubed,
                    "ks_rgg_dgg": report.ks,
                }
            )
        manifest.results[f"n={n}"] = entry
        manifest.timings[f"curves n={n}"] = time.perf_counter() - started
        logger.info("fig2b curves for n=%d written", n)

    trial_outputs, summaries = _trials_for_figure(cfg, out_dir, manifest)
    return _finish(manifest, out_dir, outputs + trial_outputs, summaries)
