from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator
import json
import logging

import typer

from .analytic import lemma1_spectrum, lemma2_spectrum
from .config import RegimeConfig, load_config, with_overrides
from .errors import ConfigError, DataIOError, RGGSpectraError
from .experiments import reproduce_fig2a, reproduce_fig2b, run_sweep, write_sweep
from .geometry import Metric, lattice_points, uniform_points
from .graphs import GeometricGraph, build_dgg, rgg_from_points
from .laplacian import assemble
from .metrics import DEFAULT_TOLERANCE, distance_report
from .scaffold import PRESETS, create_config
from .spectra import DEFAULT_EIGEN_CAP, SpectralDistribution, graph_spectrum
from .tables import (
    cdf_grid,
    check_matrix_dump,
    read_eigenvalues_csv,
    read_graph,
    verify_manifest,
    write_cdf_csv,
    write_eigenvalues_csv,
    write_graph,
    write_matrix_csv,
    write_points_csv,
)

app = typer.Typer(
    help="rggspectra - Laplacian spectra of random and lattice geometric graphs on the torus.",
)

graph_app = typer.Typer(help="Build geometric graphs and write them as edge lists.")
analytic_app = typer.Typer(help="Closed-form spectra of the 1-d lattice graph.")
experiment_app = typer.Typer(help="Seeded Monte Carlo experiments.")
new_app = typer.Typer(help="Create starter config files.")
app.add_typer(graph_app, name="graph")
app.add_typer(analytic_app, name="analytic")
app.add_typer(experiment_app, name="experiment")
app.add_typer(new_app, name="new")


@contextmanager
def _reporting_errors() -> Iterator[None]:
    """Turn library errors into a one-line diagnostic and the matching exit code."""
    try:
        yield
    except RGGSpectraError as exc:
        typer.echo(f"❌ {exc}", err=True)
        raise typer.Exit(code=exc.exit_code)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress (INFO)."),
    debug: bool = typer.Option(False, "--debug", help="Log everything (DEBUG)."),
) -> None:
    """Configure logging for every subcommand."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _write_spectrum(
    distribution: SpectralDistribution,
    out: Path,
    cdf_out: Path | None,
    grid_points: int,
) -> None:
    write_eigenvalues_csv(distribution, out)
    typer.echo(f"✅ Wrote {distribution.n} eigenvalues: {out}")
    if cdf_out is not None:
        write_cdf_csv(distribution, cdf_grid(grid_points), cdf_out)
        typer.echo(f"✅ Wrote CDF on {grid_points} grid points: {cdf_out}")


# -- graph ---------------------------------------------------------------------


def _save_graph(graph: GeometricGraph, out: Path) -> None:
    edges, sidecar = write_graph(graph, out)
    typer.echo(f"✅ {graph.provenance.describe()}: {len(graph.edges)} edges")
    typer.echo(f"   edges: {edges}")
    typer.echo(f"   sidecar: {sidecar}")


@graph_app.command("rgg")
def graph_rgg(
    n: int = typer.Option(..., "--n", help="Number of vertices."),
    r: float = typer.Option(..., "--r", help="Connection radius in (0, 1/2]."),
    d: int = typer.Option(1, "--d", help="Torus dimension."),
    metric: str = typer.Option("euclidean", "--metric", help="euclidean, chebyshev or lp."),
    p: float = typer.Option(None, "--p", help="Exponent for the lp metric."),
    seed: int = typer.Option(0, "--seed", help="Seed of the point sampler."),
    out: Path = typer.Option(..., "--out", help="Edge-list CSV; the sidecar gets a .json suffix."),
    points_out: Path = typer.Option(None, "--points-out", help="Also write the sampled points."),
) -> None:
    """
    Sample a random geometric graph on the torus.
    """
    with _reporting_errors():
        points = uniform_points(n, d, seed)
        graph = rgg_from_points(points, r, Metric.parse(metric, p))
        _save_graph(graph, out)
        if points_out is not None:
            write_points_csv(points, points_out)
            typer.echo(f"   points: {points_out}")


@graph_app.command("dgg")
def graph_dgg(
    n: int = typer.Option(..., "--n", help="Number of vertices (a perfect d-th power)."),
    r: float = typer.Option(..., "--r", help="Connection radius in (0, 1/2]."),
    d: int = typer.Option(1, "--d", help="Torus dimension."),
    metric: str = typer.Option("euclidean", "--metric", help="euclidean, chebyshev or lp."),
    p: float = typer.Option(None, "--p", help="Exponent for the lp metric."),
    out: Path = typer.Option(..., "--out", help="Edge-list CSV; the sidecar gets a .json suffix."),
    points_out: Path = typer.Option(None, "--points-out", help="Also write the lattice points."),
) -> None:
    """
    Build the deterministic lattice graph with spacing n^(-1/d).
    """
    with _reporting_errors():
        graph = build_dgg(n, r, d, Metric.parse(metric, p))
        _save_graph(graph, out)
        if points_out is not None:
            write_points_csv(lattice_points(n, d), points_out)
            typer.echo(f"   points: {points_out}")


# -- spectrum ------------------------------------------------------------------


@app.command("spectrum")
def spectrum(
    graph_path: Path = typer.Option(
        None, "--graph", help="Edge-list CSV written by `graph` (sidecar next to it)."
    ),
    kind: str = typer.Option(None, "--kind", help="Inline graph: rgg or dgg."),
    n: int = typer.Option(None, "--n", help="Inline graph: number of vertices."),
    r: float = typer.Option(None, "--r", help="Inline graph: connection radius."),
    d: int = typer.Option(1, "--d", help="Inline graph: torus dimension."),
    metric: str = typer.Option("euclidean", "--metric", help="Inline graph: metric."),
    p: float = typer.Option(None, "--p", help="Inline graph: lp exponent."),
    seed: int = typer.Option(0, "--seed", help="Inline graph: RGG seed."),
    alpha: float = typer.Option(0.0, "--alpha", help="Regularizer alpha >= 0."),
    out: Path = typer.Option(..., "--out", help="Eigenvalue CSV."),
    cdf_out: Path = typer.Option(None, "--cdf-out", help="Also write the ESD on a grid."),
    grid_points: int = typer.Option(401, "--grid-points", help="CDF grid size on [0, 2]."),
    cap: int = typer.Option(DEFAULT_EIGEN_CAP, "--cap", help="Largest dense eigensolve."),
    verify: bool = typer.Option(False, "--verify", help="Check eigen residuals."),
    dump_matrix: Path = typer.Option(
        None, "--dump-matrix", help="Write the dense Laplacian as CSV (n <= 1024)."
    ),
) -> None:
    """
    Full spectrum of the regularized normalized Laplacian.

    1-d lattice graphs use the FFT of the circulant first row; everything
    else goes through the dense symmetric eigensolver.
    """
    with _reporting_errors():
        if graph_path is not None:
            graph = read_graph(graph_path)
        else:
            if kind not in ("rgg", "dgg") or n is None or r is None:
                raise ConfigError("give --graph, or --kind rgg|dgg with --n and --r")
            metric_spec = Metric.parse(metric, p)
            if kind == "rgg":
                graph = rgg_from_points(uniform_points(n, d, seed), r, metric_spec)
            else:
                graph = build_dgg(n, r, d, metric_spec)
        if dump_matrix is not None:
            check_matrix_dump(graph.n)
            write_matrix_csv(assemble(graph, alpha), dump_matrix)
            typer.echo(f"✅ Wrote matrix: {dump_matrix}")
        distribution = graph_spectrum(graph, alpha, cap=cap, verify=verify)
        _write_spectrum(distribution, out, cdf_out, grid_points)


# -- analytic ------------------------------------------------------------------


@analytic_app.command("lemma1")
def analytic_lemma1(
    n: int = typer.Option(..., "--n", help="Number of lattice vertices."),
    r: float = typer.Option(..., "--r", help="Connection radius."),
    out: Path = typer.Option(..., "--out", help="Eigenvalue CSV."),
    cdf_out: Path = typer.Option(None, "--cdf-out", help="Also write the ESD on a grid."),
    grid_points: int = typer.Option(401, "--grid-points", help="CDF grid size on [0, 2]."),
) -> None:
    """
    Exact finite-n lattice spectrum with degree a' = 2 floor(n r), alpha = 0.
    """
    with _reporting_errors():
        _write_spectrum(lemma1_spectrum(n, r), out, cdf_out, grid_points)


@analytic_app.command("lemma2")
def analytic_lemma2(
    gamma: float = typer.Option(12.0, "--gamma", help="Nominal degree gamma >= 2."),
    alpha: float = typer.Option(0.0, "--alpha", help="Regularizer alpha >= 0."),
    samples: int = typer.Option(30000, "--samples", help="Frequencies sampled on [0, pi)."),
    out: Path = typer.Option(..., "--out", help="Eigenvalue CSV."),
    cdf_out: Path = typer.Option(None, "--cdf-out", help="Also write the ESD on a grid."),
    grid_points: int = typer.Option(401, "--grid-points", help="CDF grid size on [0, 2]."),
) -> None:
    """
    Limiting thermodynamic-regime spectrum with gamma' = 2 floor(gamma).
    """
    with _reporting_errors():
        _write_spectrum(lemma2_spectrum(gamma, alpha, samples), out, cdf_out, grid_points)


# -- distance ------------------------------------------------------------------


@app.command("distance")
def distance(
    a: Path = typer.Option(..., "--a", help="First eigenvalue CSV."),
    b: Path = typer.Option(..., "--b", help="Second eigenvalue CSV."),
    tol: float = typer.Option(DEFAULT_TOLERANCE, "--tol", help="Bisection tolerance."),
) -> None:
    """
    Levy, cubed Levy and Kolmogorov-Smirnov distances between two ESDs (JSON on stdout).
    """
    with _reporting_errors():
        report = distance_report(read_eigenvalues_csv(a), read_eigenvalues_csv(b), tol)
        typer.echo(json.dumps(report.to_dict(), sort_keys=True))


# -- experiments ---------------------------------------------------------------


def _experiment_options(config: Path, workers: int | None) -> RegimeConfig:
    cfg = load_config(config)
    return with_overrides(cfg, workers=workers)


@experiment_app.command("fig2a")
def experiment_fig2a(
    config: Path = typer.Option(..., "--config", help="JSON/YAML config (regime connectivity)."),
    out_dir: Path = typer.Option(..., "--out-dir", help="Output directory."),
    workers: int = typer.Option(None, "--workers", help="Parallel trials (overrides config)."),
) -> None:
    """
    Connectivity-regime RGG and lattice CDF curves per n, plus trials.
    """
    with _reporting_errors():
        cfg = _experiment_options(config, workers)
        reproduce_fig2a(cfg, out_dir)
        typer.echo(f"✅ fig2a written to {out_dir}")


@experiment_app.command("fig2b")
def experiment_fig2b(
    config: Path = typer.Option(..., "--config", help="JSON/YAML config (regime thermodynamic)."),
    out_dir: Path = typer.Option(..., "--out-dir", help="Output directory."),
    workers: int = typer.Option(None, "--workers", help="Parallel trials (overrides config)."),
) -> None:
    """
    Thermodynamic-regime RGG, lattice and analytic CDF curves, plus trials.
    """
    with _reporting_errors():
        cfg = _experiment_options(config, workers)
        reproduce_fig2b(cfg, out_dir)
        typer.echo(f"✅ fig2b written to {out_dir}")


@experiment_app.command("sweep")
def experiment_sweep(
    config: Path = typer.Option(..., "--config", help="JSON/YAML config (any regime)."),
    out_dir: Path = typer.Option(..., "--out-dir", help="Output directory."),
    workers: int = typer.Option(None, "--workers", help="Parallel trials (overrides config)."),
) -> None:
    """
    Run every (n, seed) trial of a config and summarize L^3 per n.
    """
    with _reporting_errors():
        cfg = _experiment_options(config, workers)
        result = run_sweep(cfg)
        write_sweep(result, out_dir)
        for summary in result.summaries:
            fraction = (
                "" if summary.bound_fraction is None else f", bound held in {summary.bound_fraction:.0%}"
            )
            typer.echo(
                f"n={summary.n}: mean L^3 = {summary.mean_levy_cubed:.6g} "
                f"(std {summary.std_levy_cubed:.3g}, {summary.singular} singular{fraction})"
            )
        typer.echo(f"✅ sweep written to {out_dir}")


@app.command("verify")
def verify(
    out_dir: Path = typer.Option(..., "--out-dir", help="Experiment output directory."),
) -> None:
    """
    Recompute the checksums recorded in manifest.json.
    """
    with _reporting_errors():
        mismatched = verify_manifest(out_dir)
        if mismatched:
            raise DataIOError(out_dir, "checksum mismatch: " + ", ".join(mismatched))
        typer.echo(f"✅ All checksums match in {out_dir}")


# -- new -----------------------------------------------------------------------


@new_app.command("config")
def new_config(
    preset: str = typer.Argument(..., help=f"One of: {', '.join(PRESETS)}."),
    name: str = typer.Option(None, "--name", help="File name (slugified; default: preset)."),
    directory: Path = typer.Option(Path("."), "--dir", help="Where to write the config."),
) -> None:
    """
    Create a starter experiment config.
    """
    with _reporting_errors():
        path = create_config(directory.resolve(), preset, name)
        typer.echo(f"✅ Created config: {path}")


if __name__ == "__main__":
    app()
