"""
CSV / JSON readers and writers, and run manifests.

Every float is written with 17 significant digits, which round-trips an
IEEE double exactly.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence
import csv
import hashlib
import json
import logging
import platform

import numpy as np
import scipy

from . import __version__
from .errors import ConfigError, DataIOError
from .geometry import Metric, PointSet
from .graphs import GeometricGraph
from .laplacian import RegularizedLaplacian
from .spectra import SpectralDistribution

logger = logging.getLogger(__name__)

MATRIX_DUMP_LIMIT = 1024
MANIFEST_NAME = "manifest.json"


def format_value(value: Any) -> str:
    """Stable text form: floats as %.17g, bools lower-case, None empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc
    return path


@contextmanager
def open_for_write(path: Path) -> Iterator[Any]:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            yield handle
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc
    if not rows:
        raise DataIOError(path, "empty file, expected a header row")
    return rows[0], [row for row in rows[1:] if row]


def write_rows_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], path: Path) -> Path:
    with open_for_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    logger.debug("wrote %s", path)
    return path


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats with None so the output stays strict JSON."""
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if isinstance(value, (float, np.floating)):
        return float(value) if np.isfinite(value) else None
    return value


def write_json(payload: Any, path: Path) -> Path:
    with open_for_write(path) as handle:
        json.dump(_json_safe(payload), handle, indent=2, sort_keys=True, allow_nan=False)
        handle.write("\n")
    logger.debug("wrote %s", path)
    return path


def read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc
    except json.JSONDecodeError as exc:
        raise DataIOError(path, f"invalid JSON: {exc}") from exc


# -- points ------------------------------------------------------------------


def write_points_csv(points: PointSet, path: Path) -> Path:
    header = [f"x{k}" for k in range(points.d)]
    return write_rows_csv(header, points.coords.tolist(), path)


def read_points_csv(path: Path, kind: str = "random", seed: int | None = None) -> PointSet:
    header, rows = _read_rows(path)
    if header != [f"x{k}" for k in range(len(header))]:
        raise DataIOError(path, f"unexpected points header {header}")
    coords = np.array([[float(value) for value in row] for row in rows], dtype=np.float64)
    return PointSet(coords.reshape(len(rows), len(header)), kind=kind, seed=seed)  # type: ignore[arg-type]


# -- graphs ------------------------------------------------------------------


def sidecar_path(edges_path: Path) -> Path:
    return edges_path.with_suffix(".json")


def write_graph(graph: GeometricGraph, path: Path) -> tuple[Path, Path]:
    """Edge list `u,v` (u < v) plus a JSON sidecar with the construction parameters."""
    write_rows_csv(["u", "v"], graph.edges.tolist(), path)
    sidecar = write_json(
        {
            "n": graph.n,
            "d": graph.d,
            "r": graph.r,
            "metric": graph.metric.kind,
            "p": graph.metric.p,
            "kind": graph.kind,
            "seed": graph.seed,
        },
        sidecar_path(path),
    )
    return path, sidecar


def read_graph(path: Path) -> GeometricGraph:
    meta = read_json(sidecar_path(path))
    header, rows = _read_rows(path)
    if header != ["u", "v"]:
        raise DataIOError(path, f"unexpected edge header {header}")
    try:
        return GeometricGraph(
            n=int(meta["n"]),
            d=int(meta["d"]),
            r=float(meta["r"]),
            metric=Metric.parse(meta["metric"], meta.get("p")),
            kind=meta["kind"],
            edges=np.array([[int(u), int(v)] for u, v in rows], dtype=np.int64),
            seed=meta.get("seed"),
        )
    except (KeyError, ValueError) as exc:
        raise DataIOError(path, f"malformed graph files: {exc}") from exc


# -- spectra -----------------------------------------------------------------


def write_eigenvalues_csv(distribution: SpectralDistribution, path: Path) -> Path:
    return write_rows_csv(["lambda"], ([value] for value in distribution.eigenvalues), path)


def read_eigenvalues_csv(path: Path, label: str | None = None) -> SpectralDistribution:
    header, rows = _read_rows(path)
    if header != ["lambda"]:
        raise DataIOError(path, f"unexpected eigenvalue header {header}")
    try:
        values = np.array([float(row[0]) for row in rows], dtype=np.float64)
    except ValueError as exc:
        raise DataIOError(path, f"non-numeric eigenvalue: {exc}") from exc
    if values.size == 0:
        raise DataIOError(path, "no eigenvalues")
    return SpectralDistribution(values, label=label or path.stem)


def cdf_grid(points: int, lo: float = 0.0, hi: float = 2.0) -> np.ndarray:
    return np.linspace(lo, hi, points)


def write_cdf_csv(distribution: SpectralDistribution, grid: Sequence[float], path: Path) -> Path:
    """Rows `x,F` of the ESD evaluated on a sorted grid."""
    grid_arr = np.asarray(grid, dtype=np.float64)
    if grid_arr.size and np.any(np.diff(grid_arr) < 0):
        raise ConfigError("CDF grid must be sorted ascending")
    values = distribution.cdf(grid_arr) if grid_arr.size else np.empty(0)
    return write_rows_csv(["x", "F"], zip(grid_arr.tolist(), np.atleast_1d(values).tolist()), path)


def check_matrix_dump(n: int) -> None:
    if n > MATRIX_DUMP_LIMIT:
        raise ConfigError(f"matrix dumps are limited to n <= {MATRIX_DUMP_LIMIT}, got n={n}")


def write_matrix_csv(laplacian: RegularizedLaplacian, path: Path) -> Path:
    check_matrix_dump(laplacian.n)
    matrix = laplacian.to_dense()
    with open_for_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in matrix:
            writer.writerow([format_value(value) for value in row.tolist()])
    return path


# -- manifests ---------------------------------------------------------------


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    try:
        with path.open("rb") as handle:
            for chunk in iter(lambda: handle.read(1 << 16), b""):
                digest.update(chunk)
    except OSError as exc:
        raise DataIOError(path, exc.strerror or exc) from exc
    return digest.hexdigest()


@dataclass
class RunManifest:
    """
    Reproducibility record of an experiment run.

    Attributes:
        command: experiment that produced the directory (fig2a, fig2b, sweep).
        config: full config echo.
        base_seed: seed trial seeds are derived from.
        timings: wall-clock seconds per stage.
        results: small summary values (distances, mass fractions).
        checksums: SHA-256 of every emitted file, keyed by relative path.
    """

    command: str
    config: dict[str, Any]
    base_seed: int
    timings: dict[str, float] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    checksums: dict[str, str] = field(default_factory=dict)
    versions: dict[str, str] = field(
        default_factory=lambda: {
            "rggspectra": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        }
    )

    def add_outputs(self, root: Path, paths: Iterable[Path]) -> None:
        for path in paths:
            self.checksums[path.relative_to(root).as_posix()] = sha256_file(path)

    def write(self, root: Path) -> Path:
        return write_json(asdict(self), root / MANIFEST_NAME)


def verify_manifest(root: Path) -> list[str]:
    """Relative paths whose current checksum differs from the manifest (or are missing)."""
    manifest = read_json(root / MANIFEST_NAME)
    mismatched = []
    for relative, expected in sorted(manifest.get("checksums", {}).items()):
        target = root / relative
        if not target.is_file() or sha256_file(target) != expected:
            mismatched.append(relative)
    return mismatched
