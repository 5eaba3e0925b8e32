"""
Unit tests for file formats and manifests.
"""

import json

import numpy as np
import pytest

from rggspectra.errors import ConfigError, DataIOError
from rggspectra.geometry import Metric, uniform_points
from rggspectra.graphs import build_dgg, sample_rgg
from rggspectra.laplacian import assemble
from rggspectra.spectra import SpectralDistribution, eigenvalues_dense
from rggspectra.tables import (
    RunManifest,
    ensure_dir,
    format_value,
    read_eigenvalues_csv,
    read_graph,
    read_points_csv,
    verify_manifest,
    write_cdf_csv,
    write_eigenvalues_csv,
    write_graph,
    write_matrix_csv,
    write_points_csv,
)


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value(7) == "7"


def test_cdf_rows(tmp_path):
    path = write_cdf_csv(SpectralDistribution([0.0, 2.0]), [-1.0, 1.0, 3.0], tmp_path / "cdf.csv")
    assert path.read_text() == "x,F\n-1,0\n1,0.5\n3,1\n"


def test_cdf_empty_grid(tmp_path):
    path = write_cdf_csv(SpectralDistribution([0.0, 2.0]), [], tmp_path / "cdf.csv")
    assert path.read_text() == "x,F\n"


def test_cdf_grid_must_be_sorted(tmp_path):
    with pytest.raises(ConfigError):
        write_cdf_csv(SpectralDistribution([0.0]), [1.0, 0.0], tmp_path / "cdf.csv")


def test_eigenvalues_round_trip(tmp_path):
    esd = eigenvalues_dense(assemble(sample_rgg(64, 0.1, seed=2), alpha=0.001))
    path = write_eigenvalues_csv(esd, tmp_path / "eigs.csv")
    assert path.read_text().splitlines()[0] == "lambda"
    assert np.array_equal(read_eigenvalues_csv(path).eigenvalues, esd.eigenvalues)


def test_eigenvalue_reader_rejects_garbage(tmp_path):
    path = tmp_path / "eigs.csv"
    path.write_text("lambda\nabc\n")
    with pytest.raises(DataIOError, match="non-numeric"):
        read_eigenvalues_csv(path)
    path.write_text("value\n1.0\n")
    with pytest.raises(DataIOError, match="header"):
        read_eigenvalues_csv(path)
    with pytest.raises(DataIOError):
        read_eigenvalues_csv(tmp_path / "missing.csv")


def test_points_round_trip(tmp_path):
    points = uniform_points(50, 3, seed=4)
    path = write_points_csv(points, tmp_path / "points.csv")
    assert np.array_equal(read_points_csv(path, seed=4).coords, points.coords)


@pytest.mark.parametrize(
    "graph",
    [
        sample_rgg(100, 0.05, d=2, metric=Metric("lp", 3.0), seed=11),
        build_dgg(64, 0.05),
    ],
)
def test_graph_round_trip(tmp_path, graph):
    edges_path, sidecar = write_graph(graph, tmp_path / "g.csv")
    assert json.loads(sidecar.read_text())["kind"] == graph.kind
    loaded = read_graph(edges_path)
    assert np.array_equal(loaded.edges, graph.edges)
    assert loaded.provenance == graph.provenance


def test_matrix_dump(tmp_path):
    path = write_matrix_csv(assemble(build_dgg(8, 0.25)), tmp_path / "L.csv")
    rows = path.read_text().splitlines()
    assert len(rows) == 8
    assert rows[0] == "1,-0.25,-0.25,0,0,0,-0.25,-0.25"


def test_matrix_dump_is_limited(tmp_path):
    with pytest.raises(ConfigError):
        write_matrix_csv(assemble(build_dgg(1100, 0.01)), tmp_path / "L.csv")


def test_manifest_detects_corruption(tmp_path):
    out = tmp_path / "run"
    files = []
    for name in ("a.csv", "curves/b.csv"):
        path = out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("x,F\n0,0.5\n")
        files.append(path)
    manifest = RunManifest(command="sweep", config={"regime": "dense"}, base_seed=0)
    manifest.add_outputs(out, files)
    manifest.write(out)
    assert verify_manifest(out) == []

    original = files[1].read_bytes()
    for index in range(len(original)):
        corrupted = bytearray(original)
        corrupted[index] ^= 0x01
        files[1].write_bytes(bytes(corrupted))
        assert verify_manifest(out) == ["curves/b.csv"]
    files[1].write_bytes(original)
    files[0].unlink()
    assert verify_manifest(out) == ["a.csv"]


def test_write_failure_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(DataIOError, match="file"):
        write_eigenvalues_csv(SpectralDistribution([0.0]), blocker / "eigs.csv")


def test_manifest_writes_nan_as_null(tmp_path):
    manifest = RunManifest(command="sweep", config={"regime": "connectivity"}, base_seed=0)
    manifest.results = {"summaries": [{"mean_levy": float("nan"), "n": 64}], "ks": np.float64("inf")}
    text = manifest.write(tmp_path).read_text()
    assert "NaN" not in text
    assert "Infinity" not in text
    payload = json.loads(text)
    assert payload["results"] == {"summaries": [{"mean_levy": None, "n": 64}], "ks": None}


def test_ensure_dir_reports_blocking_file(tmp_path):
    blocker = tmp_path / "taken"
    blocker.write_text("")
    with pytest.raises(DataIOError, match="taken"):
        ensure_dir(blocker)
    assert ensure_dir(tmp_path / "a" / "b").is_dir()
