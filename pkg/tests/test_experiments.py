"""
Tests for the Monte Carlo harness and the figure reproductions.

The slow tests run the desk-scale acceptance experiments; select them with
`pytest -m slow`.
"""

import csv
import json
import math

import numpy as np
import pytest
from pytest import approx

from rggspectra.config import parse_config
from rggspectra.errors import ConfigError, EigenCapError
from rggspectra.experiments import (
    TRIAL_COLUMNS,
    reproduce_fig2a,
    reproduce_fig2b,
    run_sweep,
    run_trial,
    write_sweep,
)
from rggspectra.tables import verify_manifest


def _cfg(**values):
    return parse_config(json.dumps(values))


def _read_csv(path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


# -- single trials -----------------------------------------------------------------


def test_complete_graphs_have_equal_spectra():
    cfg = _cfg(regime="dense", rho=1.0, n=[4])
    assert cfg.radius(4) == 0.5
    trial = run_trial(cfg, 4, seed=3)
    assert trial.rgg_average_degree == 3.0
    assert trial.dgg_degree == 3.0
    assert trial.levy == approx(0.0, abs=2e-9)
    assert trial.theorem2_bound is None


def test_thermodynamic_trial_fields():
    cfg = _cfg(regime="thermodynamic", gamma=12, alpha=0.001, n=[256])
    trial = run_trial(cfg, 256, seed=0)
    assert trial.levy_cubed == trial.levy**3
    assert trial.levy <= trial.ks
    assert trial.dgg_degree == 24.0
    assert trial.theorem2_bound == approx(96 / 24.001**2)
    assert trial.theorem2_asymptotic_bound == approx(1 / 6)
    assert trial.bound_satisfied == (trial.levy_cubed <= trial.theorem2_bound)
    assert trial.side_condition


def test_trial_respects_eigen_cap():
    cfg = _cfg(regime="thermodynamic", n=[256], eigen_cap=128)
    with pytest.raises(EigenCapError):
        run_trial(cfg, 256, seed=0)


# -- sweeps ------------------------------------------------------------------------


def test_sweep_seeds_and_order():
    cfg = _cfg(regime="connectivity", n=[64, 128], trials=3, seed=10)
    result = run_sweep(cfg)
    assert [(t.n, t.seed) for t in result.trials] == [
        (64, 10), (64, 11), (64, 12), (128, 10), (128, 11), (128, 12)
    ]
    for trial in result.trials:
        assert trial.dgg_degree == 2 * math.floor(trial.n * trial.radius + 1e-9)
    assert [s.trials for s in result.summaries] == [3, 3]
    assert result.summaries[0].bound_fraction is None


def test_different_base_seeds_differ():
    a = run_sweep(_cfg(regime="connectivity", n=[128], trials=2, seed=0))
    b = run_sweep(_cfg(regime="connectivity", n=[128], trials=2, seed=100))
    assert [t.levy for t in a.trials] != [t.levy for t in b.trials]
    assert a.config.echo() | {"seed": 0} == b.config.echo() | {"seed": 0}


def test_pool_matches_serial():
    cfg = _cfg(regime="thermodynamic", n=[64], trials=4, seed=5)
    serial = run_sweep(cfg, workers=1)
    pooled = run_sweep(cfg, workers=2)
    assert serial.trials == pooled.trials


def test_isolated_vertices_become_singular_rows(tmp_path):
    cfg = _cfg(regime="connectivity", n=[64], trials=2, c=0.1)
    result = run_sweep(cfg)
    assert all(t.singular for t in result.trials)
    assert all(math.isnan(t.levy) for t in result.trials)
    assert result.summaries[0].singular == 2
    write_sweep(result, tmp_path)
    rows = _read_csv(tmp_path / "trials.csv")
    assert rows[0]["singular"] == "true"
    assert rows[0]["levy"] == "nan"


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def test_all_singular_manifest_is_strict_json(tmp_path):
    cfg = _cfg(regime="connectivity", n=[64], trials=2, c=0.1)
    write_sweep(run_sweep(cfg), tmp_path)
    text = (tmp_path / "manifest.json").read_text()
    manifest = json.loads(text, parse_constant=_reject_constant)
    summary = manifest["results"]["summaries"][0]
    assert summary["singular"] == 2
    assert summary["mean_levy"] is None
    assert summary["mean_levy_cubed"] is None
    assert verify_manifest(tmp_path) == []


def test_sweep_output_is_byte_identical(tmp_path):
    cfg = _cfg(regime="thermodynamic", n=[64, 100], trials=3, seed=1)
    write_sweep(run_sweep(cfg), tmp_path / "a")
    write_sweep(run_sweep(cfg), tmp_path / "b")
    first = (tmp_path / "a" / "trials.csv").read_bytes()
    assert first == (tmp_path / "b" / "trials.csv").read_bytes()
    assert first.decode().splitlines()[0] == ",".join(TRIAL_COLUMNS)
    assert verify_manifest(tmp_path / "a") == []
    assert (tmp_path / "a" / "report.html").exists()


# -- figures -----------------------------------------------------------------------


def test_fig2a_outputs(tmp_path):
    cfg = _cfg(regime="connectivity", n=[64, 128], trials=2, grid_points=11)
    manifest = reproduce_fig2a(cfg, tmp_path)
    for n in (64, 128):
        assert len(_read_csv(tmp_path / "curves" / f"dgg_n{n}.csv")) == 11
        assert (tmp_path / "curves" / f"rgg_n{n}.csv").exists()
        assert 0.0 <= manifest.results[f"n={n}"]["levy_rgg_dgg"] <= 1.0
    assert len(_read_csv(tmp_path / "trials.csv")) == 4
    assert verify_manifest(tmp_path) == []


def test_fig2a_needs_connectivity(tmp_path):
    with pytest.raises(ConfigError):
        reproduce_fig2a(_cfg(regime="dense"), tmp_path)


def test_fig2b_lattice_and_analytic_agree(tmp_path):
    cfg = _cfg(regime="thermodynamic", gamma=12, alpha=0.001, n=[4096], rgg=False)
    manifest = reproduce_fig2b(cfg, tmp_path)
    assert (tmp_path / "curves" / "analytic.csv").exists()
    assert (tmp_path / "curves" / "dgg_n4096.csv").exists()
    assert not (tmp_path / "trials.csv").exists()
    assert manifest.results["n=4096"]["ks_dgg_analytic"] <= 0.02
    assert manifest.results["theorem2_bound"] == approx(0.16665, abs=1e-5)


def test_fig2b_three_curves(tmp_path):
    cfg = _cfg(regime="thermodynamic", n=[256], trials=2, samples=2000)
    manifest = reproduce_fig2b(cfg, tmp_path, n_values=[256])
    assert sorted(p.name for p in (tmp_path / "curves").iterdir()) == [
        "analytic.csv",
        "dgg_n256.csv",
        "rgg_n256.csv",
    ]
    assert "ks_rgg_analytic" in manifest.results["n=256"]
    assert verify_manifest(tmp_path) == []


def test_fig2b_needs_ring_lattice(tmp_path):
    with pytest.raises(ConfigError):
        reproduce_fig2b(_cfg(regime="thermodynamic", d=2, n=[4096]), tmp_path)


# -- desk-scale acceptance runs ------------------------------------------------------


@pytest.mark.slow
def test_thermodynamic_bound_holds():
    cfg = _cfg(regime="thermodynamic", gamma=12, alpha=0.001, n=[4096], trials=20, workers=4)
    result = run_sweep(cfg)
    held = sum(bool(t.bound_satisfied) for t in result.trials)
    assert held >= 19


@pytest.mark.slow
def test_connectivity_levy_decreases_with_n():
    cfg = _cfg(regime="connectivity", n=[512, 2048, 4096], trials=10, workers=4)
    means = [s.mean_levy_cubed for s in run_sweep(cfg).summaries]
    assert means[0] > means[1] > means[2]
    assert means[2] < 0.5 * means[0]


@pytest.mark.slow
def test_dense_regime_beats_connectivity():
    dense = run_sweep(_cfg(regime="dense", rho=0.5, n=[1024], trials=5, workers=4))
    sparse = run_sweep(_cfg(regime="connectivity", n=[1024], trials=5, workers=4))
    assert dense.summaries[0].mean_levy_cubed < sparse.summaries[0].mean_levy_cubed
    assert not np.isnan(dense.summaries[0].mean_levy_cubed)
