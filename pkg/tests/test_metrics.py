"""
Unit tests for the Levy and Kolmogorov-Smirnov distances.

Core claims:
    - Levy distance agrees with a brute-force (eps, x) grid scan
    - metric axioms hold and Levy never exceeds KS
    - translating every atom by s moves the Levy distance by at most |s|
"""

import numpy as np
import pytest
from pytest import approx

from rggspectra.errors import ConfigError
from rggspectra.metrics import DEFAULT_TOLERANCE, distance_report, ks_distance, levy_distance
from rggspectra.spectra import SpectralDistribution

# The oracle works in integer units of UNIT; atoms sit on multiples of
# ATOM_STEP units and candidate eps on multiples of EPS_STEP units, so every
# breakpoint of the feasibility conditions lies on the x grid.
UNIT = 0.005
ATOM_STEP = 20
EPS_STEP = 2


def _random_atoms(rng):
    size = int(rng.integers(1, 51))
    return rng.integers(0, 11, size=size) * ATOM_STEP


def _cdf_units(atoms, x):
    return np.searchsorted(np.sort(atoms), x, side="right") / atoms.size


def _oracle_levy(f_units, g_units):
    """Smallest grid eps satisfying F(x - eps) - eps <= G(x) <= F(x + eps) + eps on the x grid."""
    x = np.arange(-300, 700)
    g = _cdf_units(g_units, x)
    for eps in range(0, 201, EPS_STEP):
        e = eps * UNIT
        lower = _cdf_units(f_units, x - eps) - e
        upper = _cdf_units(f_units, x + eps) + e
        if np.all(lower <= g + 1e-12) and np.all(g <= upper + 1e-12):
            return e
    raise AssertionError("eps = 1 is always feasible")


def _esd(units):
    return SpectralDistribution(units * UNIT)


def test_identical_distributions():
    f = SpectralDistribution([0.1, 0.5, 0.5, 1.7])
    assert levy_distance(f, f) == 0.0
    assert ks_distance(f, f) == 0.0


@pytest.mark.parametrize("a, expected", [(0.3, 0.3), (0.75, 0.75), (2.0, 1.0)])
def test_point_masses(a, expected):
    f, g = SpectralDistribution([0.0]), SpectralDistribution([a])
    assert levy_distance(f, g) == approx(expected, abs=2 * DEFAULT_TOLERANCE)
    assert ks_distance(f, g) == 1.0


def test_matches_grid_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        f_units, g_units = _random_atoms(rng), _random_atoms(rng)
        expected = _oracle_levy(f_units, g_units)
        got = levy_distance(_esd(f_units), _esd(g_units))
        assert abs(got - expected) <= 2 * DEFAULT_TOLERANCE + EPS_STEP * UNIT


def test_metric_axioms():
    rng = np.random.default_rng(19)
    for _ in range(100):
        f, g, h = (SpectralDistribution(rng.uniform(0, 2, int(rng.integers(1, 51)))) for _ in range(3))
        fg = levy_distance(f, g)
        assert fg == levy_distance(g, f)
        assert fg <= ks_distance(f, g)
        assert levy_distance(f, h) <= fg + levy_distance(g, h) + 3 * DEFAULT_TOLERANCE


def test_translation_is_one_lipschitz():
    rng = np.random.default_rng(23)
    for _ in range(50):
        f = SpectralDistribution(rng.uniform(0, 2, 30))
        g_values = rng.uniform(0, 2, 40)
        s = float(rng.uniform(-0.2, 0.2))
        base = levy_distance(f, SpectralDistribution(g_values))
        moved = levy_distance(f, SpectralDistribution(g_values + s))
        assert abs(moved - base) <= abs(s) + 2 * DEFAULT_TOLERANCE


def test_tolerance_must_be_positive():
    f = SpectralDistribution([0.0])
    with pytest.raises(ConfigError):
        levy_distance(f, f, tol=0.0)


def test_report_fields():
    report = distance_report(SpectralDistribution([0.0]), SpectralDistribution([0.3]))
    payload = report.to_dict()
    assert set(payload) == {"levy", "levy_cubed", "ks", "tolerance"}
    assert payload["levy_cubed"] == approx(payload["levy"] ** 3)
    assert payload["tolerance"] == DEFAULT_TOLERANCE
