from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError
from .spectra import SpectralDistribution

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DistanceReport:
    """Levy distance, its cube, and the Kolmogorov-Smirnov distance of two ESDs."""

    levy: float
    levy_cubed: float
    ks: float
    tolerance: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def _excess(shifted: np.ndarray, base: np.ndarray) -> float:
    """
    sup_y [S(y) - B(y)] for step CDFs of the atom arrays `shifted` and `base`.

    Both CDFs are right-continuous and piecewise constant, so the supremum is
    attained at one of their atoms.
    """
    points = np.concatenate([shifted, base])
    upper = np.searchsorted(shifted, points, side="right") / shifted.size
    lower = np.searchsorted(base, points, side="right") / base.size
    return float(np.max(upper - lower))


def _levy_feasible(f: np.ndarray, g: np.ndarray, eps: float) -> bool:
    """
    Check F(x - eps) - eps <= G(x) <= F(x + eps) + eps for every x.

    G(x) <= F(x + eps) + eps is sup_y [G_eps(y) - F(y)] <= eps, where G_eps has
    the atoms of G moved right by eps; the other side swaps the roles.
    """
    return _excess(g + eps, f) <= eps and _excess(f + eps, g) <= eps


def levy_distance(
    f: SpectralDistribution,
    g: SpectralDistribution,
    tol: float = DEFAULT_TOLERANCE,
) -> float:
    """
    Levy distance inf{eps > 0 : F(x - eps) - eps <= G(x) <= F(x + eps) + eps}.

    Bisection over eps in [0, KS]; every candidate is checked exactly on the
    atoms of both distributions. The returned value is feasible, never
    exceeds the KS distance, and lies within `tol` of the infimum.
    """
    if not tol > 0:
        raise ConfigError(f"tol must be > 0, got {tol}")
    a, b = f.eigenvalues, g.eigenvalues
    if _levy_feasible(a, b, 0.0):
        return 0.0
    # eps = KS distance is always feasible, and the KS distance is at most 1.
    lo, hi = 0.0, ks_distance(f, g)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _levy_feasible(a, b, mid):
            hi = mid
        else:
            lo = mid
    return hi


def ks_distance(f: SpectralDistribution, g: SpectralDistribution) -> float:
    """
    sup_x |F(x) - G(x)|. Left limits at an atom equal the value at the
    preceding atom (or 0), so evaluating at the atoms covers them.
    """
    points = np.concatenate([f.eigenvalues, g.eigenvalues])
    return float(np.max(np.abs(f.cdf(points) - g.cdf(points))))


def distance_report(
    f: SpectralDistribution,
    g: SpectralDistribution,
    tol: float = DEFAULT_TOLERANCE,
) -> DistanceReport:
    levy = levy_distance(f, g, tol)
    return DistanceReport(levy=levy, levy_cubed=levy**3, ks=ks_distance(f, g), tolerance=tol)
