"""
Closed-form spectra of the 1-d lattice graph (euclidean metric).

The lattice Laplacian is circulant, so its eigenvalues follow from the
Dirichlet kernel sum_{|j| <= k/2} exp(i j w) = sin(w (k + 1)) / sin(w).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal
import math

import numpy as np
from numpy.typing import ArrayLike

from .errors import ConfigError
from .graphs import lattice_reach
from .spectra import SpectralDistribution

# Below this |sin(w)| the ratio is replaced by its analytic limit.
SINGULAR_SINE = 1e-12


def dirichlet_ratio(w: ArrayLike, k: int) -> np.ndarray | float:
    """
    sin(w (k + 1)) / sin(w) for w in [0, pi].

    At w = j*pi the ratio has the removable limit (k + 1) (-1)^(j k).
    """
    if k < 0:
        raise ConfigError(f"k must be a nonnegative integer, got {k}")
    w_arr = np.asarray(w, dtype=np.float64)
    if np.any(w_arr < 0.0) or np.any(w_arr > math.pi):
        raise ConfigError("w must lie in [0, pi]")

    sine = np.sin(w_arr)
    singular = np.abs(sine) < SINGULAR_SINE
    safe_sine = np.where(singular, 1.0, sine)
    ratio = np.sin(w_arr * (k + 1)) / safe_sine

    nearest = np.rint(w_arr / math.pi).astype(np.int64)
    limit = (k + 1) * np.where((nearest * k) % 2 == 0, 1.0, -1.0)
    result = np.where(singular, limit, ratio)
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class AnalyticSpectrumConfig:
    """
    Parameters of a closed-form lattice spectrum.

    connectivity: finite-n spectrum for (n, r), degree a' = 2 floor(n r).
    thermodynamic: limiting spectrum for (gamma, alpha) sampled at M points,
    degree gamma' = 2 floor(gamma).
    """

    regime: Literal["connectivity", "thermodynamic"]
    n: int | None = None
    r: float | None = None
    gamma: float | None = None
    alpha: float = 0.0
    samples: int | None = None

    def __post_init__(self) -> None:
        if self.regime == "connectivity":
            if self.n is None or self.r is None or self.n < 1:
                raise ConfigError("connectivity spectrum needs n >= 1 and r")
            reach = lattice_reach(self.n, self.r)
            if reach < 1:
                raise ConfigError(
                    f"floor(n r) = 0 for n={self.n}, r={self.r}: the lattice graph has no edges"
                )
            if 2 * reach >= self.n:
                raise ConfigError(
                    f"2 floor(n r) = {2 * reach} >= n = {self.n}: neighbourhoods wrap "
                    "around the ring and the closed form no longer applies"
                )
        elif self.regime == "thermodynamic":
            if self.gamma is None or not self.gamma >= 2:
                raise ConfigError(f"gamma must be >= 2, got {self.gamma}")
            if self.alpha < 0:
                raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
            if self.samples is not None and self.samples < 2:
                raise ConfigError(f"samples must be >= 2, got {self.samples}")
        else:
            raise ConfigError(f"unknown analytic regime {self.regime!r}")

    @classmethod
    def connectivity(cls, n: int, r: float) -> AnalyticSpectrumConfig:
        return cls(regime="connectivity", n=n, r=r)

    @classmethod
    def thermodynamic(
        cls, gamma: float, alpha: float = 0.0, samples: int = 30000
    ) -> AnalyticSpectrumConfig:
        return cls(regime="thermodynamic", gamma=gamma, alpha=alpha, samples=samples)

    @property
    def degree(self) -> int:
        """a'_n in the connectivity form, gamma' in the thermodynamic form."""
        if self.regime == "connectivity":
            return 2 * lattice_reach(self.n, self.r)  # type: ignore[arg-type]
        return 2 * int(math.floor(self.gamma))  # type: ignore[arg-type]

    def spectrum(self) -> SpectralDistribution:
        if self.regime == "connectivity":
            return lemma1_spectrum(self.n, self.r)  # type: ignore[arg-type]
        return lemma2_spectrum(self.gamma, self.alpha, self.samples or 30000)  # type: ignore[arg-type]


def lemma1_modes(n: int, r: float) -> np.ndarray:
    """lambda_m = 1 - (ratio(m pi / n, a') - 1) / a' for m = 0..n-1, unsorted."""
    degree = AnalyticSpectrumConfig.connectivity(n, r).degree
    w = np.arange(n, dtype=np.float64) * math.pi / n
    return 1.0 - (dirichlet_ratio(w, degree) - 1.0) / degree


def lemma1_spectrum(n: int, r: float) -> SpectralDistribution:
    """Exact spectrum of the alpha = 0 Laplacian of the n-vertex 1-d lattice graph."""
    return SpectralDistribution(lemma1_modes(n, r), label=f"lemma1(n={n}, r={r:.6g})")


def lemma2_eigenvalue(w: ArrayLike, gamma: float, alpha: float = 0.0) -> np.ndarray | float:
    """
    Limiting eigenvalue at frequency w in [0, pi]:

        1 - ratio(w, gamma') / (gamma' + alpha) + (1 - alpha delta_w) / (gamma' + alpha)

    with gamma' = 2 floor(gamma) and delta_w = 1 only at w = 0.
    """
    gamma_prime = AnalyticSpectrumConfig(regime="thermodynamic", gamma=gamma, alpha=alpha).degree
    w_arr = np.asarray(w, dtype=np.float64)
    delta = (w_arr == 0.0).astype(np.float64)
    scale = gamma_prime + alpha
    values = 1.0 - dirichlet_ratio(w_arr, gamma_prime) / scale + (1.0 - alpha * delta) / scale
    # The w = 0 atom cancels exactly in exact arithmetic.
    values = np.where(w_arr == 0.0, 0.0, values)
    return float(values) if values.ndim == 0 else values


def lemma2_spectrum(gamma: float, alpha: float = 0.0, samples: int = 30000) -> SpectralDistribution:
    """Limiting spectrum discretized at w_j = j pi / M, j = 0..M-1."""
    AnalyticSpectrumConfig.thermodynamic(gamma, alpha, samples)
    w = np.arange(samples, dtype=np.float64) * math.pi / samples
    return SpectralDistribution(
        lemma2_eigenvalue(w, gamma, alpha),
        label=f"lemma2(gamma={gamma:g}, alpha={alpha:g}, M={samples})",
    )


def theorem2_bound(gamma: float, alpha: float) -> float:
    """Threshold 8 gamma / (gamma' + alpha)^2 on the cubed Levy distance."""
    gamma_prime = 2 * int(math.floor(gamma))
    return 8.0 * gamma / (gamma_prime + alpha) ** 2


def theorem2_asymptotic_bound(gamma: float) -> float:
    """The alpha -> 0 form of the threshold, 8 gamma / gamma'^2."""
    return theorem2_bound(gamma, 0.0)
