from __future__ import annotations

from dataclasses import dataclass
import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy import fft
from scipy.linalg import eigh

from .errors import ConsistencyError, EigenCapError
from .graphs import GeometricGraph
from .laplacian import RegularizedLaplacian, assemble, assemble_circulant

logger = logging.getLogger(__name__)

DEFAULT_EIGEN_CAP = 8192
IMAGINARY_TOLERANCE = 1e-9
RESIDUAL_FACTOR = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """
    Empirical spectral distribution: n eigenvalues, each an atom of mass 1/n.

    Eigenvalues are kept sorted ascending; equal values stay separate atoms.
    """

    eigenvalues: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        values = np.sort(np.asarray(self.eigenvalues, dtype=np.float64).ravel(), kind="stable")
        if values.size == 0:
            raise ConsistencyError("a spectral distribution needs at least one eigenvalue")
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def cdf(self, x: ArrayLike) -> np.ndarray | float:
        """F(x) = #{lambda_i <= x} / n, right-continuous."""
        counts = np.searchsorted(self.eigenvalues, x, side="right")
        result = counts / self.n
        return float(result) if np.ndim(result) == 0 else result

    def mass_within(self, lo: float, hi: float) -> float:
        """Fraction of eigenvalues in the closed interval [lo, hi]."""
        left = np.searchsorted(self.eigenvalues, lo, side="left")
        right = np.searchsorted(self.eigenvalues, hi, side="right")
        return float((right - left) / self.n)


def cdf(distribution: SpectralDistribution, x: ArrayLike) -> np.ndarray | float:
    return distribution.cdf(x)


def eigenvalues_dense(
    laplacian: RegularizedLaplacian,
    cap: int = DEFAULT_EIGEN_CAP,
    verify: bool = False,
    label: str | None = None,
) -> SpectralDistribution:
    """
    Full spectrum through LAPACK's symmetric tridiagonal reduction.

    With `verify=True` the eigenvectors are computed as well and the largest
    residual ||L v - lambda v|| must stay below 1e-8 * n.
    """
    n = laplacian.n
    if n > cap:
        raise EigenCapError(
            f"dense eigensolve of order {n} exceeds the cap of {cap}; "
            "use the circulant path for 1-d lattices, a smaller n, or raise eigen_cap"
        )
    matrix = laplacian.to_dense()
    if verify:
        values, vectors = eigh(matrix, check_finite=True)
        residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * values, axis=0)))
        logger.info("eigensolve residual %.3e for order %d", residual, n)
        if residual > RESIDUAL_FACTOR * n:
            raise ConsistencyError(
                f"eigen residual {residual:.3e} exceeds {RESIDUAL_FACTOR * n:.3e}"
            )
    else:
        values = eigh(matrix, eigvals_only=True, check_finite=False)
    logger.debug("dense eigensolve of order %d done", n)
    return SpectralDistribution(values, label=label or laplacian.label)


def circulant_modes(laplacian: RegularizedLaplacian) -> np.ndarray:
    """
    Eigenvalues of a symmetric circulant indexed by Fourier mode m:
    lambda_m = sum_j row[j] exp(-2 pi i j m / n).
    """
    if laplacian.representation != "circulant":
        raise ConsistencyError("circulant eigenvalues need the first-row representation")
    transformed = fft.fft(laplacian.data)
    residue = float(np.max(np.abs(transformed.imag)))
    if residue > IMAGINARY_TOLERANCE:
        raise ConsistencyError(
            f"circulant spectrum has imaginary residue {residue:.3e}; first row is not symmetric"
        )
    return transformed.real.copy()


def eigenvalues_circulant(
    laplacian: RegularizedLaplacian, label: str | None = None
) -> SpectralDistribution:
    return SpectralDistribution(circulant_modes(laplacian), label=label or laplacian.label)


def graph_spectrum(
    graph: GeometricGraph,
    alpha: float,
    cap: int = DEFAULT_EIGEN_CAP,
    verify: bool = False,
) -> SpectralDistribution:
    """ESD of a graph's Laplacian; 1-d lattice graphs go through the FFT."""
    if graph.kind == "dgg" and graph.d == 1:
        return eigenvalues_circulant(assemble_circulant(graph, alpha))
    return eigenvalues_dense(assemble(graph, alpha), cap=cap, verify=verify)
