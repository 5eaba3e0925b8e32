from __future__ import annotations

from dataclasses import dataclass
from typing import Literal
import logging

import numpy as np
from scipy.linalg import circulant

from .errors import ConfigError, SingularityError
from .graphs import GeometricGraph, GraphProvenance

logger = logging.getLogger(__name__)

Representation = Literal["dense", "circulant"]


@dataclass(frozen=True, eq=False)
class RegularizedLaplacian:
    """
    Regularized normalized Laplacian

        L_ij = delta_ij - (chi[i ~ j] + alpha/n) / sqrt((N_i + alpha)(N_j + alpha))

    stored either as the full symmetric matrix (`representation="dense"`)
    or, for vertex-transitive 1-d lattices, as its first row
    (`representation="circulant"`).
    """

    n: int
    alpha: float
    representation: Representation
    data: np.ndarray
    source: GraphProvenance | None = None

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.float64)
        expected = (self.n, self.n) if self.representation == "dense" else (self.n,)
        if data.shape != expected:
            raise ConfigError(
                f"{self.representation} Laplacian of order {self.n} needs shape "
                f"{expected}, got {data.shape}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_first_row(
        cls,
        first_row: np.ndarray,
        alpha: float = 0.0,
        source: GraphProvenance | None = None,
    ) -> RegularizedLaplacian:
        row = np.asarray(first_row, dtype=np.float64)
        return cls(n=row.size, alpha=alpha, representation="circulant", data=row, source=source)

    @property
    def label(self) -> str:
        origin = self.source.describe() if self.source else "matrix"
        return f"{origin}, alpha={self.alpha:g}"

    def to_dense(self) -> np.ndarray:
        """Full matrix; circulant rows expand as L_ij = row[(j - i) mod n]."""
        if self.representation == "dense":
            return self.data
        # scipy's circulant() takes the first column; the rows here are symmetric.
        return circulant(self.data).T.copy()


def _check_alpha(graph: GeometricGraph, alpha: float) -> np.ndarray:
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    degrees = graph.degrees.astype(np.float64)
    if alpha == 0:
        isolated = np.flatnonzero(graph.degrees == 0)
        if isolated.size:
            raise SingularityError(int(isolated[0]))
    return degrees + alpha


def assemble(graph: GeometricGraph, alpha: float = 0.0) -> RegularizedLaplacian:
    """Dense regularized normalized Laplacian of `graph`."""
    regularized = _check_alpha(graph, alpha)
    n = graph.n

    matrix = np.full((n, n), alpha / n, dtype=np.float64)
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    matrix[u, v] += 1.0
    matrix[v, u] += 1.0
    denominator = np.multiply.outer(regularized, regularized)
    np.sqrt(denominator, out=denominator)
    matrix /= denominator
    del denominator
    # 0 - x rather than -x, so structural zeros stay +0.0 in dumps.
    np.subtract(0.0, matrix, out=matrix)
    matrix[np.diag_indices(n)] += 1.0

    logger.debug("assembled dense Laplacian for %s", graph.provenance.describe())
    return RegularizedLaplacian(
        n=n, alpha=alpha, representation="dense", data=matrix, source=graph.provenance
    )


def assemble_circulant(graph: GeometricGraph, alpha: float = 0.0) -> RegularizedLaplacian:
    """
    First-row form of `assemble` for a 1-d lattice graph.

    Entries are evaluated with the same expression as the dense path, so the
    expanded matrix matches `assemble(graph, alpha)` exactly.
    """
    if graph.kind != "dgg" or graph.d != 1:
        raise ConfigError(
            f"circulant assembly needs a 1-d lattice graph, got {graph.kind} with d={graph.d}"
        )
    regularized = _check_alpha(graph, alpha)
    n = graph.n

    row = np.full(n, alpha / n, dtype=np.float64)
    row[graph.neighbors[0]] += 1.0
    row /= np.sqrt(regularized[0] * regularized[0])
    np.subtract(0.0, row, out=row)
    row[0] += 1.0

    return RegularizedLaplacian.from_first_row(row, alpha=alpha, source=graph.provenance)


def trace(laplacian: RegularizedLaplacian) -> float:
    if laplacian.representation == "circulant":
        return float(laplacian.n * laplacian.data[0])
    return float(np.trace(laplacian.data))


def kernel_vector(graph: GeometricGraph, alpha: float) -> np.ndarray:
    """Unit vector proportional to sqrt(N_i + alpha), the zero mode of L."""
    vector = np.sqrt(graph.degrees.astype(np.float64) + alpha)
    return vector / np.linalg.norm(vector)
