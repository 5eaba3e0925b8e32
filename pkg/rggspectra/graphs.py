from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Literal
import logging
import math

import numpy as np
from scipy import sparse

from .errors import ConfigError
from .geometry import (
    EUCLIDEAN,
    Metric,
    PointSet,
    lattice_side,
    torus_deltas,
    uniform_points,
    unit_ball_volume,
)

logger = logging.getLogger(__name__)

GraphKind = Literal["rgg", "dgg"]

# Lattice distances are compared in lattice units with this absolute slack,
# so that n * r landing a hair under an integer still reaches that neighbour.
LATTICE_SLACK = 1e-9

# All-pairs blocks are bounded to keep the distance buffer small.
_BRUTE_FORCE_BLOCK = 256


@dataclass(frozen=True)
class GraphProvenance:
    """Construction parameters a Laplacian or spectrum keeps for its labels."""

    kind: GraphKind
    n: int
    d: int
    r: float
    metric: str
    seed: int | None

    def describe(self) -> str:
        seed = "" if self.seed is None else f", seed={self.seed}"
        return f"{self.kind}(n={self.n}, d={self.d}, r={self.r:.6g}, {self.metric}{seed})"


@dataclass(frozen=True, eq=False)
class GeometricGraph:
    """
    Undirected simple graph on torus points.

    Attributes:
        n: number of vertices.
        d: torus dimension.
        r: connection radius (torus units).
        metric: distance used for adjacency.
        kind: "rgg" for random points, "dgg" for the lattice.
        edges: int64 array of shape (E, 2), u < v, sorted lexicographically.
        seed: point-sampling seed (RGG only).
    """

    n: int
    d: int
    r: float
    metric: Metric
    kind: GraphKind
    edges: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ConfigError("edge list must satisfy u < v (no self-loops)")
            if edges.min() < 0 or edges.max() >= self.n:
                raise ConfigError(f"edge endpoint outside 0..{self.n - 1}")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            if np.any(np.all(edges[1:] == edges[:-1], axis=1)):
                raise ConfigError("edge list contains a repeated pair")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        """N(x_i): number of neighbours of each vertex."""
        counts = np.bincount(self.edges.ravel(), minlength=self.n)
        return counts.astype(np.int64)

    @cached_property
    def neighbors(self) -> tuple[np.ndarray, ...]:
        """Sorted adjacency list of every vertex."""
        adjacency = self.adjacency()
        return tuple(
            adjacency.indices[adjacency.indptr[i] : adjacency.indptr[i + 1]]
            for i in range(self.n)
        )

    @property
    def provenance(self) -> GraphProvenance:
        return GraphProvenance(
            kind=self.kind,
            n=self.n,
            d=self.d,
            r=self.r,
            metric=self.metric.label,
            seed=self.seed,
        )

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix with sorted column indices."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.ones(rows.size, dtype=np.float64)
        matrix = sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        matrix.sort_indices()
        return matrix


def _check_radius(r: float) -> None:
    if not 0.0 < r <= 0.5:
        raise ConfigError(
            f"radius r={r} must lie in (0, 1/2]; larger radii break the minimum image"
        )


def _pair_codes(i: np.ndarray, j: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    return lo.astype(np.int64) * n + hi


def _codes_to_edges(codes: np.ndarray, n: int) -> np.ndarray:
    codes = np.unique(codes)
    return np.stack([codes // n, codes % n], axis=1)


def brute_force_edges(points: PointSet, r: float, metric: Metric = EUCLIDEAN) -> np.ndarray:
    """All-pairs O(n^2) construction: every pair i < j with distance <= r."""
    coords = points.coords
    n = points.n
    found: list[np.ndarray] = []
    for start in range(0, n, _BRUTE_FORCE_BLOCK):
        block = coords[start : start + _BRUTE_FORCE_BLOCK]
        dist = metric.norm(torus_deltas(block[:, None, :], coords[None, :, :]))
        ii, jj = np.nonzero(dist <= r)
        ii = ii + start
        keep = ii < jj
        found.append(_pair_codes(ii[keep], jj[keep], n))
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    return _codes_to_edges(np.concatenate(found), n)


def cell_list_edges(points: PointSet, r: float, metric: Metric = EUCLIDEAN) -> np.ndarray:
    """
    Fixed-radius neighbour search on a periodic cell grid.

    The torus is cut into M <= floor(1/r) cells per axis, so each cell edge is
    at least r and every neighbour of a point lies in its own cell or one of
    the 3^d surrounding cells. M is also capped near n^(1/d), which keeps the
    grid about as large as the point set for tiny radii. With fewer than 3
    cells per axis the wrapped stencil revisits cells, so the all-pairs
    search is used instead.
    """
    n, d = points.n, points.d
    cells_per_axis = int(math.floor(1.0 / r))
    if cells_per_axis < 3:
        logger.debug("cell grid too coarse (%d per axis), using all pairs", cells_per_axis)
        return brute_force_edges(points, r, metric)
    cells_per_axis = min(cells_per_axis, max(3, math.ceil(n ** (1.0 / d))))

    coords = points.coords
    shape = (cells_per_axis,) * d
    cell_coords = np.minimum((coords * cells_per_axis).astype(np.int64), cells_per_axis - 1)
    cell_ids = np.ravel_multi_index(tuple(cell_coords.T), shape)

    order = np.argsort(cell_ids, kind="stable")
    sorted_ids = cell_ids[order]
    total_cells = cells_per_axis**d
    starts = np.searchsorted(sorted_ids, np.arange(total_cells + 1), side="left")

    stencil = np.array(list(product((-1, 0, 1), repeat=d)), dtype=np.int64)
    found: list[np.ndarray] = []
    for cell in np.unique(sorted_ids):
        members = order[starts[cell] : starts[cell + 1]]
        home = np.array(np.unravel_index(cell, shape), dtype=np.int64)
        around = np.ravel_multi_index(tuple(((home + stencil) % cells_per_axis).T), shape)
        # Visit each unordered cell pair once.
        around = around[around >= cell]
        candidates = np.concatenate([order[starts[c] : starts[c + 1]] for c in around])
        if candidates.size == 0:
            continue
        dist = metric.norm(
            torus_deltas(coords[members][:, None, :], coords[candidates][None, :, :])
        )
        ii, jj = np.nonzero(dist <= r)
        src, dst = members[ii], candidates[jj]
        keep = src != dst
        found.append(_pair_codes(src[keep], dst[keep], n))

    if not found:
        return np.empty((0, 2), dtype=np.int64)
    return _codes_to_edges(np.concatenate(found), n)


def sample_rgg(
    n: int,
    r: float,
    d: int = 1,
    metric: Metric = EUCLIDEAN,
    seed: int = 0,
) -> GeometricGraph:
    """
    Random geometric graph G(X_n, r): n uniform torus points, i ~ j iff
    their torus distance is at most r.
    """
    _check_radius(r)
    points = uniform_points(n, d, seed)
    return rgg_from_points(points, r, metric)


def rgg_from_points(points: PointSet, r: float, metric: Metric = EUCLIDEAN) -> GeometricGraph:
    _check_radius(r)
    edges = cell_list_edges(points, r, metric)
    graph = GeometricGraph(
        n=points.n,
        d=points.d,
        r=r,
        metric=metric,
        kind="rgg",
        edges=edges,
        seed=points.seed,
    )
    logger.debug("built %s with %d edges", graph.provenance.describe(), len(edges))
    return graph


def lattice_offsets(side: int, d: int, r: float, metric: Metric = EUCLIDEAN) -> np.ndarray:
    """
    Residue vectors m in {0..side-1}^d (m != 0) whose minimum-image lattice
    distance is at most r. The set is closed under m -> -m mod side.
    """
    residues = np.indices((side,) * d).reshape(d, -1).T
    images = np.minimum(residues, side - residues).astype(float)
    reach = metric.norm(images)
    within = reach <= r * side + LATTICE_SLACK
    within[0] = False
    return residues[within]


def lattice_reach(n: int, r: float) -> int:
    """floor(n * r) with the lattice slack applied; the 1-d neighbour reach."""
    return int(math.floor(n * r + LATTICE_SLACK))


def dgg_degree_1d(n: int, r: float) -> int:
    """Vertex degree of the 1-d lattice graph: 2*floor(n r), capped at n - 1."""
    return min(2 * lattice_reach(n, r), n - 1)


def build_dgg(n: int, r: float, d: int = 1, metric: Metric = EUCLIDEAN) -> GeometricGraph:
    """
    Deterministic geometric graph G(D_n, r) on the regular grid with spacing
    n^(-1/d). Every vertex has the same neighbourhood shape.
    """
    _check_radius(r)
    side = lattice_side(n, d)
    offsets = lattice_offsets(side, d, r, metric)
    index = np.indices((side,) * d).reshape(d, -1).T
    vertices = np.arange(n, dtype=np.int64)

    codes: list[np.ndarray] = []
    for offset in offsets:
        target = np.ravel_multi_index(tuple(((index + offset) % side).T), (side,) * d)
        keep = vertices < target
        codes.append(_pair_codes(vertices[keep], target[keep], n))
    edges = (
        _codes_to_edges(np.concatenate(codes), n)
        if codes
        else np.empty((0, 2), dtype=np.int64)
    )
    graph = GeometricGraph(n=n, d=d, r=r, metric=metric, kind="dgg", edges=edges)
    logger.debug("built %s with %d edges", graph.provenance.describe(), len(edges))
    return graph


def average_degree(graph: GeometricGraph) -> float:
    """Mean vertex degree; 0.0 for an edgeless graph."""
    return float(2 * len(graph.edges) / graph.n)


def nominal_degree(n: int, r: float, d: int = 1, metric: Metric = EUCLIDEAN) -> float:
    """a_n = theta^(d) n r^d, the expected RGG degree."""
    return unit_ball_volume(d, metric) * n * r**d
