from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence
import math

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import ConfigError

PointKind = Literal["random", "lattice"]
MetricKind = Literal["euclidean", "chebyshev", "lp"]


def _reduce_mod_one(coords: np.ndarray) -> np.ndarray:
    """Map coordinates onto [0, 1); `np.mod` can round tiny negatives up to 1.0."""
    reduced = np.mod(coords, 1.0)
    reduced[reduced >= 1.0] = 0.0
    return reduced


@dataclass(frozen=True)
class Metric:
    """
    Distance on the unit torus with the minimum-image convention per axis.

    `kind="lp"` needs an exponent `p >= 1`; euclidean and chebyshev are the
    p = 2 and p = inf members of the same family.
    """

    kind: MetricKind = "euclidean"
    p: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("euclidean", "chebyshev", "lp"):
            raise ConfigError(f"unknown metric {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or not self.p >= 1:
                raise ConfigError(f"lp metric needs p >= 1, got p={self.p}")
        elif self.p is not None:
            raise ConfigError(f"metric {self.kind!r} takes no exponent p")

    @classmethod
    def parse(cls, name: str, p: float | None = None) -> Metric:
        """Build a metric from a CLI/config name (`euclidean`, `chebyshev`, `lp`)."""
        return cls(kind=name.lower(), p=p)  # type: ignore[arg-type]

    @property
    def exponent(self) -> float:
        if self.kind == "euclidean":
            return 2.0
        if self.kind == "chebyshev":
            return math.inf
        return float(self.p)  # type: ignore[arg-type]

    @property
    def label(self) -> str:
        return f"lp({self.p:g})" if self.kind == "lp" else self.kind

    def norm(self, deltas: np.ndarray) -> np.ndarray:
        """Norm over the last axis of an array of per-axis separations."""
        if self.kind == "euclidean":
            return np.sqrt(np.sum(deltas * deltas, axis=-1))
        if self.kind == "chebyshev":
            return np.max(deltas, axis=-1)
        p = float(self.p)  # type: ignore[arg-type]
        return np.sum(deltas**p, axis=-1) ** (1.0 / p)


EUCLIDEAN = Metric()
CHEBYSHEV = Metric("chebyshev")


@dataclass(frozen=True)
class Point:
    """A point of the d-dimensional unit torus, stored reduced mod 1."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.coords) < 1:
            raise ConfigError("a point needs at least one coordinate")
        reduced = _reduce_mod_one(np.asarray(self.coords, dtype=float))
        object.__setattr__(self, "coords", tuple(float(c) for c in reduced))

    @property
    def d(self) -> int:
        return len(self.coords)


@dataclass(frozen=True, eq=False)
class PointSet:
    """
    Ordered collection of n torus points sharing one dimension.

    Attributes:
        coords: array of shape (n, d), every entry in [0, 1).
        kind: "random" for uniform samples, "lattice" for the regular grid.
        seed: generator seed for random sets, None for lattices.
    """

    coords: np.ndarray
    kind: PointKind
    seed: int | None = None

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ConfigError(
                f"point set needs shape (n >= 1, d >= 1), got {coords.shape}"
            )
        if self.kind == "lattice" and self.seed is not None:
            raise ConfigError("lattice point sets carry no seed")
        coords = _reduce_mod_one(coords)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    @property
    def d(self) -> int:
        return int(self.coords.shape[1])

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index: int) -> Point:
        return Point(tuple(self.coords[index]))


def uniform_points(n: int, d: int, seed: int) -> PointSet:
    """
    Draw n points uniformly on the d-torus.

    Uses numpy's PCG64 generator; coordinates are consumed point-major,
    axis-minor, so a seed pins every coordinate bit for bit.
    """
    if n < 1 or d < 1:
        raise ConfigError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return PointSet(rng.random((n, d)), kind="random", seed=seed)


def lattice_side(n: int, d: int) -> int:
    """Return s with s**d == n, or raise if n is not a perfect d-th power."""
    if n < 1 or d < 1:
        raise ConfigError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    guess = round(n ** (1.0 / d))
    for side in (guess - 1, guess, guess + 1):
        if side >= 1 and side**d == n:
            return side
    raise ConfigError(f"n={n} is not a perfect {d}-th power; the lattice cannot tile the torus")


def lattice_points(n: int, d: int) -> PointSet:
    """Regular grid with spacing n^(-1/d), index order matching `np.indices`."""
    side = lattice_side(n, d)
    index = np.indices((side,) * d).reshape(d, -1).T
    return PointSet(index / side, kind="lattice")


def torus_deltas(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-axis minimum-image separations, broadcasting over leading axes."""
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return np.minimum(delta, 1.0 - delta)


def torus_distance(
    a: Point | Sequence[float],
    b: Point | Sequence[float],
    metric: Metric = EUCLIDEAN,
) -> float:
    """Distance between two torus points under `metric`."""
    ca = a.coords if isinstance(a, Point) else Point(tuple(a)).coords
    cb = b.coords if isinstance(b, Point) else Point(tuple(b)).coords
    if len(ca) != len(cb):
        raise ConfigError(f"dimension mismatch: {len(ca)} vs {len(cb)}")
    return float(metric.norm(torus_deltas(np.array(ca), np.array(cb))))


def unit_ball_volume(d: int, metric: Metric = EUCLIDEAN) -> float:
    """
    Volume theta^(d) of the unit ball of `metric` in R^d.

    lp balls have volume 2^d Gamma(1 + 1/p)^d / Gamma(1 + d/p); this gives
    pi^(d/2) / Gamma(d/2 + 1) for euclidean and 2^d for chebyshev.
    """
    if d < 1:
        raise ConfigError(f"dimension must be >= 1, got {d}")
    if metric.kind == "chebyshev":
        return float(2.0**d)
    if metric.kind == "euclidean":
        return float(math.pi ** (d / 2.0) / gamma_fn(d / 2.0 + 1.0))
    p = metric.exponent
    return float(2.0**d * gamma_fn(1.0 + 1.0 / p) ** d / gamma_fn(1.0 + d / p))
