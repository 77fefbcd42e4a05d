"""Problem geometry, population containers, and run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "SearchSpace",
    "EvaluatedIndividual",
    "ElitePool",
    "RunConfig",
    "Problem",
    "DEFAULT_QUANTILE_LEVELS",
    "init_population",
    "fitness_scores",
    "select_next_pool",
]

# 0.05, 0.10, ..., 0.95
DEFAULT_QUANTILE_LEVELS = tuple(round(0.05 * k, 2) for k in range(1, 20))


def _frozen_array(values, dtype=np.float64):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box of feasible points."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = _frozen_array(np.atleast_1d(self.lower))
        hi = _frozen_array(np.atleast_1d(self.upper))
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ValueError("lower and upper must be 1-d arrays of equal length")
        if lo.size == 0:
            raise ValueError("search space needs at least one dimension")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise ValueError("bounds must be finite")
        if not (lo < hi).all():
            raise ValueError("every lower bound must be strictly below the upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, dim: int, low: float, high: float) -> "SearchSpace":
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> np.ndarray:
        """Row-wise membership mask for points x of shape (b, dim)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        return ((x >= self.lower) & (x <= self.upper)).all(axis=1)


@dataclass(frozen=True)
class EvaluatedIndividual:
    """A point paired with its fitness value."""

    x: np.ndarray
    f: float

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen_array(self.x))
        object.__setattr__(self, "f", float(self.f))


class ElitePool:
    """Retained lowest-fitness individuals, sorted by ascending fitness.

    ``worst_seen`` is the highest fitness observed over the whole run (not
    just among current members); the weighting scheme needs it.
    """

    __slots__ = ("xs", "fs", "worst_seen")

    def __init__(self, xs: np.ndarray, fs: np.ndarray, worst_seen: float):
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        fs = np.ascontiguousarray(fs, dtype=np.float64)
        if xs.ndim != 2 or fs.ndim != 1 or xs.shape[0] != fs.shape[0]:
            raise ValueError("xs must be (size, dim) matching fs of length size")
        if fs.size == 0:
            raise ValueError("pool cannot be empty")
        if np.any(fs[1:] < fs[:-1]):
            raise ValueError("fs must be sorted ascending")
        worst_seen = float(worst_seen)
        if worst_seen < fs[-1]:
            raise ValueError("worst_seen cannot be below the pool's own maximum")
        self.xs = xs
        self.fs = fs
        self.worst_seen = worst_seen

    @classmethod
    def from_evaluations(cls, xs, fs, capacity: int) -> "ElitePool":
        """Build a pool from raw evaluations, keeping the best ``capacity``.

        Ties are broken by position: earlier rows win.
        """
        xs = np.asarray(xs, dtype=np.float64)
        fs = np.asarray(fs, dtype=np.float64)
        order = np.argsort(fs, kind="stable")[: int(capacity)]
        return cls(xs[order], fs[order], float(fs.max()))

    def __len__(self) -> int:
        return self.fs.size

    @property
    def dim(self) -> int:
        return self.xs.shape[1]

    @property
    def best(self) -> EvaluatedIndividual:
        return EvaluatedIndividual(self.xs[0], self.fs[0])


@dataclass(frozen=True)
class RunConfig:
    """Algorithm parameters for one optimization run.

    init_size: initial random population; partitions: cells per dimension;
    pool_size: retained elite count; batch_base: unit offspring count, each
    generation produces 31..32x this many; epsilon: stopping threshold on
    the pool quantile distance; quantile_levels: probe levels of the
    per-dimension quantile summary.
    """

    init_size: int = 5000
    partitions: int = 300
    pool_size: int = 5000
    batch_base: int = 5000
    max_generations: int = 300
    epsilon: float = 1e-9
    quantile_levels: tuple = DEFAULT_QUANTILE_LEVELS
    seed: int = 0

    def __post_init__(self):
        for name in ("init_size", "partitions", "pool_size", "batch_base"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.max_generations < 0:
            raise ValueError("max_generations must be >= 0")
        if not (self.epsilon > 0):
            raise ValueError("epsilon must be positive")
        levels = tuple(float(a) for a in self.quantile_levels)
        if not levels or not all(0.0 < a <= 1.0 for a in levels):
            raise ValueError("quantile levels must lie in (0, 1]")
        object.__setattr__(self, "quantile_levels", levels)

    def replace(self, **kv) -> "RunConfig":
        from dataclasses import replace as _replace

        return _replace(self, **kv)


@dataclass(frozen=True)
class Problem:
    """A minimization target: a batch fitness callable over a box.

    ``batch`` maps an (b, dim) array to a (b,) float array.  Set
    ``exclusive_bounds`` when the function is singular on the box boundary;
    the engine then nudges boundary coordinates one ulp inward before
    evaluating.
    """

    name: str
    space: SearchSpace
    batch: Callable[[np.ndarray], np.ndarray]
    exclusive_bounds: bool = False
    known_optimum: Optional[float] = None


def init_population(space: SearchSpace, count: int, rng: np.random.Generator):
    """Uniform sample of ``count`` points across the box."""
    if count < 1:
        raise ValueError("count must be positive")
    u = rng.random((count, space.dim))
    return space.lower + (space.upper - space.lower) * u


def fitness_scores(pool: ElitePool) -> np.ndarray:
    """Normalized selection weights, larger for lower fitness.

    w_i = (worst_seen - f_i) / (size * worst_seen - sum(f)).  Weights are
    non-negative and sum to 1.  When the denominator is not positive (all
    members share the worst fitness, up to rounding) fall back to uniform.
    """
    size = len(pool)
    denom = size * pool.worst_seen - pool.fs.sum()
    if not denom > 0:
        return np.full(size, 1.0 / size)
    return (pool.worst_seen - pool.fs) / denom


def select_next_pool(pool: ElitePool, offspring_x, offspring_f, capacity: int) -> "ElitePool":
    """Truncation selection over current members plus evaluated offspring.

    Keeps the ``capacity`` lowest fitnesses; on ties current members win
    over offspring and earlier offspring win over later ones.  The
    returned pool's worst_seen also absorbs the offspring maximum.
    """
    offspring_x = np.asarray(offspring_x, dtype=np.float64)
    offspring_f = np.asarray(offspring_f, dtype=np.float64)
    if offspring_f.size == 0:
        return ElitePool(pool.xs[: int(capacity)], pool.fs[: int(capacity)], pool.worst_seen)
    all_x = np.concatenate([pool.xs, offspring_x])
    all_f = np.concatenate([pool.fs, offspring_f])
    order = np.argsort(all_f, kind="stable")[: int(capacity)]
    worst = max(pool.worst_seen, float(offspring_f.max()))
    return ElitePool(all_x[order], all_f[order], worst)
