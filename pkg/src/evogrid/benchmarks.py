"""The 30 box-constrained test functions.

Every function evaluates batches: x of shape (b, dim) -> (b,) float64.
Formulas follow the printed definitions literally, including the shifted
boxes (rosenbrock on [-29, 31], elliptic centered at -100, trid on
[-n^2, n^2], paviani on [2, 10], sinusoidal on [0, 180]) and the constants
m=10, theta=pi/6 of the epistatic michalewicz variant.  Summation indices
are 1-based in the definitions; code maps them to 0-based arrays.

paviani (f24) is singular where a coordinate hits the box boundary (its
logarithms vanish there); evaluation returns +inf at such points and the
engine nudges boundary coordinates inward via the problem's
``exclusive_bounds`` flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .core import Problem, SearchSpace

__all__ = ["BenchmarkSpec", "registry", "spec", "evaluate", "evaluate_batch", "make_problem"]


def _f1(x):
    return np.sum(x * x, axis=1)


def _f2(x):
    a = np.abs(x)
    return np.sum(a, axis=1) + np.prod(a, axis=1)


def _f3(x):
    c = np.cumsum(x, axis=1)
    return np.sum(c * c, axis=1)


def _f4(x):
    return np.max(np.abs(x), axis=1)


def _f5(x):
    a = x[:, 1:] - x[:, :-1] ** 2
    b = x[:, :-1] - 1.0
    return np.sum(100.0 * a * a + b * b, axis=1)


def _f6(x):
    i = np.arange(1, x.shape[1] + 1)
    return np.sum(i * x ** 4, axis=1)


def _f7(x):
    return np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=1)


def _f8(x):
    i = np.arange(1, x.shape[1] + 1)
    return np.sum(x * x, axis=1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=1) + 1.0


def _f9(x):
    return -np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=1)


def _f10(x):
    n = x.shape[1]
    root = np.sqrt(np.sum(x * x, axis=1) / n)
    mean_cos = np.sum(np.cos(2.0 * np.pi * x), axis=1) / n
    return -20.0 * np.exp(-0.2 * root) - np.exp(mean_cos) + 20.0 + np.e


def _f11(x):
    x1, x2 = x[:, 0], x[:, 1]
    return (
        4.0 * x1 ** 2
        - 2.1 * x1 ** 4
        + x1 ** 6 / 3.0
        + x1 * x2
        - 4.0 * x2 ** 2
        + 4.0 * x2 ** 4
    )


def _f12(x):
    x1, x2 = x[:, 0], x[:, 1]
    a = x2 - 5.0 / (4.0 * np.pi ** 2) * x1 ** 2 + 5.0 / np.pi * x1 - 6.0
    return a * a + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1) + 10.0


def _f13(x):
    x1, x2 = x[:, 0], x[:, 1]
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 ** 2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 ** 2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 ** 2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 ** 2
    )
    return a * b


def _f14(x):
    n = x.shape[1]
    scale = 10.0 ** (6.0 * np.arange(n) / (n - 1))
    d = x + 100.0
    return np.sum(scale * d * d, axis=1)


def _f15(x):
    head = np.sin(np.pi * x[:, 0]) ** 2
    a = x[:, :-1] - 1.0
    g = head + np.sum(a * a * (1.0 + 10.0 * np.sin(np.pi * x[:, 1:]) ** 2), axis=1)
    tail = x[:, -1] - 1.0
    h = tail * tail * (1.0 + 10.0 * np.sin(2.0 * np.pi * x[:, -1]) ** 2)
    return g + h


def _f16(x):
    i = np.arange(1, x.shape[1] + 1)
    t = np.sum(0.5 * i * x, axis=1)
    return np.sum(x * x, axis=1) + t ** 2 + t ** 4


def _f17(x):
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=1)


def _f18(x):
    a, b = x[:, :-1], x[:, 1:]
    num = np.sin(np.sqrt(100.0 * a * a + b * b)) ** 2 - 0.5
    den = 1.0 + 0.001 * (a * a - 2.0 * a * b + b * b) ** 2
    return np.sum(0.5 + num / den, axis=1)


def _f19(x):
    a, b = x[:, :-1], x[:, 1:]
    # r = (a + b/4)^2 + 15 b^2 / 16 >= 0, so the square root is safe
    r = a * a + b * b + 0.5 * a * b
    return -np.sum(np.exp(-r / 8.0) * np.cos(4.0 * np.sqrt(r)), axis=1)


def _f20(x):
    n = x.shape[1]
    return 0.1 * n - (0.1 * np.sum(np.cos(5.0 * np.pi * x), axis=1) - np.sum(x * x, axis=1))


def _f21(x):
    n = x.shape[1]
    c, s = np.cos(np.pi / 6.0), np.sin(np.pi / 6.0)
    y = np.empty_like(x)
    j = np.arange(n - 1)
    even = j % 2 == 0  # 0-based even position = 1-based odd index
    y[:, :-1] = np.where(even, x[:, :-1] * c - x[:, 1:] * s, x[:, :-1] * s + x[:, 1:] * c)
    y[:, -1] = x[:, -1]
    i = np.arange(1, n + 1)
    t = y * y
    return -np.sum(np.sin(t) * np.sin(i * t / np.pi) ** 20, axis=1)


def _f22(x):
    x1, xn = x[:, 0], x[:, -1]
    h = np.sin(3.0 * np.pi * x1) ** 2 + (xn - 1.0) ** 2 * (
        1.0 + 10.0 * np.sin(2.0 * np.pi * xn) ** 2
    )
    a = x[:, :-1] - 1.0
    g = np.sum(a * a * (1.0 + 10.0 * np.sin(3.0 * np.pi * x[:, 1:]) ** 2), axis=1)
    return 0.1 * (h + g)


def _f23(x):
    d = x - 1.0
    return np.sum(d * d, axis=1) - np.sum(x[:, 1:] * x[:, :-1], axis=1)


def _f24(x):
    with np.errstate(divide="ignore"):
        a = np.log(x - 2.0)
        b = np.log(10.0 - x)
    return np.sum(a * a + b * b, axis=1) - np.prod(x, axis=1) ** 0.2


def _f25(x):
    return 1.0 + np.sum(np.sin(x) ** 2, axis=1) - 0.1 * np.prod(np.exp(-x * x), axis=1)


def _f26(x):
    r = np.sqrt(np.sum(x * x, axis=1))
    return 1.0 - np.cos(2.0 * np.pi * r) + 0.1 * r


def _f27(x):
    t = np.zeros_like(x)
    for j in range(1, 6):
        t += j * np.cos((j + 1.0) * x + j)
    return np.prod(t, axis=1)


def _f28(x):
    a = (x - 30.0) * np.pi / 180.0
    return -2.5 * np.prod(np.sin(a), axis=1) - np.prod(np.sin(5.0 * a), axis=1)


def _f29(x):
    i = np.arange(1, x.shape[1] + 1)
    t = x * x
    return -np.sum(np.sin(t) * np.sin(i * t / np.pi) ** 20, axis=1)


def _f30(x):
    b, n = x.shape
    out = np.empty(b)
    # the (b, n, n) pair tensor is large; bound the temporary to ~2M cells
    step = max(1, (1 << 21) // (n * n))
    for lo in range(0, b, step):
        c = x[lo : lo + step]
        xi = c[:, :, None]
        xj = c[:, None, :]
        y = 100.0 * (xj - xi * xi) ** 2 + (1.0 - xi) ** 2
        out[lo : lo + step] = np.sum(y / 4000.0 - np.cos(y) + 1.0, axis=(1, 2))
    return out


@dataclass(frozen=True)
class BenchmarkSpec:
    """One registered test function at its default dimension."""

    id: int
    name: str
    default_dim: int
    space: SearchSpace
    known_optimum: Optional[float]
    fn: Callable[[np.ndarray], np.ndarray]
    min_dim: int = 1
    fixed_dim: bool = False
    exclusive_bounds: bool = False


def _cube(low, high):
    return lambda dim: SearchSpace.cube(dim, low, high)


def _trid_box(dim):
    return SearchSpace.cube(dim, -float(dim) ** 2, float(dim) ** 2)


# id: (name, default_dim, box builder, optimum, fn, min_dim, fixed_dim, exclusive)
_TABLE = {
    1: ("sphere", 30, _cube(-100, 100), 0.0, _f1, 1, False, False),
    2: ("schwefel_2_22", 30, _cube(-10, 10), 0.0, _f2, 1, False, False),
    3: ("schwefel_1_2", 30, _cube(-100, 100), 0.0, _f3, 1, False, False),
    4: ("schwefel_2_21", 30, _cube(-100, 100), 0.0, _f4, 1, False, False),
    5: ("rosenbrock", 30, _cube(-29, 31), 0.0, _f5, 2, False, False),
    6: ("quartic", 30, _cube(-1.28, 1.28), 0.0, _f6, 1, False, False),
    7: ("rastrigin", 30, _cube(-5.12, 5.12), 0.0, _f7, 1, False, False),
    8: ("griewank", 30, _cube(-600, 600), 0.0, _f8, 1, False, False),
    9: ("schwefel_2_26", 30, _cube(-500, 500), None, _f9, 1, False, False),
    10: ("ackley", 30, _cube(-32, 32), 0.0, _f10, 1, False, False),
    11: (
        "six_hump_camel",
        2,
        lambda dim: SearchSpace(np.array([-4.91017, -5.7126]), np.array([5.0893, 4.2874])),
        -1.0316,
        _f11,
        2,
        True,
        False,
    ),
    12: (
        "branin",
        2,
        lambda dim: SearchSpace(np.array([-8.142, -12.275]), np.array([6.858, 2.725])),
        0.3980,
        _f12,
        2,
        True,
        False,
    ),
    13: (
        "goldstein_price",
        2,
        lambda dim: SearchSpace(np.array([-2.0, -3.0]), np.array([2.0, 1.0])),
        3.0,
        _f13,
        2,
        True,
        False,
    ),
    14: ("elliptic", 30, _cube(-100, 100), 0.0, _f14, 2, False, False),
    15: ("levy", 30, _cube(-10, 10), 0.0, _f15, 2, False, False),
    16: ("zakharov", 30, _cube(-5, 10), 0.0, _f16, 1, False, False),
    17: ("alpine", 30, _cube(-10, 10), 0.0, _f17, 1, False, False),
    18: ("pathological", 30, _cube(-100, 100), 0.0, _f18, 2, False, False),
    19: ("masters_cosine_wave", 30, _cube(-5, 5), -29.0, _f19, 2, False, False),
    20: ("cosine_mixture", 30, _cube(-1, 1), 0.0, _f20, 1, False, False),
    21: ("epistatic_michalewicz", 30, _cube(0, np.pi), None, _f21, 2, False, False),
    22: ("levy_montalvo_2", 30, _cube(-5, 5), 0.0, _f22, 2, False, False),
    23: ("trid", 30, _trid_box, -4930.0, _f23, 2, False, False),
    24: ("paviani", 30, _cube(2, 10), None, _f24, 1, False, True),
    25: ("periodic", 30, _cube(-10, 10), 0.9, _f25, 1, False, False),
    26: ("salomon", 30, _cube(-100, 100), 0.0, _f26, 1, False, False),
    27: ("shubert", 30, _cube(-10, 10), None, _f27, 1, False, False),
    28: ("sinusoidal", 30, _cube(0, 180), -3.5, _f28, 1, False, False),
    29: ("michalewicz", 30, _cube(0, np.pi), None, _f29, 1, False, False),
    30: ("griewank_rosenbrock", 30, _cube(-100, 100), None, _f30, 2, False, False),
}


def spec(fid: int, dim: Optional[int] = None) -> BenchmarkSpec:
    """Spec for one function, optionally at a non-default dimension."""
    if fid not in _TABLE:
        raise ValueError(f"unknown benchmark id {fid}; valid ids are 1..30")
    name, default_dim, box, optimum, fn, min_dim, fixed, exclusive = _TABLE[fid]
    use_dim = default_dim if dim is None else int(dim)
    if fixed and use_dim != default_dim:
        raise ValueError(f"f{fid} ({name}) is defined only for dimension {default_dim}")
    if use_dim < min_dim:
        raise ValueError(f"f{fid} ({name}) needs dimension >= {min_dim}")
    if dim is not None and dim != default_dim:
        # the known optimum value is stated for the default dimension only
        optimum = None
    return BenchmarkSpec(
        id=fid,
        name=name,
        default_dim=use_dim,
        space=box(use_dim),
        known_optimum=optimum,
        fn=fn,
        min_dim=min_dim,
        fixed_dim=fixed,
        exclusive_bounds=exclusive,
    )


def registry() -> List[BenchmarkSpec]:
    """All 30 specs at their default dimensions, in id order."""
    return [spec(fid) for fid in sorted(_TABLE)]


def evaluate_batch(fid: int, x, dim: Optional[int] = None) -> np.ndarray:
    """Validated batch evaluation of one function."""
    sp = spec(fid, dim)
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.ndim != 2 or x.shape[1] != sp.space.dim:
        raise ValueError(f"f{fid} expects points of dimension {sp.space.dim}, got shape {x.shape}")
    if not sp.space.contains(x).all():
        raise ValueError(f"f{fid}: point outside the search box")
    return sp.fn(x)


def evaluate(fid: int, x, dim: Optional[int] = None) -> float:
    """Validated scalar evaluation of one function at a single point."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("evaluate expects a single point; use evaluate_batch for batches")
    return float(evaluate_batch(fid, x[None, :], dim)[0])


def make_problem(fid: int, dim: Optional[int] = None) -> Problem:
    """Engine-ready problem for one benchmark.

    The returned batch callable skips the per-call validation of
    ``evaluate_batch``; the engine guarantees in-box inputs.
    """
    sp = spec(fid, dim)
    return Problem(
        name=f"f{fid:02d}_{sp.name}",
        space=sp.space,
        batch=sp.fn,
        exclusive_bounds=sp.exclusive_bounds,
        known_optimum=sp.known_optimum,
    )
