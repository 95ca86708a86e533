"""Brute-force checkers for the closed-form solvers.

These deliberately know nothing about the solvers' answers: a
golden-section search for one-dimensional concave problems, an
exhaustive grid over the probability simplex, and an exact grid
optimum over quantized chain increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .divergence import rd_chain
from .errors import EnumerationLimitError, InputError
from .grading import IncrementSequence

DEFAULT_SIMPLEX_RESOLUTION = 1e-2
DEFAULT_MAX_SIMPLEX_POINTS = 2_000_000
DEFAULT_INCREMENT_RESOLUTION = 1e-3
DEFAULT_MAX_CHAIN_LENGTH = 8

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    resolution: float
    bounds: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if not self.resolution > 0:
            raise InputError(f"grid resolution must be positive, got {self.resolution}")
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise InputError(f"empty grid interval [{lo}, {hi}]")

    @property
    def units(self) -> int:
        """Number of grid steps spanning a unit interval."""
        return max(1, round(1.0 / self.resolution))


def maximize_1d(
    objective: Callable[[float], float], interval: tuple[float, float], tol: float = 1e-10
) -> tuple[float, float]:
    lo, hi = interval
    if not lo < hi:
        raise InputError(f"need lo < hi, got ({lo}, {hi})")

    def f(x: float) -> float:
        y = objective(x)
        if not math.isfinite(y):
            raise InputError(f"objective is not finite at x={x!r}")
        return y

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        if c >= d:  # interval has shrunk to floating-point resolution
            break
    x = 0.5 * (a + b)
    return x, f(x)


def _compositions(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    blocks = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        blocks.append(np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest]))
    return np.vstack(blocks)


def simplex_grid_size(K: int, units: int) -> int:
    return math.comb(units + K - 1, K - 1)


def maximize_simplex_grid(
    objective: Callable[[np.ndarray], np.ndarray],
    K: int,
    grid: GridSpec | None = None,
    max_points: int = DEFAULT_MAX_SIMPLEX_POINTS,
) -> tuple[np.ndarray, float]:
    """Best point of the regular grid on the K-simplex.

    ``objective`` is vectorized: it receives an (npoints, K) array of
    probability vectors and returns npoints values.  Ties go to the first
    point in lexicographic grid order.
    """
    grid = grid or GridSpec(DEFAULT_SIMPLEX_RESOLUTION)
    if K < 1:
        raise InputError("K must be at least 1")
    units = grid.units
    size = simplex_grid_size(K, units)
    if size > max_points:
        raise EnumerationLimitError(
            f"simplex grid for K={K} at resolution {grid.resolution} has {size} points "
            f"(cap {max_points})"
        )
    points = _compositions(units, K) / units
    values = np.asarray(objective(points), dtype=float)
    if values.shape != (points.shape[0],):
        raise InputError("objective must return one value per grid point")
    if not np.all(np.isfinite(values)):
        raise InputError("objective is not finite on the grid")
    best = int(np.argmax(values))
    return points[best], float(values[best])


def _neg_xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    pos = x > 0
    out[pos] = -x[pos] * np.log(x[pos])
    return out


def _best_split(rise: float, edges: int, units: int) -> list[float]:
    """Exact grid optimum of sum -f ln f over ``edges`` increments summing to ``rise``.

    Increments are multiples of rise/units.  Dynamic programming over the
    number of units already spent visits every grid composition implicitly.
    """
    if rise <= 0:
        return [0.0] * edges
    h = rise / units
    t = np.arange(units + 1)
    phi = _neg_xlogx(t * h)
    # best[u]: best total over the first j edges using u units
    best = phi.copy()
    choice = []
    u = t[:, None]
    for _ in range(edges - 1):
        cand = np.where(t[None, :] <= u, best[np.clip(u - t[None, :], 0, units)] + phi[None, :], -np.inf)
        pick = np.argmax(cand, axis=1)
        choice.append(pick)
        best = cand[np.arange(units + 1), pick]
    spent = units
    parts = []
    for pick in reversed(choice):
        last = int(pick[spent])
        parts.append(last)
        spent -= last
    parts.append(spent)
    parts.reverse()
    return [k * h for k in parts]


def maximize_increment_grid(
    n: int,
    constraints,
    grid: GridSpec | None = None,
    max_length: int = DEFAULT_MAX_CHAIN_LENGTH,
) -> tuple[list[float], float]:
    """Best grading function on 0..n through fixed knots, on a quantized grid.

    ``constraints`` is any object with a ``knots`` sequence of
    (position, value) pairs.  Within each knot interval the increments are
    multiples of ``resolution`` times that interval's rise.  Divergence is
    against the unit-increment null.
    """
    grid = grid or GridSpec(DEFAULT_INCREMENT_RESOLUTION)
    if n > max_length:
        raise EnumerationLimitError(f"chain length {n} exceeds the oracle cap {max_length}")
    knots: Sequence[tuple[int, float]] = list(constraints.knots)
    if knots[0][0] != 0 or knots[-1][0] != n:
        raise InputError(f"knots must span 0..{n}")
    values = [float(knots[0][1])]
    for (p0, v0), (p1, v1) in zip(knots, knots[1:]):
        if p1 <= p0 or v1 < v0:
            raise InputError("infeasible knots: positions must increase and values not decrease")
        for inc in _best_split(v1 - v0, p1 - p0, grid.units)[:-1]:
            values.append(values[-1] + inc)
        values.append(float(v1))
    f = [b - a for a, b in zip(values, values[1:])]
    rd = rd_chain(IncrementSequence(tuple(f), tuple([1.0] * len(f))))
    return values, rd
