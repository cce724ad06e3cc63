"""
Hermite functions and Hermite expansions of signals.

The orthonormal Hermite functions

    h_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2 / 2)

are evaluated with the three-term recurrence on the normalized functions,

    h_{n+1} = sqrt(2 / (n + 1)) x h_n - sqrt(n / (n + 1)) h_{n-1},

which never forms H_n or the Gaussian separately and so stays finite for
large n where the polynomial overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FracPhaseError, GridTooSmallError
from .signal import SampledSignal

# extra room beyond the classical turning point sqrt(2N + 1)
GRID_MARGIN = 4.0


def hermite_table(n_max, x):
    """Values of h_0..h_{n_max} at ``x``.

    Returns an array of shape ``(n_max + 1,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise FracPhaseError("Hermite functions need finite arguments")
    if n_max < 0:
        raise FracPhaseError(f"index must be nonnegative, got {n_max}")
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * x * table[0]
    for n in range(1, n_max):
        table[n + 1] = (
            math.sqrt(2.0 / (n + 1)) * x * table[n]
            - math.sqrt(n / (n + 1)) * table[n - 1]
        )
    return table


def hermite_eval(n, x):
    """Evaluate h_n at ``x`` (scalar or array)."""
    if n < 0:
        raise FracPhaseError(f"index must be nonnegative, got {n}")
    x_arr = np.asarray(x, dtype=float)
    h = hermite_rows([n], x_arr)[0]
    return float(h) if h.ndim == 0 else h


def hermite_rows(indices, x):
    """Values of ``h_n`` at ``x`` for the requested indices only.

    Runs the recurrence up to ``max(indices)`` keeping two rows at a time, so
    memory stays ``O(len(indices) * len(x))`` even for very large indices.
    """
    x = np.asarray(x, dtype=float)
    indices = [int(n) for n in indices]
    if not indices:
        return np.empty((0,) + x.shape)
    if min(indices) < 0:
        raise FracPhaseError("Hermite indices must be nonnegative")
    if not np.all(np.isfinite(x)):
        raise FracPhaseError("Hermite functions need finite arguments")
    wanted = {}
    for pos, n in enumerate(indices):
        wanted.setdefault(n, []).append(pos)
    out = np.empty((len(indices),) + x.shape)
    h_prev = np.zeros_like(x)
    h = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for m in range(max(indices) + 1):
        for pos in wanted.get(m, ()):
            out[pos] = h
        h_prev, h = h, (
            math.sqrt(2.0 / (m + 1)) * x * h - math.sqrt(m / (m + 1)) * h_prev
        )
    return out


def hermite_polynomial_coefficients(n):
    """Integer coefficients of the physicists' H_n, lowest degree first.

    Uses ``H_{n+1} = 2 x H_n - 2 n H_{n-1}`` in exact integer arithmetic; meant
    as an independent reference for the normalized recurrence.
    """
    prev, cur = [1], [0, 2]
    if n == 0:
        return prev
    for m in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * m * c
        prev, cur = cur, nxt
    return cur


def required_halfwidth(max_index):
    """Smallest grid half-width accepted for expansions up to ``max_index``."""
    return math.sqrt(2 * max_index + 1) + GRID_MARGIN


def check_grid(grid, max_index):
    need = required_halfwidth(max_index)
    if grid.halfwidth < need:
        raise GridTooSmallError(
            f"grid half-width {grid.halfwidth:.4g} is below {need:.4g}, "
            f"needed for Hermite index {max_index}"
        )


def max_index_for(grid):
    """Largest Hermite index whose support the grid covers."""
    r = grid.halfwidth - GRID_MARGIN
    if r < 1:
        raise GridTooSmallError(f"grid half-width {grid.halfwidth:.4g} is too small")
    return int((r * r - 1) // 2)


@dataclass(frozen=True, eq=False)
class HermiteExpansion:
    """Finite expansion ``sum_n c_n h_n``; coefficients past the end are zero."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if c.ndim != 1:
            raise FracPhaseError("coefficients must be one-dimensional")
        if not np.all(np.isfinite(c)):
            raise FracPhaseError("coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_dict(cls, entries):
        """Build from ``{index: coefficient}``."""
        if not entries:
            return cls(np.zeros(0))
        c = np.zeros(max(entries) + 1, dtype=complex)
        for n, value in entries.items():
            c[n] = value
        return cls(c)

    @property
    def max_index(self):
        return len(self.coefficients) - 1

    def coefficient(self, n):
        return self.coefficients[n] if 0 <= n <= self.max_index else 0j

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))

    def padded(self, n_max):
        c = np.zeros(n_max + 1, dtype=complex)
        c[: len(self.coefficients)] = self.coefficients
        return HermiteExpansion(c)

    def __len__(self):
        return len(self.coefficients)


def synthesize(e, grid):
    """Samples of ``sum_n c_n h_n`` on ``grid``."""
    if len(e) == 0:
        return SampledSignal(grid, np.zeros(grid.n_points, dtype=complex))
    nonzero = np.flatnonzero(e.coefficients)
    if nonzero.size == 0:
        return SampledSignal(grid, np.zeros(grid.n_points, dtype=complex))
    rows = hermite_rows(nonzero, grid.x)
    values = e.coefficients[nonzero] @ rows
    return SampledSignal(grid, values)


def expand(psi, n_max):
    """Project sampled ``psi`` onto h_0..h_{n_max} by trapezoid inner products."""
    check_grid(psi.grid, n_max)
    table = hermite_table(n_max, psi.x)
    weights = psi.grid.trapezoid_weights()
    return HermiteExpansion(table @ (weights * psi.values))
