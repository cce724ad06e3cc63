"""
Fractional Fourier transforms and rotated quadrature intensities.

Convention: ``F_theta h_n = exp(-i n theta) h_n``. With this choice
``F_{pi/2}`` is the unitary Fourier transform with kernel
``exp(-i x y) / sqrt(2 pi)`` and ``F_pi`` is the parity operator.

Two independent routes are provided:

* :func:`frft_spectral` multiplies Hermite coefficients by phases (exact).
* :func:`frft_grid` discretizes the integral kernel on the sample grid with
  a chirp-multiply / chirp-convolve / chirp-multiply factorization.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import fftconvolve

from .angles import RationalAngle, TWO_PI, radians, unit_phase
from .hermite import HermiteExpansion, check_grid, synthesize
from .signal import Grid, IntensityProfile, SampledSignal, trapezoid

__all__ = [
    "RationalAngle",
    "frft_spectral",
    "frft_grid",
    "quadrature_intensity",
    "signal_intensity",
    "quadrature_mean",
    "position_moment",
    "momentum_moment",
]

# angles this close to 0 or pi (mod 2 pi) are treated as exactly 0 or pi
EXACT_WINDOW = 1e-12


def frft_spectral(e, theta):
    """Apply ``F_theta`` to a Hermite expansion.

    ``theta`` may be a float or a :class:`RationalAngle`; rational angles give
    exact phases (``exp(-i n theta) == 1`` whenever ``n theta = 0 mod 2 pi``).
    """
    n = np.arange(len(e))
    if isinstance(theta, RationalAngle) and theta.is_rational:
        phases = np.array([unit_phase(int(k), theta) for k in n], dtype=complex)
    else:
        phases = np.exp(-1j * n * radians(theta))
    return HermiteExpansion(phases * e.coefficients)


def _reduce(theta):
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    return t


def _chirp_transform(values, grid, alpha):
    """Kernel discretization of ``F_alpha`` for ``sin(alpha) >= 1/sqrt(2)``.

    Uses ``x y = (x^2 + y^2 - (x - y)^2) / 2`` to turn the kernel sum into a
    convolution with ``exp(i (j - k)^2 dx^2 / (2 sin alpha))``.
    """
    s = math.sin(alpha)
    x = grid.x
    n = grid.n_points
    dx = grid.dx
    # cot - 1/sin = -tan(alpha / 2)
    outer = np.exp(-0.5j * math.tan(0.5 * alpha) * x * x)
    m = np.arange(-(n - 1), n)
    kernel = np.exp(0.5j * (m * dx) ** 2 / s)
    conv = fftconvolve(kernel, outer * values, mode="valid")
    # sqrt((1 - i cot) / (2 pi)) for 0 < alpha < pi
    amplitude = np.exp(0.5j * (alpha - 0.5 * math.pi)) / math.sqrt(2 * math.pi * s)
    return amplitude * dx * outer * conv


def frft_grid(psi, theta):
    """Apply ``F_theta`` to samples on a grid symmetric about zero.

    Angles within ``EXACT_WINDOW`` of 0 or pi are the identity or the
    reflection. Otherwise the angle is split so that every chirp step runs at
    ``pi/4 <= alpha <= 3 pi/4``, where the kernel is well resolved:

    * ``theta`` in ``(pi, 2 pi)``: reflect, then continue with ``theta - pi``;
    * ``theta`` in ``(0, pi/4)``: ``F_theta = Pi F_{pi/2} F_{theta + pi/2}``;
    * ``theta`` in ``(3 pi/4, pi)``: ``F_theta = F_{pi/2} F_{theta - pi/2}``.
    """
    grid = psi.grid
    grid.require_symmetric()
    t = _reduce(radians(theta))
    values = psi.values
    if t < EXACT_WINDOW or TWO_PI - t < EXACT_WINDOW:
        return SampledSignal(grid, values.copy())
    if abs(t - math.pi) < EXACT_WINDOW:
        return SampledSignal(grid, values[::-1].copy())
    if t > math.pi:
        values = values[::-1]
        t -= math.pi
    quarter = 0.25 * math.pi
    if t < quarter:
        out = _chirp_transform(values, grid, t + 0.5 * math.pi)
        out = _chirp_transform(out, grid, 0.5 * math.pi)[::-1]
    elif t > 3 * quarter:
        out = _chirp_transform(values, grid, t - 0.5 * math.pi)
        out = _chirp_transform(out, grid, 0.5 * math.pi)
    else:
        out = _chirp_transform(values, grid, t)
    return SampledSignal(grid, out)


def quadrature_intensity(e, theta, grid):
    """Density ``|F_theta psi|^2`` of the rotated quadrature, spectral route."""
    check_grid(grid, max(e.max_index, 0))
    return signal_intensity_spectral(e, theta, grid)


def signal_intensity_spectral(e, theta, grid):
    """Like :func:`quadrature_intensity` but without the grid-support check.

    Pointwise samples of the density are still exact; only integrals over the
    grid lose mass when the grid is too narrow.
    """
    rotated = synthesize(frft_spectral(e, theta), grid)
    return IntensityProfile(grid, np.abs(rotated.values) ** 2)


def signal_intensity(psi, theta):
    """Density ``|F_theta psi|^2`` of sampled ``psi`` via :func:`frft_grid`."""
    rotated = frft_grid(psi, theta)
    return IntensityProfile(psi.grid, np.abs(rotated.values) ** 2)


def _lowering_expectation(e):
    """``<psi| a psi>`` from the ladder relation ``a h_n = sqrt(n) h_{n-1}``."""
    c = e.coefficients
    if len(c) < 2:
        return 0j
    n = np.arange(1, len(c))
    return complex(np.sum(np.conj(c[:-1]) * np.sqrt(n) * c[1:]))


def position_moment(e):
    """``<psi|Q psi>`` with ``Q = (a + a^dagger) / sqrt 2``."""
    return math.sqrt(2.0) * _lowering_expectation(e).real


def momentum_moment(e):
    """``<psi|P psi>`` with ``P = (a - a^dagger) / (i sqrt 2)``."""
    return math.sqrt(2.0) * _lowering_expectation(e).imag


def quadrature_mean(e, theta, grid=None):
    """First moment of the ``theta`` quadrature density, by grid integration."""
    if grid is None:
        grid = Grid.symmetric()
    density = quadrature_intensity(e, theta, grid)
    return float(trapezoid(grid.x * density.density, grid))
