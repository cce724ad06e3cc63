"""
Weyl operators, characteristic functions and the metaplectic action.

``W(q, p) = exp(i q p / 2) exp(-i q P) exp(i p Q)`` acts on samples as

    (W(q, p) psi)(t) = exp(-i q p / 2) exp(i p t) psi(t - q).

Position shifts use band-limited (FFT phase ramp) interpolation, so any real
``q`` is allowed; accuracy assumes psi is smooth and negligible near the grid
edges.

The metaplectic unitary ``U(S)`` is built from the factorization
``S = rotation(theta) @ dilation(a) @ shear(b)``:

* shear ``(q, p) -> (q, p + b q)``: multiply by ``exp(i b t^2 / 2)``;
* dilation ``diag(a, 1/a)``: ``psi -> a^(-1/2) psi(t / a)``;
* rotation ``S_theta``: ``R(theta) = F_{-theta}``.

``U(S)`` is only defined up to a global phase and no attempt is made to fix it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frft import frft_grid, quadrature_intensity
from .signal import SampledSignal, inner_product, trapezoid
from .symplectic import SymplecticMatrix2


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError("phase-space point must be finite")

    def __add__(self, other):
        return PhasePoint(self.q + other.q, self.p + other.p)

    def as_array(self):
        return np.array([self.q, self.p])


def symplectic_form(x, y):
    """``{(q, p), (u, v)} = q v - p u``."""
    return x.q * y.p - x.p * y.q


def shift(psi, q):
    """Samples of ``t -> psi(t - q)`` by band-limited interpolation."""
    if q == 0:
        return SampledSignal(psi.grid, psi.values.copy())
    n = psi.grid.n_points
    omega = 2 * np.pi * np.fft.fftfreq(n, d=psi.grid.dx)
    spectrum = np.fft.fft(psi.values)
    if n % 2 == 0:
        # split the Nyquist bin so the shift of a real signal stays real
        nyq = n // 2
        ramp = np.exp(-1j * omega * q)
        ramp[nyq] = math.cos(omega[nyq] * q)
        return SampledSignal(psi.grid, np.fft.ifft(spectrum * ramp))
    return SampledSignal(psi.grid, np.fft.ifft(spectrum * np.exp(-1j * omega * q)))


def weyl_apply(psi, x):
    """``W(x) psi`` for a :class:`PhasePoint` (or ``(q, p)`` pair)."""
    if not isinstance(x, PhasePoint):
        x = PhasePoint(*map(float, x))
    shifted = shift(psi, x.q)
    t = psi.x
    phase = np.exp(1j * (x.p * t - 0.5 * x.q * x.p))
    return SampledSignal(psi.grid, phase * shifted.values)


def characteristic_function(e, theta, u, grid):
    """``int exp(-i u x) rho_theta(x) dx`` of the theta-quadrature density."""
    density = quadrature_intensity(e, theta, grid)
    return complex(trapezoid(np.exp(-1j * u * grid.x) * density.density, grid))


def characteristic_function_weyl(psi, theta, u):
    """``<psi| W(u sin theta, -u cos theta) psi>`` for sampled ``psi``."""
    x = PhasePoint(u * math.sin(theta), -u * math.cos(theta))
    return inner_product(psi, weyl_apply(psi, x))


def _bandlimited_resample(psi, points, chunk=256):
    """Trigonometric interpolant of ``psi`` at ``points``; zero outside the grid."""
    grid = psi.grid
    n = grid.n_points
    coeffs = np.fft.fft(psi.values) / n
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        # symmetric treatment of the Nyquist term
        nyq = n // 2
        coeffs = np.concatenate([coeffs, [0.5 * coeffs[nyq]]])
        coeffs[nyq] *= 0.5
        k = np.concatenate([k, [nyq]])
    omega = 2 * np.pi * k / (n * grid.dx)
    points = np.asarray(points, dtype=float)
    out = np.zeros(points.shape, dtype=complex)
    inside = (points >= grid.x0) & (points <= grid.x_end)
    idx = np.flatnonzero(inside)
    rel = points[idx] - grid.x0
    for start in range(0, idx.size, chunk):
        block = rel[start : start + chunk]
        out[idx[start : start + chunk]] = np.exp(1j * np.outer(block, omega)) @ coeffs
    return out


def dilate(psi, a):
    """``t -> a^(-1/2) psi(t / a)``, the unitary for ``diag(a, 1/a)``."""
    if a <= 0:
        raise ValueError(f"dilation factor must be positive, got {a}")
    if a == 1.0:
        return SampledSignal(psi.grid, psi.values.copy())
    values = _bandlimited_resample(psi, psi.x / a) / math.sqrt(a)
    return SampledSignal(psi.grid, values)


def chirp(psi, b):
    """Multiplication by ``exp(i b t^2 / 2)``, the unitary for a shear by ``b``."""
    t = psi.x
    return SampledSignal(psi.grid, np.exp(0.5j * b * t * t) * psi.values)


def metaplectic_apply(psi, S):
    """``U(S) psi`` up to a global phase."""
    if not isinstance(S, SymplecticMatrix2):
        S = SymplecticMatrix2.from_array(S)
    theta, a, b = S.iwasawa()
    out = chirp(psi, b) if b != 0 else psi
    out = dilate(out, a)
    return frft_grid(out, -theta)
