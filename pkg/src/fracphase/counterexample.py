"""
Pairs of distinct pure states with identical quadrature densities.

For angles whose pairwise differences are rational multiples of pi, the
states ``(h_0 +/- i h_k) / sqrt 2`` with ``k theta_j = 0 mod 2 pi`` cannot be
told apart by the corresponding quadratures. Any three angles can be moved
onto ``(0, pi/4, pi/2)`` by a symplectic matrix, and its metaplectic unitary
carries the ``k = 16`` pair back to a pair for the original angles.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .angles import RationalAngle, radians, unit_phase
from .errors import DegenerateAnglesError, FracPhaseError, GridTooSmallError, NonRationalAngleError
from .frft import signal_intensity
from .hermite import HermiteExpansion, hermite_rows, required_halfwidth, synthesize
from .signal import (
    Grid,
    IntensityProfile,
    inner_product,
    sup_difference,
    total_variation_distance,
)
from .symplectic import (
    QuadratureLine,
    canonical_triple_matrix,
    map_line,
)
from .weyl import metaplectic_apply

DUPLICATE_TOL = 1e-12
CANONICAL_K = 16
# amplitude (relative to the peak) allowed in the outer edge band of a grid
EDGE_TOL = 1e-7
EDGE_FRACTION = 0.03


def normalize_angles(angles):
    """Reduce mod pi, sort, and merge angles closer than ``DUPLICATE_TOL``.

    Rational angles stay rational; floats come back as floats.
    """
    if len(angles) == 0:
        raise FracPhaseError("need at least one angle")
    reduced = []
    for a in angles:
        if isinstance(a, RationalAngle):
            reduced.append(a.mod_pi())
        else:
            t = math.fmod(float(a), math.pi)
            if t < 0:
                t += math.pi
            if math.pi - t < DUPLICATE_TOL or t >= math.pi:
                t = 0.0
            reduced.append(t)
    reduced.sort(key=radians)
    out = [reduced[0]]
    for a in reduced[1:]:
        if radians(a) - radians(out[-1]) > DUPLICATE_TOL:
            out.append(a)
    # 0 and values just below pi are the same line
    if len(out) > 1 and math.pi - radians(out[-1]) < DUPLICATE_TOL and radians(out[0]) < DUPLICATE_TOL:
        out.pop()
    return out


def _shifted_fractions(angles):
    if not all(isinstance(a, RationalAngle) and a.is_rational for a in angles):
        raise NonRationalAngleError(
            "angle differences must be exact rational multiples of pi "
            "(write them as e.g. 'pi/4')"
        )
    ordered = normalize_angles(angles)
    base = ordered[0].fraction
    return [(a.fraction - base) % 1 for a in ordered[1:]]


def rational_angle_k(angles):
    """``k = 2 p_2 ... p_n`` from the reduced denominators of ``theta_j - theta_1``."""
    k = 2
    for f in _shifted_fractions(angles):
        k *= f.denominator
    return k


def minimal_k(angles):
    """Smallest ``k >= 1`` with ``k theta_j = 0 mod 2 pi`` for the shifted angles."""
    k = 1
    for f in _shifted_fractions(angles):
        # k q / p must be even: p | k, and 2p | k when q is odd
        step = f.denominator * (2 if f.numerator % 2 else 1)
        k = k * step // math.gcd(k, step)
    return k


def build_pair(k):
    """``(h_0 + i h_k) / sqrt 2`` and ``(h_0 - i h_k) / sqrt 2``."""
    if k < 1:
        raise FracPhaseError(f"k must be at least 1, got {k}")
    r = 1.0 / math.sqrt(2.0)
    plus = HermiteExpansion.from_dict({0: r, k: 1j * r})
    minus = HermiteExpansion.from_dict({0: r, k: -1j * r})
    return plus, minus


def rational_pair(angles):
    """The pair for ``angles`` themselves, not for the angles shifted to start at 0.

    ``build_pair(k)`` works for the shifted list ``theta_j - theta_1``; undoing
    the shift means applying ``F_{-theta_1}``, which multiplies the ``h_k``
    coefficient by ``exp(i k theta_1)`` (exact for rational ``theta_1``).
    """
    k = rational_angle_k(angles)
    base = normalize_angles(angles)[0]
    undo = unit_phase(k, base).conjugate()
    r = 1.0 / math.sqrt(2.0)
    plus = HermiteExpansion.from_dict({0: r, k: 1j * r * undo})
    minus = HermiteExpansion.from_dict({0: r, k: -1j * r * undo})
    return plus, minus


@dataclass
class VerdictReport:
    angles: list
    sup_deviations: list
    tv_distances: list
    tol: float
    verdict: bool
    grid_covers_support: bool = True
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "angles": [radians(a) for a in self.angles],
            "angle_labels": [str(a) for a in self.angles],
            "sup_deviations": list(self.sup_deviations),
            "tv_distances": list(self.tv_distances),
            "tol": self.tol,
            "verdict": self.verdict,
            "grid_covers_support": self.grid_covers_support,
        }
        out.update(self.extra)
        return out


@functools.lru_cache(maxsize=32)
def _cached_rows(indices, grid):
    rows = hermite_rows(indices, grid.x)
    rows.setflags(write=False)
    return rows


def _expansion_densities(e1, e2, angles, grid):
    idx = tuple(sorted(set(np.flatnonzero(e1.coefficients)) | set(np.flatnonzero(e2.coefficients))))
    rows = _cached_rows(tuple(int(i) for i in idx), grid) if idx else np.zeros((0, grid.n_points))
    c1 = np.array([e1.coefficient(i) for i in idx], dtype=complex)
    c2 = np.array([e2.coefficient(i) for i in idx], dtype=complex)
    out = []
    for theta in angles:
        phases = np.array([unit_phase(i, theta) for i in idx], dtype=complex)
        d1 = np.abs((phases * c1) @ rows) ** 2 if idx else np.zeros(grid.n_points)
        d2 = np.abs((phases * c2) @ rows) ** 2 if idx else np.zeros(grid.n_points)
        out.append((IntensityProfile(grid, d1), IntensityProfile(grid, d2)))
    covers = grid.halfwidth >= required_halfwidth(max(idx)) if idx else True
    return out, covers


def indistinguishability_verdict(e1, e2, angles, grid=None, tol=1e-10):
    """Compare quadrature densities of two states at each angle.

    Hermite expansions go through the exact spectral route (with exact phases
    for :class:`RationalAngle` input); sampled signals through
    :func:`~fracphase.frft.frft_grid`. The verdict is true iff every sup-norm
    deviation is at most ``tol``.
    """
    if isinstance(e1, HermiteExpansion) != isinstance(e2, HermiteExpansion):
        raise FracPhaseError("compare two expansions or two sampled signals")
    if isinstance(e1, HermiteExpansion):
        if grid is None:
            grid = Grid.symmetric()
        pairs, covers = _expansion_densities(e1, e2, angles, grid)
    else:
        pairs = [(signal_intensity(e1, t), signal_intensity(e2, t)) for t in angles]
        covers = edge_amplitude(e1) <= EDGE_TOL and edge_amplitude(e2) <= EDGE_TOL
    sups = [sup_difference(a, b) for a, b in pairs]
    tvs = [total_variation_distance(a, b) for a, b in pairs]
    return VerdictReport(
        angles=list(angles),
        sup_deviations=sups,
        tv_distances=tvs,
        tol=tol,
        verdict=all(s <= tol for s in sups),
        grid_covers_support=bool(covers),
    )


def _band_ratio(mag, n_edge):
    peak = mag.max()
    if peak == 0:
        return 0.0
    return float(max(mag[:n_edge].max(), mag[-n_edge:].max()) / peak)


def edge_amplitude(psi):
    """Largest amplitude in the outer edge bands, relative to the peak.

    Checks both the samples (position) and their discrete spectrum
    (momentum, near the Nyquist frequency).
    """
    n_edge = max(2, int(EDGE_FRACTION * psi.grid.n_points))
    spectrum = np.abs(np.fft.fftshift(np.fft.fft(psi.values)))
    return max(_band_ratio(np.abs(psi.values), n_edge), _band_ratio(spectrum, n_edge))


def reduce_triple(theta1, theta2, theta3):
    """Symplectic ``S`` sending the three lines to ``L_0, L_pi/4, L_pi/2``."""
    ordered = normalize_angles([theta1, theta2, theta3])
    if len(ordered) != 3:
        raise DegenerateAnglesError(f"angles {(theta1, theta2, theta3)} coincide modulo pi")
    S = canonical_triple_matrix(*ordered)
    images = tuple(map_line(S, QuadratureLine(radians(t))) for t in ordered)
    return S, images


def counterexample_grid(theta1, theta2, theta3, k=CANONICAL_K):
    """A symmetric grid wide and fine enough for the transformed pair.

    The pair's phase-space support is a disc of radius about
    ``sqrt(2k + 1) + 3``; the inverse matrix stretches it by at most its
    largest singular value, in position and in momentum.
    """
    S, _ = reduce_triple(theta1, theta2, theta3)
    sigma = float(np.linalg.svd(S.inverse().as_array(), compute_uv=False)[0])
    extent = (math.sqrt(2 * k + 1) + 3.5) * sigma
    halfwidth = max(12.0, math.ceil(extent + 3.0))
    # the chirp steps need 2 pi / dx above roughly 4 * halfwidth
    n_needed = 2.0 * halfwidth * 4.0 * halfwidth / (2 * math.pi) * 2.0
    n_points = max(1024, 1 << int(math.ceil(math.log2(n_needed))))
    return Grid.symmetric(halfwidth, n_points)


def discriminating_angle(phi1, phi2, n_angles=50):
    """Angle in ``[0, pi)`` where the two densities differ most (sup norm)."""
    best_theta, best = 0.0, -1.0
    for theta in np.linspace(0.0, math.pi, n_angles, endpoint=False):
        d = sup_difference(signal_intensity(phi1, theta), signal_intensity(phi2, theta))
        if d > best:
            best_theta, best = float(theta), d
    return best_theta, best


def three_angle_counterexample(theta1, theta2, theta3, grid=None, tol=1e-5):
    """Two orthogonal signals with equal densities at three arbitrary angles.

    Builds the ``k = 16`` pair for ``(0, pi/4, pi/2)`` and applies
    ``U(S^-1)``, where ``S`` sends the given lines onto the canonical ones.
    """
    S, images = reduce_triple(theta1, theta2, theta3)
    if grid is None:
        grid = counterexample_grid(theta1, theta2, theta3)
    grid.require_symmetric()
    plus, minus = build_pair(CANONICAL_K)
    S_inv = S.inverse()
    phi_plus = metaplectic_apply(synthesize(plus, grid), S_inv)
    phi_minus = metaplectic_apply(synthesize(minus, grid), S_inv)
    edge = max(edge_amplitude(phi_plus), edge_amplitude(phi_minus))
    if edge > EDGE_TOL:
        raise GridTooSmallError(
            f"transformed states reach the grid edge (relative amplitude {edge:.2e}); "
            "use a wider grid"
        )
    angles = [theta1, theta2, theta3]
    report = indistinguishability_verdict(phi_plus, phi_minus, angles, tol=tol)
    overlap = inner_product(phi_plus, phi_minus)
    report.extra.update(
        {
            "k": CANONICAL_K,
            "path": "symplectic-reduction",
            "matrix": S.as_array().tolist(),
            "image_angles": [line.angle for line in images],
            "overlap_modulus": abs(overlap),
            "norms": [phi_plus.norm(), phi_minus.norm()],
            "edge_amplitude": edge,
            "grid": {"halfwidth": grid.halfwidth, "n_points": grid.n_points},
        }
    )
    return phi_plus, phi_minus, report


def rational_counterexample(angles, grid=None, tol=1e-10):
    """Direct pair for angles with rational differences, with its verdict.

    When the smallest angle is not 0 the pair is pre-rotated by
    :func:`rational_pair`.

    Returns the two expansions and the report (which carries ``k`` and the
    minimal valid ``k`` for comparison).
    """
    k = rational_angle_k(angles)
    plus, minus = rational_pair(angles)
    report = indistinguishability_verdict(plus, minus, list(angles), grid, tol)
    k_min = minimal_k(angles)
    overlap = complex(np.vdot(plus.coefficients, minus.coefficients))
    report.extra.update(
        {
            "k": k,
            "minimal_k": k_min,
            "path": "rational",
            "overlap_modulus": abs(overlap),
        }
    )
    if k_min < k:
        report.extra["note"] = f"k = {k_min} would also satisfy k*theta_j = 0 mod 2pi"
    return plus, minus, report


__all__ = [
    "normalize_angles",
    "rational_angle_k",
    "minimal_k",
    "build_pair",
    "rational_pair",
    "indistinguishability_verdict",
    "reduce_triple",
    "three_angle_counterexample",
    "rational_counterexample",
    "counterexample_grid",
    "discriminating_angle",
    "edge_amplitude",
    "VerdictReport",
]
