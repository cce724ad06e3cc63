"""
SL(2, R) matrices acting on quadrature lines.

A quadrature line ``L_theta = {u (sin theta, -cos theta)}`` is stored only by
its angle in ``[0, pi)``; :func:`line_angle` is the single place where a
direction vector is turned back into an angle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angles import RationalAngle, cot, radians
from .errors import (
    DegenerateAnglesError,
    FracPhaseError,
    InfeasibleTargetsError,
    NotSymplecticError,
)

DET_TOL = 1e-12
# |cot a - cot b| below this means the two target lines coincide
COT_GAP_TOL = 1e-12

CAVEAT = (
    "caveat: a positive minimum over bounded denominators is consistent with, "
    "but does not prove, that no symplectic matrix makes all four angles "
    "rational multiples of pi"
)


@dataclass(frozen=True)
class SymplecticMatrix2:
    """Real 2x2 matrix ``[[a11, a12], [a21, a22]]`` with unit determinant."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        entries = (self.a11, self.a12, self.a21, self.a22)
        if not all(math.isfinite(v) for v in entries):
            raise NotSymplecticError("matrix entries must be finite")
        det = self.a11 * self.a22 - self.a12 * self.a21
        if abs(det - 1.0) > DET_TOL * max(1.0, max(abs(v) for v in entries) ** 2):
            raise NotSymplecticError(f"determinant is {det!r}, not 1")

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise NotSymplecticError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta):
        """Phase-space rotation ``S_theta``."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, -s, s, c)

    @classmethod
    def dilation(cls, a):
        return cls(a, 0.0, 0.0, 1.0 / a)

    @classmethod
    def shear(cls, b):
        """Lower-triangular shear ``(q, p) -> (q, p + b q)``."""
        return cls(1.0, 0.0, b, 1.0)

    @classmethod
    def from_iwasawa(cls, theta, a, b):
        """``rotation(theta) @ dilation(a) @ shear(b)``."""
        return cls.rotation(theta) @ cls.dilation(a) @ cls.shear(b)

    def as_array(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix2):
            return SymplecticMatrix2.from_array(self.as_array() @ other.as_array())
        return self.as_array() @ np.asarray(other, dtype=float)

    def inverse(self):
        return SymplecticMatrix2(self.a22, -self.a12, -self.a21, self.a11)

    def iwasawa(self):
        """Factor as ``rotation(theta) @ dilation(a) @ shear(b)`` with ``a > 0``.

        The second column of the matrix equals ``(1/a) (-sin theta, cos theta)``,
        which fixes ``theta`` and ``a``; ``b`` follows from the remaining
        lower-triangular factor.
        """
        col = np.array([self.a12, self.a22])
        length = math.hypot(*col)
        a = 1.0 / length
        theta = math.atan2(-col[0], col[1])
        lower = SymplecticMatrix2.rotation(-theta).as_array() @ self.as_array()
        # lower = [[a, 0], [b / a, 1 / a]]
        b = float(lower[1, 0] * a)
        return theta, a, b


@dataclass(frozen=True)
class QuadratureLine:
    """The line ``L_theta``, identified by ``theta`` in ``[0, pi)``."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", normalize_line_angle(self.angle))

    @property
    def direction(self):
        return np.array([math.sin(self.angle), -math.cos(self.angle)])


def normalize_line_angle(theta):
    t = math.fmod(float(theta), math.pi)
    if t < 0:
        t += math.pi
    if t >= math.pi:
        t = 0.0
    return t


def line_angle(v):
    """Angle in ``[0, pi)`` of the line spanned by ``v``."""
    # direction (sin t, -cos t) = (v0, v1) / |v|
    return normalize_line_angle(math.atan2(v[0], -v[1]))


def line_angle_distance(a, b):
    """Distance between two line angles on the circle ``R / pi Z``."""
    d = abs(normalize_line_angle(a) - normalize_line_angle(b))
    return min(d, math.pi - d)


def map_line(S, line):
    """Image of a quadrature line under ``S``."""
    if not isinstance(line, QuadratureLine):
        line = QuadratureLine(radians(line))
    return QuadratureLine(line_angle(S @ line.direction))


def canonical_triple_matrix(theta1, theta2, theta3):
    """The matrix sending ``L_theta1, L_theta2, L_theta3`` to ``L_0, L_pi/4, L_pi/2``.

    Requires ``0 <= theta1 < theta2 < theta3 < pi``.
    """
    t1, t2, t3 = (radians(t) for t in (theta1, theta2, theta3))
    if not (0.0 <= t1 < t2 < t3 < math.pi):
        raise DegenerateAnglesError(
            f"need 0 <= theta1 < theta2 < theta3 < pi, got {(t1, t2, t3)}"
        )
    s31, s32, s21 = math.sin(t3 - t1), math.sin(t3 - t2), math.sin(t2 - t1)
    if min(s31, s32, s21) <= 0.0:
        raise DegenerateAnglesError("angles coincide modulo pi")
    upper = math.sqrt(s32 / s21)
    lower = math.sqrt(s21 / s32)
    pref = 1.0 / math.sqrt(s31)
    m = pref * np.array(
        [
            [upper * math.cos(t1), upper * math.sin(t1)],
            [lower * math.cos(t3), lower * math.sin(t3)],
        ]
    )
    # the determinant is 1 analytically; renormalize the last ulp away
    m /= math.sqrt(np.linalg.det(m))
    return SymplecticMatrix2.from_array(m)


def canonical_scale_factors(theta1, theta2, theta3):
    """Lengths of ``S (sin t_j, -cos t_j)`` for the canonical triple matrix."""
    t1, t2, t3 = (radians(t) for t in (theta1, theta2, theta3))
    s31, s32, s21 = math.sin(t3 - t1), math.sin(t3 - t2), math.sin(t2 - t1)
    return (
        math.sqrt(s31 * s21 / s32),
        math.sqrt(2.0 * s32 * s21 / s31),
        math.sqrt(s32 * s31 / s21),
    )


def triangular_from_targets(theta2p, theta3p):
    """``(a, b)`` such that ``[[a, 0], [b, 1/a]]`` maps
    ``L_0, L_pi/4, L_pi/2`` onto ``L_0, L_theta2p, L_theta3p``.
    """
    gap = cot(theta2p) - cot(theta3p)
    if gap <= COT_GAP_TOL:
        raise InfeasibleTargetsError(
            f"cot(theta2') - cot(theta3') = {gap!r} must be positive"
        )
    a = math.sqrt(1.0 / gap)
    b = -a * cot(theta3p)
    return a, b


def lower_triangular(a, b):
    return SymplecticMatrix2(a, 0.0, b, 1.0 / a)


def fourth_line_residual(theta4, theta2p, theta3p, theta4p):
    """``|cot theta4 - (a^2 cot theta4' + a b)|`` for the matrix fixed by
    ``theta2', theta3'``; zero iff it also sends ``L_theta4`` to ``L_theta4'``.
    """
    a, b = triangular_from_targets(theta2p, theta3p)
    return abs(cot(theta4) - (a * a * cot(theta4p) + a * b))


def rational_angles_in_open_interval(max_denominator):
    """Distinct ``q pi / p`` in ``(0, pi)`` with ``p <= max_denominator``,
    ordered by denominator, then numerator."""
    seen = set()
    out = []
    for p in range(2, max_denominator + 1):
        for q in range(1, p):
            f = Fraction(q, p)
            if f.denominator == p and f not in seen:
                seen.add(f)
                out.append(RationalAngle.from_fraction(f))
    return out


@dataclass
class ObstructionReport:
    theta4: float
    max_denominator: int
    min_residual: float
    argmin: tuple
    examined: int

    def to_dict(self):
        return {
            "theta4": self.theta4,
            "max_denominator": self.max_denominator,
            "min_residual": self.min_residual,
            "argmin": list(self.argmin),
            "examined": self.examined,
        }


def obstruction_search(theta4, max_denominator):
    """Smallest fourth-line residual over rational target triples.

    Enumerates ordered triples of distinct angles ``q pi / p`` in ``(0, pi)``
    with ``p <= max_denominator`` in a fixed order, skipping those with
    ``cot theta2' <= cot theta3'`` (no real ``a``). Ties keep the first
    triple met.
    """
    if max_denominator < 2:
        raise FracPhaseError(f"max_denominator must be at least 2, got {max_denominator}")
    candidates = rational_angles_in_open_interval(max_denominator)
    cots = {c: cot(c) for c in candidates}
    target = cot(theta4)
    best = math.inf
    best_triple = None
    examined = 0
    for t2, t3 in itertools.permutations(candidates, 2):
        try:
            a, b = triangular_from_targets(t2, t3)
        except InfeasibleTargetsError:
            continue
        for t4 in candidates:
            if t4 == t2 or t4 == t3:
                continue
            examined += 1
            r = abs(target - (a * a * cots[t4] + a * b))
            if r < best:
                best = r
                best_triple = (t2, t3, t4)
    argmin = ()
    if best_triple is not None:
        argmin = tuple(v for t in best_triple for v in (t.q, t.p))
    return ObstructionReport(
        theta4=radians(theta4),
        max_denominator=max_denominator,
        min_residual=best,
        argmin=argmin,
        examined=examined,
    )
