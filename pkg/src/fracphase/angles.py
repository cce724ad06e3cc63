"""
Angles kept exact when they are rational multiples of pi.

Rationality has to survive parsing: ``pi/4`` must stay ``1/4 * pi`` so that
phases ``exp(-i k theta)`` with ``k theta = 0 mod 2 pi`` come out as exactly 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FracPhaseError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RationalAngle:
    """Either ``q*pi/p`` (reduced, in ``[0, 2 pi)``) or a plain real angle."""

    q: int | None = None
    p: int | None = None
    real_value: float | None = None

    def __post_init__(self):
        if self.real_value is None:
            if self.q is None or self.p is None:
                raise FracPhaseError("rational angle needs numerator and denominator")
            if self.p <= 0:
                raise FracPhaseError(f"denominator must be positive, got {self.p}")
            frac = Fraction(self.q, self.p) % 2
            object.__setattr__(self, "q", frac.numerator)
            object.__setattr__(self, "p", frac.denominator)
        else:
            if self.q is not None or self.p is not None:
                raise FracPhaseError("give either q/p or real_value, not both")
            if not math.isfinite(self.real_value):
                raise FracPhaseError("angle must be finite")
            value = math.fmod(self.real_value, TWO_PI)
            if value < 0:
                value += TWO_PI
            if value >= TWO_PI:
                value = 0.0
            object.__setattr__(self, "real_value", float(value))

    @classmethod
    def rational(cls, q, p=1):
        return cls(q=int(q), p=int(p))

    @classmethod
    def real(cls, value):
        return cls(real_value=float(value))

    @classmethod
    def from_fraction(cls, frac):
        return cls(q=frac.numerator, p=frac.denominator)

    @property
    def is_rational(self):
        return self.real_value is None

    @property
    def fraction(self):
        """The angle as a multiple of pi."""
        if not self.is_rational:
            raise FracPhaseError(f"{self} is not a rational multiple of pi")
        return Fraction(self.q, self.p)

    @property
    def radians(self):
        if self.is_rational:
            return self.q * math.pi / self.p
        return self.real_value

    def mod_pi(self):
        """The same line angle reduced into ``[0, pi)``."""
        if self.is_rational:
            return RationalAngle.from_fraction(self.fraction % 1)
        value = self.real_value
        if value >= math.pi:
            value -= math.pi
        if value >= math.pi:
            value = 0.0
        return RationalAngle.real(value)

    def __sub__(self, other):
        if self.is_rational and other.is_rational:
            return RationalAngle.from_fraction(self.fraction - other.fraction)
        return RationalAngle.real(self.radians - other.radians)

    def __float__(self):
        return self.radians

    def __str__(self):
        if not self.is_rational:
            return repr(self.real_value)
        if self.q == 0:
            return "0"
        num = "pi" if self.q == 1 else f"{self.q}pi"
        return num if self.p == 1 else f"{num}/{self.p}"


def as_angle(theta):
    """Coerce a float or :class:`RationalAngle` to a :class:`RationalAngle`."""
    if isinstance(theta, RationalAngle):
        return theta
    return RationalAngle.real(float(theta))


def radians(theta):
    return theta.radians if isinstance(theta, RationalAngle) else float(theta)


def unit_phase(n, theta):
    """``exp(-i n theta)``, exact for rational angles."""
    if isinstance(theta, RationalAngle) and theta.is_rational:
        # exp(-i pi * n q / p): reduce n q mod 2p in integers first
        r = Fraction(n * theta.q % (2 * theta.p), theta.p)
        if r == 0:
            return 1.0 + 0j
        if r == 1:
            return -1.0 + 0j
        if r == Fraction(1, 2):
            return -1j
        if r == Fraction(3, 2):
            return 1j
        return complex(math.cos(math.pi * r), -math.sin(math.pi * r))
    t = radians(theta)
    return complex(math.cos(n * t), -math.sin(n * t))


def cot(theta):
    """Cotangent that is exact at multiples of pi/4 for rational input."""
    if isinstance(theta, RationalAngle) and theta.is_rational:
        f = theta.fraction % 1
        if f == 0:
            raise FracPhaseError("cot is undefined at multiples of pi")
        if f == Fraction(1, 2):
            return 0.0
        if f == Fraction(1, 4):
            return 1.0
        if f == Fraction(3, 4):
            return -1.0
    t = radians(theta)
    s = math.sin(t)
    if s == 0.0:
        raise FracPhaseError("cot is undefined at multiples of pi")
    return math.cos(t) / s


_RATIONAL_RE = re.compile(r"^([+-]?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+))?$")
_ACOT_RE = re.compile(r"^acot\((.+)\)$")


def parse_angle(text):
    """Parse ``pi/4``, ``3pi/8``, ``-pi``, ``0``, ``acot(pi)`` or a decimal.

    Integers and ``q pi / p`` forms give rational angles; ``acot(v)`` and
    decimals give real ones.
    """
    s = text.strip().lower().replace(" ", "")
    if not s:
        raise FracPhaseError("empty angle")
    m = _RATIONAL_RE.match(s)
    if m:
        num, den = m.group(1), m.group(2)
        q = {"": 1, "+": 1, "-": -1}.get(num)
        if q is None:
            q = int(num)
        p = int(den) if den else 1
        if p == 0:
            raise FracPhaseError(f"zero denominator in {text!r}")
        return RationalAngle.rational(q, p)
    m = _ACOT_RE.match(s)
    if m:
        inner = m.group(1)
        sign = -1.0 if inner.startswith("-") else 1.0
        bare = inner.lstrip("+-")
        value = sign * math.pi if bare == "pi" else _parse_float(inner, text)
        # principal branch of arccot, in (0, pi)
        return RationalAngle.real(math.atan2(1.0, value))
    if re.fullmatch(r"[+-]?\d+", s):
        return RationalAngle.rational(int(s), 1) if int(s) == 0 else RationalAngle.real(float(s))
    return RationalAngle.real(_parse_float(s, text))


def _parse_float(s, original):
    try:
        value = float(s)
    except ValueError:
        raise FracPhaseError(f"cannot parse angle {original!r}") from None
    if not math.isfinite(value):
        raise FracPhaseError(f"angle must be finite: {original!r}")
    return value
