"""Rotated quadratures, fractional Fourier transforms and pure-state counterexamples."""

from .angles import RationalAngle, parse_angle
from .counterexample import (
    VerdictReport,
    build_pair,
    indistinguishability_verdict,
    rational_angle_k,
    rational_counterexample,
    rational_pair,
    reduce_triple,
    three_angle_counterexample,
)
from .errors import (
    DegenerateAnglesError,
    FracPhaseError,
    GridMismatchError,
    GridTooSmallError,
    NotSymplecticError,
)
from .frft import frft_grid, frft_spectral, quadrature_intensity
from .hermite import HermiteExpansion, expand, hermite_eval, synthesize
from .phasespace import WignerGrid, radon_slice, wigner
from .signal import Grid, IntensityProfile, SampledSignal
from .symplectic import SymplecticMatrix2, canonical_triple_matrix, map_line, obstruction_search
from .weyl import PhasePoint, metaplectic_apply, weyl_apply

__version__ = "0.1.0"
