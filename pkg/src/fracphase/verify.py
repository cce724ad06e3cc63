"""
Numerical checks of the library's invariants, grouped into suites.

Each check returns a measured deviation that is compared with a fixed bound;
``run_checks`` never raises on a failed comparison, it reports it.
"""

from __future__ import annotations

import functools
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angles import RationalAngle, parse_angle
from .counterexample import (
    discriminating_angle,
    indistinguishability_verdict,
    rational_pair,
    three_angle_counterexample,
)
from .frft import (
    frft_grid,
    frft_spectral,
    momentum_moment,
    position_moment,
    quadrature_mean,
    signal_intensity_spectral,
)
from .hermite import (
    HermiteExpansion,
    expand,
    hermite_polynomial_coefficients,
    hermite_table,
    synthesize,
)
from .phasespace import radon_slice, wigner
from .signal import (
    Grid,
    IntensityProfile,
    SampledSignal,
    inner_product,
    phase_aligned,
    total_variation_distance,
)
from .symplectic import (
    SymplecticMatrix2,
    canonical_scale_factors,
    canonical_triple_matrix,
    line_angle_distance,
    lower_triangular,
    map_line,
    obstruction_search,
)
from .weyl import (
    PhasePoint,
    characteristic_function,
    characteristic_function_weyl,
    metaplectic_apply,
    symplectic_form,
    weyl_apply,
)

SUITES = ("hermite", "frft", "weyl", "symplectic", "counterexample", "phasespace")
SEED = 20240611


@dataclass
class Check:
    name: str
    suite: str
    bound: float
    func: object
    # "max": pass iff measured <= bound; "min": pass iff measured > bound
    kind: str = "max"


@dataclass
class CheckResult:
    name: str
    suite: str
    measured: float
    bound: float
    kind: str
    passed: bool
    seconds: float
    error: str | None = None

    def to_dict(self):
        return {
            "name": self.name,
            "suite": self.suite,
            "measured": self.measured,
            "bound": self.bound,
            "relation": "<=" if self.kind == "max" else ">",
            "passed": self.passed,
            "error": self.error,
        }


REGISTRY: list[Check] = []


def check(suite, bound, kind="max"):
    def register(func):
        REGISTRY.append(Check(func.__name__, suite, bound, func, kind))
        return func

    return register


# ---------------------------------------------------------------------------
# shared fixtures

def random_expansion(rng, max_index):
    c = rng.normal(size=max_index + 1) + 1j * rng.normal(size=max_index + 1)
    return HermiteExpansion(c / np.linalg.norm(c))


def random_symplectic(rng, a_range=(0.7, 1.4), b_range=(-1.0, 1.0)):
    return SymplecticMatrix2.from_iwasawa(
        rng.uniform(0, 2 * math.pi), rng.uniform(*a_range), rng.uniform(*b_range)
    )


def random_triple(rng, min_gap=0.05):
    while True:
        t = np.sort(rng.uniform(0, math.pi, 3))
        if min(np.diff(t).min(), math.pi - (t[2] - t[0])) >= min_gap:
            return tuple(float(v) for v in t)


def hermite_reference(n, x):
    """h_n(x) from exact integer coefficients of H_n, evaluated in rationals."""
    coeffs = hermite_polynomial_coefficients(n)
    xf = Fraction(float(x))
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * xf + c
    norm = math.sqrt(2**n * math.factorial(n) * math.sqrt(math.pi))
    return float(value) * math.exp(-0.5 * float(x) ** 2) / norm


def small_rational_angles(max_denominator=6):
    values = sorted({Fraction(q, p) for p in range(1, max_denominator + 1) for q in range(p)})
    return [RationalAngle.from_fraction(f) for f in values]


def weyl_grid():
    return Grid.symmetric(16.0, 1024)


# ---------------------------------------------------------------------------
# hermite / signal

@check("hermite", 1e-8)
def gram_matrix_identity():
    grid = Grid.symmetric(12.0, 1024)
    table = hermite_table(20, grid.x)
    gram = (table * grid.trapezoid_weights()) @ table.T
    return float(np.abs(gram - np.eye(21)).max())


@check("hermite", 1e-10)
def recurrence_matches_exact_polynomial():
    rng = np.random.default_rng(SEED)
    xs = rng.uniform(-6, 6, 100)
    table = hermite_table(12, xs)
    worst = 0.0
    for n in range(13):
        for i, x in enumerate(xs):
            ref = hermite_reference(n, x)
            worst = max(worst, abs(table[n, i] - ref) / max(abs(ref), 1e-300))
    return worst


@check("hermite", 1e-8)
def expand_synthesize_roundtrip():
    rng = np.random.default_rng(SEED + 1)
    grid = Grid.symmetric()
    worst = 0.0
    for _ in range(5):
        e = random_expansion(rng, 20)
        back = expand(synthesize(e, grid), 20)
        worst = max(worst, float(np.abs(back.coefficients - e.coefficients).max()))
    return worst


@check("hermite", 1e-12)
def cauchy_schwarz_slack():
    rng = np.random.default_rng(SEED + 2)
    grid = Grid.symmetric()
    worst = -math.inf
    for _ in range(20):
        a = SampledSignal(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
        b = SampledSignal(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
        worst = max(worst, abs(inner_product(a, b)) - a.norm() * b.norm())
    return max(worst, 0.0)


@check("hermite", 1e-12)
def total_variation_triangle_slack():
    rng = np.random.default_rng(SEED + 3)
    grid = Grid.symmetric()
    worst = 0.0
    for _ in range(20):
        p, q, r = (IntensityProfile(grid, rng.random(grid.n_points)) for _ in range(3))
        worst = max(
            worst,
            total_variation_distance(p, r)
            - total_variation_distance(p, q)
            - total_variation_distance(q, r),
            abs(total_variation_distance(p, q) - total_variation_distance(q, p)),
        )
    return worst


# ---------------------------------------------------------------------------
# frft

@check("frft", 1e-14)
def spectral_group_law():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for _ in range(20):
        e = random_expansion(rng, 16)
        t1, t2 = rng.uniform(-2 * math.pi, 2 * math.pi, 2)
        lhs = frft_spectral(frft_spectral(e, t1), t2).coefficients
        rhs = frft_spectral(e, t1 + t2).coefficients
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


@check("frft", 1e-14)
def spectral_quarter_turn_inverse():
    rng = np.random.default_rng(SEED + 5)
    e = random_expansion(rng, 16)
    out = frft_spectral(
        frft_spectral(e, RationalAngle.rational(1, 2)), RationalAngle.rational(3, 2)
    )
    return float(np.abs(out.coefficients - e.coefficients).max())


@check("frft", 1e-6)
def spectral_vs_grid_agreement():
    rng = np.random.default_rng(SEED + 6)
    grid = Grid.symmetric()
    e = random_expansion(rng, 16)
    psi = synthesize(e, grid)
    worst = 0.0
    for theta in rng.uniform(0, 2 * math.pi, 20):
        a = frft_grid(psi, theta).values
        b = synthesize(frft_spectral(e, theta), grid).values
        worst = max(worst, float(np.abs(a - b).max()))
    return worst


@check("frft", 1e-6)
def grid_transform_norm():
    rng = np.random.default_rng(SEED + 7)
    psi = synthesize(random_expansion(rng, 16), Grid.symmetric())
    return max(abs(frft_grid(psi, t).norm() - psi.norm()) for t in rng.uniform(0, 6.3, 20))


@check("frft", 1e-6)
def quadrature_mean_vs_ladder():
    rng = np.random.default_rng(SEED + 8)
    grid = Grid.symmetric()
    worst = 0.0
    for _ in range(10):
        e = random_expansion(rng, 10)
        theta = rng.uniform(0, 2 * math.pi)
        ladder = position_moment(e) * math.cos(theta) + momentum_moment(e) * math.sin(theta)
        worst = max(worst, abs(quadrature_mean(e, theta, grid) - ladder))
    return worst


# ---------------------------------------------------------------------------
# weyl

def _random_point(rng, scale=2.0):
    return PhasePoint(*rng.uniform(-scale, scale, 2))


@check("weyl", 1e-8)
def weyl_composition_rule():
    rng = np.random.default_rng(SEED + 9)
    psi = synthesize(random_expansion(rng, 6), weyl_grid())
    worst = 0.0
    for _ in range(50):
        x, y = _random_point(rng), _random_point(rng)
        lhs = weyl_apply(weyl_apply(psi, y), x).values
        rhs = np.exp(-0.5j * symplectic_form(x, y)) * weyl_apply(psi, x + y).values
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


@check("weyl", 1e-8)
def weyl_commutation_relation():
    rng = np.random.default_rng(SEED + 10)
    psi = synthesize(random_expansion(rng, 6), weyl_grid())
    worst = 0.0
    for _ in range(50):
        x, y = _random_point(rng), _random_point(rng)
        lhs = weyl_apply(weyl_apply(psi, y), x).values
        rhs = np.exp(-1j * symplectic_form(x, y)) * weyl_apply(weyl_apply(psi, x), y).values
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


@check("weyl", 1e-6)
def characteristic_function_two_routes():
    rng = np.random.default_rng(SEED + 11)
    grid = weyl_grid()
    e = random_expansion(rng, 8)
    psi = synthesize(e, grid)
    worst = 0.0
    for _ in range(20):
        theta, u = rng.uniform(0, math.pi), rng.uniform(-3, 3)
        a = characteristic_function(e, theta, u, grid)
        b = characteristic_function_weyl(psi, theta, u)
        worst = max(worst, abs(a - b))
    return worst


@check("weyl", 1e-6)
def metaplectic_covariance():
    rng = np.random.default_rng(SEED + 12)
    grid = weyl_grid()
    worst = 0.0
    for _ in range(20):
        psi = synthesize(random_expansion(rng, 6), grid)
        S = random_symplectic(rng)
        x = _random_point(rng, 1.5)
        lhs = metaplectic_apply(weyl_apply(psi, x), S)
        rhs = weyl_apply(metaplectic_apply(psi, S), PhasePoint(*(S @ x.as_array())))
        lhs = phase_aligned(lhs, rhs)
        worst = max(worst, float(np.abs(lhs.values - rhs.values).max()))
    return worst


@check("weyl", 1e-6)
def metaplectic_norm():
    rng = np.random.default_rng(SEED + 13)
    grid = weyl_grid()
    worst = 0.0
    for _ in range(20):
        psi = synthesize(random_expansion(rng, 6), grid)
        worst = max(worst, abs(metaplectic_apply(psi, random_symplectic(rng)).norm() - psi.norm()))
    return worst


# ---------------------------------------------------------------------------
# symplectic

@check("symplectic", 1e-12)
def random_matrices_symplectic_and_mod_pi():
    rng = np.random.default_rng(SEED + 14)
    worst = 0.0
    for _ in range(1000):
        S = SymplecticMatrix2.from_iwasawa(
            rng.uniform(0, 2 * math.pi), rng.uniform(0.3, 3.0), rng.uniform(-3, 3)
        )
        theta = rng.uniform(0, math.pi)
        worst = max(
            worst,
            abs(S.det - 1.0),
            line_angle_distance(map_line(S, theta).angle, map_line(S, theta + math.pi).angle),
        )
    return worst


@check("symplectic", 1e-10)
def canonical_triple_images_and_scales():
    rng = np.random.default_rng(SEED + 15)
    targets = (0.0, math.pi / 4, math.pi / 2)
    worst = 0.0
    for _ in range(100):
        t = random_triple(rng)
        S = canonical_triple_matrix(*t)
        worst = max(worst, abs(S.det - 1.0))
        for theta, target, scale in zip(t, targets, canonical_scale_factors(*t)):
            worst = max(worst, line_angle_distance(map_line(S, theta).angle, target))
            image = S @ np.array([math.sin(theta), -math.cos(theta)])
            expected = scale * np.array([math.sin(target), -math.cos(target)])
            worst = max(worst, float(np.abs(image - expected).max()))
    return worst


@check("symplectic", 1e-12)
def triangular_slope_law():
    rng = np.random.default_rng(SEED + 16)
    worst = 0.0
    for _ in range(200):
        a, b = rng.uniform(0.3, 3.0), rng.uniform(-3, 3)
        theta = rng.uniform(0.05, math.pi - 0.05)
        image = map_line(lower_triangular(a, b), theta).angle
        predicted = math.atan2(1.0, math.cos(theta) / (a * a * math.sin(theta)) - b / a)
        worst = max(worst, line_angle_distance(image, predicted))
    return worst


@check("symplectic", 0.0, kind="min")
def obstruction_arccot_pi_positive():
    return obstruction_search(parse_angle("acot(pi)"), 6).min_residual


@check("symplectic", 0.0)
def obstruction_rational_quadruple_zero():
    return obstruction_search(parse_angle("pi/3"), 6).min_residual


@check("symplectic", 0.0)
def obstruction_monotone_in_denominator():
    theta4 = parse_angle("acot(pi)")
    return max(
        0.0,
        obstruction_search(theta4, 8).min_residual - obstruction_search(theta4, 6).min_residual,
    )


# ---------------------------------------------------------------------------
# counterexample

@check("counterexample", 1e-10)
def rational_closure_denominators_up_to_6():
    """Every list of 2-4 distinct angles q pi / p, p <= 6: the pair is not told apart."""
    grid = Grid.symmetric()
    angles = small_rational_angles(6)
    worst = 0.0
    for r in (2, 3, 4):
        for combo in itertools.combinations(angles, r):
            plus, minus = rational_pair(list(combo))
            report = indistinguishability_verdict(plus, minus, list(combo), grid, 1e-10)
            worst = max(worst, max(report.sup_deviations))
    return worst


@functools.lru_cache(maxsize=1)
def _pipeline_runs(n_triples=20):
    rng = np.random.default_rng(SEED + 17)
    return tuple(three_angle_counterexample(*random_triple(rng)) for _ in range(n_triples))


@check("counterexample", 1e-6)
def three_angle_orthogonality():
    return max(report.extra["overlap_modulus"] for _, _, report in _pipeline_runs())


@check("counterexample", 1e-5)
def three_angle_equal_intensities():
    return max(max(report.sup_deviations) for _, _, report in _pipeline_runs())


@check("counterexample", 1e-3, kind="min")
def three_angle_pairs_discriminable():
    return min(
        discriminating_angle(phi_plus, phi_minus)[1] for phi_plus, phi_minus, _ in _pipeline_runs()
    )


# ---------------------------------------------------------------------------
# phasespace

def _phase_grids():
    return Grid.symmetric(7.0, 256), Grid.symmetric(7.0, 256), Grid.symmetric(6.9, 256)


@check("phasespace", 1e-3)
def radon_wigner_tomographic_consistency():
    rng = np.random.default_rng(SEED + 19)
    q_grid, p_grid, out = _phase_grids()
    worst = 0.0
    for _ in range(10):
        e = random_expansion(rng, int(rng.integers(0, 9)))
        W = wigner(synthesize(e, q_grid), p_grid)
        for theta in rng.uniform(0, math.pi, 10):
            worst = max(
                worst,
                total_variation_distance(
                    radon_slice(W, theta, out), signal_intensity_spectral(e, theta, out)
                ),
            )
    return worst


@check("phasespace", 1e-4)
def wigner_rotation_covariance():
    rng = np.random.default_rng(SEED + 20)
    q_grid, p_grid, _ = _phase_grids()
    worst = 0.0
    for _ in range(3):
        e = random_expansion(rng, 6)
        theta = rng.uniform(0, math.pi)
        rotated = wigner(synthesize(frft_spectral(e, theta), q_grid), p_grid)
        for _ in range(20):
            q, p = rng.uniform(-3, 3, 2)
            i = int(round((q - q_grid.x0) / q_grid.dx))
            j = int(round((p - p_grid.x0) / p_grid.dx))
            qi, pj = q_grid.x[i], p_grid.x[j]
            # W of F_theta psi at z equals W of psi at S_theta z
            qs = qi * math.cos(theta) - pj * math.sin(theta)
            ps = qi * math.sin(theta) + pj * math.cos(theta)
            worst = max(worst, abs(rotated.values[i, j] - wigner_point(e, qs, ps)))
    return worst


@check("phasespace", 1e-5)
def wigner_normalization():
    rng = np.random.default_rng(SEED + 21)
    q_grid, p_grid, _ = _phase_grids()
    return max(
        abs(wigner(synthesize(random_expansion(rng, 8), q_grid), p_grid).total() - 1.0)
        for _ in range(3)
    )


def wigner_point(e, q, p, half_range=12.0, n=4001):
    """Wigner function of an expansion at one point by direct quadrature."""
    y = np.linspace(-half_range, half_range, n)
    idx = np.flatnonzero(e.coefficients)
    c = e.coefficients[idx]
    rows_plus = hermite_table(int(idx.max()), q + y)[idx]
    rows_minus = hermite_table(int(idx.max()), q - y)[idx]
    integrand = np.conj(c @ rows_plus) * (c @ rows_minus) * np.exp(2j * p * y)
    return float(np.trapezoid(integrand, y).real / math.pi)


# ---------------------------------------------------------------------------

def run_checks(suites=("all",), bounds=None):
    """Run the selected suites; ``bounds`` overrides bounds by check name."""
    wanted = set(SUITES) if "all" in suites else set(suites)
    unknown = wanted - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    bounds = bounds or {}
    results = []
    for chk in REGISTRY:
        if chk.suite not in wanted:
            continue
        bound = bounds.get(chk.name, chk.bound)
        start = time.perf_counter()
        try:
            measured = float(chk.func())
            error = None
        except Exception as exc:  # reported, not raised
            measured, error = math.nan, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        if error is not None:
            passed = False
        elif chk.kind == "max":
            passed = measured <= bound
        else:
            passed = measured > bound
        results.append(
            CheckResult(chk.name, chk.suite, measured, bound, chk.kind, passed, elapsed, error)
        )
    return results

