import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracphase.angles import RationalAngle, parse_angle
from fracphase.counterexample import (
    build_pair,
    counterexample_grid,
    discriminating_angle,
    edge_amplitude,
    indistinguishability_verdict,
    minimal_k,
    normalize_angles,
    rational_angle_k,
    rational_counterexample,
    rational_pair,
    reduce_triple,
    three_angle_counterexample,
)
from fracphase.errors import DegenerateAnglesError, FracPhaseError, GridTooSmallError, NonRationalAngleError
from fracphase.frft import signal_intensity
from fracphase.hermite import synthesize
from fracphase.signal import Grid, SampledSignal, inner_product, sup_difference
from fracphase.symplectic import line_angle_distance

R = 1 / math.sqrt(2)


def rat(*texts):
    return [parse_angle(t) for t in texts]


class TestNormalize:
    def test_merges_half_turn(self):
        out = normalize_angles([math.pi / 2, 3 * math.pi / 2])
        assert out == [pytest.approx(math.pi / 2)]

    def test_sorts_and_dedups(self):
        assert normalize_angles([0.3, 0.1, 0.1]) == [0.1, 0.3]

    def test_reduces(self):
        assert normalize_angles([2 * math.pi - 0.2]) == [pytest.approx(math.pi - 0.2)]

    def test_rationals_stay_exact(self):
        out = normalize_angles(rat("3pi/2", "pi/4", "5pi/4"))
        assert [a.fraction for a in out] == [Fraction(1, 4), Fraction(1, 2)]

    def test_zero_and_pi_merge(self):
        assert normalize_angles([0.0, math.pi - 1e-14]) == [0.0]

    def test_empty(self):
        with pytest.raises(FracPhaseError):
            normalize_angles([])


class TestK:
    @pytest.mark.parametrize(
        "angles, k",
        [(("0", "pi/4", "pi/2"), 16), (("0", "pi/2"), 4), (("0",), 2), (("pi/6", "pi/3", "2pi/3"), 24)],
    )
    def test_recipe(self, angles, k):
        assert rational_angle_k(rat(*angles)) == k

    def test_minimal(self):
        assert minimal_k(rat("0", "pi/4", "pi/2")) == 8
        assert minimal_k(rat("0", "pi/2")) == 4

    def test_rejects_irrational(self):
        with pytest.raises(NonRationalAngleError):
            rational_angle_k([RationalAngle.rational(0), RationalAngle.real(1.0)])
        with pytest.raises(NonRationalAngleError):
            rational_angle_k([0.0, math.pi / 4])

    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=1, max_size=4))
    @settings(max_examples=100)
    def test_multiples_of_two_pi(self, fracs):
        angles = [RationalAngle.from_fraction(f) for f in fracs]
        base = normalize_angles(angles)[0].fraction
        for k in (rational_angle_k(angles), minimal_k(angles)):
            for f in fracs:
                assert (k * ((f - base) % 1)) % 2 == 0


class TestPair:
    def test_coefficients(self):
        plus, minus = build_pair(16)
        assert plus.coefficient(0) == R and plus.coefficient(16) == 1j * R
        assert minus.coefficient(16) == -1j * R
        assert plus.norm() == pytest.approx(1.0, abs=1e-15)
        assert abs(np.vdot(plus.coefficients, minus.coefficients)) <= 1e-15

    def test_rejects_k(self):
        with pytest.raises(FracPhaseError):
            build_pair(0)

    def test_rational_pair_when_first_angle_is_zero(self):
        plus, minus = rational_pair(rat("0", "pi/4", "pi/2"))
        np.testing.assert_array_equal(plus.coefficients, build_pair(16)[0].coefficients)


class TestVerdict:
    def test_canonical_triple(self, default_grid):
        plus, minus = build_pair(16)
        report = indistinguishability_verdict(plus, minus, rat("0", "pi/4", "pi/2"), default_grid, 1e-10)
        assert report.verdict
        assert max(report.sup_deviations) <= 1e-10
        assert report.grid_covers_support

    def test_fourth_angle_detects(self, default_grid):
        plus, minus = build_pair(16)
        report = indistinguishability_verdict(plus, minus, rat("0", "pi/4", "pi/2", "pi/3"), default_grid, 1e-6)
        assert not report.verdict
        assert report.sup_deviations[3] > 1e-3

    def test_identical_states(self, default_grid):
        plus, _ = build_pair(5)
        report = indistinguishability_verdict(plus, plus, [0.1, 1.7, 2.9], default_grid, 1e-12)
        assert report.verdict and max(report.sup_deviations) <= 1e-12

    def test_large_k_flags_support(self, default_grid):
        plus, minus = build_pair(500)
        report = indistinguishability_verdict(plus, minus, [0.0], default_grid)
        assert not report.grid_covers_support

    def test_mixed_inputs_rejected(self, default_grid):
        plus, _ = build_pair(2)
        with pytest.raises(FracPhaseError):
            indistinguishability_verdict(plus, synthesize(plus, default_grid), [0.0])

    def test_rational_closure_small_denominators(self, default_grid):
        angles = [RationalAngle.from_fraction(Fraction(q, p)) for p in range(1, 5) for q in range(p)]
        for r in (2, 3):
            for combo in itertools.combinations(sorted(set(angles), key=lambda a: a.fraction), r):
                plus, minus = rational_pair(list(combo))
                report = indistinguishability_verdict(plus, minus, list(combo), default_grid, 1e-10)
                assert report.verdict, [str(a) for a in combo]

    def test_unshifted_pair_fails_off_zero(self, default_grid):
        # the plain pair needs the first angle at 0; the pre-rotated one does not
        # k = 4 here and 4 * pi/5 is not a multiple of 2 pi
        angles = rat("pi/5", "7pi/10")
        plus, minus = build_pair(rational_angle_k(angles))
        assert not indistinguishability_verdict(plus, minus, angles, default_grid).verdict
        plus, minus = rational_pair(angles)
        assert indistinguishability_verdict(plus, minus, angles, default_grid).verdict

    def test_rational_counterexample_report(self):
        _, _, report = rational_counterexample(rat("0", "pi/4", "pi/2"))
        d = report.to_dict()
        assert d["k"] == 16 and d["minimal_k"] == 8 and d["verdict"]
        assert d["overlap_modulus"] == 0.0
        assert "note" in d
        assert d["angle_labels"] == ["0", "pi/4", "pi/2"]


class TestReduction:
    def test_identity_for_canonical(self):
        S, _ = reduce_triple(0.0, math.pi / 4, math.pi / 2)
        np.testing.assert_allclose(S.as_array(), np.eye(2), atol=1e-15)

    def test_images(self):
        S, images = reduce_triple(0.2, 1.0, 2.0)
        for line, target in zip(images, (0.0, math.pi / 4, math.pi / 2)):
            assert line_angle_distance(line.angle, target) <= 1e-10
        assert abs(S.det - 1) <= 1e-12

    def test_unsorted_input(self):
        S1, _ = reduce_triple(2.0, 0.2, 1.0)
        S2, _ = reduce_triple(0.2, 1.0, 2.0)
        np.testing.assert_array_equal(S1.as_array(), S2.as_array())

    @pytest.mark.parametrize("t", [(0.0, 0.0, 1.0), (0.3, 0.3 + math.pi, 1.0)])
    def test_degenerate(self, t):
        with pytest.raises(DegenerateAnglesError):
            reduce_triple(*t)


class TestThreeAngle:
    def test_canonical_is_plain_pair(self):
        phi_plus, phi_minus, report = three_angle_counterexample(0.0, math.pi / 4, math.pi / 2)
        grid = phi_plus.grid
        plus, _ = build_pair(16)
        expected = synthesize(plus, grid)
        overlap = inner_product(expected, phi_plus)
        assert abs(abs(overlap) - 1) <= 1e-10
        assert report.verdict

    def test_equilateral(self):
        phi_plus, phi_minus, report = three_angle_counterexample(0.0, math.pi / 3, 2 * math.pi / 3)
        assert report.verdict and max(report.sup_deviations) <= 1e-5
        assert report.extra["overlap_modulus"] <= 1e-6
        np.testing.assert_allclose(report.extra["norms"], [1.0, 1.0], atol=1e-8)

    def test_generic_with_probe(self):
        phi_plus, phi_minus, report = three_angle_counterexample(0.2, 1.0, 2.5)
        assert report.verdict
        probe = indistinguishability_verdict(phi_plus, phi_minus, [0.7], tol=1e-5)
        assert not probe.verdict
        theta, diff = discriminating_angle(phi_plus, phi_minus)
        assert diff > 1e-3
        assert 0.0 <= theta < math.pi

    def test_grid_too_small(self):
        with pytest.raises(GridTooSmallError):
            three_angle_counterexample(0.1, 0.2, 2.5, grid=Grid.symmetric(8.0, 256))

    def test_auto_grid_grows_with_squeeze(self):
        mild = counterexample_grid(0.0, 1.0, 2.0)
        squeezed = counterexample_grid(0.0, 0.05, 0.1)
        assert squeezed.halfwidth > mild.halfwidth
        assert squeezed.n_points >= mild.n_points

    def test_report_serializable(self):
        import json

        _, _, report = three_angle_counterexample(0.2, 1.0, 2.5)
        d = report.to_dict()
        json.dumps(d)
        assert d["k"] == 16 and d["path"] == "symplectic-reduction"


class TestEdgeAmplitude:
    def test_gaussian_is_clean(self, default_grid):
        psi = SampledSignal(default_grid, np.exp(-0.5 * default_grid.x ** 2))
        assert edge_amplitude(psi) <= 1e-12

    def test_wide_signal_flagged(self, default_grid):
        psi = SampledSignal(default_grid, np.exp(-0.5 * (default_grid.x / 6) ** 2))
        assert edge_amplitude(psi) > 1e-3
