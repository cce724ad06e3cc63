import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fracphase.angles import RationalAngle, parse_angle
from fracphase.errors import DegenerateAnglesError, FracPhaseError, InfeasibleTargetsError, NotSymplecticError
from fracphase.symplectic import (
    CAVEAT,
    QuadratureLine,
    SymplecticMatrix2,
    canonical_scale_factors,
    canonical_triple_matrix,
    fourth_line_residual,
    line_angle,
    line_angle_distance,
    lower_triangular,
    map_line,
    obstruction_search,
    rational_angles_in_open_interval,
    triangular_from_targets,
)

TARGETS = (0.0, math.pi / 4, math.pi / 2)


@st.composite
def triples(draw, min_gap=0.05):
    t = sorted(draw(st.lists(st.floats(0, math.pi - 1e-9), min_size=3, max_size=3)))
    gaps = (t[1] - t[0], t[2] - t[1], math.pi - (t[2] - t[0]))
    assume(min(gaps) >= min_gap)
    return tuple(t)


class TestMatrix:
    def test_det_validated(self):
        with pytest.raises(NotSymplecticError):
            SymplecticMatrix2(2.0, 0.0, 0.0, 1.0)
        with pytest.raises(NotSymplecticError):
            SymplecticMatrix2.from_array(np.eye(3))

    @given(st.floats(0, 2 * math.pi), st.floats(0.2, 5), st.floats(-5, 5))
    def test_iwasawa_roundtrip(self, theta, a, b):
        S = SymplecticMatrix2.from_iwasawa(theta, a, b)
        assert abs(S.det - 1) <= 1e-12
        t2, a2, b2 = S.iwasawa()
        np.testing.assert_allclose(SymplecticMatrix2.from_iwasawa(t2, a2, b2).as_array(), S.as_array(), atol=1e-10)
        assert a2 > 0

    def test_inverse(self):
        S = SymplecticMatrix2.from_iwasawa(0.4, 1.7, -0.3)
        np.testing.assert_allclose((S @ S.inverse()).as_array(), np.eye(2), atol=1e-14)

    def test_rotation_of_axis(self):
        # S_theta maps L_0 to L_theta
        for theta in (0.3, 1.2, 2.9):
            assert line_angle_distance(map_line(SymplecticMatrix2.rotation(theta), 0.0).angle, theta) <= 1e-14


class TestLines:
    def test_normalization(self):
        assert QuadratureLine(math.pi).angle == 0.0
        assert QuadratureLine(-0.5).angle == pytest.approx(math.pi - 0.5)
        assert QuadratureLine(3 * math.pi / 2).angle == pytest.approx(math.pi / 2)

    def test_line_angle_of_direction(self):
        for theta in (0.0, 0.7, 2.2):
            assert line_angle(QuadratureLine(theta).direction) == pytest.approx(theta)
            assert line_angle(-QuadratureLine(theta).direction) == pytest.approx(theta)

    def test_distance_wraps(self):
        assert line_angle_distance(0.01, math.pi - 0.01) == pytest.approx(0.02)

    def test_mod_pi_invariance(self, rng):
        for _ in range(1000):
            S = SymplecticMatrix2.from_iwasawa(rng.uniform(0, 6.3), rng.uniform(0.3, 3), rng.uniform(-3, 3))
            theta = rng.uniform(0, math.pi)
            a = map_line(S, theta).angle
            b = map_line(S, theta + math.pi).angle
            assert line_angle_distance(a, b) <= 1e-12


class TestCanonicalTriple:
    def test_identity_fixed_point(self):
        S = canonical_triple_matrix(*TARGETS)
        np.testing.assert_allclose(S.as_array(), np.eye(2), atol=1e-15)

    def test_frozen_example(self):
        S = canonical_triple_matrix(0.0, math.pi / 3, 2 * math.pi / 3)
        np.testing.assert_allclose(
            S.as_array(), [[1.07457, 0.0], [-0.53729, 0.93060]], atol=1e-5
        )
        np.testing.assert_allclose(
            S.as_array(), [[1.074569931823542, 0.0], [-0.5372849659117708, 0.9306048591020997]], atol=1e-14
        )

    @given(triples())
    @settings(max_examples=100)
    def test_images_and_det(self, t):
        S = canonical_triple_matrix(*t)
        assert abs(S.det - 1.0) <= 1e-12
        for theta, target in zip(t, TARGETS):
            assert line_angle_distance(map_line(S, theta).angle, target) <= 1e-10

    @given(triples())
    @settings(max_examples=100)
    def test_scale_factors(self, t):
        S = canonical_triple_matrix(*t)
        for theta, target, scale in zip(t, TARGETS, canonical_scale_factors(*t)):
            image = S @ np.array([math.sin(theta), -math.cos(theta)])
            expected = scale * np.array([math.sin(target), -math.cos(target)])
            np.testing.assert_allclose(image, expected, atol=1e-10)

    def test_middle_scale_formula(self):
        t1, t2, t3 = 0.2, 1.0, 2.0
        expected = math.sqrt(2 * math.sin(t3 - t2) * math.sin(t2 - t1) / math.sin(t3 - t1))
        assert canonical_scale_factors(t1, t2, t3)[1] == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("t", [(0.0, 0.0, 1.0), (0.5, 0.3, 1.0), (0.1, 0.5, math.pi)])
    def test_degenerate(self, t):
        with pytest.raises(DegenerateAnglesError):
            canonical_triple_matrix(*t)


class TestTriangular:
    def test_targets_reached(self):
        t2, t3 = RationalAngle.rational(1, 3), RationalAngle.rational(2, 3)
        a, b = triangular_from_targets(t2, t3)
        L = lower_triangular(a, b)
        for src, dst in zip(TARGETS, (0.0, math.pi / 3, 2 * math.pi / 3)):
            assert line_angle_distance(map_line(L, src).angle, dst) <= 1e-12

    def test_infeasible(self):
        with pytest.raises(InfeasibleTargetsError):
            triangular_from_targets(RationalAngle.rational(2, 3), RationalAngle.rational(1, 3))
        with pytest.raises(InfeasibleTargetsError):
            triangular_from_targets(RationalAngle.rational(1, 3), RationalAngle.rational(1, 3))

    def test_residual_zero_for_identity(self):
        r = fourth_line_residual(
            RationalAngle.rational(1, 3), RationalAngle.rational(1, 4),
            RationalAngle.rational(1, 2), RationalAngle.rational(1, 3),
        )
        assert r == 0.0

    def test_slope_law(self, rng):
        for _ in range(100):
            a, b = rng.uniform(0.3, 3), rng.uniform(-3, 3)
            theta = rng.uniform(0.05, math.pi - 0.05)
            image = map_line(lower_triangular(a, b), theta).angle
            # cot of the image equals a^-2 cot(theta) - b/a
            assert 1 / math.tan(image) == pytest.approx(math.cos(theta) / (a * a * math.sin(theta)) - b / a, abs=1e-9)


class TestObstruction:
    def test_candidates(self):
        labels = [str(a) for a in rational_angles_in_open_interval(4)]
        assert labels == ["pi/2", "pi/3", "2pi/3", "pi/4", "3pi/4"]

    def test_rational_quadruple(self):
        report = obstruction_search(parse_angle("pi/3"), 6)
        assert report.min_residual == 0.0
        assert report.examined == 495

    def test_arccot_pi_frozen(self):
        report = obstruction_search(parse_angle("acot(pi)"), 6)
        assert report.min_residual == pytest.approx(0.006798994328376828, rel=1e-12)
        assert report.argmin == (2, 3, 3, 4, 2, 5)
        assert report.min_residual > 0

    def test_monotone(self):
        theta4 = parse_angle("acot(pi)")
        r6 = obstruction_search(theta4, 6).min_residual
        r8 = obstruction_search(theta4, 8).min_residual
        assert r8 <= r6
        assert r8 == pytest.approx(0.004671716352179001, rel=1e-12)

    def test_obtuse_branch(self):
        # cot(theta4) = -pi, theta4 in (pi/2, pi)
        theta4 = parse_angle("acot(-pi)")
        r6 = obstruction_search(theta4, 6).min_residual
        assert r6 == pytest.approx(0.023759474413128423, rel=1e-12)
        assert 0 < obstruction_search(theta4, 8).min_residual <= r6

    def test_deterministic(self):
        theta4 = parse_angle("acot(pi)")
        assert obstruction_search(theta4, 5).to_dict() == obstruction_search(theta4, 5).to_dict()

    def test_bad_denominator(self):
        with pytest.raises(FracPhaseError):
            obstruction_search(0.3, 1)

    def test_caveat_text(self):
        assert "does not prove" in CAVEAT
