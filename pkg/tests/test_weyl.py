import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracphase.errors import NotSymplecticError
from fracphase.frft import frft_spectral
from fracphase.hermite import HermiteExpansion, synthesize
from fracphase.signal import SampledSignal, phase_aligned
from fracphase.symplectic import SymplecticMatrix2
from fracphase.weyl import (
    PhasePoint,
    characteristic_function,
    characteristic_function_weyl,
    chirp,
    dilate,
    metaplectic_apply,
    shift,
    symplectic_form,
    weyl_apply,
)

from conftest import random_expansion

coords = st.floats(-5, 5, allow_nan=False)
points = st.builds(PhasePoint, coords, coords)


def aligned_error(a, b):
    return float(np.abs(phase_aligned(a, b).values - b.values).max())


class TestSymplecticForm:
    @pytest.mark.parametrize(
        "x, y, expected",
        [((1, 0), (0, 1), 1.0), ((2, 3), (5, 7), -1.0), ((1.5, -2), (1.5, -2), 0.0)],
    )
    def test_examples(self, x, y, expected):
        assert symplectic_form(PhasePoint(*x), PhasePoint(*y)) == expected

    @given(points, points, points, st.floats(-3, 3, allow_nan=False))
    def test_antisymmetric_bilinear(self, x, y, z, c):
        assert symplectic_form(x, y) == -symplectic_form(y, x)
        lhs = symplectic_form(PhasePoint(c * x.q + z.q, c * x.p + z.p), y)
        assert lhs == pytest.approx(c * symplectic_form(x, y) + symplectic_form(z, y), abs=1e-9)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            PhasePoint(math.inf, 0.0)


class TestWeylOperators:
    @pytest.fixture
    def psi(self, wide_grid):
        return synthesize(random_expansion(np.random.default_rng(3), 6), wide_grid)

    def test_identity(self, psi):
        np.testing.assert_allclose(weyl_apply(psi, PhasePoint(0.0, 0.0)).values, psi.values, atol=1e-15)

    def test_pure_modulation(self, psi):
        out = weyl_apply(psi, PhasePoint(0.0, 1.3))
        np.testing.assert_allclose(out.values, np.exp(1.3j * psi.x) * psi.values, atol=1e-15)
        assert out.norm() == pytest.approx(psi.norm(), abs=1e-14)

    def test_grid_shift_matches_roll(self, psi):
        dx = psi.grid.dx
        out = shift(psi, 5 * dx)
        np.testing.assert_allclose(out.values[5:], psi.values[:-5], atol=1e-12)

    def test_fractional_shift_of_hermite(self, wide_grid):
        e = HermiteExpansion.from_dict({2: 1.0})
        out = shift(synthesize(e, wide_grid), 0.37)
        x = wide_grid.x - 0.37
        expected = (4 * x * x - 2) * np.exp(-0.5 * x * x) / math.sqrt(8 * math.sqrt(math.pi))
        np.testing.assert_allclose(out.values, expected, atol=1e-10)

    def test_composition_rule(self, psi, rng):
        for _ in range(50):
            x, y = (PhasePoint(*rng.uniform(-2, 2, 2)) for _ in range(2))
            lhs = weyl_apply(weyl_apply(psi, y), x).values
            rhs = np.exp(-0.5j * symplectic_form(x, y)) * weyl_apply(psi, x + y).values
            np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_commutation(self, psi, rng):
        for _ in range(50):
            x, y = (PhasePoint(*rng.uniform(-2, 2, 2)) for _ in range(2))
            lhs = weyl_apply(weyl_apply(psi, y), x).values
            rhs = np.exp(-1j * symplectic_form(x, y)) * weyl_apply(weyl_apply(psi, x), y).values
            np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_unitary(self, psi, rng):
        for _ in range(10):
            out = weyl_apply(psi, rng.uniform(-2, 2, 2))
            assert out.norm() == pytest.approx(psi.norm(), abs=1e-8)


class TestCharacteristicFunction:
    def test_normalization(self, default_grid):
        e = random_expansion(np.random.default_rng(4), 8)
        assert characteristic_function(e, 0.9, 0.0, default_grid) == pytest.approx(1.0, abs=1e-10)

    def test_gaussian(self, default_grid):
        value = characteristic_function(HermiteExpansion.from_dict({0: 1.0}), 0.0, 1.0, default_grid)
        assert value == pytest.approx(math.exp(-0.25), abs=1e-12)
        assert value == pytest.approx(0.7788, abs=1e-4)

    def test_two_routes(self, rng, wide_grid):
        e = random_expansion(rng, 8)
        psi = synthesize(e, wide_grid)
        for _ in range(20):
            theta, u = rng.uniform(0, math.pi), rng.uniform(-3, 3)
            a = characteristic_function(e, theta, u, wide_grid)
            b = characteristic_function_weyl(psi, theta, u)
            assert abs(a - b) <= 1e-6


class TestMetaplectic:
    @pytest.fixture
    def state(self, wide_grid):
        e = random_expansion(np.random.default_rng(5), 6)
        return e, synthesize(e, wide_grid)

    def test_identity(self, state):
        _, psi = state
        assert aligned_error(metaplectic_apply(psi, SymplecticMatrix2.identity()), psi) <= 1e-8

    @pytest.mark.parametrize("theta", [0.4, 1.3, 2.8, 5.0])
    def test_rotation_matches_spectral(self, state, wide_grid, theta):
        e, psi = state
        out = metaplectic_apply(psi, SymplecticMatrix2.rotation(theta))
        # rotation of phase space by theta is F_{-theta}
        oracle = synthesize(frft_spectral(e, -theta), wide_grid)
        assert aligned_error(out, oracle) <= 1e-8

    def test_dilation_of_gaussian(self, wide_grid):
        psi = synthesize(HermiteExpansion.from_dict({0: 1.0}), wide_grid)
        out = dilate(psi, 1.5)
        x = wide_grid.x
        expected = np.pi ** -0.25 * np.exp(-0.5 * (x / 1.5) ** 2) / math.sqrt(1.5)
        np.testing.assert_allclose(out.values, expected, atol=1e-10)

    def test_chirp_is_pointwise(self, state):
        _, psi = state
        out = chirp(psi, 0.8)
        np.testing.assert_allclose(np.abs(out.values), np.abs(psi.values), atol=1e-15)

    def test_dilate_rejects_nonpositive(self, state):
        with pytest.raises(ValueError):
            dilate(state[1], 0.0)

    def test_rejects_non_symplectic(self, state):
        with pytest.raises(NotSymplecticError):
            metaplectic_apply(state[1], np.array([[2.0, 0.0], [0.0, 1.0]]))

    def test_covariance(self, rng, wide_grid):
        for _ in range(20):
            psi = synthesize(random_expansion(rng, 6), wide_grid)
            S = SymplecticMatrix2.from_iwasawa(rng.uniform(0, 2 * math.pi), rng.uniform(0.7, 1.4), rng.uniform(-1, 1))
            x = PhasePoint(*rng.uniform(-1.5, 1.5, 2))
            lhs = metaplectic_apply(weyl_apply(psi, x), S)
            rhs = weyl_apply(metaplectic_apply(psi, S), S @ x.as_array())
            assert aligned_error(lhs, rhs) <= 1e-6

    def test_norm(self, rng, wide_grid):
        psi = synthesize(random_expansion(rng, 6), wide_grid)
        for _ in range(5):
            S = SymplecticMatrix2.from_iwasawa(rng.uniform(0, 6), rng.uniform(0.7, 1.4), rng.uniform(-1, 1))
            assert metaplectic_apply(psi, S).norm() == pytest.approx(1.0, abs=1e-6)

    def test_composition_up_to_phase(self, state):
        _, psi = state
        A = SymplecticMatrix2.from_iwasawa(0.3, 1.2, 0.4)
        B = SymplecticMatrix2.from_iwasawa(2.1, 0.9, -0.5)
        two_step = metaplectic_apply(metaplectic_apply(psi, B), A)
        assert aligned_error(two_step, metaplectic_apply(psi, A @ B)) <= 1e-6
