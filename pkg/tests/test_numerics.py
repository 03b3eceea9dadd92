import math

import numpy as np
import pytest
from scipy import special

from catgate.errors import ContractError, DomainError
from catgate.numerics import (
    GridSpec,
    _ai_asym_neg,
    _ai_asym_pos,
    _ai_series,
    airy_ai,
    hermite,
    integrate,
)

from oracles import airy_ai_quadrature

# Maclaurin value of Ai(0) = 3^{-2/3}/Gamma(2/3), frozen to double precision.
AI_AT_ZERO = 0.3550280538878172


class TestGridSpec:
    def test_points_bit_exact(self):
        grid = GridSpec(-12.0, 12.0, 2401)
        expected = -12.0 + np.arange(2401) * grid.dx
        assert np.array_equal(grid.points(), expected)
        assert grid.dx == pytest.approx(0.01)

    def test_invariants(self):
        with pytest.raises(DomainError):
            GridSpec(1.0, 1.0, 10)
        with pytest.raises(DomainError):
            GridSpec(0.0, 1.0, 1)
        with pytest.raises(DomainError):
            GridSpec(0.0, math.inf, 10)


class TestAiry:
    def test_value_at_zero(self):
        assert airy_ai(0.0) == pytest.approx(AI_AT_ZERO, abs=1e-15)

    def test_matches_integral_oracle_spot(self):
        for z in (-10.0, -1.0, 2.0):
            want = airy_ai_quadrature(z)
            assert airy_ai(z) == pytest.approx(want, rel=1e-9, abs=1e-11)

    def test_exponential_decay_positive(self):
        v = airy_ai(20.0)
        assert 0.0 < v < 1e-12

    def test_against_scipy_dense(self):
        z = np.linspace(-60.0, 20.0, 3001)
        ref = special.airy(z)[0]
        got = airy_ai(z)
        assert np.max(np.abs(got - ref)) < 1e-12
        osc = z < 0
        rel = np.abs(got[osc] - ref[osc]) / np.abs(ref[osc])
        assert rel.max() < 1e-8

    def test_ode_residual(self):
        # second difference of Ai at h=1e-3 reproduces z*Ai(z) within 1e-5
        z = np.linspace(-30.0, 10.0, 401)
        h = 1e-3
        second = (airy_ai(z + h) - 2.0 * airy_ai(z) + airy_ai(z - h)) / h**2
        assert np.allclose(second, z * airy_ai(z), rtol=1e-5, atol=1e-5)

    def test_seam_continuity(self):
        # both branches agree where the evaluation switches over
        for z in (9.0, -9.0):
            series = _ai_series(np.array([z]))[0]
            asym = (_ai_asym_pos if z > 0 else _ai_asym_neg)(np.array([z]))[0]
            if abs(series) >= 1e-8:
                assert abs(series - asym) <= 1e-8 * abs(series)
            else:
                assert abs(series - asym) <= 1e-10
        assert airy_ai(9.0 - 1e-9) == pytest.approx(airy_ai(9.0 + 1e-9), abs=1e-12)

    def test_scalar_and_array_forms(self):
        arr = airy_ai(np.array([-2.0, 0.0, 1.0]))
        assert arr.shape == (3,)
        assert airy_ai(-2.0) == arr[0]

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            airy_ai(float("nan"))
        with pytest.raises(DomainError):
            airy_ai(np.array([1.0, math.inf]))


class TestHermite:
    def test_first_orders(self):
        assert hermite(0, 17.3) == 1.0
        assert hermite(1, 3.0) == 6.0
        assert hermite(2, 1.0) == 2.0

    def test_matches_explicit_polynomials(self):
        explicit = [
            lambda x: np.ones_like(x),
            lambda x: 2 * x,
            lambda x: 4 * x**2 - 2,
            lambda x: 8 * x**3 - 12 * x,
            lambda x: 16 * x**4 - 48 * x**2 + 12,
        ]
        rng = np.random.default_rng(20240811)
        x = rng.uniform(-4.0, 4.0, size=100)
        for n, poly in enumerate(explicit):
            assert np.allclose(hermite(n, x), poly(x), rtol=1e-10, atol=1e-10)

    def test_rejects_negative_order(self):
        with pytest.raises(DomainError):
            hermite(-1, 0.0)


class TestIntegrate:
    def test_constant(self):
        grid = GridSpec(0.0, 1.0, 101)
        assert integrate(np.ones(101), grid) == pytest.approx(1.0, abs=1e-12)

    def test_normalized_gaussian(self):
        grid = GridSpec(-10.0, 10.0, 2001)
        x = grid.points()
        density = np.exp(-x * x) / math.sqrt(math.pi)
        assert integrate(density, grid) == pytest.approx(1.0, abs=1e-8)

    def test_sine_closed_form(self):
        grid = GridSpec(0.0, math.pi, 1001)
        assert integrate(np.sin(grid.points()), grid) == pytest.approx(2.0, abs=1e-10)

    def test_trapezoid_fallback_even_points(self):
        grid = GridSpec(0.0, math.pi, 1000)  # odd interval count
        assert integrate(np.sin(grid.points()), grid) == pytest.approx(2.0, abs=1e-5)

    def test_linearity(self):
        grid = GridSpec(-3.0, 5.0, 257)
        rng = np.random.default_rng(7)
        f = rng.normal(size=257) + 1j * rng.normal(size=257)
        g = rng.normal(size=257) + 1j * rng.normal(size=257)
        a, b = 1.7 - 0.3j, -2.2 + 1.1j
        lhs = integrate(a * f + b * g, grid)
        rhs = a * integrate(f, grid) + b * integrate(g, grid)
        assert abs(lhs - rhs) < 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            integrate(np.ones(100), GridSpec(0.0, 1.0, 101))
