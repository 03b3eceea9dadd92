import math

import numpy as np
import pytest

from catgate.errors import ContractError, DegenerateOutcomeError, DomainError
from catgate.numerics import GridSpec, integrate
from catgate.states import FockSpec, WaveFunction, fidelity, make_coherent, make_fock, normalize
from catgate.gate import (
    CatDiagnostics,
    GateParams,
    PhasePoint,
    cat_diagnostics,
    classify_parity,
    exact_factor,
    exact_output,
    gate_report,
    perfect_cat,
    perfect_cat_general,
    semiclassical_momenta,
    stationary_factor,
    stationary_output,
    stationary_points,
)

GRID = GridSpec(-12.0, 12.0, 2401)
VACUUM = make_fock(FockSpec(0), GRID)


def odd_cat_params(m: int = 5) -> GateParams:
    # p_plus = sqrt(10) with theta = pi/2 (mod pi): y_m = (m pi - pi/4) * 3/(2 sqrt(10))
    y_m = (m * math.pi - 0.25 * math.pi) * 3.0 / (2.0 * math.sqrt(10.0))
    return GateParams(gamma=y_m / 30.0, y_m=y_m)


class TestGateParams:
    def test_validation(self):
        with pytest.raises(DomainError, match="gamma > 0"):
            GateParams(gamma=-1.0, y_m=15.0)
        with pytest.raises(DomainError):
            GateParams(gamma=math.nan, y_m=0.0)
        with pytest.raises(DomainError):
            PhasePoint(math.inf, 0.0)


class TestExactOutput:
    def test_output_normalized(self):
        for ym, g in ((1.5, 0.05), (3.0, 0.1), (15.0, 0.5), (-2.0, 0.3)):
            out = exact_output(VACUUM, GateParams(g, ym))
            assert out.norm() == pytest.approx(1.0, abs=1e-8)

    def test_high_fidelity_cat_point(self):
        params = GateParams(0.5, 15.0)
        cat = perfect_cat(FockSpec(0), params, GRID)
        assert fidelity(exact_output(VACUUM, params), cat) == pytest.approx(0.998, abs=0.002)

    def test_low_fidelity_cat_point(self):
        params = GateParams(0.05, 1.5)
        cat = perfect_cat(FockSpec(0), params, GRID)
        assert fidelity(exact_output(VACUUM, params), cat) == pytest.approx(0.77, abs=0.01)

    def test_degenerate_outcome(self):
        with pytest.raises(DegenerateOutcomeError):
            exact_output(VACUUM, GateParams(0.1, -30.0))

    def test_requires_normalized_input(self):
        junk = WaveFunction(GRID, 3.0 * VACUUM.amplitudes)
        with pytest.raises(ContractError):
            exact_output(junk, GateParams(0.1, 3.0))

    def test_linear_before_renormalization(self):
        params = GateParams(0.1, 3.0)
        factor = exact_factor(GRID, params)
        f0 = make_fock(FockSpec(0), GRID).amplitudes
        f2 = make_fock(FockSpec(2), GRID).amplitudes
        a, b = 0.6, -0.8j
        lhs = (a * f0 + b * f2) * factor
        rhs = a * (f0 * factor) + b * (f2 * factor)
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-15)
        # and the renormalized output of the mixture matches the mixture of
        # unrenormalized outputs, up to overall normalization
        mix = normalize(WaveFunction(GRID, a * f0 + b * f2))
        assert fidelity(exact_output(mix, params), normalize(WaveFunction(GRID, lhs))) \
            == pytest.approx(1.0, abs=1e-12)


class TestStationary:
    def test_stationary_points_two_branch(self):
        pts = stationary_points(0.0, GateParams(0.1, 3.0))
        assert pts == pytest.approx((-math.sqrt(10.0), math.sqrt(10.0)), abs=1e-12)

    def test_stationary_points_empty(self):
        assert stationary_points(3.0, GateParams(0.1, 3.0)) == ()
        assert stationary_points(5.0, GateParams(0.1, 3.0)) == ()

    def test_factor_matches_independent_reevaluation(self):
        params = GateParams(0.1, 3.0)
        x = GRID.points()
        factor = stationary_factor(GRID, params)
        u = params.y_m - x
        ok = u > GRID.dx  # clear of the zeroed/capped band at the turning point
        amp = (12.0 * params.gamma * u[ok]) ** -0.25
        phase = math.pi / 4.0 - 2.0 / (3.0 * math.sqrt(3.0 * params.gamma)) * u[ok] ** 1.5
        assert np.allclose(np.abs(factor[ok]), amp * 2.0 * np.abs(np.cos(phase)),
                           rtol=1e-12, atol=1e-12)

    def test_real_for_real_input(self):
        out = stationary_output(VACUUM, GateParams(0.5, 15.0))
        assert np.max(np.abs(out.amplitudes.imag)) < 1e-10

    def test_approximation_quality_by_outcome(self):
        good = fidelity(exact_output(VACUUM, GateParams(0.1, 3.0)),
                        stationary_output(VACUUM, GateParams(0.1, 3.0)))
        bad = fidelity(exact_output(VACUUM, GateParams(0.1, 0.5)),
                       stationary_output(VACUUM, GateParams(0.1, 0.5)))
        assert good > 0.999
        assert bad < good - 0.1

    def test_degenerate_when_no_branch_region(self):
        with pytest.raises(DegenerateOutcomeError, match="fewer than 2"):
            stationary_output(VACUUM, GateParams(0.1, -12.5))


class TestCatDiagnostics:
    def test_shear_values(self):
        d = cat_diagnostics(GateParams(0.05, 1.5))
        assert d.lambda_shear == pytest.approx(0.527, abs=1e-3)
        assert d.lambda_shear_rounded == pytest.approx(0.511, abs=1e-3)

    def test_momentum_displacement(self):
        d = cat_diagnostics(GateParams(0.5, 15.0))
        assert d.p_plus == pytest.approx(math.sqrt(10.0), abs=1e-12)
        assert abs(d.alpha) == pytest.approx(d.p_plus / math.sqrt(2.0), abs=1e-12)
        assert d.alpha.real == 0.0

    def test_theta_closed_form(self):
        d = cat_diagnostics(GateParams(0.1, 3.0))
        want = math.pi / 4.0 - (2.0 / (3.0 * math.sqrt(0.3))) * 3.0**1.5
        assert d.theta == pytest.approx(want, abs=1e-12)
        assert 0.0 <= d.parity_angle < math.pi

    def test_domain(self):
        with pytest.raises(DomainError):
            cat_diagnostics(GateParams(0.1, 0.0))
        with pytest.raises(DomainError):
            cat_diagnostics(GateParams(0.1, -3.0))


class TestClassifyParity:
    def _diag(self, theta):
        return CatDiagnostics(theta=theta, p_plus=1.0, alpha=1j, lambda_shear=1.0,
                              lambda_shear_rounded=1.0, parity_angle=theta % math.pi)

    def test_even(self):
        assert classify_parity(self._diag(3.0 * math.pi), 0.05) == "even"

    def test_odd(self):
        assert classify_parity(self._diag(-0.5 * math.pi), 0.05) == "odd"

    def test_intermediate(self):
        assert classify_parity(self._diag(0.25 * math.pi), 0.1) == "intermediate"

    def test_tolerance_domain(self):
        with pytest.raises(DomainError):
            classify_parity(self._diag(0.0), 1.0)


class TestPerfectCat:
    def test_normalization_matches_closed_form(self):
        params = GateParams(0.5, 15.0)
        d = cat_diagnostics(params)
        x = GRID.points()
        raw = np.cos(d.theta + d.p_plus * x) * math.pi**-0.25 * np.exp(-0.5 * x * x)
        grid_norm_sq = integrate(raw**2, GRID).real
        closed = 0.5 * (1.0 + math.cos(2.0 * d.theta) * math.exp(-params.y_m / (3.0 * params.gamma)))
        assert grid_norm_sq == pytest.approx(closed, abs=1e-6)
        cat = perfect_cat(FockSpec(0), params, GRID)
        assert fidelity(cat, normalize(WaveFunction(GRID, raw.astype(complex)))) \
            == pytest.approx(1.0, abs=1e-12)

    def test_odd_cat_vanishes_at_origin(self):
        params = odd_cat_params()
        assert classify_parity(cat_diagnostics(params), 0.01) == "odd"
        cat = perfect_cat(FockSpec(0), params, GRID)
        assert abs(cat.amplitudes[GRID.n_points // 2]) < 1e-12

    def test_self_fidelity(self):
        cat = perfect_cat(FockSpec(1), GateParams(0.3, 15.0), GRID)
        assert fidelity(cat, cat) == pytest.approx(1.0, abs=1e-12)

    def test_glauber_decomposition(self):
        for ym, g in ((1.5, 0.05), (3.0, 0.1), (15.0, 0.5)):
            params = GateParams(g, ym)
            d = cat_diagnostics(params)
            plus = make_coherent(d.alpha, GRID)
            minus = make_coherent(-d.alpha, GRID)
            combo = normalize(WaveFunction(
                GRID,
                np.exp(1j * d.theta) * plus.amplitudes + np.exp(-1j * d.theta) * minus.amplitudes,
            ))
            cat = perfect_cat(FockSpec(0), params, GRID)
            assert fidelity(cat, combo) >= 1.0 - 1e-8

    def test_general_variant_matches_fock_form(self):
        params = GateParams(0.3, 15.0)
        via_fock = perfect_cat(FockSpec(2), params, GRID)
        via_general = perfect_cat_general(make_fock(FockSpec(2), GRID), params)
        assert fidelity(via_fock, via_general) == pytest.approx(1.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            perfect_cat(FockSpec(0), GateParams(0.1, -1.0), GRID)


class TestSemiclassical:
    def test_two_branches(self):
        pts = semiclassical_momenta(PhasePoint(0.0, 0.0), GateParams(0.1, 3.0))
        assert len(pts) == 2
        assert pts[0].q == pts[1].q == 0.0
        assert pts[1].p == pytest.approx(math.sqrt(10.0), abs=1e-12)
        assert pts[0].p == pytest.approx(-math.sqrt(10.0), abs=1e-12)

    def test_branch_merge_empty(self):
        assert semiclassical_momenta(PhasePoint(3.0, 0.7), GateParams(0.1, 3.0)) == ()

    def test_gap_matches_diagnostics(self):
        params = GateParams(0.1, 3.0)
        lo, hi = semiclassical_momenta(PhasePoint(0.0, 1.3), params)
        gap = hi.p - lo.p
        assert gap == pytest.approx(2.0 * cat_diagnostics(params).p_plus, abs=1e-12)

    def test_gap_matches_stationary_points(self):
        params = GateParams(0.1, 3.0)
        lo, hi = stationary_points(0.0, params)
        a, b = semiclassical_momenta(PhasePoint(0.0, 0.0), params)
        assert (hi - lo) == pytest.approx(b.p - a.p, abs=1e-12)


class TestFidelityTrend:
    def test_cat_fidelity_grows_along_vacuum_ray(self):
        # fixed p_plus = sqrt(10), growing gamma*y_m: deformation shrinks
        fids = []
        for ym, g in ((1.5, 0.05), (3.0, 0.1), (15.0, 0.5)):
            params = GateParams(g, ym)
            fids.append(fidelity(exact_output(VACUUM, params),
                                 perfect_cat(FockSpec(0), params, GRID)))
        assert fids[0] < fids[1] < fids[2]


class TestGateReport:
    def test_fields_present(self):
        report = gate_report(VACUUM, GateParams(0.5, 15.0))
        assert report["fidelity_vs_perfect_cat"] == pytest.approx(0.998, abs=0.002)
        assert report["parity"] in ("even", "odd", "intermediate")

    def test_partial_for_negative_outcome(self):
        report = gate_report(VACUUM, GateParams(0.3, -2.0))
        assert report["theta"] is None
        assert report["fidelity_vs_perfect_cat"] is None
