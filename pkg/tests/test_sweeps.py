import io
import json
import math

import numpy as np
import pytest

from catgate.errors import DomainError
from catgate.numerics import GridSpec
from catgate.states import FockSpec, fidelity, make_fock
from catgate.gate import GateParams, cat_diagnostics, exact_output, perfect_cat_general
from catgate.sweeps import (
    SweepSpec,
    overlay_guides,
    run_sweep,
    sweep_grid,
    sweep_to_json,
    write_guides_csv,
    write_sweep_csv,
)


def small_spec(metric="infidelity_cat", n=0, ym=(1.5, 8.0, 6), gamma=(0.05, 0.3, 5)):
    return SweepSpec(
        y_m_axis=GridSpec(*ym),
        gamma_axis=GridSpec(*gamma),
        input=FockSpec(n),
        metric=metric,
    )


class TestSpecValidation:
    def test_gamma_axis_must_be_positive(self):
        with pytest.raises(DomainError, match="gamma axis"):
            small_spec(gamma=(-0.1, 0.3, 5))

    def test_unknown_metric(self):
        with pytest.raises(DomainError, match="metric"):
            small_spec(metric="fidelity")


class TestRunSweep:
    def test_cat_cell_matches_reference_anchor(self):
        # axis chosen so (y_m, gamma) = (1.5, 0.05) is the corner cell
        result = run_sweep(small_spec())
        assert result.values[0, 0] == pytest.approx(1.0 - 0.77, abs=0.01)
        assert not result.failures

    def test_cells_match_direct_evaluation(self):
        spec = small_spec()
        result = run_sweep(spec)
        grid = sweep_grid(spec)
        psi = make_fock(spec.input, grid)
        for i, j in ((0, 0), (3, 2), (5, 4)):
            params = GateParams(float(spec.gamma_axis.points()[j]),
                                float(spec.y_m_axis.points()[i]))
            direct = 1.0 - fidelity(exact_output(psi, params),
                                    perfect_cat_general(psi, params))
            assert result.values[i, j] == pytest.approx(direct, abs=1e-9)

    def test_breakdown_region_visible_in_st_metric(self):
        spec = small_spec(metric="infidelity_st", ym=(0.5, 8.0, 6))
        result = run_sweep(spec)
        # first row is y_m = 0.5 < 1, last rows sit well above sqrt(2n+1)
        assert np.all(result.values[0] > 3.0 * result.values[-1])

    def test_theta_metric_and_failure_rows(self):
        spec = small_spec(metric="theta", ym=(-1.0, 5.0, 4))
        result = run_sweep(spec)
        ym = spec.y_m_axis.points()
        gams = spec.gamma_axis.points()
        for j in range(len(gams)):
            assert ((0, j), "domain_error") in result.failures
            assert math.isnan(result.values[0, j])
        want = cat_diagnostics(GateParams(float(gams[1]), float(ym[2]))).theta
        assert result.values[2, 1] == pytest.approx(want, abs=1e-12)

    def test_thread_count_does_not_change_bits(self):
        spec = small_spec(ym=(1.0, 6.0, 10), gamma=(0.05, 0.4, 8))
        serial = run_sweep(spec, threads=1)
        threaded = run_sweep(spec, threads=3)
        assert np.array_equal(serial.values, threaded.values)
        assert serial.failures == threaded.failures

    def test_lambda_metric(self):
        spec = small_spec(metric="lambda", ym=(1.5, 6.0, 4))
        result = run_sweep(spec)
        assert result.values[0, 0] == pytest.approx(0.527046, abs=1e-4)

    def test_theta_map_crosses_even_and_odd_contours(self):
        from catgate.gate import CatDiagnostics, classify_parity

        spec = small_spec(metric="theta", ym=(2.0, 14.0, 40), gamma=(0.05, 0.5, 40))
        result = run_sweep(spec)
        parities = {
            classify_parity(
                CatDiagnostics(theta=t, p_plus=1.0, alpha=1j, lambda_shear=1.0,
                               lambda_shear_rounded=1.0, parity_angle=t % math.pi),
                0.15,
            )
            for t in result.values.ravel()
        }
        # the map sweeps through many phase windings, so both cat parities
        # (the even/odd contour lines) appear
        assert {"even", "odd", "intermediate"} <= parities


class TestGuides:
    def test_breakdown_line_positions(self):
        assert overlay_guides(small_spec(n=2)).breakdown_y_m == pytest.approx(math.sqrt(5.0), abs=1e-12)
        assert overlay_guides(small_spec(n=0)).breakdown_y_m == 1.0

    def test_hyperbola_point(self):
        spec = small_spec(ym=(10.0, 16.0, 4))
        guides = overlay_guides(spec)
        assert guides.hyperbola_y_m[0] == 10.0
        assert guides.hyperbola_gamma[0] == pytest.approx(0.1, abs=1e-12)


class TestSerialization:
    def test_csv_long_format(self):
        result = run_sweep(small_spec(metric="lambda", ym=(1.0, 3.0, 3), gamma=(0.1, 0.3, 3)))
        buf = io.StringIO()
        write_sweep_csv(result, buf, header_lines=["metric=lambda"])
        lines = [l for l in buf.getvalue().splitlines() if l and not l.startswith("#")]
        assert lines[0] == "y_m,gamma,value,status"
        assert len(lines) == 1 + 9
        first = lines[1].split(",")
        assert float(first[0]) == 1.0 and float(first[1]) == 0.1
        assert first[3] == "ok"
        # row-major: y_m outer, gamma inner
        second = lines[2].split(",")
        assert float(second[0]) == 1.0 and float(second[1]) == 0.2

    def test_json_failures_and_values(self):
        result = run_sweep(small_spec(metric="theta", ym=(-1.0, 2.0, 4), gamma=(0.1, 0.3, 3)))
        obj = json.loads(json.dumps(sweep_to_json(result)))
        assert obj["spec"]["metric"] == "theta"
        assert obj["values"][0] is None
        assert {"i_y_m": 0, "i_gamma": 0, "kind": "domain_error"} in obj["failures"]
        n_g = result.spec.gamma_axis.n_points
        assert obj["values"][2 * n_g + 1] == result.values[2, 1]

    def test_guides_csv(self):
        guides = overlay_guides(small_spec(n=1, ym=(1.0, 5.0, 5)))
        buf = io.StringIO()
        write_guides_csv(guides, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "guide,y_m,gamma"
        assert any(l.startswith("unit_shear,1.0,") for l in lines)
        assert any(l.startswith(f"stationary_breakdown,{math.sqrt(3.0)!r},") for l in lines)
