"""Tests for the analytic-versus-numeric cross-check suite."""
import pytest
import math
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fretcavity import validation
from fretcavity.exceptions import ConfigError, UnstableError
from fretcavity.validation import (
    CHECKS,
    balance_residuals,
    check_concurrence,
    check_cooperativity_formula,
    check_determinism_and_convergence,
    check_flow_maximum,
    check_flow_reversal,
    check_free_space_agreement,
    check_inverse_sixth_scaling,
    check_moment_closure,
    check_optimal_detuning,
    check_pump_elimination,
    check_subradiance,
    damped_cavity_bracket,
    flow_entanglement_peaks,
    flow_separation_slope,
    optimal_detuning_scan,
    random_weak_pump_spec,
    reversal_window,
    run_checks,
)


class TestFastChecks:
    """Checks cheap enough for every test run."""

    def test_flow_maximum(self):
        """Test J/Gamma saturates at 1/2."""
        result = check_flow_maximum()
        assert result.passed, result.detail

    def test_inverse_sixth_scaling(self):
        """Test the short-range J ~ d^-6 law."""
        result = check_inverse_sixth_scaling()
        assert result.passed
        assert result.value == pytest.approx(-6.0, abs=0.1)
        assert "[0.05, 0.2]" in result.detail

    def test_wide_window_slope(self):
        """Test the slope on d in [0.05, 0.2] lambda at Delta = 200 falls short of -6."""
        slope = flow_separation_slope(0.05, 0.2, 200.0)
        assert -5.5 < slope < -4.6
        assert abs(slope + 6.0) > 0.1

    def test_short_window_slope_both_orientations(self):
        """Test the short-range slope does not depend on the dipole orientation."""
        for orientation in ("parallel", "perpendicular"):
            slope = flow_separation_slope(0.005, 0.02, 1e6, orientation=orientation)
            assert slope == pytest.approx(-6.0, abs=0.1)

    def test_flow_reversal(self):
        """Test J turns negative only with mutual decay."""
        assert reversal_window(collective=True) is not None
        assert reversal_window(collective=False) is None
        assert check_flow_reversal().passed

    def test_subradiance(self):
        """Test collective decay rates and the dark-state degeneracy."""
        result = check_subradiance()
        assert result.passed, result.detail

    def test_pump_elimination(self):
        """Test the three-level donor matches the effective two-level pump."""
        result = check_pump_elimination()
        assert result.passed, result.detail

    def test_moment_closure(self, rng, weak_pump):
        """Test the moment closure on the first specs of the seeded suite."""
        result = check_moment_closure(samples=5, pump=weak_pump)
        assert result.passed, f"{result.value:.3e} {result.detail}"
        assert max(balance_residuals(random_weak_pump_spec(rng, weak_pump))) < 1e-10

    def test_flow_peak_location(self):
        """Test the flow maximum of a coarse grid sits at Delta = 0, largest Omega."""
        flow_peak, _ = flow_entanglement_peaks(grid=5)
        assert flow_peak == (0.0, 100.0)

    def test_damped_bracket_limit(self):
        """Test the damped bracket reduces to the lossless one."""
        Delta, delta, g_D, g_A, omega_L = 40.0, 5.0, 10.0, 50.0, 3.0
        lossless = g_A**2 * (Delta - omega_L) + omega_L * (
            -(g_D**2) + (delta - omega_L) * (Delta - omega_L)
        )
        damped = damped_cavity_bracket(Delta, delta, g_D, g_A, 0.0, 0.0, omega_L)
        assert damped.real == pytest.approx(lossless)
        assert damped.imag == pytest.approx(0.0)


class TestRunChecks:
    """Test the check runner."""

    def test_registry(self):
        """Test every check is registered under its name."""
        assert len(CHECKS) == 12
        assert "free_space_agreement" in CHECKS

    def test_subset(self):
        """Test a named subset runs in order."""
        results = run_checks(["flow_maximum", "inverse_sixth_scaling"])
        assert [r.name for r in results] == ["flow_maximum", "inverse_sixth_scaling"]
        assert all(r.passed for r in results)

    def test_unknown_check(self):
        """Test an unknown check name raises ConfigError."""
        with pytest.raises(ConfigError):
            run_checks(["no_such_check"])

    def test_solver_error_becomes_failure(self, monkeypatch):
        """Test an exception inside a check is reported as a failed result."""

        def broken():
            raise UnstableError(0.5, "moment drift")

        monkeypatch.setitem(validation.CHECKS, "flow_maximum", broken)
        (result,) = run_checks(["flow_maximum"])
        assert not result.passed
        assert math.isnan(result.value)
        assert "UnstableError" in result.detail


@pytest.mark.slow
class TestFullChecks:
    """Full-size cross-checks against the master equation."""

    def test_free_space_agreement(self):
        """Test the closed free-space expression on the full grid."""
        result = check_free_space_agreement()
        assert result.passed, result.detail

    def test_optimal_detuning(self):
        """Test the J_A maximum sits within 10% of delta_opt."""
        result = check_optimal_detuning()
        assert result.passed, result.detail
        assert result.tolerance == 0.10

    def test_optimal_detuning_offset(self):
        """Test the J_A peak sits on the cavity-light side of the Hopfield crossing."""
        found = optimal_detuning_scan()
        assert -80.0 / 3.0 < found < -20.0

    def test_moment_closure_full_suite(self, weak_pump):
        """Test all six moments on the 50-spec suite at Gamma = 1e-3."""
        result = check_moment_closure(samples=50, pump=weak_pump)
        assert result.passed, f"{result.value:.3e} {result.detail}"

    def test_concurrence(self):
        """Test reference concurrences and distinct J and C maxima."""
        result = check_concurrence()
        assert result.value < 1e-9
        assert result.passed, result.detail

    def test_cooperativity_formula(self):
        """Test the bad-cavity closed form inside its regime."""
        result = check_cooperativity_formula()
        assert result.passed, result.detail
        assert "0 outside the regime" in result.detail

    def test_cooperativity_skips_close_pairs(self):
        """Test pairs closer than the weak-pump window are skipped, not compared."""
        result = check_cooperativity_formula(separations=[0.01, 0.1], couplings=(20.0,))
        assert result.passed, result.detail
        assert "2 points compared, 2 outside the regime" in result.detail

    def test_determinism_and_convergence(self):
        """Test byte-stable sweeps and the n_cav doubling criterion."""
        result = check_determinism_and_convergence()
        assert result.passed, result.detail
