"""Tests for the linearised moment theory."""
import pytest
import numpy as np
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fretcavity.exceptions import UnsupportedPumpError
from fretcavity.models import EmitterRates, PumpMode, SystemSpec
from fretcavity.moments import (
    MOMENT_DIM,
    adiabatic_cavity_rates,
    amplitude_drift,
    build_moment_system,
    moment_stability_margin,
    moment_steady_state,
    population_gradient_rate,
)
from fretcavity.observables import flows_from_moments
from fretcavity.solver import MasterEquationSolver


class TestMomentSteadyState:
    """Test moments against the master equation at weak pumping."""

    @pytest.mark.parametrize("fixture", ["free_space_spec", "cavity_spec"])
    def test_matches_master_equation(self, fixture, request):
        """Test populations and flows agree in the weak-pump limit."""
        spec = request.getfixturevalue(fixture).replace(pump={"Gamma": 1e-4})
        exact = MasterEquationSolver(spec).flows()
        approx = flows_from_moments(moment_steady_state(spec), spec)

        floor = 1e-3 * max(exact.p_D, exact.p_A)
        for name in ("p_D", "p_A", "n", "J", "J_D", "J_A"):
            assert getattr(approx, name) == pytest.approx(
                getattr(exact, name), rel=1e-2, abs=floor
            ), name

    def test_balance(self, cavity_spec):
        """Test the pump input equals the total emission out of the system."""
        state = moment_steady_state(cavity_spec)
        rates, Gamma = cavity_spec.rates, cavity_spec.pump.Gamma
        gain = Gamma * (1.0 - state.p_D)
        loss = (
            (Gamma + rates.gamma_tot_A) * state.p_A
            + rates.gamma_tot_D * state.p_D
            + cavity_spec.kappa * state.n
            + 2.0 * cavity_spec.gamma_bar * state.c_DA.real
        )
        assert gain == pytest.approx(loss, rel=1e-9)

    def test_coherent_drive_unsupported(self, coherent_spec):
        """Test a coherent drive raises UnsupportedPumpError."""
        with pytest.raises(UnsupportedPumpError):
            moment_steady_state(coherent_spec)

    def test_drift_shape(self, cavity_spec):
        """Test the real drift is 9 x 9 and the source only feeds p_D."""
        drift, source = build_moment_system(cavity_spec)
        assert drift.shape == (MOMENT_DIM, MOMENT_DIM)
        assert source[0] == pytest.approx(cavity_spec.pump.Gamma)
        assert np.allclose(source[1:], 0.0)

    def test_stable(self, cavity_spec):
        """Test the weakly pumped cavity system has a stable fixed point."""
        assert moment_stability_margin(cavity_spec) > 0.0


class TestAmplitudeDrift:
    """Test the linearised amplitude equations."""

    def test_super_and_subradiant_pair(self):
        """Test decay rates (gamma -+ gamma_bar)/2 at g = 0 and Delta = 0."""
        spec = SystemSpec(gamma_bar=0.4, pump={"mode": PumpMode.NONE}, kappa=1.0)
        real_parts = np.sort(np.linalg.eigvals(amplitude_drift(spec)).real)
        assert real_parts == pytest.approx([-0.7, -0.5, -0.3])


class TestPopulationGradient:
    """Test J = k (p_D - p_A) in free space."""

    def test_matches_master_equation(self, free_space_spec):
        """Test the gradient law holds exactly without collective decay."""
        spec = free_space_spec.replace(
            gamma_bar=0.0, rates={"gamma_phi": 0.5}, pump={"Gamma": 0.05}
        )
        report = MasterEquationSolver(spec).flows()
        k = population_gradient_rate(spec)
        assert report.J == pytest.approx(k * (report.p_D - report.p_A), rel=1e-8)

    def test_resonant_value(self):
        """Test k = 2 Omega^2 / G on resonance."""
        spec = SystemSpec(Omega=1.0, rates=EmitterRates(), pump={"Gamma": 0.0})
        assert population_gradient_rate(spec) == pytest.approx(2.0)


class TestAdiabaticCavityRates:
    """Test the bad-cavity effective rates."""

    def test_resonant_rates(self):
        """Test Purcell enhancement and cavity-mediated mutual decay on resonance."""
        spec = SystemSpec(g_D=2.0, g_A=2.0, kappa=100.0)
        rates = adiabatic_cavity_rates(spec)
        assert rates.gamma_A_eff == pytest.approx(1.16)
        assert rates.gamma_D_eff == pytest.approx(1.16)
        assert rates.gamma_AD_eff == pytest.approx(0.16)
        assert rates.cooperativity_A == pytest.approx(0.16)
        assert rates.adiabatic_valid

    def test_invalid_regime_flagged(self, caplog):
        """Test a good cavity is flagged and logged."""
        rates = adiabatic_cavity_rates(SystemSpec(g_D=2.0, g_A=2.0, kappa=1.0))
        assert not rates.adiabatic_valid
        assert "outside its validity" in caplog.text
