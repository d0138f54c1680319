"""Tests for energy flows, normalisation and concurrence."""
import pytest
import numpy as np
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from scipy.stats import unitary_group

from fretcavity.exceptions import ConfigError, DimensionMismatchError
from fretcavity.models import DensityMatrix, FlowReport, HilbertLayout, Normalization
from fretcavity.observables import concurrence, normalize
from fretcavity.solver import MasterEquationSolver


def _werner(p: float, bell: DensityMatrix) -> DensityMatrix:
    matrix = p * bell.matrix + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(matrix=matrix, layout=bell.layout)


class TestConcurrence:
    """Test the Wootters concurrence."""

    def test_bell_state(self, bell_state):
        """Test a Bell state is maximally entangled."""
        assert concurrence(bell_state) == pytest.approx(1.0)

    def test_product_state(self, qubit_layout):
        """Test |eg> has no entanglement."""
        assert concurrence(DensityMatrix.from_ket([0, 0, 1, 0], qubit_layout)) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("p,expected", [(0.2, 0.0), (0.5, 0.25), (0.9, 0.85)])
    def test_werner_states(self, bell_state, p, expected):
        """Test C = max(0, (3p - 1)/2) for Werner states."""
        assert concurrence(_werner(p, bell_state)) == pytest.approx(expected, abs=1e-9)

    def test_local_unitary_invariance(self, bell_state):
        """Test local unitaries leave the concurrence unchanged."""
        rho = _werner(0.7, bell_state)
        local = np.kron(unitary_group.rvs(2, random_state=7), unitary_group.rvs(2, random_state=8))
        rotated = DensityMatrix(matrix=local @ rho.matrix @ local.conj().T, layout=rho.layout)
        assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-9)

    def test_cavity_traced_out(self, bell_state):
        """Test the cavity factor is traced out before the concurrence."""
        layout = HilbertLayout.donor_acceptor_cavity(1)
        vacuum = np.diag([1.0, 0.0])
        rho = DensityMatrix(matrix=np.kron(bell_state.matrix, vacuum), layout=layout)
        assert concurrence(rho) == pytest.approx(1.0)

    def test_not_two_qubits(self):
        """Test a non-qubit leading factor raises DimensionMismatchError."""
        layout = HilbertLayout(subsystem_dims=(3, 2))
        rho = DensityMatrix(matrix=np.eye(6) / 6.0, layout=layout)
        with pytest.raises(DimensionMismatchError):
            concurrence(rho)


class TestEnergyFlows:
    """Test flows extracted from master-equation steady states."""

    def test_flow_runs_downhill(self, free_space_spec):
        """Test energy flows from the pumped donor to the drained acceptor."""
        report = MasterEquationSolver(free_space_spec).flows()
        assert report.J > 0.0
        assert report.p_D > report.p_A
        assert report.n == pytest.approx(0.0, abs=1e-14)
        assert report.J_D == 0.0 and report.J_A == 0.0

    def test_cavity_flows(self, cavity_spec):
        """Test the photon population balances the two cavity flows."""
        report = MasterEquationSolver(cavity_spec).flows()
        assert report.J_D - report.J_A == pytest.approx(cavity_spec.kappa * report.n, rel=1e-8)


class TestNormalize:
    """Test flow normalisation."""

    def _report(self) -> FlowReport:
        return FlowReport(J=2e-3, J_D=0.0, J_A=0.0, J_r=1e-3, p_D=5e-3, p_A=1e-3, n=0.0)

    def test_per_gamma(self, free_space_spec):
        """Test flows are divided by Gamma and populations kept."""
        scaled = normalize(self._report(), free_space_spec, Normalization.PER_GAMMA)
        assert scaled.J == pytest.approx(2.0)
        assert scaled.J_r == pytest.approx(1.0)
        assert scaled.p_D == pytest.approx(5e-3)
        assert scaled.normalization is Normalization.PER_GAMMA

    def test_idempotent(self, free_space_spec):
        """Test normalising twice the same way is a no-op."""
        once = normalize(self._report(), free_space_spec, Normalization.PER_GAMMA)
        assert normalize(once, free_space_spec, Normalization.PER_GAMMA) == once

    def test_renormalise_rejected(self, free_space_spec):
        """Test switching normalisation raises ConfigError."""
        once = normalize(self._report(), free_space_spec, Normalization.PER_GAMMA)
        with pytest.raises(ConfigError):
            normalize(once, free_space_spec, Normalization.PER_ETA)

    def test_zero_divisor(self, free_space_spec):
        """Test per_eta without a drive raises ConfigError."""
        with pytest.raises(ConfigError) as exc_info:
            normalize(self._report(), free_space_spec, Normalization.PER_ETA)
        assert exc_info.value.key == "normalize"
