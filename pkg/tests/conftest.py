"""Pytest fixtures for fretcavity tests."""
import pytest
import numpy as np
import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fretcavity.models import (
    DensityMatrix,
    EmitterRates,
    HilbertLayout,
    PumpMode,
    SystemSpec,
)


# Weak incoherent pump used throughout
@pytest.fixture
def weak_pump():
    """Return the pump rate of the weak-excitation tests."""
    return 1e-3


# Free-space spec fixture
@pytest.fixture
def free_space_spec(weak_pump):
    """Return a free-space spec with extra decay and mutual decay."""
    return SystemSpec(
        Delta=3.0,
        Omega=1.5,
        gamma_bar=0.4,
        rates=EmitterRates(gamma_prime=0.1),
        pump={"mode": PumpMode.INCOHERENT, "Gamma": weak_pump},
        n_cav=1,
    )


# Cavity spec fixture
@pytest.fixture
def cavity_spec(weak_pump):
    """Return a donor-cavity-acceptor spec in the weak-excitation regime."""
    return SystemSpec(
        Delta=4.0,
        delta=-2.0,
        Omega=0.8,
        gamma_bar=0.2,
        g_D=1.5,
        g_A=2.5,
        kappa=6.0,
        rates=EmitterRates(gamma_prime=0.3, gamma_phi=0.2),
        pump={"mode": PumpMode.INCOHERENT, "Gamma": weak_pump},
        n_cav=2,
    )


# Coherently driven spec fixture
@pytest.fixture
def coherent_spec():
    """Return a free-space spec with a weak coherent drive on the donor."""
    return SystemSpec(
        Delta=5.0,
        Omega=2.0,
        pump={"mode": PumpMode.COHERENT, "eta": 0.01, "omega_L": 3.0},
        n_cav=1,
    )


# Two-qubit layout
@pytest.fixture
def qubit_layout():
    """Return the donor x acceptor layout."""
    return HilbertLayout(subsystem_dims=(2, 2))


# Singlet Bell state
@pytest.fixture
def bell_state(qubit_layout):
    """Return (|ge> - |eg>)/sqrt(2) as a density matrix."""
    return DensityMatrix.from_ket([0, 1, -1, 0], qubit_layout)


# Random generator
@pytest.fixture
def rng():
    """Return a seeded numpy generator."""
    return np.random.default_rng(1234)


# Random valid specs
@pytest.fixture
def random_spec(rng, weak_pump):
    """Return a factory of random valid specs: free space or cavity, incoherent or coherent pump."""

    def make():
        in_cavity = rng.random() < 0.5
        if rng.random() < 0.3:
            pump = {
                "mode": PumpMode.COHERENT,
                "eta": float(rng.uniform(0.001, 0.1)),
                "omega_L": float(rng.uniform(-10.0, 10.0)),
            }
        else:
            pump = {"mode": PumpMode.INCOHERENT, "Gamma": weak_pump}
        return SystemSpec(
            Delta=float(rng.uniform(-20.0, 20.0)),
            delta=float(rng.uniform(-20.0, 20.0)),
            Omega=float(rng.uniform(-10.0, 10.0)),
            gamma_bar=float(rng.uniform(0.0, 0.9)),
            g_D=float(rng.uniform(0.0, 5.0)) if in_cavity else 0.0,
            g_A=float(rng.uniform(0.0, 5.0)) if in_cavity else 0.0,
            kappa=float(rng.uniform(0.5, 20.0)),
            rates=EmitterRates(
                gamma_prime=float(rng.uniform(0.0, 1.0)),
                gamma_phi=float(rng.uniform(0.0, 2.0)),
            ),
            pump=pump,
            n_cav=int(rng.integers(1, 3)),
        )

    return make


# Minimal sweep config text
@pytest.fixture
def minimal_config_text():
    """Return a one-axis analytic sweep config."""
    return (
        "# smallest useful sweep\n"
        "sweep.Omega = 0.5,2,4\n"
        "Delta = 1\n"
        "outputs = J\n"
    )
