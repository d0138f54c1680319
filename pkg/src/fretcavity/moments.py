"""Linearised second-order moment theory and adiabatic cavity elimination.

The closed set is (p_D, p_A, n, c_DA, c_aD, c_aA) with
c_DA = <sigma_D^dag sigma_A>, c_aD = <a^dag sigma_D>, c_aA = <a^dag sigma_A>.
Every product of a population with a coherence, and every product of two
populations, is dropped. The complex coherences are split into real and
imaginary parts, giving a real 9 x 9 drift.
"""

from __future__ import annotations

import logging

import numpy as np

from .const import ADIABATIC_RATIO
from .exceptions import UnstableError, UnsupportedPumpError
from .models import EffectiveRates, MomentState, PumpMode, SystemSpec
from .operators import eig_general, solve_linear

_LOGGER = logging.getLogger(__name__)

MOMENT_LABELS = (
    "p_D",
    "p_A",
    "n",
    "Re c_DA",
    "Im c_DA",
    "Re c_aD",
    "Im c_aD",
    "Re c_aA",
    "Im c_aA",
)
MOMENT_DIM = len(MOMENT_LABELS)


def _pump_rate(spec: SystemSpec) -> float:
    return spec.pump.Gamma if spec.pump.mode is PumpMode.INCOHERENT else 0.0


def _coherence_decay(spec: SystemSpec) -> tuple[float, float]:
    """Decay of <sigma_D> and <sigma_A>: (Gamma + gamma_tot)/2 + gamma_phi."""
    pump = _pump_rate(spec)
    rates = spec.rates
    return (
        0.5 * (pump + rates.gamma_tot_D) + rates.gamma_phi,
        0.5 * (pump + rates.gamma_tot_A) + rates.gamma_phi,
    )


def _unpack(x: np.ndarray) -> tuple[float, float, float, complex, complex, complex]:
    return (
        x[0],
        x[1],
        x[2],
        complex(x[3], x[4]),
        complex(x[5], x[6]),
        complex(x[7], x[8]),
    )


def _pack(
    p_D: float, p_A: float, n: float, c_DA: complex, c_aD: complex, c_aA: complex
) -> np.ndarray:
    return np.array(
        [
            np.real(p_D),
            np.real(p_A),
            np.real(n),
            c_DA.real,
            c_DA.imag,
            c_aD.real,
            c_aD.imag,
            c_aA.real,
            c_aA.imag,
        ],
        dtype=float,
    )


def _rhs(spec: SystemSpec, x: np.ndarray) -> np.ndarray:
    """Time derivative of the packed moments (affine in x)."""
    p_D, p_A, n, c_DA, c_aD, c_aA = _unpack(x)
    pump = _pump_rate(spec)
    rates = spec.rates
    w_D, w_A = _coherence_decay(spec)
    Omega, g_D, g_A, gamma_bar = spec.Omega, spec.g_D, spec.g_A, spec.gamma_bar
    Delta, delta, kappa = spec.Delta, spec.delta, spec.kappa

    J = -2.0 * Omega * c_DA.imag
    J_D = 2.0 * g_D * c_aD.imag
    J_A = -2.0 * g_A * c_aA.imag
    mutual = gamma_bar * c_DA.real

    dp_D = pump - (pump + rates.gamma_tot_D) * p_D - J - J_D - mutual
    dp_A = -(pump + rates.gamma_tot_A) * p_A + J + J_A - mutual
    dn = -kappa * n + J_D - J_A
    dc_DA = (
        1j * Omega * (p_A - p_D)
        - (w_D + w_A - 1j * Delta) * c_DA
        + 1j * g_D * c_aA
        - 1j * g_A * c_aD.conjugate()
        - 0.5 * gamma_bar * (p_A + p_D)
    )
    dc_aD = (
        1j * g_D * (p_D - n)
        - (w_D + 0.5 * kappa - 1j * (delta - Delta)) * c_aD
        - 1j * Omega * c_aA
        + 1j * g_A * c_DA.conjugate()
        - 0.5 * gamma_bar * c_aA
    )
    dc_aA = (
        1j * g_A * (p_A - n)
        - (w_A + 0.5 * kappa - 1j * delta) * c_aA
        - 1j * Omega * c_aD
        + 1j * g_D * c_DA
        - 0.5 * gamma_bar * c_aD
    )
    return _pack(dp_D, dp_A, dn, dc_DA, dc_aD, dc_aA)


def build_moment_system(spec: SystemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Real drift matrix and source vector with x' = drift @ x + source.

    Raises:
        UnsupportedPumpError: coherent drive (use the master equation)
    """
    if spec.pump.mode is PumpMode.COHERENT:
        raise UnsupportedPumpError(spec.pump.mode.value, "build_moment_system")
    source = _rhs(spec, np.zeros(MOMENT_DIM))
    drift = np.empty((MOMENT_DIM, MOMENT_DIM))
    for k, unit in enumerate(np.eye(MOMENT_DIM)):
        drift[:, k] = _rhs(spec, unit) - source
    return drift, source


def moment_steady_state(spec: SystemSpec) -> MomentState:
    """Fixed point of the moment equations.

    Raises:
        UnsupportedPumpError: coherent drive
        UnstableError: some drift eigenvalue has Re >= 0 (pump too strong
            against gamma_tot - gamma_bar)
    """
    drift, source = build_moment_system(spec)
    max_real = float(eig_general(drift).real.max())
    if max_real >= 0.0:
        raise UnstableError(max_real, "moment drift")
    x = solve_linear(drift, -source).real
    p_D, p_A, n, c_DA, c_aD, c_aA = _unpack(x)
    _LOGGER.debug("Moment steady state p_D=%.6g p_A=%.6g n=%.6g", p_D, p_A, n)
    return MomentState(p_D=p_D, p_A=p_A, n=n, c_DA=c_DA, c_aD=c_aD, c_aA=c_aA)


def moment_stability_margin(spec: SystemSpec) -> float:
    """-max Re(lambda) of the moment drift; positive means a stable fixed point."""
    drift, _ = build_moment_system(spec)
    return float(-eig_general(drift).real.max())


def amplitude_drift(spec: SystemSpec) -> np.ndarray:
    """Complex drift of (<a>, <sigma_D>, <sigma_A>) linearised around the ground state.

    With g = 0 and Delta = 0 its eigenvalues have real parts
    -(gamma_tot -+ gamma_bar)/2 - Gamma/2 - gamma_phi (super/subradiant pair).
    The coherent drive only adds a source term and leaves this matrix alone.
    """
    w_D, w_A = _coherence_decay(spec)
    exchange = -1j * spec.Omega - 0.5 * spec.gamma_bar
    return np.array(
        [
            [-1j * spec.delta - 0.5 * spec.kappa, -1j * spec.g_D, -1j * spec.g_A],
            [-1j * spec.g_D, -1j * spec.Delta - w_D, exchange],
            [-1j * spec.g_A, exchange, -w_A],
        ],
        dtype=complex,
    )


def population_gradient_rate(spec: SystemSpec) -> float:
    """k in J = k (p_D - p_A), valid for g_D = g_A = 0 and gamma_bar = 0.

    k = 2 Omega^2 G / (G^2 + Delta^2), where G is the c_DA decay rate.
    """
    w_D, w_A = _coherence_decay(spec)
    decay = w_D + w_A
    return 2.0 * spec.Omega**2 * decay / (decay**2 + spec.Delta**2)


def adiabatic_cavity_rates(spec: SystemSpec) -> EffectiveRates:
    """Purcell-enhanced and cavity-mediated mutual decay rates (bad-cavity limit).

    The validity flag requires kappa >= ADIABATIC_RATIO * max(g_D, g_A).
    """
    rates, kappa = spec.rates, spec.kappa
    g_D, g_A = spec.g_D, spec.g_A
    half = 0.5 * kappa
    gamma_A_eff = rates.gamma_A + g_A**2 * kappa / (half**2 + spec.delta**2)
    gamma_D_eff = rates.gamma_D + g_D**2 * kappa / (half**2 + (spec.delta - spec.Delta) ** 2)
    gamma_AD_eff = g_D * g_A * kappa / half**2

    valid = kappa >= ADIABATIC_RATIO * max(abs(g_D), abs(g_A))
    if not valid:
        _LOGGER.warning(
            "Adiabatic elimination outside its validity: kappa=%.4g, max g=%.4g",
            kappa,
            max(abs(g_D), abs(g_A)),
        )
    return EffectiveRates(
        gamma_A_eff=gamma_A_eff,
        gamma_D_eff=gamma_D_eff,
        gamma_AD_eff=gamma_AD_eff,
        cooperativity_A=4.0 * g_A**2 / (kappa * rates.gamma_A),
        cooperativity_D=4.0 * g_D**2 / (kappa * rates.gamma_D),
        adiabatic_valid=valid,
    )
