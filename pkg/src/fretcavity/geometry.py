"""Vacuum-mediated dipole-dipole couplings Omega(d) and gamma_bar(d)."""

from __future__ import annotations

import logging
import math

import numpy as np

from .exceptions import UnphysicalMutualDecayError, ZeroSeparationError
from .models import EmitterRates, GeometrySpec, OrientationPreset

_LOGGER = logging.getLogger(__name__)

PARALLEL = OrientationPreset.PARALLEL
PERPENDICULAR = OrientationPreset.PERPENDICULAR

SMALL_KD = 1e-2


def _projections(geom: GeometrySpec) -> tuple[float, float]:
    """(mu_D.mu_A - (mu_D.d)(mu_A.d), mu_D.mu_A - 3(mu_D.d)(mu_A.d))."""
    mu_d = np.asarray(geom.mu_D)
    mu_a = np.asarray(geom.mu_A)
    d_hat = np.asarray(geom.d_hat)
    dot = float(mu_d @ mu_a)
    axial = float(mu_d @ d_hat) * float(mu_a @ d_hat)
    return dot - axial, dot - 3.0 * axial


def dipole_shift(geom: GeometrySpec, rates: EmitterRates) -> float:
    """Coherent dipole-dipole energy shift Omega.

    Raises:
        ZeroSeparationError: d = 0
    """
    kd = geom.kd
    if kd <= 0.0:
        raise ZeroSeparationError()
    transverse, longitudinal = _projections(geom)
    prefactor = 1.5 * math.sqrt(rates.gamma_D * rates.gamma_A)
    far = -transverse * math.cos(kd) / kd
    near = longitudinal * (math.sin(kd) / kd**2 + math.cos(kd) / kd**3)
    return prefactor * (far + near)


def mutual_decay(geom: GeometrySpec, rates: EmitterRates) -> float:
    """Incoherent mutual decay gamma_bar, with the analytic d -> 0 limit."""
    prefactor = 1.5 * math.sqrt(rates.gamma_D * rates.gamma_A)
    kd = geom.kd
    if kd == 0.0:
        # limit of the bracket is (2/3) mu_D.mu_A
        return math.sqrt(rates.gamma_D * rates.gamma_A) * float(
            np.dot(geom.mu_D, geom.mu_A)
        )
    transverse, longitudinal = _projections(geom)
    if kd < SMALL_KD:
        # Taylor series; the closed form cancels catastrophically here
        x2 = kd * kd
        far = transverse * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
        near = longitudinal * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0)
    else:
        far = transverse * math.sin(kd) / kd
        near = longitudinal * (math.cos(kd) / kd**2 - math.sin(kd) / kd**3)
    return prefactor * (far + near)


def collective_rates(gamma: float, gamma_bar: float) -> tuple[float, float]:
    """Superradiant and subradiant channel rates (gamma + gamma_bar, gamma - gamma_bar).

    Raises:
        UnphysicalMutualDecayError: |gamma_bar| > gamma
    """
    if abs(gamma_bar) > gamma * (1.0 + 1e-12):
        raise UnphysicalMutualDecayError(gamma_bar, gamma)
    return gamma + gamma_bar, max(gamma - gamma_bar, 0.0)


def system_couplings(geom: GeometrySpec, rates: EmitterRates) -> tuple[float, float]:
    """(Omega, gamma_bar) for a geometry; Omega is undefined at d = 0."""
    omega = dipole_shift(geom, rates)
    gamma_bar = mutual_decay(geom, rates)
    _LOGGER.debug(
        "Couplings at kd=%.4g: Omega=%.6g gamma_bar=%.6g", geom.kd, omega, gamma_bar
    )
    return omega, gamma_bar
