"""Energy flows, populations and concurrence."""

from __future__ import annotations

import logging

import numpy as np

from .const import ACCEPTOR, CONCURRENCE_CLAMP, DONOR
from .exceptions import ConfigError, DimensionMismatchError, NonPhysicalStateError
from .models import (
    DensityMatrix,
    FlowReport,
    HilbertLayout,
    MomentState,
    Normalization,
    OperatorSet,
    SystemSpec,
)
from .operators import dagger, eig_general, expectation, kron, partial_trace

_LOGGER = logging.getLogger(__name__)

SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)

FLOW_FIELDS = ("J", "J_D", "J_A", "J_r")


def energy_flows(rho: DensityMatrix, spec: SystemSpec, ops: OperatorSet) -> FlowReport:
    """J = 2 Omega Im<sD sA^+>, J_D = 2 g_D Im<sD a^+>, J_A = 2 g_A Im<a sA^+>.

    Raises:
        DimensionMismatchError: rho and ops live on different spaces
    """
    sd, sa, a = ops.sigma_D, ops.sigma_A, ops.a
    donor_acceptor = expectation(sd @ dagger(sa), rho)
    return FlowReport(
        J=2.0 * spec.Omega * donor_acceptor.imag,
        J_D=2.0 * spec.g_D * expectation(sd @ dagger(a), rho).imag,
        J_A=2.0 * spec.g_A * expectation(a @ dagger(sa), rho).imag,
        J_r=2.0 * spec.Omega * donor_acceptor.real,
        p_D=expectation(dagger(sd) @ sd, rho).real,
        p_A=expectation(dagger(sa) @ sa, rho).real,
        n=expectation(dagger(a) @ a, rho).real,
    )


def moments_from_state(rho: DensityMatrix, ops: OperatorSet) -> MomentState:
    """The six second-order moments of a density matrix."""
    sd, sa, a = ops.sigma_D, ops.sigma_A, ops.a
    return MomentState(
        p_D=expectation(dagger(sd) @ sd, rho).real,
        p_A=expectation(dagger(sa) @ sa, rho).real,
        n=expectation(dagger(a) @ a, rho).real,
        c_DA=expectation(dagger(sd) @ sa, rho),
        c_aD=expectation(dagger(a) @ sd, rho),
        c_aA=expectation(dagger(a) @ sa, rho),
    )


def flows_from_moments(state: MomentState, spec: SystemSpec) -> FlowReport:
    """FlowReport from the linearised moments, same sign conventions as energy_flows."""
    return FlowReport(
        J=-2.0 * spec.Omega * state.c_DA.imag,
        J_D=2.0 * spec.g_D * state.c_aD.imag,
        J_A=-2.0 * spec.g_A * state.c_aA.imag,
        J_r=2.0 * spec.Omega * state.c_DA.real,
        p_D=state.p_D,
        p_A=state.p_A,
        n=state.n,
    )


def normalize(report: FlowReport, spec: SystemSpec, by: Normalization) -> FlowReport:
    """Divide the four flows by Gamma or eta; populations are left alone.

    Raises:
        ConfigError: the divisor is zero
    """
    if by is report.normalization:
        return report
    if report.normalization is not Normalization.RAW:
        raise ConfigError(f"Report is already normalised {report.normalization.value}")
    if by is Normalization.RAW:
        return report
    divisor = spec.pump.Gamma if by is Normalization.PER_GAMMA else spec.pump.eta
    if divisor == 0.0:
        raise ConfigError(f"Cannot normalise {by.value}: divisor is zero", key="normalize")
    scaled = {name: getattr(report, name) / divisor for name in FLOW_FIELDS}
    return report.model_copy(update={**scaled, "normalization": by})


def _donor_acceptor_state(rho: DensityMatrix, layout: HilbertLayout) -> np.ndarray:
    if rho.matrix.shape != (layout.total_dim, layout.total_dim):
        raise DimensionMismatchError(layout.total_dim, rho.matrix.shape[0], "rho")
    if layout.subsystem_dims == (2, 2):
        return rho.matrix
    if len(layout.subsystem_dims) < 2 or layout.subsystem_dims[:2] != (2, 2):
        raise DimensionMismatchError((2, 2), layout.subsystem_dims[:2], "donor-acceptor")
    return partial_trace(rho, layout, keep=(DONOR, ACCEPTOR)).matrix


def concurrence(rho: DensityMatrix, layout: HilbertLayout | None = None) -> float:
    """Two-qubit concurrence of the donor-acceptor state (cavity traced out).

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (sy x sy) rho* (sy x sy).

    Raises:
        NonPhysicalStateError: rho_DA has an eigenvalue of rho rho~ below -CONCURRENCE_CLAMP
    """
    layout = layout or rho.layout
    rho_da = _donor_acceptor_state(rho, layout)
    flipped = SPIN_FLIP @ rho_da.conj() @ SPIN_FLIP
    eigenvalues = eig_general(rho_da @ flipped).real
    if eigenvalues.min() < -CONCURRENCE_CLAMP:
        raise NonPhysicalStateError(
            f"rho * rho_tilde has eigenvalue {eigenvalues.min():.3e}"
        )
    roots = np.sort(np.sqrt(np.clip(eigenvalues, 0.0, None)))[::-1]
    value = roots[0] - roots[1:].sum()
    return float(min(max(value, 0.0), 1.0))
