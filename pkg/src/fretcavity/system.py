"""Donor-acceptor-cavity Hamiltonian and Lindblad channels.

Subsystem order is fixed: donor (2) x acceptor (2) x cavity (n_cav + 1),
local qubit basis (|g>, |e>). The incoherent/undriven Hamiltonian is written
in the frame rotating at the acceptor frequency; the coherent drive uses the
laser frame, which shifts every bare frequency by -omega_L.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .const import ACCEPTOR, CAVITY, DONOR
from .exceptions import UnphysicalMutualDecayError
from .geometry import dipole_shift, mutual_decay
from .models import (
    CollectiveDissipator,
    Dissipator,
    DissipatorList,
    EmitterRates,
    GeometrySpec,
    HilbertLayout,
    OperatorSet,
    PumpMode,
    SystemSpec,
)
from .operators import dagger, embed, lowering

_LOGGER = logging.getLogger(__name__)


def build_operators(spec: SystemSpec) -> OperatorSet:
    """sigma_D, sigma_A and a on the composite space of ``spec``."""
    layout = spec.layout
    return OperatorSet(
        sigma_D=embed(lowering(2), DONOR, layout),
        sigma_A=embed(lowering(2), ACCEPTOR, layout),
        a=embed(lowering(spec.n_cav + 1), CAVITY, layout),
        layout=layout,
    )


def build_hamiltonian(spec: SystemSpec, ops: OperatorSet) -> np.ndarray:
    """Hermitian system Hamiltonian (rotating frame set by the pump mode)."""
    sd, sa, a = ops.sigma_D, ops.sigma_A, ops.a
    sd_dag, sa_dag, a_dag = dagger(sd), dagger(sa), dagger(a)

    donor, acceptor, cavity = spec.Delta, 0.0, spec.delta
    if spec.pump.mode is PumpMode.COHERENT:
        donor -= spec.pump.omega_L
        acceptor -= spec.pump.omega_L
        cavity -= spec.pump.omega_L

    H = (
        donor * sd_dag @ sd
        + acceptor * sa_dag @ sa
        + cavity * a_dag @ a
        + spec.Omega * (sd_dag @ sa + sa_dag @ sd)
        + spec.g_D * (sd_dag @ a + a_dag @ sd)
        + spec.g_A * (sa_dag @ a + a_dag @ sa)
    )
    if spec.pump.mode is PumpMode.COHERENT:
        H = H + spec.pump.eta * (sd + sd_dag)
    return H


def build_dissipators(spec: SystemSpec, ops: OperatorSet) -> DissipatorList:
    """All Lindblad channels of ``spec``.

    Dephasing uses sigma^z at rate gamma_phi/2, so each single-emitter
    coherence dephases at gamma_phi and <sigma_D^dag sigma_A> at 2 gamma_phi.

    Raises:
        UnphysicalMutualDecayError: |gamma_bar| > sqrt(gamma_D gamma_A)
    """
    rates = spec.rates
    bound = math.sqrt(rates.gamma_D * rates.gamma_A)
    if abs(spec.gamma_bar) > bound * (1.0 + 1e-12):
        raise UnphysicalMutualDecayError(spec.gamma_bar, bound)

    sd, sa = ops.sigma_D, ops.sigma_A
    candidates = [
        Dissipator(rate=rates.gamma_tot_D, collapse=sd, label="donor decay"),
        Dissipator(rate=rates.gamma_tot_A, collapse=sa, label="acceptor decay"),
        Dissipator(rate=rates.gamma_phi / 2, collapse=ops.sigma_z(sd), label="donor dephasing"),
        Dissipator(rate=rates.gamma_phi / 2, collapse=ops.sigma_z(sa), label="acceptor dephasing"),
        Dissipator(rate=spec.kappa, collapse=ops.a, label="cavity decay"),
    ]
    if spec.pump.mode is PumpMode.INCOHERENT:
        candidates += [
            Dissipator(rate=spec.pump.Gamma, collapse=dagger(sd), label="donor pump"),
            Dissipator(rate=spec.pump.Gamma, collapse=sa, label="acceptor drain"),
        ]
    entries = tuple(d for d in candidates if d.rate > 0.0)

    collective = None
    if spec.gamma_bar != 0.0:
        collective = CollectiveDissipator(gamma_bar=spec.gamma_bar, sigma_D=sd, sigma_A=sa)
    _LOGGER.debug(
        "Built %d dissipators%s", len(entries), " + collective" if collective else ""
    )
    return DissipatorList(entries=entries, collective=collective)


def spec_from_geometry(
    geom: GeometrySpec,
    rates: EmitterRates | None = None,
    collective: bool = True,
    **fields: object,
) -> SystemSpec:
    """SystemSpec with Omega and gamma_bar taken from the emitter geometry.

    ``collective=False`` forces gamma_bar = 0 (independent decay).
    """
    rates = rates or EmitterRates()
    omega = dipole_shift(geom, rates)
    gamma_bar = mutual_decay(geom, rates) if collective else 0.0
    return SystemSpec(Omega=omega, gamma_bar=gamma_bar, rates=rates, **fields)


def three_level_pump_model(
    eta: float,
    gamma_ie: float,
    gamma_ig: float = 0.0,
    gamma_e: float = 1.0,
    gamma_eg: float = 0.0,
) -> tuple[np.ndarray, DissipatorList, HilbertLayout]:
    """Donor ladder (g, e, i) driven g <-> i and relaxing i -> e.

    Returns the Hamiltonian, channels and layout. ``gamma_eg`` dephases the
    e-g and e-i coherences at gamma_eg/2 on top of the decay ``gamma_e``.
    """
    layout = HilbertLayout(subsystem_dims=(3,))
    g, e, i = np.eye(3, dtype=complex)

    def ket_bra(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.outer(x, y.conj())

    H = eta * (ket_bra(i, g) + ket_bra(g, i))
    candidates = [
        Dissipator(rate=gamma_ie, collapse=ket_bra(e, i), label="i -> e"),
        Dissipator(rate=gamma_ig, collapse=ket_bra(g, i), label="i -> g"),
        Dissipator(rate=gamma_e, collapse=ket_bra(g, e), label="e -> g"),
        Dissipator(rate=gamma_eg, collapse=ket_bra(e, e), label="e dephasing"),
    ]
    entries = tuple(d for d in candidates if d.rate > 0.0)
    return H, DissipatorList(entries=entries), layout


def two_level_pump_model(
    Gamma: float, gamma_e: float = 1.0
) -> tuple[np.ndarray, DissipatorList, HilbertLayout]:
    """Single emitter with incoherent pump Gamma and decay gamma_e."""
    layout = HilbertLayout(subsystem_dims=(2,))
    sigma = lowering(2)
    entries = tuple(
        d
        for d in (
            Dissipator(rate=Gamma, collapse=dagger(sigma), label="pump"),
            Dissipator(rate=gamma_e, collapse=sigma, label="decay"),
        )
        if d.rate > 0.0
    )
    return np.zeros((2, 2), dtype=complex), DissipatorList(entries=entries), layout

