"""Master-equation solver for one SystemSpec."""

from __future__ import annotations

import logging
from functools import cached_property

import numpy as np

from .const import CONVERGENCE_ATOL, CONVERGENCE_RTOL, MAX_N_CAV
from .master_equation import liouvillian, stability_margin, steady_state
from .models import (
    DensityMatrix,
    DissipatorList,
    FlowReport,
    Liouvillian,
    MomentState,
    Normalization,
    OperatorSet,
    SystemSpec,
)
from .observables import FLOW_FIELDS, concurrence, energy_flows, moments_from_state, normalize
from .system import build_dissipators, build_hamiltonian, build_operators

_LOGGER = logging.getLogger(__name__)

REPORT_FIELDS = FLOW_FIELDS + ("p_D", "p_A", "n")


class MasterEquationSolver:
    """Builds and caches the operators, Liouvillian and steady state of a spec.

    Example:
        >>> solver = MasterEquationSolver(SystemSpec(Omega=2.0, pump={"Gamma": 1e-3}))
        >>> report = solver.flows(Normalization.PER_GAMMA)
        >>> print(f"J/Gamma = {report.J:.4f}")
    """

    def __init__(self, spec: SystemSpec, check: bool = True):
        """Initialize the solver.

        Args:
            spec: System parameters, including the photon cutoff n_cav
            check: Inspect the Liouvillian spectrum before solving
        """
        self.spec = spec
        self.check = check
        _LOGGER.debug("MasterEquationSolver for n_cav=%d", spec.n_cav)

    @cached_property
    def operators(self) -> OperatorSet:
        return build_operators(self.spec)

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        return build_hamiltonian(self.spec, self.operators)

    @cached_property
    def dissipators(self) -> DissipatorList:
        return build_dissipators(self.spec, self.operators)

    @cached_property
    def liouvillian(self) -> Liouvillian:
        return liouvillian(self.hamiltonian, self.dissipators, self.spec.layout)

    @cached_property
    def state(self) -> DensityMatrix:
        """Steady state.

        Raises:
            NonUniqueSteadyStateError: degenerate kernel
            UnstableError: growing mode
        """
        return steady_state(self.liouvillian, check=self.check)

    def flows(self, normalization: Normalization = Normalization.RAW) -> FlowReport:
        """Energy flows and populations of the steady state."""
        report = energy_flows(self.state, self.spec, self.operators)
        return normalize(report, self.spec, normalization)

    def concurrence(self) -> float:
        return concurrence(self.state)

    def moments(self) -> MomentState:
        return moments_from_state(self.state, self.operators)

    def stability_margin(self) -> float:
        return stability_margin(self.liouvillian)

    def with_n_cav(self, n_cav: int) -> MasterEquationSolver:
        return MasterEquationSolver(self.spec.replace(n_cav=n_cav), check=self.check)

    def converged_flows(
        self,
        normalization: Normalization = Normalization.RAW,
        rtol: float = CONVERGENCE_RTOL,
        max_n_cav: int = MAX_N_CAV,
    ) -> tuple[FlowReport, float, int]:
        """Flows and concurrence, doubling n_cav until they settle.

        Every reported observable must change by less than ``rtol``
        (relative, with an absolute floor CONVERGENCE_ATOL) between two
        successive cutoffs. Free-space specs (g_D = g_A = 0) never populate
        the cavity and are returned at the current cutoff.

        Returns:
            (report, concurrence, n_cav used)
        """
        solver = self
        report, conc = solver.flows(normalization), solver.concurrence()
        if self.spec.g_D == 0.0 and self.spec.g_A == 0.0:
            return report, conc, self.spec.n_cav

        while solver.spec.n_cav < max_n_cav:
            bigger = solver.with_n_cav(min(2 * solver.spec.n_cav, max_n_cav))
            new_report, new_conc = bigger.flows(normalization), bigger.concurrence()
            old = np.array([getattr(report, f) for f in REPORT_FIELDS] + [conc])
            new = np.array([getattr(new_report, f) for f in REPORT_FIELDS] + [new_conc])
            solver, report, conc = bigger, new_report, new_conc
            if np.all(np.abs(new - old) <= rtol * np.maximum(np.abs(new), np.abs(old)) + CONVERGENCE_ATOL):
                _LOGGER.debug("Cavity cutoff converged at n_cav=%d", solver.spec.n_cav)
                return report, conc, solver.spec.n_cav

        _LOGGER.warning(
            "Cavity cutoff not converged at n_cav=%d (rtol=%g)", solver.spec.n_cav, rtol
        )
        return report, conc, solver.spec.n_cav
