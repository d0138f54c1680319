"""Liouvillian construction, steady states, and time evolution.

Density matrices are vectorised row-major (``rho.reshape(-1)``), so
vec(A rho B) = (A kron B^T) vec(rho).
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .const import (
    SPARSE_SHIFT,
    SPARSE_SPECTRUM_MODES,
    SPECTRUM_CHECK_MAX_DIM,
    SPECTRUM_FLOOR,
    TRACE_TOL,
    TRAJECTORY_TRACE_TOL,
    ZERO_MODE_TOL,
)
from .exceptions import (
    DimensionMismatchError,
    NonUniqueSteadyStateError,
    SingularMatrixError,
    StepUnstableError,
    UnstableError,
)
from .models import (
    CollectiveDissipator,
    DensityMatrix,
    DissipatorList,
    HilbertLayout,
    Liouvillian,
    Trajectory,
)
from .operators import dagger, eig_general, eig_near, kron, solve_linear

_LOGGER = logging.getLogger(__name__)


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1)


def unvectorize(vec: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vec).reshape(dim, dim)


def trace_row(dim: int) -> np.ndarray:
    """Row vector t with t . vec(rho) = Tr(rho)."""
    return np.eye(dim, dtype=complex).reshape(-1)


def _hamiltonian_part(H: np.ndarray) -> np.ndarray:
    eye = np.eye(H.shape[0], dtype=complex)
    return -1j * (kron(H, eye) - kron(eye, H.T))


def _lindblad_part(rate: float, collapse: np.ndarray) -> np.ndarray:
    eye = np.eye(collapse.shape[0], dtype=complex)
    jump = dagger(collapse) @ collapse
    return rate * (
        kron(collapse, collapse.conj())
        - 0.5 * kron(jump, eye)
        - 0.5 * kron(eye, jump.T)
    )


def _collective_part(term: CollectiveDissipator) -> np.ndarray:
    """gamma_bar [sD rho sA^+ + sA rho sD^+ - 1/2 {sA^+ sD + sD^+ sA, rho}]."""
    sd, sa = term.sigma_D, term.sigma_A
    eye = np.eye(sd.shape[0], dtype=complex)
    cross = dagger(sa) @ sd + dagger(sd) @ sa
    return term.gamma_bar * (
        kron(sd, sa.conj())
        + kron(sa, sd.conj())
        - 0.5 * kron(cross, eye)
        - 0.5 * kron(eye, cross.T)
    )


def liouvillian(
    H: np.ndarray, diss: DissipatorList, layout: HilbertLayout | None = None
) -> Liouvillian:
    """Build L = -i(H x I - I x H^T) + sum of dissipators.

    ``layout`` defaults to a single subsystem of dimension ``H.shape[0]``.

    Raises:
        DimensionMismatchError: H is not square, or a collapse operator
            does not match H
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatchError("square Hamiltonian", H.shape, "H")
    dim = H.shape[0]
    if layout is None:
        layout = HilbertLayout(subsystem_dims=(dim,))
    if layout.total_dim != dim:
        raise DimensionMismatchError(layout.total_dim, dim, "Hamiltonian")

    matrix = _hamiltonian_part(H)
    for entry in diss.entries:
        if entry.collapse.shape != H.shape:
            raise DimensionMismatchError(H.shape, entry.collapse.shape, entry.label)
        matrix = matrix + _lindblad_part(entry.rate, entry.collapse)
    if diss.collective is not None:
        if diss.collective.sigma_D.shape != H.shape:
            raise DimensionMismatchError(
                H.shape, diss.collective.sigma_D.shape, "collective dissipator"
            )
        matrix = matrix + _collective_part(diss.collective)

    _LOGGER.debug("Liouvillian of dimension %d (%d channels)", dim * dim, len(diss.entries))
    return Liouvillian(matrix=matrix, layout=layout)


def trace_defect(L: Liouvillian) -> float:
    """max|Tr o L|; zero for a trace-preserving generator."""
    row = trace_row(L.layout.total_dim)
    return float(np.max(np.abs(row @ L.matrix)))


def _spectral_scale(eigenvalues: np.ndarray) -> float:
    scale = float(np.max(np.abs(eigenvalues), initial=0.0))
    return scale if scale > 0.0 else 1.0


def _near_zero_spectrum(L: Liouvillian) -> tuple[np.ndarray, float]:
    """Eigenvalues to inspect and their scale: all of them, or the few nearest zero."""
    if L.dim <= SPECTRUM_CHECK_MAX_DIM:
        eigenvalues = eig_general(L.matrix)
        return eigenvalues, _spectral_scale(eigenvalues)
    scale = float(np.linalg.norm(L.matrix, 1)) or 1.0
    _LOGGER.debug("Sparse spectrum check of a %d-dimensional Liouvillian", L.dim)
    return eig_near(L.matrix, SPARSE_SPECTRUM_MODES, SPARSE_SHIFT * scale), scale


def check_spectrum(L: Liouvillian) -> int:
    """Count stationary modes; raise if the kernel is degenerate or L is unstable.

    Above SPECTRUM_CHECK_MAX_DIM only the SPARSE_SPECTRUM_MODES eigenvalues
    nearest zero are inspected.

    Raises:
        NonUniqueSteadyStateError: more than one eigenvalue with Re ~ 0
        UnstableError: an inspected eigenvalue has positive real part
    """
    eigenvalues, scale = _near_zero_spectrum(L)
    zero_modes = int(np.sum(np.abs(eigenvalues.real) <= ZERO_MODE_TOL * scale))
    if zero_modes > 1:
        raise NonUniqueSteadyStateError(zero_modes)
    max_real = float(eigenvalues.real.max())
    if max_real > ZERO_MODE_TOL * scale:
        raise UnstableError(max_real, "Liouvillian")
    return zero_modes


def steady_state(L: Liouvillian, check: bool = True) -> DensityMatrix:
    """Solve L vec(rho) = 0 with Tr(rho) = 1.

    Row 0 of L (the d/dt rho_00 equation) is replaced by the trace
    constraint. With ``check`` the spectrum is inspected first (see
    check_spectrum).

    Raises:
        NonUniqueSteadyStateError: the kernel of L is degenerate
        UnstableError: L has an eigenvalue with positive real part
    """
    dim = L.layout.total_dim
    if check:
        check_spectrum(L)

    system = np.array(L.matrix, dtype=complex)
    system[0, :] = trace_row(dim)
    rhs = np.zeros(L.dim, dtype=complex)
    rhs[0] = 1.0
    try:
        solution = solve_linear(system, rhs)
    except SingularMatrixError as err:
        _LOGGER.debug("Steady-state solve failed: %s", err.message)
        raise NonUniqueSteadyStateError(zero_modes=2) from err

    rho = unvectorize(solution, dim)
    rho = 0.5 * (rho + dagger(rho))
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > TRACE_TOL:
        _LOGGER.debug("Renormalising steady state with trace %.12g", trace)
    return DensityMatrix(matrix=rho / trace, layout=L.layout)


def solve_steady(
    H: np.ndarray, diss: DissipatorList, layout: HilbertLayout | None = None
) -> DensityMatrix:
    """Shortcut for steady_state(liouvillian(H, diss, layout))."""
    return steady_state(liouvillian(H, diss, layout))


def _spectral_radius(L: Liouvillian) -> float:
    if L.dim <= SPECTRUM_CHECK_MAX_DIM:
        return float(np.max(np.abs(eig_general(L.matrix)), initial=0.0))
    return float(np.linalg.norm(L.matrix, 1))


def evolve(
    rho0: DensityMatrix,
    L: Liouvillian,
    t_final: float,
    dt: float,
    save_every: int = 1,
) -> Trajectory:
    """Fixed-step RK4 integration of vec(rho)' = L vec(rho) from t = 0.

    The step is shrunk so that an integer number of steps lands on
    ``t_final``. Every saved snapshot is Hermitised and renormalised.

    Raises:
        DimensionMismatchError: rho0 and L live on different spaces
        StepUnstableError: dt <= 0, dt times the spectral radius >= 1, or
            the trace drifts by more than TRAJECTORY_TRACE_TOL
    """
    dim = L.layout.total_dim
    if rho0.matrix.shape != (dim, dim):
        raise DimensionMismatchError((dim, dim), rho0.matrix.shape, "initial state")
    if dt <= 0.0 or t_final < 0.0:
        raise StepUnstableError(f"need dt > 0 and t_final >= 0 (dt={dt}, t_final={t_final})")
    radius = _spectral_radius(L)
    if dt * radius >= 1.0:
        raise StepUnstableError(f"dt * spectral radius = {dt * radius:.3g} >= 1")

    n_steps = max(1, math.ceil(t_final / dt - 1e-12)) if t_final > 0 else 0
    h = t_final / n_steps if n_steps else 0.0
    generator = L.matrix
    tr_row = trace_row(dim)

    vec = vectorize(rho0.matrix)
    times = [0.0]
    states = [rho0]
    for step in range(1, n_steps + 1):
        k1 = generator @ vec
        k2 = generator @ (vec + 0.5 * h * k1)
        k3 = generator @ (vec + 0.5 * h * k2)
        k4 = generator @ (vec + h * k3)
        vec = vec + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        trace = complex(tr_row @ vec)
        if abs(trace - 1.0) > TRAJECTORY_TRACE_TOL:
            raise StepUnstableError(f"trace drifted to {trace:.9g} at t={step * h:.6g}")
        if step % save_every == 0 or step == n_steps:
            rho = unvectorize(vec, dim)
            rho = 0.5 * (rho + dagger(rho)) / trace.real
            vec = vectorize(rho)
            times.append(step * h)
            states.append(DensityMatrix(matrix=rho, layout=L.layout))

    _LOGGER.debug("Evolved %d steps of %.4g to t=%.4g", n_steps, h, t_final)
    return Trajectory(times=tuple(times), states=tuple(states))


def stability_margin(L: Liouvillian) -> float:
    """-max Re(lambda) over the non-stationary spectrum of L.

    Positive values are the relaxation gap; values near or below zero flag
    a closing subradiant gap or an over-pumped system.
    """
    eigenvalues = eig_general(L.matrix)
    scale = _spectral_scale(eigenvalues)
    relaxing = eigenvalues[np.abs(eigenvalues) > SPECTRUM_FLOOR * scale]
    if relaxing.size == 0:
        return math.inf
    return float(-relaxing.real.max())
