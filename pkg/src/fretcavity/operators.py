"""Dense complex matrix toolkit for small composite Hilbert spaces.

Thin, checked wrappers around numpy/scipy LAPACK routines. Every function
is pure; inputs are never modified.
"""

from __future__ import annotations

import logging
import warnings
from collections.abc import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .const import EIG_HERMITIAN_TOL, EIG_RESIDUAL_TOL, SOLVE_RESIDUAL_TOL
from .exceptions import (
    DimensionMismatchError,
    NoConvergenceError,
    NonHermitianError,
    SingularMatrixError,
)
from .models import DensityMatrix, HilbertLayout

_LOGGER = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


def lowering(dim: int = 2) -> ComplexMatrix:
    """Annihilation operator on a truncated ladder; dim=2 gives |g><e|."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors: Iterable[ComplexMatrix]) -> ComplexMatrix:
    result = np.eye(1, dtype=complex)
    for factor in factors:
        result = kron(result, factor)
    return result


def embed(op: ComplexMatrix, index: int, layout: HilbertLayout) -> ComplexMatrix:
    """Place a local operator on subsystem ``index``, identity elsewhere."""
    factors = [
        op if i == index else np.eye(d, dtype=complex)
        for i, d in enumerate(layout.subsystem_dims)
    ]
    return kron_all(factors)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return np.asarray(a).conj().T


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return a @ b - b @ a


def eig_hermitian(a: ComplexMatrix) -> tuple[np.ndarray, ComplexMatrix]:
    """Ascending eigenvalues and orthonormal eigenvector columns.

    Raises:
        NonHermitianError: max|A - A^H| exceeds EIG_HERMITIAN_TOL
    """
    a = np.asarray(a, dtype=complex)
    deviation = float(np.max(np.abs(a - a.conj().T), initial=0.0))
    if deviation > EIG_HERMITIAN_TOL:
        raise NonHermitianError(deviation, EIG_HERMITIAN_TOL)
    try:
        values, vectors = scipy.linalg.eigh(0.5 * (a + a.conj().T))
    except scipy.linalg.LinAlgError as err:
        raise NoConvergenceError(f"eigh failed: {err}") from err
    residual = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    if residual.size and residual.max() > EIG_RESIDUAL_TOL * max(1.0, np.abs(values).max()):
        _LOGGER.warning("eig_hermitian residual %.3e above tolerance", residual.max())
    return values, vectors


def eig_general(a: ComplexMatrix) -> np.ndarray:
    """Eigenvalues of a general square matrix.

    Raises:
        DimensionMismatchError: matrix is not square
        NoConvergenceError: LAPACK iteration failed
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("square matrix", a.shape)
    try:
        return scipy.linalg.eigvals(a)
    except scipy.linalg.LinAlgError as err:
        raise NoConvergenceError(f"eigvals failed: {err}") from err


def eig_near(a: ComplexMatrix, k: int, sigma: complex) -> np.ndarray:
    """The ``k`` eigenvalues of a square matrix closest to ``sigma``.

    Uses ARPACK in shift-invert mode on a sparse copy; matrices too small
    for ARPACK (k >= dim - 1) fall back to the dense spectrum.

    Raises:
        DimensionMismatchError: matrix is not square
        NoConvergenceError: ARPACK did not converge, or sigma is an eigenvalue
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("square matrix", a.shape)
    if k >= a.shape[0] - 1:
        values = eig_general(a)
        return values[np.argsort(np.abs(values - sigma))][:k]
    try:
        values = scipy.sparse.linalg.eigs(
            scipy.sparse.csc_matrix(a), k=k, sigma=sigma, return_eigenvectors=False
        )
    except scipy.sparse.linalg.ArpackNoConvergence as err:
        raise NoConvergenceError(f"eigs failed: {err}") from err
    except RuntimeError as err:
        raise NoConvergenceError(f"shift-invert factorisation failed: {err}") from err
    return values[np.argsort(np.abs(values - sigma))]


def solve_linear(a: ComplexMatrix, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by LU, rejecting singular or ill-conditioned systems.

    The residual is checked in backward-error form,
    ||Ax - b|| <= tol * (||A|| ||x|| + ||b||).

    Raises:
        SingularMatrixError: A is singular, ill-conditioned, or the
            residual check fails
    """
    a = np.asarray(a)
    b = np.asarray(b)
    dim = a.shape[0]
    if a.ndim != 2 or a.shape[1] != dim or b.shape[0] != dim:
        raise DimensionMismatchError((dim, dim), (a.shape, b.shape), "linear system")
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            x = scipy.linalg.solve(a, b)
        except scipy.linalg.LinAlgWarning as err:
            raise SingularMatrixError(dim, "Matrix is ill-conditioned") from err
        except scipy.linalg.LinAlgError as err:
            raise SingularMatrixError(dim) from err
    scale = np.linalg.norm(a, 1) * np.linalg.norm(x) + np.linalg.norm(b)
    residual = np.linalg.norm(a @ x - b)
    if scale > 0 and residual > SOLVE_RESIDUAL_TOL * scale:
        raise SingularMatrixError(dim, f"Residual {residual:.3e} too large")
    return x


def partial_trace(
    rho: DensityMatrix, layout: HilbertLayout, keep: Sequence[int]
) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep`` (kept in layout order).

    Raises:
        DimensionMismatchError: rho does not live on ``layout``
    """
    dims = layout.subsystem_dims
    if rho.matrix.shape != (layout.total_dim, layout.total_dim):
        raise DimensionMismatchError(layout.total_dim, rho.matrix.shape[0], "rho")
    keep = sorted(set(keep))
    n = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    # einsum labels: row index i, column index n + i; traced ones share labels
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(tensor, row + col, out)
    kept_dims = tuple(dims[i] for i in keep)
    dim = int(np.prod(kept_dims))
    return DensityMatrix(
        matrix=reduced.reshape(dim, dim),
        layout=HilbertLayout(subsystem_dims=kept_dims),
    )


def expectation(op: ComplexMatrix, rho: DensityMatrix) -> complex:
    """Tr(O rho).

    Raises:
        DimensionMismatchError: shapes differ
    """
    op = np.asarray(op)
    if op.shape != rho.matrix.shape:
        raise DimensionMismatchError(rho.matrix.shape, op.shape, "observable")
    return complex(np.einsum("ij,ji->", op, rho.matrix))
