"""Tests for the dense operator toolkit."""
import pytest
import numpy as np
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fretcavity.exceptions import (
    DimensionMismatchError,
    NonHermitianError,
    SingularMatrixError,
)
from fretcavity.models import DensityMatrix, HilbertLayout
from fretcavity.operators import (
    commutator,
    dagger,
    eig_general,
    eig_hermitian,
    eig_near,
    embed,
    expectation,
    kron,
    kron_all,
    lowering,
    partial_trace,
    solve_linear,
)


class TestLadderOperators:
    """Test lowering operators and embedding."""

    def test_qubit_lowering(self):
        """Test the qubit lowering operator maps |e> to |g>."""
        sigma = lowering(2)
        assert np.allclose(sigma, [[0, 1], [0, 0]])
        assert np.allclose(sigma @ np.array([0, 1]), [1, 0])

    def test_truncated_ladder_commutator(self):
        """Test [a, a^dag] = 1 below the cutoff."""
        a = lowering(6)
        c = commutator(a, dagger(a))
        assert np.allclose(np.diag(c)[:-1], 1.0)
        assert np.isclose(c[-1, -1], -5.0)

    def test_kron_dimensions(self):
        """Test Kronecker products multiply dimensions."""
        assert kron(np.eye(2), np.eye(3)).shape == (6, 6)
        assert kron_all([np.eye(2), np.eye(2), np.eye(4)]).shape == (16, 16)

    def test_embed_acts_on_one_factor(self):
        """Test embedded operators on different subsystems commute."""
        layout = HilbertLayout(subsystem_dims=(2, 2, 3))
        sd = embed(lowering(2), 0, layout)
        sa = embed(lowering(2), 1, layout)
        a = embed(lowering(3), 2, layout)
        assert sd.shape == (12, 12)
        assert np.allclose(commutator(sd, sa), 0.0)
        assert np.allclose(commutator(sd, dagger(a)), 0.0)


class TestEigenSolvers:
    """Test Hermitian and general eigensolvers."""

    def test_hermitian_eigenpairs(self, rng):
        """Test eigenvalues are ascending and vectors orthonormal."""
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        h = m + dagger(m)
        values, vectors = eig_hermitian(h)
        assert np.all(np.diff(values) >= 0)
        assert np.allclose(dagger(vectors) @ vectors, np.eye(5), atol=1e-12)
        assert np.allclose(h @ vectors, vectors * values, atol=1e-10)

    def test_random_hermitian_reconstruction(self, rng):
        """Test V diag(lambda) V^dag rebuilds 50 random Hermitian 8x8 matrices."""
        for _ in range(50):
            m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
            h = m + dagger(m)
            values, vectors = eig_hermitian(h)
            assert np.max(np.abs(vectors @ np.diag(values) @ dagger(vectors) - h)) < 1e-9

    def test_non_hermitian_rejected(self):
        """Test a clearly non-Hermitian matrix raises NonHermitianError."""
        with pytest.raises(NonHermitianError) as exc_info:
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert exc_info.value.deviation == pytest.approx(1.0)

    def test_general_eigenvalues(self):
        """Test eigenvalues of a non-normal matrix."""
        values = np.sort_complex(eig_general(np.array([[1.0, 5.0], [0.0, -2.0]])))
        assert np.allclose(values, [-2.0, 1.0])

    def test_eigenvalues_near_shift(self):
        """Test the eigenvalues closest to the shift come first."""
        a = np.diag(np.arange(1.0, 21.0)).astype(complex)
        assert np.allclose(eig_near(a, 3, 4.2), [4.0, 5.0, 3.0])

    def test_eigenvalues_near_shift_small_matrix(self):
        """Test matrices too small for ARPACK use the dense spectrum."""
        assert np.allclose(eig_near(np.diag([3.0, 1.0, 2.0]), 2, 0.0), [1.0, 2.0])

    def test_general_requires_square(self):
        """Test a non-square matrix raises DimensionMismatchError."""
        with pytest.raises(DimensionMismatchError):
            eig_general(np.ones((2, 3)))


class TestLinearSolve:
    """Test the checked linear solver."""

    def test_solve(self):
        """Test a well-conditioned complex system."""
        a = np.array([[2.0, 1j], [-1j, 3.0]])
        b = np.array([1.0, 2.0])
        assert np.allclose(a @ solve_linear(a, b), b)

    def test_random_well_conditioned(self, rng):
        """Test the residual check passes on 20 random well-conditioned 20x20 systems."""
        for _ in range(20):
            a = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20)) + 20.0 * np.eye(20)
            b = rng.normal(size=20) + 1j * rng.normal(size=20)
            x = solve_linear(a, b)
            assert np.linalg.norm(a @ x - b) < 1e-10 * np.linalg.norm(b)

    def test_singular_matrix(self):
        """Test a singular matrix raises SingularMatrixError."""
        with pytest.raises(SingularMatrixError):
            solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 0.0]))


class TestStateOperations:
    """Test partial trace and expectation values."""

    def test_partial_trace_of_product(self):
        """Test tracing out one factor of a product state recovers the other."""
        layout = HilbertLayout(subsystem_dims=(2, 3))
        left = np.array([[0.7, 0.2], [0.2, 0.3]])
        right = np.diag([0.5, 0.3, 0.2])
        rho = DensityMatrix(matrix=np.kron(left, right), layout=layout)

        reduced = partial_trace(rho, layout, keep=(0,))
        assert reduced.layout.subsystem_dims == (2,)
        assert np.allclose(reduced.matrix, left)
        assert np.allclose(partial_trace(rho, layout, keep=(1,)).matrix, right)

    def test_random_three_part_trace(self, rng):
        """Test every reduction of random donor x acceptor x cavity states keeps the trace."""
        layout = HilbertLayout(subsystem_dims=(2, 2, 3))
        for _ in range(20):
            m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
            mixed = m @ dagger(m)
            rho = DensityMatrix(matrix=mixed / np.trace(mixed).real, layout=layout)
            for keep in ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2)):
                reduced = partial_trace(rho, layout, keep=keep)
                assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)

    def test_partial_trace_of_bell_state(self, bell_state, qubit_layout):
        """Test one half of a Bell pair is maximally mixed."""
        reduced = partial_trace(bell_state, qubit_layout, keep=(1,))
        assert np.allclose(reduced.matrix, np.eye(2) / 2)

    def test_expectation(self, qubit_layout):
        """Test <n_D> on |eg>."""
        rho = DensityMatrix.from_ket([0, 0, 1, 0], qubit_layout)
        n_d = embed(dagger(lowering(2)) @ lowering(2), 0, qubit_layout)
        assert expectation(n_d, rho) == pytest.approx(1.0)

    def test_expectation_shape_mismatch(self, bell_state):
        """Test a wrong-sized observable raises DimensionMismatchError."""
        with pytest.raises(DimensionMismatchError):
            expectation(np.eye(3), bell_state)
