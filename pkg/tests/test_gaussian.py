"""
Tests for the Gaussian covariance core and symplectic gates
"""

import numpy as np
import pytest

from sqzkey.errors import InvalidArgumentError, InvalidStateError, NumericalDomainError
from sqzkey.gaussian import (
    CovMat,
    Symplectic,
    apply,
    beamsplitter,
    condition_heterodyne,
    condition_homodyne,
    condition_sequence,
    direct_sum,
    g_function,
    partial_trace,
    qnd_gate,
    rotation,
    squeezer,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    two_mode_squeezed_vacuum,
    vacuum_state,
    von_neumann_entropy,
)


class TestCovMat:
    def test_vacuum_is_identity(self):
        assert np.array_equal(vacuum_state(3).matrix, np.eye(6))

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidStateError):
            CovMat(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_uncertainty_violation(self):
        with pytest.raises(InvalidStateError):
            CovMat(np.diag([0.5, 0.5]))

    def test_squeezed_state_is_valid(self):
        gamma = CovMat(np.diag([0.25, 4.0]))
        assert symplectic_eigenvalues(gamma)[0] == pytest.approx(1.0)

    def test_rejects_odd_dimension(self):
        with pytest.raises(InvalidArgumentError):
            CovMat(np.eye(3))

    def test_matrix_is_read_only(self):
        gamma = vacuum_state(1)
        with pytest.raises(ValueError):
            gamma.matrix[0, 0] = 2.0

    def test_variances(self):
        gamma = direct_sum(thermal_state(2.0), CovMat(np.diag([0.5, 2.0])))
        assert gamma.variances(1) == (0.5, 2.0)


class TestSymplecticEigenvalues:
    def test_thermal(self):
        assert symplectic_eigenvalues(thermal_state(3.5))[0] == pytest.approx(3.5)

    def test_tmsv_is_pure(self):
        nu = symplectic_eigenvalues(two_mode_squeezed_vacuum(5.0))
        assert np.allclose(nu, [1.0, 1.0], atol=1e-9)

    def test_descending_order(self):
        gamma = direct_sum(thermal_state(1.5), thermal_state(4.0), thermal_state(2.0))
        assert np.allclose(symplectic_eigenvalues(gamma), [4.0, 2.0, 1.5])

    def test_invariant_under_symplectic(self):
        gamma = direct_sum(thermal_state(2.0), thermal_state(3.0))
        s = beamsplitter(0, 1, 0.3).compose(squeezer(0, 0.4, n_modes=2))
        assert np.allclose(symplectic_eigenvalues(apply(s, gamma)), [3.0, 2.0])

    def test_not_positive_definite(self):
        with pytest.raises(InvalidStateError):
            symplectic_eigenvalues(np.diag([1.0, -1.0]))


class TestEntropy:
    def test_g_of_one(self):
        assert g_function(1.0) == 0.0
        assert g_function(1.0 + 5e-10) == 0.0

    def test_g_of_three(self):
        assert g_function(3.0) == pytest.approx(2.0 * np.log2(2.0) - 1.0 * np.log2(1.0))

    def test_g_below_one(self):
        with pytest.raises(InvalidStateError):
            g_function(0.9)

    def test_pure_state_entropy(self):
        assert von_neumann_entropy(two_mode_squeezed_vacuum(7.0)) == pytest.approx(0.0, abs=1e-8)

    def test_entropy_additive(self):
        a, b = thermal_state(2.0), thermal_state(5.0)
        total = von_neumann_entropy(direct_sum(a, b))
        assert total == pytest.approx(von_neumann_entropy(a) + von_neumann_entropy(b))


class TestGates:
    def test_gates_are_symplectic(self):
        omega = symplectic_form(3)
        for s in (
            squeezer(1, 0.3, n_modes=3),
            beamsplitter(0, 2, 0.7, n_modes=3),
            rotation(2, 0.4, n_modes=3),
            qnd_gate(0, 1, 1.7, n_modes=3),
        ):
            assert np.allclose(s.matrix @ omega @ s.matrix.T, omega)

    def test_squeezer_on_vacuum(self):
        out = apply(squeezer(0, 0.25), vacuum_state(1))
        assert np.allclose(out.matrix, np.diag([0.25, 4.0]))

    def test_beamsplitter_mixes_thermal_and_vacuum(self):
        out = apply(beamsplitter(0, 1, 0.6), direct_sum(thermal_state(3.0), vacuum_state(1)))
        assert out.variances(0) == pytest.approx((0.6 * 3.0 + 0.4, 0.6 * 3.0 + 0.4))
        assert out.variances(1) == pytest.approx((0.4 * 3.0 + 0.6, 0.4 * 3.0 + 0.6))

    def test_beamsplitter_range(self):
        with pytest.raises(InvalidArgumentError):
            beamsplitter(0, 1, 1.5)
        with pytest.raises(InvalidArgumentError):
            beamsplitter(1, 1, 0.5)

    def test_rotation_swaps_quadratures(self):
        out = apply(rotation(0, np.pi / 2), CovMat(np.diag([0.5, 2.0])))
        assert np.allclose(out.matrix, np.diag([2.0, 0.5]))

    def test_qnd_adds_p_noise_only(self):
        out = apply(qnd_gate(0, 1, 2.0), vacuum_state(2))
        assert out.variances(0) == pytest.approx((1.0, 5.0))
        assert out.variances(1) == pytest.approx((5.0, 1.0))

    def test_inverse_and_compose(self):
        s = beamsplitter(0, 1, 0.2).compose(qnd_gate(1, 0, 0.9))
        assert np.allclose(s.compose(s.inverse()).matrix, np.eye(4))

    def test_compose_order(self):
        sq = squeezer(0, 0.5, n_modes=2)
        bs = beamsplitter(0, 1, 0.5)
        assert np.allclose(bs.compose(sq).matrix, bs.matrix @ sq.matrix)

    def test_smaller_transform_leaves_trailing_modes(self):
        out = apply(squeezer(0, 0.5), direct_sum(vacuum_state(1), thermal_state(3.0)))
        assert np.allclose(out.matrix, np.diag([0.5, 2.0, 3.0, 3.0]))

    def test_rejects_non_symplectic(self):
        with pytest.raises(InvalidArgumentError):
            Symplectic(np.diag([2.0, 2.0]))

    def test_mode_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            apply(beamsplitter(0, 1, 0.5), vacuum_state(1))


class TestConditioning:
    def test_homodyne_on_tmsv(self):
        v = 4.0
        out = condition_homodyne(two_mode_squeezed_vacuum(v), 0, "x")
        assert out.n_modes == 1
        assert out.variances(0) == pytest.approx((1.0 / v, v))

    def test_heterodyne_on_tmsv(self):
        v = 4.0
        out = condition_heterodyne(two_mode_squeezed_vacuum(v), 0)
        expected = v - (v**2 - 1.0) / (v + 1.0)
        assert out.variances(0) == pytest.approx((expected, expected))

    def test_homodyne_on_uncorrelated_is_partial_trace(self):
        gamma = direct_sum(thermal_state(2.0), thermal_state(3.0))
        assert condition_homodyne(gamma, 1, "p").allclose(partial_trace(gamma, [0]))

    def test_sequence_uses_original_indices(self):
        gamma = direct_sum(thermal_state(2.0), thermal_state(3.0), thermal_state(4.0))
        out = condition_sequence(gamma, [(0, "x"), (2, "p")])
        assert out.n_modes == 1
        assert out.variances(0) == (3.0, 3.0)

    def test_zero_variance(self):
        gamma = CovMat(np.diag([0.0, 1.0, 1.0, 1.0]), validate=False)
        with pytest.raises(NumericalDomainError):
            condition_homodyne(gamma, 0, "x")

    def test_bad_quadrature(self):
        with pytest.raises(InvalidArgumentError):
            condition_homodyne(vacuum_state(2), 0, "q")

    def test_partial_trace_sorts_modes(self):
        gamma = direct_sum(thermal_state(2.0), thermal_state(3.0), thermal_state(4.0))
        assert np.allclose(partial_trace(gamma, [2, 0]).matrix, np.diag([2.0, 2.0, 4.0, 4.0]))
