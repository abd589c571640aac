"""Phase estimation: transforms, signed bins, and eigenvalue readouts."""
import numpy as np
import pytest

from hopfieldkit.hebbian import density, train
from hopfieldkit.patterns import TrainingSet
from hopfieldkit.quantum.evolution import hermitian_evolution
from hopfieldkit.quantum.phase import (
    bin_eigenvalues,
    controlled_powers,
    fwht_axis0,
    phase_estimate,
    qpe_backward,
    qpe_forward,
)
from hopfieldkit.quantum.register import embed

PLUS_DENSITY = density(train(TrainingSet([[1.0, 1.0]])))
PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)
MINUS = np.array([1.0, -1.0]) / np.sqrt(2.0)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestControlledPowers:
    def test_repeated_squaring_matches_matrix_power(self):
        u = random_unitary(np.random.default_rng(1), 4)
        powers = controlled_powers(u, 5)
        assert len(powers) == 5
        for k, p in enumerate(powers):
            np.testing.assert_allclose(p, np.linalg.matrix_power(u, 2 ** k),
                                       atol=1e-10)


class TestWalshHadamard:
    def test_involution_and_isometry(self):
        rng = np.random.default_rng(2)
        s = rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3))
        out = fwht_axis0(s)
        assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(s), rel=1e-12)
        np.testing.assert_allclose(fwht_axis0(out), s, atol=1e-12)

    def test_maps_basis_to_uniform(self):
        e0 = np.zeros((4, 1))
        e0[0, 0] = 1.0
        np.testing.assert_allclose(fwht_axis0(e0), np.full((4, 1), 0.5),
                                   atol=1e-15)


class TestQpeRoundTrip:
    def test_backward_inverts_forward(self):
        rng = np.random.default_rng(3)
        u = random_unitary(rng, 4)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        powers = controlled_powers(u, 4)
        s = qpe_forward(powers, psi)
        back = qpe_backward(s, powers)
        np.testing.assert_allclose(back[0], psi, atol=1e-10)
        assert np.linalg.norm(back[1:]) <= 1e-10

    def test_forward_preserves_norm(self):
        rng = np.random.default_rng(4)
        u = random_unitary(rng, 2)
        psi = np.array([0.6, 0.8], dtype=complex)
        s = qpe_forward(controlled_powers(u, 3), psi)
        assert np.linalg.norm(s) == pytest.approx(1.0, abs=1e-12)


class TestBinEigenvalues:
    def test_signed_window_at_t0_pi(self):
        np.testing.assert_array_equal(
            bin_eigenvalues(3, np.pi),
            [0.0, 0.25, 0.5, 0.75, 1.0, -0.75, -0.5, -0.25])

    def test_window_scales_inversely_with_t0(self):
        np.testing.assert_allclose(bin_eigenvalues(3, np.pi / 2.0),
                                   2.0 * bin_eigenvalues(3, np.pi), atol=1e-14)


class TestPhaseEstimate:
    def test_rank_one_density_peaks_at_unit_eigenvalue(self):
        readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS, 6)
        value, weight = readout.peak()
        assert value == pytest.approx(1.0, abs=1e-12)
        assert weight >= 0.99
        assert readout.t0 == pytest.approx(np.pi)
        assert not readout.aliasing

    def test_kernel_state_peaks_at_zero(self):
        readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), MINUS, 6)
        value, weight = readout.peak()
        assert value == pytest.approx(0.0, abs=1e-12)
        assert weight >= 0.99

    def test_register_input_is_accepted(self):
        reg, _ = embed([1.0, 1.0])
        readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), reg, 5)
        assert readout.peak()[0] == pytest.approx(1.0, abs=1e-12)

    def test_probabilities_sum_to_one(self):
        for t_qubits in (1, 4, 7):
            readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS,
                                     t_qubits)
            assert np.sum(readout.probabilities) == pytest.approx(1.0, abs=1e-9)

    def test_extra_qubit_halves_resolution(self):
        fine = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS, 7)
        coarse = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS, 6)
        assert coarse.resolution == pytest.approx(2.0 * fine.resolution)

    def test_off_grid_eigenvalue_lands_within_resolution(self):
        evolve = hermitian_evolution(np.diag([0.37, 0.37]))
        state = np.array([1.0, 0.0], dtype=complex)
        for t_qubits in (5, 6, 8):
            readout = phase_estimate(evolve, state, t_qubits, t0=np.pi)
            value, weight = readout.peak()
            assert abs(value - 0.37) <= readout.resolution
            assert weight >= 4.0 / np.pi ** 2

    def test_aliasing_flagged_and_warned(self):
        with pytest.warns(RuntimeWarning, match="alias"):
            readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS, 4,
                                     t0=2.0 * np.pi)
        assert readout.aliasing

    def test_explicit_bound_overrides_callback(self):
        readout = phase_estimate(hermitian_evolution(PLUS_DENSITY), PLUS, 4,
                                 bound=2.0)
        assert readout.t0 == pytest.approx(np.pi / 2.0)

    def test_requires_some_scale(self):
        u = np.eye(2, dtype=complex)
        with pytest.raises(ValueError, match="provide t0 or a spectral bound"):
            phase_estimate(lambda t: u, np.array([1.0, 0.0]), 3)

    def test_register_size_limits(self):
        evolve = hermitian_evolution(PLUS_DENSITY)
        with pytest.raises(ValueError, match="1..12 qubits"):
            phase_estimate(evolve, PLUS, 0)
        with pytest.raises(ValueError, match="1..12 qubits"):
            phase_estimate(evolve, PLUS, 13)

    def test_dimension_mismatch_rejected(self):
        evolve = hermitian_evolution(PLUS_DENSITY)
        with pytest.raises(ValueError, match="does not match"):
            phase_estimate(evolve, np.array([1.0, 0.0, 0.0, 0.0]), 3)
