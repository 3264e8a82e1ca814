import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from oracles import brute_force_ergotropy
from qet_repeater.errors import DomainError, NumericalError
from qet_repeater.extraction import (
    I2,
    SX,
    QubitState,
    TwoQubitState,
    alice_projector,
    bell_phi_plus,
    bob_energy,
    bob_unitary,
    ergotropy,
    extract,
    measure_alice_y,
    reduced_bob,
    sample_work,
    werner_channel,
    yield_vs_fidelity,
)

H = 1.5
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def conditional_ket(mu):
    return (KET0 - 1j * mu * KET1) / math.sqrt(2)


class TestStates:
    def test_bell_corners(self):
        rho = bell_phi_plus().density
        for i in (0, 3):
            for j in (0, 3):
                assert rho[i, j] == pytest.approx(0.5, abs=1e-15)
        assert np.count_nonzero(np.abs(rho) > 1e-15) == 4

    def test_werner(self):
        np.testing.assert_allclose(werner_channel(0.25).density, np.eye(4) / 4, atol=1e-15)
        np.testing.assert_allclose(werner_channel(0.9).bell_populations(), [0.9, 1 / 30, 1 / 30, 1 / 30], atol=1e-15)
        np.testing.assert_allclose(werner_channel(1.0).density, bell_phi_plus().density, atol=1e-15)

    def test_validation(self):
        with pytest.raises(DomainError):
            werner_channel(0.1)
        with pytest.raises(DomainError):
            TwoQubitState(np.eye(4))
        with pytest.raises(DomainError):
            QubitState(np.array([[1.2, 0], [0, -0.2]]))
        with pytest.raises(DomainError):
            QubitState(np.array([[0.5, 0.1], [0.2, 0.5]]))


class TestReduced:
    @pytest.mark.parametrize("f", [1.0, 0.9, 0.5, 0.25])
    def test_maximally_mixed(self, f):
        np.testing.assert_allclose(reduced_bob(werner_channel(f)).density, I2 / 2, atol=1e-15)

    def test_product(self):
        psi = np.kron(KET0, KET0)
        bob = reduced_bob(TwoQubitState(np.outer(psi, psi.conj())))
        np.testing.assert_allclose(bob.density, np.diag([1, 0]), atol=1e-15)


class TestMeasurement:
    @pytest.mark.parametrize("mu", [1, -1])
    def test_bell_conditional_state(self, mu):
        prob, bob = measure_alice_y(bell_phi_plus(), mu)
        assert prob == pytest.approx(0.5, abs=1e-15)
        psi = conditional_ket(mu)
        np.testing.assert_allclose(bob.density, np.outer(psi, psi.conj()), atol=1e-14)

    @pytest.mark.parametrize("mu", [1, -1])
    @pytest.mark.parametrize("f", [0.3, 0.8, 0.97])
    def test_werner_bloch(self, f, mu):
        prob, bob = measure_alice_y(werner_channel(f), mu)
        assert prob == pytest.approx(0.5, abs=1e-14)
        np.testing.assert_allclose(bob.bloch, [0, -mu * (4 * f - 1) / 3, 0], atol=1e-14)

    def test_projectors(self):
        p, m = alice_projector(1), alice_projector(-1)
        np.testing.assert_allclose(p + m, I2, atol=1e-15)
        np.testing.assert_allclose(p @ p, p, atol=1e-15)
        with pytest.raises(DomainError):
            alice_projector(0)

    def test_impossible_outcome(self):
        a = np.array([1, 1j]) / math.sqrt(2)  # +1 eigenstate of Y
        psi = np.kron(a, KET0)
        with pytest.raises(NumericalError):
            measure_alice_y(TwoQubitState(np.outer(psi, psi.conj())), -1)


class TestEnergyAndErgotropy:
    def test_energy(self):
        assert bob_energy(QubitState.from_ket(KET0), H) == pytest.approx(-H)
        assert bob_energy(QubitState.from_ket(conditional_ket(1)), H) == pytest.approx(0.0, abs=1e-15)
        assert bob_energy(QubitState(I2 / 2), H) == 0.0
        with pytest.raises(DomainError):
            bob_energy(QubitState(I2 / 2), 0.0)

    def test_ergotropy_values(self):
        assert ergotropy(QubitState.from_ket(conditional_ket(1)), H) == pytest.approx(H, abs=1e-15)
        assert ergotropy(QubitState(I2 / 2), H) == 0.0
        assert ergotropy(QubitState.from_ket(KET0), H) == 0.0
        assert ergotropy(QubitState.from_ket(KET1), H) == pytest.approx(2 * H)

    @pytest.mark.parametrize("f", [0.5, 0.8, 0.97])
    def test_werner_conditional(self, f):
        _, bob = measure_alice_y(werner_channel(f), 1)
        assert ergotropy(bob, H) == pytest.approx(H * (4 * f - 1) / 3, abs=1e-14)
        assert brute_force_ergotropy(bob.density, H) == pytest.approx(ergotropy(bob, H), abs=1e-5)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
    def test_matches_brute_force(self, x, y, z):
        r = np.array([x, y, z])
        if np.linalg.norm(r) > 1:
            r = r / np.linalg.norm(r)
        q = QubitState.from_bloch(r)
        assert ergotropy(q, 1.0) == pytest.approx(brute_force_ergotropy(q.density, 1.0), abs=1e-5)
        assert ergotropy(q, 1.0) >= 0


class TestCorrection:
    @pytest.mark.parametrize("mu", [1, -1])
    def test_maps_to_ground(self, mu):
        u = bob_unitary(mu)
        np.testing.assert_allclose(u.conj().T @ u, I2, atol=1e-12)
        out = u @ conditional_ket(mu)
        assert abs(abs(out[0]) - 1) < 1e-12 and abs(out[1]) < 1e-12
        np.testing.assert_allclose(out, KET0, atol=1e-12)

    @pytest.mark.parametrize("mu", [1, -1])
    def test_is_x_rotation(self, mu):
        np.testing.assert_allclose(bob_unitary(mu), expm(1j * mu * math.pi / 4 * SX), atol=1e-14)

    @pytest.mark.parametrize("mu", [1, -1])
    def test_opposite_sense_reaches_excited_state(self, mu):
        # the opposite rotation sense sends the conditional state to |1>
        out = expm(-1j * mu * math.pi / 4 * SX) @ conditional_ket(mu)
        assert abs(out[0]) < 1e-12

    @pytest.mark.parametrize("mu", [1, -1])
    def test_extract_ideal(self, mu):
        final, work = extract(QubitState.from_ket(conditional_ket(mu)), mu, H)
        np.testing.assert_allclose(final.density, np.diag([1, 0]), atol=1e-12)
        assert work == pytest.approx(H, abs=1e-12)

    def test_wrong_correction(self):
        _, work = extract(QubitState.from_ket(conditional_ket(1)), -1, H)
        assert work == pytest.approx(-H, abs=1e-12)

    @pytest.mark.parametrize("mu", [1, -1])
    def test_ground_state_loses(self, mu):
        final, work = extract(QubitState.from_ket(KET0), mu, H)
        assert final.bloch[2] == pytest.approx(0.0, abs=1e-12)
        assert work == pytest.approx(-H, abs=1e-12)


class TestYield:
    def test_values(self):
        assert yield_vs_fidelity(1.0, H) == H
        assert yield_vs_fidelity(0.25, H) == 0.0
        assert yield_vs_fidelity(0.97, 1.5) == pytest.approx(1.44, abs=1e-14)
        with pytest.raises(DomainError):
            yield_vs_fidelity(1.2, H)

    @pytest.mark.parametrize("f", [0.8, 0.9, 0.97])
    def test_sampled(self, f):
        mean, err = sample_work(werner_channel(f), H, 100_000, seed=20240101)
        assert err > 0
        assert abs(mean - yield_vs_fidelity(f, H)) < 3 * err

    def test_sampled_reproducible(self):
        a = sample_work(werner_channel(0.9), H, 10_000, seed=5)
        assert a == sample_work(werner_channel(0.9), H, 10_000, seed=5, workers=2)
        assert a != sample_work(werner_channel(0.9), H, 10_000, seed=6)

    def test_sampled_ideal_channel(self):
        mean, err = sample_work(bell_phi_plus(), H, 5000, seed=1)
        assert mean == pytest.approx(H, abs=1e-12)
        assert err == pytest.approx(0.0, abs=1e-12)
