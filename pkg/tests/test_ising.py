import numpy as np
import pytest

from spinweave.errors import CapacityError
from spinweave.ising import (ExactEvolution, IsingParams,
                             build_classical_hamiltonian, build_hamiltonian,
                             classical_otoc, classical_otoc_bruteforce,
                             classical_otoc_phase, exact_unitary,
                             preset_params, regime_preset)

from conftest import dense_hamiltonian


class TestPresets:
    def test_coupling_values(self):
        integrable = regime_preset("integrable", 4).params
        assert (integrable.J, integrable.Bx, integrable.Bz) == (-1.0, 0.0, 1.0)
        chaotic = regime_preset("chaotic", 4).params
        assert (chaotic.J, chaotic.Bx, chaotic.Bz) == (-1.0, 0.7, 1.5)

    def test_unknown_regime(self):
        with pytest.raises(ValueError):
            regime_preset("thermal", 4)

    def test_chain_too_short(self):
        with pytest.raises(ValueError):
            IsingParams(2, -1.0, 0.0, 1.0)


class TestHamiltonian:
    def test_pure_coupling_zero_state_energy(self):
        # two bonds, all spins up: each Z_i Z_{i+1} contributes +1
        h = build_hamiltonian(IsingParams(3, 1.0, 0.0, 0.0))
        assert h[0, 0] == pytest.approx(2.0, abs=0)

    def test_bx_zero_is_diagonal(self):
        h = build_hamiltonian(preset_params("integrable", 4))
        assert np.array_equal(h, np.diag(np.diag(h)))

    def test_chaotic_zero_state_energy(self):
        # (n-1) J + n Bz = -3 + 6
        h = build_hamiltonian(preset_params("chaotic", 4))
        assert h[0, 0] == pytest.approx(3.0, abs=1e-14)

    def test_single_excitation_energies(self):
        p = preset_params("integrable", 4)
        hc = build_classical_hamiltonian(p)
        e0 = (p.n - 1) * p.J + p.n * p.Bz
        # edge flip |1000> (index 8) loses one bond, bulk flip |0100>
        # (index 4) loses two
        assert hc[8, 8] == pytest.approx(e0 - 2 * p.J - 2 * p.Bz, abs=1e-14)
        assert hc[4, 4] == pytest.approx(e0 - 4 * p.J - 2 * p.Bz, abs=1e-14)

    def test_classical_equals_full_with_bx_zero(self):
        p = preset_params("chaotic", 5)
        p0 = IsingParams(p.n, p.J, 0.0, p.Bz)
        assert np.array_equal(build_classical_hamiltonian(p), build_hamiltonian(p0))

    def test_full_is_classical_plus_transverse(self):
        p = preset_params("chaotic", 4)
        diff = build_hamiltonian(p) - build_classical_hamiltonian(p)
        oracle = dense_hamiltonian(4, 0.0, p.Bx, 0.0)
        assert np.max(np.abs(diff - oracle.real)) < 1e-14

    def test_matches_kron_oracle(self):
        p = preset_params("chaotic", 5)
        oracle = dense_hamiltonian(5, p.J, p.Bx, p.Bz)
        assert np.max(np.abs(build_hamiltonian(p) - oracle.real)) < 1e-12

    def test_symmetric(self):
        h = build_hamiltonian(preset_params("chaotic", 4))
        assert np.array_equal(h, h.T)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            build_hamiltonian(IsingParams(15, -1.0, 0.7, 1.5))


class TestExactUnitary:
    def test_t0_is_identity(self):
        h = build_hamiltonian(preset_params("chaotic", 3))
        assert np.max(np.abs(exact_unitary(h, 0.0) - np.eye(8))) < 1e-12

    def test_forward_backward_cancel(self):
        h = build_hamiltonian(preset_params("chaotic", 3))
        u = exact_unitary(h, 0.83) @ exact_unitary(h, -0.83)
        assert np.max(np.abs(u - np.eye(8))) < 1e-9

    def test_group_property(self):
        h = build_hamiltonian(preset_params("chaotic", 3))
        ev = ExactEvolution(h)
        lhs = ev.unitary(0.31) @ ev.unitary(0.52)
        assert np.max(np.abs(lhs - ev.unitary(0.83))) < 1e-9

    def test_two_site_zz_diagonal(self):
        h = np.diag([1.0, -1.0, -1.0, 1.0])
        t = 0.47
        expected = np.diag(np.exp(-1j * t * np.array([1, -1, -1, 1])))
        assert np.max(np.abs(exact_unitary(h, t) - expected)) < 1e-12

    def test_unitarity(self):
        h = build_hamiltonian(preset_params("chaotic", 4))
        u = exact_unitary(h, 1.7)
        assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            exact_unitary(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)


class TestClassicalOtoc:
    def test_beyond_neighbour_is_one(self):
        p = preset_params("chaotic", 5)
        for t in (0.0, 0.3, 2.1):
            for j in (3, 4, 5):
                assert classical_otoc(p, j, t) == 1.0 + 0.0j

    def test_integrable_butterfly_site_constant(self):
        # J + Bz = 0 for the integrable couplings
        p = preset_params("integrable", 4)
        for t in np.linspace(0, 5, 11):
            assert classical_otoc(p, 1, t) == pytest.approx(1.0 + 0.0j, abs=1e-15)

    def test_chaotic_neighbour_frozen_value(self):
        p = preset_params("chaotic", 4)
        assert classical_otoc(p, 2, 0.03) == pytest.approx(np.exp(-0.12j), abs=1e-15)

    def test_unit_modulus(self):
        p = preset_params("chaotic", 4)
        for j in range(1, 5):
            for t in (0.17, 1.3, 4.9):
                assert abs(abs(classical_otoc(p, j, t)) - 1.0) < 1e-15

    def test_phase_accessor_consistent(self):
        p = preset_params("chaotic", 4)
        for j in range(1, 5):
            f = classical_otoc(p, j, 0.4)
            assert np.exp(1j * classical_otoc_phase(p, j, 0.4)) == pytest.approx(f, abs=1e-15)

    def test_site_out_of_range(self):
        p = preset_params("chaotic", 4)
        with pytest.raises(ValueError):
            classical_otoc(p, 0, 0.1)
        with pytest.raises(ValueError):
            classical_otoc(p, 5, 0.1)


class TestBruteforceOracle:
    def test_t0_is_one(self):
        p = preset_params("chaotic", 4)
        for i in range(1, 5):
            for j in range(1, 5):
                assert classical_otoc_bruteforce(p, i, j, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_matches_closed_form(self, rng):
        for n in (3, 4, 5):
            for name in ("integrable", "chaotic"):
                p = preset_params(name, n)
                for t in rng.uniform(-3, 3, size=10):
                    for j in range(1, n + 1):
                        got = classical_otoc(p, j, float(t))
                        oracle = classical_otoc_bruteforce(p, 1, j, float(t))
                        assert abs(got - oracle) < 1e-10

    def test_unit_modulus_under_diagonal_evolution(self, rng):
        p = preset_params("chaotic", 4)
        for t in rng.uniform(-2, 2, size=10):
            for i in range(1, 5):
                for j in range(1, 5):
                    f = classical_otoc_bruteforce(p, i, j, float(t))
                    assert abs(abs(f) - 1.0) < 1e-10

    def test_capacity(self):
        with pytest.raises(CapacityError):
            classical_otoc_bruteforce(IsingParams(11, -1, 0, 1), 1, 2, 0.1)
