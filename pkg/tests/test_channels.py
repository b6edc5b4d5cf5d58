import numpy as np
import pytest

from collisional_thermometry.channels import (
    SWAP,
    CollisionCouplings,
    KrausChannel,
    ThermalParams,
    apply_channel,
    exchange_hamiltonian,
    gibbs_state,
    isotropic_swap_unitary,
    mean_occupation,
    partial_swap_unitary,
    thermal_kraus,
)
from collisional_thermometry.linops import (
    I2,
    PROJ_1,
    SIGMA_Z,
    InvariantViolation,
    kron,
)

from conftest import as_state, random_density_matrix


def lindblad_rhs(rho, gamma, nbar):
    """Finite-temperature relaxation generator, written directly from the
    dissipator definition (independent of the Kraus construction)."""
    sm = np.array([[0, 1], [0, 0]], dtype=complex)
    sp = sm.conj().T

    def dissipator(op):
        return op @ rho @ op.conj().T - 0.5 * (
            op.conj().T @ op @ rho + rho @ op.conj().T @ op
        )

    return gamma * (nbar + 1) * dissipator(sm) + gamma * nbar * dissipator(sp)


def integrate_lindblad(rho0, gamma, nbar, t_final, step=1e-4):
    """Classic 4th-order stepping of the master equation."""
    rho = rho0.astype(complex)
    n_steps = max(1, int(round(t_final / step)))
    h = t_final / n_steps
    for _ in range(n_steps):
        k1 = lindblad_rhs(rho, gamma, nbar)
        k2 = lindblad_rhs(rho + 0.5 * h * k1, gamma, nbar)
        k3 = lindblad_rhs(rho + 0.5 * h * k2, gamma, nbar)
        k4 = lindblad_rhs(rho + h * k3, gamma, nbar)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


class TestThermalParams:
    def test_rejects_nonpositive(self):
        for bad in ({"temperature": -1.0}, {"omega": 0.0}, {"gamma": -0.1}):
            with pytest.raises(InvariantViolation):
                ThermalParams(**{"temperature": 1.0, **bad})

    def test_couplings_reject_negative(self):
        with pytest.raises(InvariantViolation):
            CollisionCouplings(-0.1, 1.0)


class TestMeanOccupation:
    def test_low_temperature_limit(self):
        assert mean_occupation(ThermalParams(1e-3)) < 1e-300

    def test_unit_temperature(self):
        assert mean_occupation(ThermalParams(1.0)) == pytest.approx(1 / (np.e - 1), rel=1e-12)

    def test_high_temperature(self):
        assert mean_occupation(ThermalParams(10.0)) == pytest.approx(9.50833, abs=1e-5)

    def test_monotone_in_temperature(self):
        ts = np.linspace(0.1, 5, 40)
        ns = [mean_occupation(ThermalParams(t)) for t in ts]
        assert np.all(np.diff(ns) > 0)


class TestGibbsState:
    def test_ground_state_limit(self):
        rho = gibbs_state(ThermalParams(1e-3))
        assert rho.matrix[0, 0].real == pytest.approx(1.0)

    def test_infinite_temperature_limit(self):
        rho = gibbs_state(ThermalParams(1e6))
        assert np.allclose(rho.matrix, I2 / 2, atol=1e-6)

    def test_unit_temperature_populations(self):
        rho = gibbs_state(ThermalParams(1.0))
        assert rho.matrix[0, 0].real == pytest.approx(0.7311, abs=1e-4)
        assert rho.matrix[1, 1].real == pytest.approx(0.2689, abs=1e-4)


class TestThermalKraus:
    def test_zero_duration_is_identity(self, rng):
        ch = thermal_kraus(ThermalParams(1.0), 0.0)
        rho = random_density_matrix(rng, 1)
        assert np.allclose(ch.apply_matrix(rho), rho, atol=1e-12)

    def test_rejects_negative_duration(self):
        with pytest.raises(InvariantViolation):
            thermal_kraus(ThermalParams(1.0), -1.0)

    def test_trace_preserving(self):
        for t in (0.0, 0.3, 2.0):
            thermal_kraus(ThermalParams(0.7), t)  # completeness checked on build

    def test_long_time_reaches_gibbs(self, rng):
        p = ThermalParams(1.0)
        nbar = mean_occupation(p)
        ch = thermal_kraus(p, 50.0 / (p.gamma * (2 * nbar + 1)))
        for _ in range(5):
            rho = random_density_matrix(rng, 1)
            assert np.max(np.abs(ch.apply_matrix(rho) - gibbs_state(p).matrix)) < 1e-10

    def test_population_relaxation_closed_form(self):
        p = ThermalParams(1.0)
        nbar = mean_occupation(p)
        big_gamma = p.gamma * (2 * nbar + 1)
        ch = thermal_kraus(p, 1.0 / big_gamma)  # Gamma t = 1
        out = ch.apply_matrix(PROJ_1.astype(complex))
        p_eq = nbar / (2 * nbar + 1)
        expected = p_eq + (1 - p_eq) * np.exp(-1.0)
        assert out[1, 1].real == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.5378, abs=1e-4)

    @pytest.mark.parametrize("gamma_t", [0.1, 1.0, 5.0])
    def test_matches_integrator(self, rng, gamma_t):
        p = ThermalParams(0.8, gamma=1.3)
        nbar = mean_occupation(p)
        t_phys = gamma_t / (p.gamma * (2 * nbar + 1))
        ch = thermal_kraus(p, t_phys)
        rho0 = random_density_matrix(rng, 1)
        direct = integrate_lindblad(rho0, p.gamma, nbar, t_phys)
        assert np.max(np.abs(ch.apply_matrix(rho0) - direct)) < 1e-7

    def test_semigroup(self, rng):
        p = ThermalParams(1.4)
        rho = random_density_matrix(rng, 1)
        once = thermal_kraus(p, 0.9).apply_matrix(rho)
        split = thermal_kraus(p, 0.5).apply_matrix(thermal_kraus(p, 0.4).apply_matrix(rho))
        assert np.max(np.abs(once - split)) < 1e-10

    def test_gibbs_fixed_point(self):
        for t_env in (0.2, 1.0, 3.0):
            p = ThermalParams(t_env, gamma=0.6)
            g = gibbs_state(p).matrix
            for dt in (0.1, 1.0, 10.0):
                out = thermal_kraus(p, dt).apply_matrix(g)
                assert np.max(np.abs(out - g)) < 1e-12


class TestApplyChannel:
    def test_identity_channel(self, rng):
        rho = as_state(random_density_matrix(rng, 2))
        ch = KrausChannel((np.eye(2),))
        assert np.allclose(apply_channel(rho, ch, 0).matrix, rho.matrix)

    def test_product_state_factorization(self, rng):
        p = ThermalParams(1.0)
        nbar = mean_occupation(p)
        ch = thermal_kraus(p, 50.0 / (p.gamma * (2 * nbar + 1)))
        rho_a = random_density_matrix(rng, 1)
        rho = as_state(kron(random_density_matrix(rng, 1), rho_a))
        out = apply_channel(rho, ch, 0)
        assert np.max(np.abs(out.matrix - kron(gibbs_state(p).matrix, rho_a))) < 1e-10

    def test_trace_preserved_on_correlated_input(self, rng):
        rho = as_state(random_density_matrix(rng, 2))
        ch = thermal_kraus(ThermalParams(0.5), 0.7)
        out = apply_channel(rho, ch, 1)
        assert abs(np.trace(out.matrix) - 1) < 1e-12

    def test_output_is_valid_state(self, rng):
        # DensityOperator construction re-checks all invariants
        for _ in range(5):
            rho = as_state(random_density_matrix(rng, 2))
            apply_channel(rho, thermal_kraus(ThermalParams(2.0), 0.3), 0)


class TestExchangeHamiltonian:
    def test_matrix_element(self):
        h = exchange_hamiltonian(0.7)
        assert h[1, 2] == pytest.approx(0.7)

    def test_annihilates_even_parity(self):
        h = exchange_hamiltonian(1.3)
        assert np.allclose(h[:, 0], 0) and np.allclose(h[:, 3], 0)

    def test_eigenvalues(self):
        w = np.sort(np.linalg.eigvalsh(exchange_hamiltonian(0.9)))
        assert np.allclose(w, [-0.9, 0, 0, 0.9])


class TestPartialSwap:
    def test_zero_angle(self):
        assert np.allclose(partial_swap_unitary(0.0), np.eye(4))

    def test_full_swap_phases(self):
        u = partial_swap_unitary(np.pi / 2)
        e01 = np.array([0, 1, 0, 0])
        e10 = np.array([0, 0, 1, 0])
        assert np.allclose(u @ e01, -1j * e10)
        assert np.allclose(u @ e10, -1j * e01)
        assert u[0, 0] == pytest.approx(1.0) and u[3, 3] == pytest.approx(1.0)

    def test_small_angle_population_transfer(self):
        theta = np.pi / 100
        u = partial_swap_unitary(theta)
        out = np.abs(u @ np.array([0, 0, 1, 0])) ** 2
        assert out[1] == pytest.approx(np.sin(theta) ** 2, rel=1e-12)
        assert out[1] == pytest.approx(9.866e-4, abs=1e-6)

    def test_matches_propagator(self):
        from collisional_thermometry.linops import herm_propagator

        for angle in (0.0, 0.4, np.pi / 2, 2.2):
            direct = partial_swap_unitary(angle)
            via_h = herm_propagator(exchange_hamiltonian(1.0), angle)
            assert np.max(np.abs(direct - via_h)) < 1e-12

    def test_conserves_excitation_number(self):
        total_z = kron(SIGMA_Z, I2) + kron(I2, SIGMA_Z)
        for angle in (0.3, np.pi / 2):
            u = partial_swap_unitary(angle)
            assert np.max(np.abs(u @ total_z - total_z @ u)) < 1e-12

    def test_double_full_swap_is_phase_gate(self):
        u = partial_swap_unitary(np.pi / 2)
        assert np.allclose(u @ u, np.diag([1, -1, -1, 1]))


class TestIsotropicSwap:
    def test_full_swap_up_to_global_phase(self):
        u = isotropic_swap_unitary(np.pi / 2)
        assert np.allclose(u, -1j * SWAP)

    def test_matches_propagator(self):
        from collisional_thermometry.linops import herm_propagator

        for angle in (0.0, 0.4, np.pi / 2):
            assert np.max(
                np.abs(isotropic_swap_unitary(angle) - herm_propagator(SWAP, angle))
            ) < 1e-12

    def test_conserves_excitation_number(self):
        total_z = kron(SIGMA_Z, I2) + kron(I2, SIGMA_Z)
        u = isotropic_swap_unitary(0.8)
        assert np.max(np.abs(u @ total_z - total_z @ u)) < 1e-12
