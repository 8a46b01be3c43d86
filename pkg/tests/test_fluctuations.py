import math

import numpy as np
import pytest
from scipy.linalg import expm, solve_continuous_lyapunov, solve_discrete_lyapunov

from magnomech.fluctuations import (
    InstabilityError,
    Monodromy,
    cm_rhs,
    diffusion_matrix,
    drift_matrix,
    integrate_cm,
    monodromy,
    periodic_steady_cm,
    physicality_check,
    solve_stein,
    stability_floquet,
    stability_instantaneous,
    steady_cm_autonomous,
    symplectic_form,
    thermal_diagonal,
    unvech,
    vech,
)
from magnomech.meanfield import (
    _rhs_real,
    find_fixed_point,
    find_periodic_orbit,
    pack_state,
)
from magnomech.params import ThermalOccupations, retuned, thermal_occupations

from conftest import TWO_PI, make_params, random_physical_cm

DYN = dict(delta_a=1.0, epsilon_d=6e4, temperature=0.0)


def fd_jacobian(p, t, state_c, h=1e-3):
    """Centered finite differences of the nonlinear mean-field flow."""
    y0 = pack_state(state_c)
    J = np.zeros((6, 6))
    for j in range(6):
        dy = np.zeros(6)
        dy[j] = h * max(1.0, abs(y0[j]))
        J[:, j] = (_rhs_real(t, y0 + dy, p) - _rhs_real(t, y0 - dy, p)) / (2 * dy[j])
    return J


class TestDriftMatrix:
    def test_matches_mean_field_jacobian(self, rng):
        # the linearized dynamics is the variational flow of the mean field
        p = make_params(xi_c=0.03, xi_m=0.02, omega_c_prime=1.0, omega_m=1.8,
                        theta_c=0.4, theta_m=-0.9)
        for t in (0.0, 0.7, 2.9):
            state = 1e4 * (rng.normal(size=3) + 1j * rng.normal(size=3))
            A = drift_matrix(t, state, p)
            J = fd_jacobian(p, t, state)
            assert np.allclose(A, J, rtol=1e-6, atol=1e-4 * np.max(np.abs(A)))

    def test_static_without_pumps(self):
        p = make_params(xi_c=0.0, xi_m=0.0)
        fp = find_fixed_point(p)
        assert np.array_equal(drift_matrix(0.0, fp, p), drift_matrix(1.23, fp, p))

    def test_real_coupling_reduces_to_printed_entries(self):
        p = make_params(xi_c=0.0, xi_m=0.0)
        state = np.array([7.0 + 0j, 0.0, 0.0])  # real <a> makes G real
        G = p.g * 7.0
        A = drift_matrix(0.0, state, p)
        assert A[1, 2] == pytest.approx(2 * G)
        assert A[3, 0] == pytest.approx(2 * G)
        assert A[0, 2] == 0.0 and A[3, 1] == 0.0

    def test_detuning_shift_from_mechanical_displacement(self):
        p = make_params(xi_c=0.0, xi_m=0.0)
        state = np.array([0.0, 1000.0 + 3j, 0.0])
        A = drift_matrix(0.0, state, p)
        assert A[0, 1] == pytest.approx(p.delta_a - 2 * p.g * 1000.0)

    def test_stable_at_baseline_operating_point(self, base_params):
        p = retuned(base_params, xi_c=0.0, xi_m=0.0)
        A = drift_matrix(0.0, find_fixed_point(p), p)
        assert stability_instantaneous(A)
        assert np.max(np.linalg.eigvals(A).real) < 0


class TestDiffusionMatrix:
    def test_zero_temperature(self):
        p = make_params(temperature=0.0)
        D = diffusion_matrix(p)
        assert np.allclose(np.diag(D), [0.2, 0.2, 1e-5, 1e-5, 0.2, 0.2])
        assert np.count_nonzero(D - np.diag(np.diag(D))) == 0

    def test_mechanical_entries_carry_thermal_occupation(self, base_params):
        occ = thermal_occupations(base_params)
        D = diffusion_matrix(base_params)
        assert D[2, 2] == pytest.approx(1e-5 * (2 * occ.n_b + 1), rel=1e-12)
        assert D[3, 3] == D[2, 2]

    def test_affine_in_occupation(self):
        p = make_params(temperature=0.0)
        occ = ThermalOccupations(0.3, 11.0, 0.9)
        occ2 = ThermalOccupations(0.6, 22.0, 1.8)
        D0 = diffusion_matrix(p, ThermalOccupations(0.0, 0.0, 0.0))
        D1 = diffusion_matrix(p, occ)
        D2 = diffusion_matrix(p, occ2)
        assert np.allclose(D2, 2 * D1 - D0)


class TestCmRhs:
    def test_zero_at_lyapunov_solution(self, rng):
        A = -np.eye(6) + 0.3 * rng.normal(size=(6, 6))
        if not stability_instantaneous(A):
            A -= np.eye(6)
        D = np.diag(rng.random(6) + 0.1)
        V = solve_continuous_lyapunov(A, -D)
        assert np.max(np.abs(cm_rhs(V, A, D))) <= 1e-10 * np.max(np.abs(D))

    def test_vacuum_is_steady_for_bare_cold_cavity(self):
        p = make_params(g=0.0, lambda_=0.0, temperature=0.0, xi_c=0.0, xi_m=0.0)
        A = drift_matrix(0.0, np.zeros(3, complex), p)
        D = diffusion_matrix(p)
        V = 0.5 * np.eye(6)
        block = cm_rhs(V, A, D)[:2, :2]
        assert np.allclose(block, 0.0, atol=1e-14)

    def test_preserves_symmetry(self, rng):
        A = rng.normal(size=(6, 6))
        D = np.diag(rng.random(6))
        V = random_physical_cm(rng)
        out = cm_rhs(V, A, D)
        assert np.allclose(out, out.T)


class TestVech:
    def test_roundtrip(self, rng):
        V = random_physical_cm(rng)
        assert np.allclose(unvech(vech(V)), V)


class TestMonodromy:
    def test_constant_drift_gives_matrix_exponential(self):
        p = make_params(xi_c=0.0, xi_m=0.0)
        orbit = find_periodic_orbit(p, tau=TWO_PI)
        mono = monodromy(p, orbit, TWO_PI)
        A = drift_matrix(0.0, find_fixed_point(p), p)
        assert np.allclose(mono.phi, expm(A * TWO_PI), rtol=1e-7, atol=1e-9)

    def test_scalar_decay_noise_closed_form(self):
        # for A = -kappa * I the accumulated noise is (1 - e^{-2 k tau})/(2k) D
        p = make_params(g=0.0, lambda_=0.0, epsilon_d=0.0, delta_a=0.0,
                        delta_s=0.0, kappa_a=0.3, kappa_m=0.3, gamma_b=0.3,
                        temperature=0.0, xi_c=0.0, xi_m=0.0)
        tau = 4.0
        orbit = find_periodic_orbit(p, tau=tau)
        mono = monodromy(p, orbit, tau)
        # delta_s = 0 and equal rates: A has -0.3 on the diagonal and the
        # omega_b block rotation; rotations cancel in Q for isotropic D
        D = diffusion_matrix(p)
        expected = (1.0 - math.exp(-2 * 0.3 * tau)) / (2 * 0.3) * D
        assert np.allclose(mono.q, expected, rtol=1e-6, atol=1e-9)

    def test_stable_pumped_point_contracts(self, base_params):
        p = retuned(base_params, xi_c=0.05, omega_c_prime=1.2)
        orbit = find_periodic_orbit(p)
        mono = monodromy(p, orbit)
        assert mono.spectral_radius < 1
        assert stability_floquet(mono)


class TestStein:
    def test_matches_scipy_on_random_contractions(self, rng):
        for _ in range(10):
            M = rng.normal(size=(6, 6))
            phi = 0.9 * M / np.max(np.abs(np.linalg.eigvals(M)))
            q = random_physical_cm(rng)
            ours = solve_stein(phi, q)
            ref = solve_discrete_lyapunov(phi, q)
            assert np.allclose(ours, ref, rtol=1e-9, atol=1e-11)

    def test_diverges_on_expansion(self, rng):
        phi = 1.5 * np.eye(6)
        with pytest.raises(InstabilityError):
            solve_stein(phi, np.eye(6), max_iter=60)


class TestIntegrateCm:
    def test_constant_solution_stays_put(self, base_params):
        p = retuned(base_params, xi_c=0.0, xi_m=0.0)
        fp = find_fixed_point(p)
        A = drift_matrix(0.0, fp, p)
        V0 = steady_cm_autonomous(A, diffusion_matrix(p))
        orbit = find_periodic_orbit(p, tau=TWO_PI)
        times, Vs = integrate_cm(p, orbit, V0, (0.0, 3 * TWO_PI), n_samples=24)
        assert np.max(np.abs(Vs - V0)) <= 1e-7 * np.max(np.abs(V0))

    def test_uncoupled_thermal_state_is_steady(self):
        p = make_params(g=0.0, lambda_=0.0, xi_c=0.0, xi_m=0.0)
        fp = find_fixed_point(p)
        V0 = thermal_diagonal(p)
        orbit = find_periodic_orbit(p, tau=TWO_PI)
        _, Vs = integrate_cm(p, orbit, V0, (0.0, 20.0), n_samples=10)
        assert np.max(np.abs(Vs - V0)) <= 1e-8 * np.max(np.abs(V0))

    def test_emitted_matrices_are_symmetric(self, base_params, rng):
        p = retuned(base_params, xi_c=0.05, omega_c_prime=1.2)
        orbit = find_periodic_orbit(p)
        V0 = random_physical_cm(rng)
        _, Vs = integrate_cm(p, orbit, V0, (0.0, orbit.period), n_samples=16)
        for V in Vs:
            assert np.linalg.norm(V - V.T) <= 1e-12 * max(1.0, np.linalg.norm(V))

    def test_affine_period_map_consistency(self, base_params, rng):
        # V(tau) = Phi V0 Phi^T + Q for any initial covariance
        p = retuned(base_params, xi_c=0.05, omega_c_prime=1.2)
        orbit = find_periodic_orbit(p)
        mono = monodromy(p, orbit)
        for _ in range(3):
            V0 = random_physical_cm(rng)
            _, Vs = integrate_cm(p, orbit, V0, (0.0, orbit.period), n_samples=2)
            predicted = mono.phi @ V0 @ mono.phi.T + mono.q
            assert np.allclose(Vs[-1], predicted, rtol=1e-6, atol=1e-8)


class TestPeriodicSteadyCm:
    def test_autonomous_reduces_to_algebraic_solution(self, base_params):
        p = retuned(base_params, xi_c=0.0, xi_m=0.0)
        times, Vs = periodic_steady_cm(p, None, None)
        A = drift_matrix(0.0, find_fixed_point(p), p)
        V_ref = solve_continuous_lyapunov(A, -diffusion_matrix(p))
        assert len(times) == 1
        assert np.allclose(Vs[0], V_ref, rtol=1e-9, atol=1e-12)

    def test_forced_period_matches_monodromy_limit(self, base_params):
        # consistency limit: Phi = e^{A tau} path equals the algebraic solution
        p = retuned(base_params, xi_c=0.0, xi_m=0.0)
        times, Vs = periodic_steady_cm(p, None, TWO_PI, n_samples=8)
        _, Vs_single = periodic_steady_cm(p, None, None)
        assert np.allclose(Vs[0], Vs_single[0], rtol=1e-9)
        assert np.allclose(Vs[-1], Vs[0], rtol=1e-9)

    def test_periodicity_of_driven_steady_state(self, base_params):
        p = retuned(base_params, xi_c=0.05, omega_c_prime=1.2)
        orbit = find_periodic_orbit(p)
        times, Vs = periodic_steady_cm(p, orbit, orbit.period, n_samples=64)
        gap = np.linalg.norm(Vs[-1] - Vs[0])
        assert gap <= 1e-8 * np.linalg.norm(Vs[0])

    def test_unstable_point_raises(self):
        # bare cavity pumped above the parametric self-oscillation threshold
        p = make_params(g=0.0, lambda_=0.0, epsilon_d=0.0, delta_a=1.0,
                        xi_c=0.3, omega_c_prime=2.0, temperature=0.0)
        orbit = find_periodic_orbit(p, require_stable=False)
        with pytest.raises(InstabilityError):
            periodic_steady_cm(p, orbit, orbit.period, n_samples=8)

    def test_physical_at_stable_driven_point(self, base_params):
        p = retuned(base_params, xi_c=0.05, omega_c_prime=1.2)
        orbit = find_periodic_orbit(p)
        _, Vs = periodic_steady_cm(p, orbit, orbit.period, n_samples=32)
        assert all(physicality_check(V) for V in Vs)


class TestStabilityPredicates:
    def test_instantaneous_trivial_cases(self):
        assert stability_instantaneous(-np.eye(6))
        assert not stability_instantaneous(np.diag([1.0, -1, -1, -1, -1, -1]))

    def test_floquet_trivial_cases(self):
        tau = 2.0
        assert stability_floquet(Monodromy(expm(-np.eye(6) * tau), np.zeros((6, 6)), tau))
        assert not stability_floquet(Monodromy(np.eye(6), np.zeros((6, 6)), tau))

    def test_floquet_agrees_with_hurwitz_when_unpumped(self, base_params):
        p = retuned(base_params, xi_c=0.0, xi_m=0.0)
        fp = find_fixed_point(p)
        A = drift_matrix(0.0, fp, p)
        orbit = find_periodic_orbit(p, tau=TWO_PI)
        mono = monodromy(p, orbit, TWO_PI)
        assert stability_instantaneous(A) == stability_floquet(mono)

    def test_physicality(self, rng):
        assert physicality_check(0.5 * np.eye(6))
        assert not physicality_check(0.25 * np.eye(6))
        for _ in range(5):
            assert physicality_check(random_physical_cm(rng))

    def test_symplectic_form_squares_to_minus_identity(self):
        O = symplectic_form()
        assert np.allclose(O @ O, -np.eye(6))
