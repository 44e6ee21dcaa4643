import numpy as np
import pytest
from numpy.testing import assert_allclose

from catsim import (
    DegenerateKernelError,
    ModeParams,
    NonConvergenceError,
    basis_state,
    build_one_mode,
    cat_state,
    evolve,
    expectation,
    fidelity_pure,
    ladder_operators,
    lindblad_rhs,
    liouvillian_matrix,
    matrix_exponential,
    projector,
    steady_alpha,
    steady_state,
)
from catsim.models import SystemModel
from catsim.fock import FockSpace

RNG = np.random.default_rng(424242)

PAPER = ModeParams(kerr=1.0, drive=10 * np.exp(-1j * np.pi / 4), pair_loss=1.0)


def random_model(d, n_jumps=2, rng=RNG, scale=1.0):
    h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = 0.5 * scale * (h + h.conj().T)
    jumps = []
    for _ in range(n_jumps):
        j = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        jumps.append(0.3 * scale * j)
    return SystemModel(hamiltonian=h, jumps=tuple(jumps), space=FockSpace(d))


def random_density(d, rng=RNG):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def vec(rho):
    return rho.ravel(order="F")


def unvec(v, d):
    return v.reshape(d, d, order="F")


class TestLindbladRhs:
    def test_zero_generator(self):
        model = SystemModel(np.zeros((4, 4), dtype=complex), (), FockSpace(4))
        assert np.abs(lindblad_rhs(model, random_density(4))).max() == 0

    def test_single_photon_decay_of_fock1(self):
        # hand application of the dissipator: gamma (|0><0| - |1><1|)
        gamma = 0.7
        model = build_one_mode(ModeParams(loss=gamma), 4)
        rho = projector(basis_state(4, 1))
        expected = gamma * (projector(basis_state(4, 0)) - rho)
        assert_allclose(lindblad_rhs(model, rho), expected, atol=1e-14)

    def test_traceless_and_hermitian(self):
        model = random_model(6)
        for _ in range(5):
            rho = random_density(6)
            out = lindblad_rhs(model, rho)
            scale = np.abs(out).max()
            assert abs(np.trace(out)) < 1e-12 * max(scale, 1)
            assert np.abs(out - out.conj().T).max() < 1e-12 * max(scale, 1)

    def test_linearity(self):
        model = random_model(5)
        r1, r2 = random_density(5), random_density(5)
        a, b = 0.3, 0.7
        lhs = lindblad_rhs(model, a * r1 + b * r2)
        rhs = a * lindblad_rhs(model, r1) + b * lindblad_rhs(model, r2)
        assert_allclose(lhs, rhs, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lindblad_rhs(random_model(4), random_density(5))


class TestLiouvillianMatrix:
    def test_matches_matrix_free_rhs(self):
        model = random_model(4)
        liou = liouvillian_matrix(model)
        for _ in range(100):
            rho = random_density(4)
            direct = lindblad_rhs(model, rho)
            assert np.abs(liou @ vec(rho) - vec(direct)).max() < 1e-12
        # and on non-Hermitian operators (full operator space)
        m = RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4))
        assert np.abs(liou @ vec(m) - vec(lindblad_rhs(model, m))).max() < 1e-10

    def test_identity_is_left_null_vector(self):
        model = random_model(5)
        liou = liouvillian_matrix(model)
        left = vec(np.eye(5, dtype=complex)).conj() @ liou
        assert np.abs(left).max() < 1e-10

    def test_pure_decay_spectrum(self):
        # two-level amplitude damping: eigenvalues {0, -g/2, -g/2, -g}
        gamma = 0.8
        a = np.array([[0, 1], [0, 0]], dtype=complex)
        model = SystemModel(np.zeros((2, 2), dtype=complex), (np.sqrt(gamma) * a,), FockSpace(2))
        w = np.linalg.eigvals(liouvillian_matrix(model))
        w = np.sort_complex(w)
        expected = np.sort_complex(np.array([0, -gamma / 2, -gamma / 2, -gamma]))
        assert_allclose(w, expected, atol=1e-12)

    def test_dimension_guard(self):
        model = build_one_mode(PAPER, 80)
        with pytest.raises(ValueError):
            liouvillian_matrix(model)


class TestEvolve:
    def test_frozen_when_generator_is_zero(self):
        model = SystemModel(np.zeros((4, 4), dtype=complex), (), FockSpace(4))
        rho0 = random_density(4)
        traj = evolve(model, rho0, [0.0, 0.5, 1.0])
        assert_allclose(traj.states[-1], rho0, atol=0)
        assert traj.trace_drift[-1] == pytest.approx(0.0, abs=1e-14)

    def test_exponential_photon_decay(self):
        gamma, n = 0.6, 6
        model = build_one_mode(ModeParams(loss=gamma), n)
        rho0 = projector(basis_state(n, 1))
        times = np.linspace(0, 3, 16)
        traj = evolve(model, rho0, times)
        _, _, num, _ = ladder_operators(n)
        ns = [expectation(num, r).real for r in traj.states]
        assert_allclose(ns, np.exp(-gamma * times), atol=1e-6)

    def test_parity_conserved_without_single_photon_decay(self):
        model = build_one_mode(PAPER, 30)
        rho0 = projector(basis_state(30, 0))
        traj = evolve(model, rho0, np.linspace(0, 2, 11))
        _, _, _, par = ladder_operators(30)
        for rho in traj.states:
            assert expectation(par, rho).real == pytest.approx(1.0, abs=1e-6)

    def test_matches_exponential_propagator_oracle(self):
        for d in (3, 5, 6):
            model = random_model(d, rng=np.random.default_rng(d))
            rho0 = random_density(d, rng=np.random.default_rng(d + 100))
            liou = liouvillian_matrix(model)
            times = [0.0, 0.1, 1.0, 5.0]
            traj = evolve(model, rho0, times)
            for t, rho_t in zip(times[1:], traj.states[1:]):
                expected = unvec(matrix_exponential(t * liou) @ vec(rho0), d)
                assert np.abs(rho_t - expected).max() < 1e-8

    def test_sample_positivity_and_hermiticity(self):
        model = build_one_mode(ModeParams(kerr=1.0, drive=PAPER.drive, loss=0.3, pair_loss=1.0), 25)
        traj = evolve(model, projector(basis_state(25, 0)), np.linspace(0, 2, 9))
        for rho in traj.states:
            assert np.abs(rho - rho.conj().T).max() < 1e-10
            assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() > -1e-8
        assert np.abs(traj.trace_drift).max() < 1e-10

    def test_parity_sector_populations_conserved(self):
        # without single-photon decay the even and odd sectors evolve apart
        model = build_one_mode(PAPER, 30)
        rho0 = 0.25 * projector(basis_state(30, 0)) + 0.75 * projector(basis_state(30, 1))
        traj = evolve(model, rho0, [0.0, 1.0, 2.0])
        even = np.arange(30) % 2 == 0
        for rho in traj.states:
            pops = np.diag(rho).real
            assert pops[even].sum() == pytest.approx(0.25, abs=1e-8)
            assert pops[~even].sum() == pytest.approx(0.75, abs=1e-8)

    def test_rejects_bad_times(self):
        model = build_one_mode(PAPER, 8)
        rho0 = projector(basis_state(8, 0))
        with pytest.raises(ValueError):
            evolve(model, rho0, [1.0, 0.5])
        with pytest.raises(ValueError):
            evolve(model, rho0, [-1.0, 0.5])

    def test_rejects_invalid_initial_state(self):
        model = build_one_mode(PAPER, 8)
        with pytest.raises(ValueError):
            evolve(model, np.eye(8, dtype=complex), [0.0, 1.0])

    def test_step_counts_monotone(self):
        model = build_one_mode(PAPER, 16)
        traj = evolve(model, projector(basis_state(16, 0)), np.linspace(0, 1, 6))
        assert np.all(np.diff(traj.steps) >= 0)
        assert traj.steps[-1] > 0


class TestSteadyState:
    def test_pure_decay_reaches_vacuum(self):
        model = build_one_mode(ModeParams(loss=1.0), 8)
        rho0 = projector(basis_state(8, 4))
        rho_ss = steady_state(model, method="propagate", rho0=rho0, tol=1e-8)
        assert fidelity_pure(basis_state(8, 0), rho_ss) == pytest.approx(1.0, abs=1e-6)

    def test_kernel_matches_propagate_with_decay(self):
        # the propagate residual floor sits at the integrator error level,
        # so the tolerance here stays above rel_tol
        model = build_one_mode(
            ModeParams(kerr=1.0, drive=2.0 * np.exp(1j * 0.4), loss=0.4, pair_loss=1.0), 12
        )
        rho_k = steady_state(model, method="kernel")
        rho_p = steady_state(
            model, method="propagate", rho0=projector(basis_state(12, 0)), tol=1e-7
        )
        assert np.abs(rho_k - rho_p).max() < 1e-5
        assert np.abs(lindblad_rhs(model, rho_k)).max() < 1e-10

    def test_kernel_detects_degenerate_manifold(self):
        # no single-photon decay: even and odd stationary states coexist
        model = build_one_mode(PAPER, 12)
        with pytest.raises(DegenerateKernelError):
            steady_state(model, method="kernel")

    def test_even_cat_from_vacuum(self):
        n = 40
        model = build_one_mode(PAPER, n)
        rho_ss = steady_state(
            model, method="propagate", rho0=projector(basis_state(n, 0)), tol=1e-6
        )
        target = cat_state(steady_alpha(PAPER), "even", n)
        assert fidelity_pure(target, rho_ss) > 0.99

    def test_odd_cat_from_fock1(self):
        n = 40
        model = build_one_mode(PAPER, n)
        rho_ss = steady_state(
            model, method="propagate", rho0=projector(basis_state(n, 1)), tol=1e-6
        )
        target = cat_state(steady_alpha(PAPER), "odd", n)
        assert fidelity_pure(target, rho_ss) > 0.99

    def test_propagate_residual_contract(self):
        model = build_one_mode(ModeParams(kerr=1.0, drive=3.0, loss=0.3, pair_loss=1.0), 16)
        tol = 1e-7
        rho_ss = steady_state(
            model, method="propagate", rho0=projector(basis_state(16, 0)), tol=tol
        )
        assert np.abs(lindblad_rhs(model, rho_ss)).max() < tol
        # re-integration changes observables by no more than ~10 tol
        traj = evolve(model, 0.5 * (rho_ss + rho_ss.conj().T) / np.trace(rho_ss).real,
                      [0.0, 1.0])
        _, _, num, _ = ladder_operators(16)
        before = expectation(num, traj.states[0]).real
        after = expectation(num, traj.states[-1]).real
        assert abs(after - before) < 10 * tol

    def test_propagate_requires_initial_state(self):
        with pytest.raises(ValueError):
            steady_state(build_one_mode(PAPER, 8), method="propagate")

    def test_nonconvergence_reports_time(self):
        model = build_one_mode(PAPER, 20)
        with pytest.raises(NonConvergenceError) as err:
            steady_state(
                model,
                method="propagate",
                rho0=projector(basis_state(20, 0)),
                tol=1e-14,
                t_max=0.5,
            )
        assert err.value.time_reached >= 0.5
