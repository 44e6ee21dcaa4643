"""Time evolution under the Lindblad generator.

The production path is matrix-free: the right-hand side

    drho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)

is evaluated with d x d products only, and integrated with an adaptive
embedded Runge-Kutta 4(5) scheme with dense output at the requested sample
times.  No renormalization is ever applied; the per-sample trace drift is
reported as a fidelity diagnostic instead.

An explicit superoperator matrix (acting on column-stacked rho) is
available for small spaces, both as an independent test oracle and for
kernel-based steady states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.integrate import RK45

from .fock import check_density_matrix
from .models import SystemModel

__all__ = [
    "Trajectory",
    "DegenerateKernelError",
    "NonConvergenceError",
    "StepSizeUnderflowError",
    "lindblad_rhs",
    "liouvillian_matrix",
    "evolve",
    "steady_state",
]

LIOUVILLIAN_DIM_LIMIT = 4096  # largest d^2 for which an explicit matrix is built

DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-10
DEFAULT_FIRST_STEP = 1e-3
DEFAULT_MAX_STEP = 0.05


class DegenerateKernelError(RuntimeError):
    """The Liouvillian kernel is (numerically) multi-dimensional, so the
    steady state depends on the initial condition; use the propagation
    method with an explicit initial state instead."""


class NonConvergenceError(RuntimeError):
    """Steady-state propagation hit its time horizon before the residual
    dropped below tolerance."""

    def __init__(self, time_reached: float, residual: float, tol: float):
        self.time_reached = time_reached
        self.residual = residual
        super().__init__(
            f"no steady state by t = {time_reached:g}: "
            f"max|rhs| = {residual:.3e} > {tol:.1e}"
        )


class StepSizeUnderflowError(RuntimeError):
    """The adaptive integrator could not take a step of acceptable error."""

    def __init__(self, time_reached: float):
        self.time_reached = time_reached
        super().__init__(f"integrator step size underflow at t = {time_reached:g}")


def _make_rhs(model: SystemModel):
    """Precompute the drift matrix and jump pairs; return rhs(rho)."""
    h = np.asarray(model.hamiltonian, dtype=complex)
    drift = -1j * h
    pairs = []
    for jump in model.jumps:
        jump = np.asarray(jump, dtype=complex)
        pairs.append((jump, jump.conj().T))
        drift = drift - 0.5 * (jump.conj().T @ jump)
    drift_dag = drift.conj().T

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = drift @ rho + rho @ drift_dag
        for jump, jump_dag in pairs:
            out += jump @ rho @ jump_dag
        return out

    return rhs


def lindblad_rhs(model: SystemModel, rho: np.ndarray) -> np.ndarray:
    """Single evaluation of the Lindblad right-hand side."""
    rho = np.asarray(rho, dtype=complex)
    d = model.dim
    if rho.shape != (d, d):
        raise ValueError(f"state shape {rho.shape} does not match model dim {d}")
    return _make_rhs(model)(rho)


def liouvillian_matrix(model: SystemModel) -> np.ndarray:
    """Explicit d^2 x d^2 generator acting on column-stacked rho.

    Column stacking means vec(rho) = rho.ravel(order='F'), for which
    vec(A rho B) = (B^T kron A) vec(rho).  Guarded against accidental huge
    allocations: requires d^2 <= LIOUVILLIAN_DIM_LIMIT.
    """
    d = model.dim
    if d * d > LIOUVILLIAN_DIM_LIMIT:
        raise ValueError(
            f"explicit Liouvillian needs d^2 = {d * d} > {LIOUVILLIAN_DIM_LIMIT}; "
            "use the matrix-free path"
        )
    h = np.asarray(model.hamiltonian, dtype=complex)
    eye = np.eye(d, dtype=complex)
    liou = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in model.jumps:
        jump = np.asarray(jump, dtype=complex)
        jj = jump.conj().T @ jump
        liou += np.kron(jump.conj(), jump)
        liou -= 0.5 * (np.kron(eye, jj) + np.kron(jj.T, eye))
    return liou


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: states[i] is the density matrix at times[i].

    trace_drift[i] = Tr rho(t_i) - 1 and steps[i] is the cumulative count
    of accepted integrator steps, both diagnostics of integration quality.
    Positivity of transient samples is limited by the integrator error
    control (eigenvalues above about -1e-6 in the transient, -1e-8 at
    converged output times with the default tolerances).
    """

    times: np.ndarray
    states: np.ndarray
    trace_drift: np.ndarray
    steps: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if times[0] < 0:
        raise ValueError(f"times must start at t >= 0, got {times[0]}")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    return times


def evolve(
    model: SystemModel,
    rho0: np.ndarray,
    times,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    first_step: float = DEFAULT_FIRST_STEP,
    max_step: float = DEFAULT_MAX_STEP,
) -> Trajectory:
    """Integrate rho0 over the given sample times.

    rho0 must satisfy the density-matrix contract and is taken as the state
    at times[0].  Raises StepSizeUnderflowError if the adaptive step
    control fails (the exception carries the time reached).
    """
    times = _check_times(times)
    d = model.dim
    rho0 = check_density_matrix(rho0)
    if rho0.shape != (d, d):
        raise ValueError(f"state shape {rho0.shape} does not match model dim {d}")

    out = np.empty((times.size, d, d), dtype=complex)
    steps = np.zeros(times.size, dtype=int)
    out[0] = rho0
    if times.size == 1:
        drift = np.array([np.trace(rho0).real - 1.0])
        return Trajectory(times, out, drift, steps)

    rhs = _make_rhs(model)

    def f(_t, y):
        out = rhs(y.reshape(d, d))
        # the exact derivative of a Hermitian state is Hermitian; removing
        # the floating-point asymmetry here keeps every RK stage Hermitian
        # instead of letting matmul roundoff accumulate over thousands of steps
        out = 0.5 * (out + out.conj().T)
        return out.ravel()

    rk = RK45(
        f,
        times[0],
        rho0.ravel(),
        t_bound=times[-1],
        rtol=rel_tol,
        atol=abs_tol,
        first_step=first_step,
        max_step=max_step,
    )
    idx = 1
    nsteps = 0
    while rk.status == "running":
        rk.step()
        nsteps += 1
        interpolant = None
        while idx < times.size and times[idx] <= rk.t:
            if interpolant is None:
                interpolant = rk.dense_output()
            out[idx] = interpolant(times[idx]).reshape(d, d)
            steps[idx] = nsteps
            idx += 1
    if rk.status == "failed":
        raise StepSizeUnderflowError(rk.t)
    while idx < times.size:  # t_bound reached inside the final step
        out[idx] = rk.y.reshape(d, d)
        steps[idx] = nsteps
        idx += 1

    drift = np.einsum("tii->t", out).real - 1.0
    return Trajectory(times, out, drift, steps)


def _kernel_steady_state(model: SystemModel, tol: float) -> np.ndarray:
    liou = liouvillian_matrix(model)
    eigvals, eigvecs = scipy.linalg.eig(liou)
    order = np.argsort(np.abs(eigvals))
    radius = np.abs(eigvals).max()
    if radius > 0 and np.abs(eigvals[order[1]]) < max(tol, 1e-8) * radius:
        raise DegenerateKernelError(
            "stationary space is degenerate "
            f"(|lambda_1| = {np.abs(eigvals[order[1]]):.3e} vs spectral radius "
            f"{radius:.3e}); the steady state depends on the initial condition, "
            "use method='propagate'"
        )
    d = model.dim
    rho = eigvecs[:, order[0]].reshape(d, d, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return rho


def _propagate_steady_state(
    model: SystemModel,
    rho0: np.ndarray,
    tol: float,
    t_max: float,
    check_interval: float,
    rel_tol: float,
    abs_tol: float,
    max_step: float,
) -> np.ndarray:
    d = model.dim
    rho0 = check_density_matrix(rho0)
    if rho0.shape != (d, d):
        raise ValueError(f"state shape {rho0.shape} does not match model dim {d}")
    rhs = _make_rhs(model)

    residual = np.abs(rhs(rho0)).max()
    if residual < tol:
        return rho0

    def f(_t, y):
        out = rhs(y.reshape(d, d))
        out = 0.5 * (out + out.conj().T)  # see evolve(): keeps stages Hermitian
        return out.ravel()

    rk = RK45(
        f,
        0.0,
        rho0.ravel(),
        t_bound=t_max,
        rtol=rel_tol,
        atol=abs_tol,
        first_step=DEFAULT_FIRST_STEP,
        max_step=max_step,
    )
    next_check = check_interval
    while rk.status == "running":
        rk.step()
        if rk.t >= next_check:
            residual = np.abs(rhs(rk.y.reshape(d, d))).max()
            if residual < tol:
                return rk.y.reshape(d, d)
            next_check = rk.t + check_interval
    if rk.status == "failed":
        raise StepSizeUnderflowError(rk.t)
    residual = np.abs(rhs(rk.y.reshape(d, d))).max()
    if residual < tol:
        return rk.y.reshape(d, d)
    raise NonConvergenceError(rk.t, residual, tol)


def steady_state(
    model: SystemModel,
    method: str = "propagate",
    rho0: np.ndarray | None = None,
    tol: float = 1e-6,
    t_max: float = 500.0,
    check_interval: float = 0.5,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_step: float = DEFAULT_MAX_STEP,
) -> np.ndarray:
    """Stationary density matrix of the model.

    method='kernel' takes the Liouvillian eigenvector of smallest
    eigenvalue magnitude (small spaces only); it raises
    DegenerateKernelError when the stationary space is degenerate within
    tol, which happens e.g. without single-photon decay where conserved
    parity makes the steady state initial-condition dependent.

    method='propagate' integrates rho0 until max|rhs| < tol, honoring that
    initial-condition dependence; raises NonConvergenceError (with the time
    reached) if the residual has not converged by t_max.
    """
    if method == "kernel":
        return _kernel_steady_state(model, tol)
    if method == "propagate":
        if rho0 is None:
            raise ValueError("method='propagate' requires an initial state rho0")
        return _propagate_steady_state(
            model, rho0, tol, t_max, check_interval, rel_tol, abs_tol, max_step
        )
    raise ValueError(f"method must be 'kernel' or 'propagate', got {method!r}")
