"""Dense complex linear algebra over truncated Fock spaces.

Everything in this package works with plain ``numpy`` arrays of dtype
``complex128``: operators are square matrices, kets are 1-d vectors, and
density matrices are Hermitian, unit-trace, positive-semidefinite
operators.  Bipartite spaces use the fixed mode-a-major basis ordering
``index = i_a * n_b + i_b`` (the ``numpy.kron`` convention), which every
tensor-product and partial-trace routine in this module assumes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln

__all__ = [
    "FockSpace",
    "basis_state",
    "ladder_operators",
    "displacement",
    "tensor_product",
    "hermitian_eigensystem",
    "matrix_exponential",
    "partial_trace",
    "partial_transpose",
    "projector",
    "check_density_matrix",
]


@dataclass(frozen=True)
class FockSpace:
    """Truncated Fock space: single mode |0>..|n-1>, or a pair of modes.

    For two modes the joint basis index is ``i_a * n_b + i_b``.
    """

    n_a: int
    n_b: int | None = None

    def __post_init__(self):
        if self.n_a < 2:
            raise ValueError(f"truncation must be >= 2, got {self.n_a}")
        if self.n_b is not None and self.n_b < 2:
            raise ValueError(f"truncation must be >= 2, got {self.n_b}")

    @property
    def bipartite(self) -> bool:
        return self.n_b is not None

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.n_a,) if self.n_b is None else (self.n_a, self.n_b)

    @property
    def dim(self) -> int:
        return self.n_a if self.n_b is None else self.n_a * self.n_b


def _single_mode_dim(space: FockSpace | int) -> int:
    if isinstance(space, FockSpace):
        if space.bipartite:
            raise ValueError("expected a single-mode space")
        return space.n_a
    n = int(space)
    if n < 2:
        raise ValueError(f"truncation must be >= 2, got {n}")
    return n


def basis_state(space: FockSpace | int, k: int) -> np.ndarray:
    """Fock ket |k> as a unit vector."""
    n = space.dim if isinstance(space, FockSpace) else _single_mode_dim(space)
    if not 0 <= k < n:
        raise ValueError(f"basis index {k} outside [0, {n})")
    psi = np.zeros(n, dtype=complex)
    psi[k] = 1.0
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |psi><psi| (psi is normalized first)."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def ladder_operators(space: FockSpace | int):
    """Annihilation, creation, number and parity operators for one mode.

    Matrix elements are <m|a|n> = sqrt(n) delta_{m,n-1}; the creation
    operator is the adjoint, number = creation @ annihilation, and parity
    is diag((-1)^n).
    """
    n = _single_mode_dim(space)
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)
    adag = a.conj().T
    number = adag @ a
    parity = np.diag((-1.0) ** np.arange(n)).astype(complex)
    return a, adag, number, parity


def _laguerre_table(x: np.ndarray, n: int) -> np.ndarray:
    """Generalized Laguerre values L_j^{(k)}(x) for all k, j in [0, n).

    Returns an array indexed ``[k, j, point]`` filled by the standard
    three-term recurrence in the degree j.
    """
    npts = x.size
    lag = np.zeros((n, n, npts))
    lag[:, 0, :] = 1.0
    ks = np.arange(n)[:, None]
    if n > 1:
        lag[:, 1, :] = 1.0 + ks - x[None, :]
    for j in range(2, n):
        lag[:, j, :] = (
            (2 * j - 1 + ks - x[None, :]) * lag[:, j - 1, :]
            - (j - 1 + ks) * lag[:, j - 2, :]
        ) / j
    return lag


def _displacement_batch(alphas: np.ndarray, n: int) -> np.ndarray:
    """Displacement matrices for a batch of amplitudes, shape (P, n, n).

    Uses the closed form
    <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^{(m-n)}(|alpha|^2)
    for m >= n (conjugate-transpose relation below the diagonal), filled
    diagonal-by-diagonal with vectorized Laguerre recurrences.  These are the
    exact infinite-dimensional matrix elements restricted to the truncation.
    """
    alphas = np.asarray(alphas, dtype=complex).ravel()
    npts = alphas.size
    x = np.abs(alphas) ** 2
    out = np.zeros((npts, n, n), dtype=complex)

    zero = x == 0
    if zero.all():
        out[:] = np.eye(n)
        return out

    lag = _laguerre_table(x, n)
    lg = gammaln(np.arange(n + 1))
    # phase factor alpha/|alpha|; arbitrary where alpha == 0 (fixed up at the end)
    phase = np.where(zero, 1.0, alphas / np.where(zero, 1.0, np.abs(alphas)))
    loga = 0.5 * np.log(np.where(zero, 1.0, x))  # log|alpha|

    for k in range(n):
        j = np.arange(n - k)
        logmag = (
            0.5 * (lg[j + 1] - lg[j + k + 1])[:, None]
            + k * loga[None, :]
            - 0.5 * x[None, :]
        )
        c = np.exp(logmag) * lag[k, : n - k, :]          # real magnitudes, (n-k, P)
        out[:, j + k, j] = (c * (phase**k)[None, :]).T
        out[:, j, j + k] = (c * ((-phase.conj()) ** k)[None, :]).T

    if zero.any():
        out[zero] = np.eye(n)
    return out


def displacement(alpha: complex, space: FockSpace | int) -> np.ndarray:
    """Displacement operator D(alpha) = exp(alpha a^dag - alpha* a).

    Built from the closed-form matrix elements (exact values of the
    untruncated operator restricted to the truncated space), so each entry
    is accurate independently of the truncation.  Acting with it on states
    is only faithful while the displaced state fits the space; a warning is
    emitted when |alpha|^2 > n/4.
    """
    if not np.isfinite(alpha):
        raise ValueError(f"displacement amplitude must be finite, got {alpha!r}")
    n = _single_mode_dim(space)
    if abs(alpha) ** 2 > n / 4:
        warnings.warn(
            f"displacement with |alpha|^2 = {abs(alpha)**2:.3g} in a {n}-level "
            "space; results acting on states near the truncation edge are "
            "unreliable",
            stacklevel=2,
        )
    return _displacement_batch(np.array([alpha]), n)[0]


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in the mode-a-major basis ordering."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"left factor must be square, got shape {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"right factor must be square, got shape {b.shape}")
    return np.kron(a, b)


def hermitian_eigensystem(m: np.ndarray, herm_tol: float = 1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    Hermitian matrix.  Rejects input whose anti-Hermitian part exceeds
    ``herm_tol`` relative to the matrix scale."""
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, np.abs(m).max())
    defect = np.abs(m - m.conj().T).max()
    if defect > herm_tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: anti-Hermitian defect {defect:.3e} "
            f"exceeds {herm_tol:.1e} * scale"
        )
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade core)."""
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix exponential of non-finite input")
    return scipy.linalg.expm(m)


def _check_bipartite(rho: np.ndarray, dims: tuple[int, int]) -> tuple[int, int]:
    n_a, n_b = int(dims[0]), int(dims[1])
    rho = np.asarray(rho)
    if rho.shape != (n_a * n_b, n_a * n_b):
        raise ValueError(
            f"state of shape {rho.shape} does not match factor dims {n_a}x{n_b}"
        )
    return n_a, n_b


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: str = "a") -> np.ndarray:
    """Reduced density matrix of one mode of a bipartite state.

    ``keep`` selects the surviving factor, ``"a"`` or ``"b"``.
    """
    n_a, n_b = _check_bipartite(rho, dims)
    r4 = np.asarray(rho, dtype=complex).reshape(n_a, n_b, n_a, n_b)
    if keep == "a":
        return np.trace(r4, axis1=1, axis2=3)
    if keep == "b":
        return np.trace(r4, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def partial_transpose(rho: np.ndarray, dims: tuple[int, int], moved: str = "b") -> np.ndarray:
    """Transpose the indices of one factor of a bipartite operator."""
    n_a, n_b = _check_bipartite(rho, dims)
    r4 = np.asarray(rho, dtype=complex).reshape(n_a, n_b, n_a, n_b)
    if moved == "b":
        r4 = r4.transpose(0, 3, 2, 1)
    elif moved == "a":
        r4 = r4.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"moved must be 'a' or 'b', got {moved!r}")
    return r4.reshape(n_a * n_b, n_a * n_b)


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    eig_floor: float = -1e-8,
) -> np.ndarray:
    """Validate the density-matrix contract; returns rho as complex128.

    Checks Hermiticity, unit trace and positive semidefiniteness (minimum
    eigenvalue above ``eig_floor``), raising ``ValueError`` on violation.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    defect = np.abs(rho - rho.conj().T).max()
    if defect > herm_tol:
        raise ValueError(f"density matrix not Hermitian: defect {defect:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr:.12g} != 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < eig_floor:
        raise ValueError(f"density matrix has eigenvalue {w.min():.3e} < {eig_floor:.1e}")
    return rho
