"""Scalar and structural diagnostics of density matrices.

Entropies use the natural logarithm throughout; eigenvalues below 1e-14
are clamped to zero before taking logs so that integrator noise on nearly
pure states cannot produce NaNs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import hermitian_eigensystem, partial_trace, partial_transpose

__all__ = [
    "EigenComponent",
    "expectation",
    "von_neumann_entropy",
    "purity",
    "fidelity_pure",
    "negativity",
    "mutual_information",
    "dominant_eigencomponents",
]

EIGENVALUE_CLAMP = 1e-14


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    """Tr[op @ rho]."""
    op = np.asarray(op, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if op.shape != rho.shape:
        raise ValueError(f"operator shape {op.shape} != state shape {rho.shape}")
    return complex(np.einsum("ij,ji->", op, rho))


def _spectrum(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return np.where(w < EIGENVALUE_CLAMP, 0.0, w)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr[rho ln rho] with 0 ln 0 := 0."""
    w = _spectrum(rho)
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2]; 1 for pure states, 1/d for the maximally mixed state."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.einsum("ij,ji->", rho, rho).real)


def fidelity_pure(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> for a normalized pure target."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (psi.size, psi.size):
        raise ValueError(f"state shape {rho.shape} incompatible with ket of length {psi.size}")
    return float((psi.conj() @ rho @ psi).real)


def negativity(rho: np.ndarray, dims: tuple[int, int]) -> float:
    """Entanglement indicator: sum of |negative eigenvalues| of the partial
    transpose.  Zero on every separable state; side-independent."""
    pt = partial_transpose(rho, dims, moved="b")
    w = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    return float(-w[w < 0].sum())


def mutual_information(rho: np.ndarray, dims: tuple[int, int]) -> float:
    """S(A) + S(B) - S(AB), the total correlation between the modes.

    Clamped at zero from below (subadditivity can be violated by a few
    ulps of eigenvalue noise)."""
    s_a = von_neumann_entropy(partial_trace(rho, dims, keep="a"))
    s_b = von_neumann_entropy(partial_trace(rho, dims, keep="b"))
    s_ab = von_neumann_entropy(rho)
    return max(0.0, s_a + s_b - s_ab)


@dataclass(frozen=True)
class EigenComponent:
    """One eigenpair of a density matrix: weight in [0, 1] and the
    normalized eigenvector."""

    weight: float
    state: np.ndarray


def dominant_eigencomponents(rho: np.ndarray, k: int) -> list[EigenComponent]:
    """Top-k eigenpairs of rho by eigenvalue, weights sorted descending."""
    if k < 1:
        raise ValueError(f"component count must be >= 1, got {k}")
    rho = np.asarray(rho, dtype=complex)
    w, v = hermitian_eigensystem(rho, herm_tol=1e-8)
    order = np.argsort(w)[::-1][: min(k, w.size)]
    return [
        EigenComponent(weight=float(np.clip(w[i], 0.0, 1.0)), state=v[:, i].copy())
        for i in order
    ]
