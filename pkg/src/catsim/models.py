"""Hamiltonians, jump operators and reference states for two-photon
driven-dissipative modes.

A single mode has Hamiltonian

    H = -detuning * n + (kerr/2) adag^2 a^2 + (drive/2) a^2 + (drive*/2) adag^2

with jump operators sqrt(loss) * a (single-photon decay) and
sqrt(pair_loss) * a^2 (two-photon decay).  Jumps carry the square root of
their rate so the dissipator is uniformly sum_k (L rho L^dag - {L^dag L, rho}/2).

Rates and energies are dimensionless; use whatever consistent unit the
scenario declares (the two-photon decay rate of mode a, by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fock import FockSpace, ladder_operators, tensor_product

__all__ = [
    "ModeParams",
    "CouplingSpec",
    "SystemModel",
    "build_one_mode",
    "build_two_mode",
    "coherent_state",
    "cat_state",
    "steady_alpha",
]


@dataclass(frozen=True)
class ModeParams:
    """Physical parameters of one driven-dissipative mode.

    detuning   : pump-cavity detuning
    kerr       : photon self-interaction strength
    drive      : complex two-photon drive amplitude
    loss       : single-photon decay rate (>= 0)
    pair_loss  : two-photon decay rate (>= 0)
    """

    detuning: float = 0.0
    kerr: float = 0.0
    drive: complex = 0j
    loss: float = 0.0
    pair_loss: float = 0.0

    def __post_init__(self):
        for name in ("detuning", "kerr", "loss", "pair_loss"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not np.isfinite(self.drive):
            raise ValueError(f"drive must be finite, got {self.drive!r}")
        if self.loss < 0:
            raise ValueError(f"loss rate must be >= 0, got {self.loss}")
        if self.pair_loss < 0:
            raise ValueError(f"pair_loss rate must be >= 0, got {self.pair_loss}")


@dataclass(frozen=True)
class CouplingSpec:
    """Inter-mode coupling: 'linear' exchanges single photons
    (g * (a bdag + adag b)), 'nonlinear' converts one a-photon into a
    b-photon pair (g * (a bdag^2 + adag b^2)), 'none' switches it off."""

    kind: str = "none"
    strength: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "nonlinear", "none"):
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if not math.isfinite(self.strength) or self.strength < 0:
            raise ValueError(f"coupling strength must be >= 0, got {self.strength}")


@dataclass(frozen=True)
class SystemModel:
    """Assembled generator data: Hamiltonian, rate-scaled jump list, space."""

    hamiltonian: np.ndarray
    jumps: tuple[np.ndarray, ...]
    space: FockSpace

    @property
    def dim(self) -> int:
        return self.space.dim


def _mode_hamiltonian(p: ModeParams, n: int, drive: bool = True) -> np.ndarray:
    a, adag, num, _ = ladder_operators(n)
    h = -p.detuning * num + 0.5 * p.kerr * (adag @ adag @ a @ a)
    if drive:
        h = h + 0.5 * p.drive * (a @ a) + 0.5 * np.conj(p.drive) * (adag @ adag)
    return h


def _mode_jumps(p: ModeParams, n: int) -> list[np.ndarray]:
    a, _, _, _ = ladder_operators(n)
    jumps = []
    if p.loss > 0:
        jumps.append(np.sqrt(p.loss) * a)
    if p.pair_loss > 0:
        jumps.append(np.sqrt(p.pair_loss) * (a @ a))
    return jumps


def build_one_mode(p: ModeParams, n: int) -> SystemModel:
    """Single-mode model in an n-level space (n >= 4)."""
    if n < 4:
        raise ValueError(f"truncation must be >= 4, got {n}")
    return SystemModel(
        hamiltonian=_mode_hamiltonian(p, n),
        jumps=tuple(_mode_jumps(p, n)),
        space=FockSpace(n),
    )


def build_two_mode(
    pa: ModeParams,
    pb: ModeParams,
    coupling: CouplingSpec,
    n_a: int,
    n_b: int,
) -> SystemModel:
    """Two coupled modes in an (n_a x n_b)-level space.

    With linear coupling both modes carry the full single-mode Hamiltonian.
    With nonlinear coupling mode b is the down-converted mode: it keeps only
    its detuning and Kerr terms and must not be driven (mode a supplies the
    photon pairs through the coupling).
    """
    if n_a < 4 or n_b < 4:
        raise ValueError(f"truncations must be >= 4, got {n_a}, {n_b}")
    if coupling.kind == "nonlinear" and pb.drive != 0:
        raise ValueError("nonlinear coupling: mode b must have zero drive")

    space = FockSpace(n_a, n_b)
    i_a = np.eye(n_a, dtype=complex)
    i_b = np.eye(n_b, dtype=complex)
    h_a = _mode_hamiltonian(pa, n_a)
    h_b = _mode_hamiltonian(pb, n_b, drive=coupling.kind != "nonlinear")

    a, _, _, _ = ladder_operators(n_a)
    b, _, _, _ = ladder_operators(n_b)
    a_full = tensor_product(a, i_b)
    b_full = tensor_product(i_a, b)

    h = tensor_product(h_a, i_b) + tensor_product(i_a, h_b)
    g = coupling.strength
    if coupling.kind == "linear" and g != 0:
        c = g * (a_full @ b_full.conj().T)
        h = h + c + c.conj().T
    elif coupling.kind == "nonlinear" and g != 0:
        c = g * (a_full @ b_full.conj().T @ b_full.conj().T)
        h = h + c + c.conj().T

    jumps = [tensor_product(j, i_b) for j in _mode_jumps(pa, n_a)]
    jumps += [tensor_product(i_a, j) for j in _mode_jumps(pb, n_b)]
    return SystemModel(hamiltonian=h, jumps=tuple(jumps), space=space)


def _number_amplitudes(alpha: complex, n: int) -> np.ndarray:
    """Coherent-state amplitudes <k|alpha> for k < n (stable in log space)."""
    if alpha == 0:
        c = np.zeros(n, dtype=complex)
        c[0] = 1.0
        return c
    ks = np.arange(n)
    mag = np.exp(ks * np.log(abs(alpha)) - 0.5 * gammaln(ks + 1.0) - 0.5 * abs(alpha) ** 2)
    return mag * (alpha / abs(alpha)) ** ks


def coherent_state(alpha: complex, n: int) -> np.ndarray:
    """Coherent state |alpha> truncated to n levels and renormalized."""
    c = _number_amplitudes(alpha, n)
    return c / np.linalg.norm(c)


def cat_state(xi: complex, parity: str, n: int) -> np.ndarray:
    """Even or odd cat state, the normalized |xi> +/- |-xi| superposition.

    Even cats occupy only even Fock levels, odd cats only odd ones.  The
    odd cat is undefined (a null vector) at xi = 0.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if xi == 0 and parity == "odd":
        raise ValueError("odd cat state with xi = 0 is the null vector")
    c = _number_amplitudes(xi, n)
    if parity == "even":
        c[1::2] = 0.0
    else:
        c[0::2] = 0.0
    return c / np.linalg.norm(c)


def steady_alpha(p: ModeParams) -> complex:
    """Coherent amplitude of the cat components singled out by the balance
    of two-photon drive, two-photon decay and Kerr shift:

        alpha = sqrt(drive* / (i * pair_loss - kerr))

    (principal branch; -alpha is the partner component).  Undefined when
    both pair_loss and kerr vanish.
    """
    denom = 1j * p.pair_loss - p.kerr
    if denom == 0:
        raise ValueError("steady amplitude undefined: pair_loss and kerr are both zero")
    return complex(np.sqrt(np.conj(complex(p.drive)) / denom))
