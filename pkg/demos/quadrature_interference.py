"""Homodyne quadrature fingerprints of cat coherence.

The interference fringes of a cat state show up as oscillations in the
quadrature distribution.  The steady state reached from vacuum is an even
cat with a symmetric distribution; starting from (|0> + |1>)/sqrt(2) the
steady state carries even-odd coherence and the distribution (like the
Wigner function) becomes asymmetric.  Adding single-photon decay washes
the fringes out.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from catsim import (
    ModeParams,
    basis_state,
    build_one_mode,
    projector,
    quadrature_distribution,
    steady_state,
    wigner,
)

N = 30
DRIVE = 10 * np.exp(-1j * np.pi / 4)
xs = np.linspace(-7, 7, 561)
axis = np.linspace(-4.5, 4.5, 141)

cases = [
    ("vacuum start, no decay", 0.0, basis_state(N, 0)),
    ("(|0>+|1>)/sqrt2 start, no decay", 0.0, (basis_state(N, 0) + basis_state(N, 1)) / np.sqrt(2)),
    ("(|0>+|1>)/sqrt2 start, loss 0.1", 0.1, (basis_state(N, 0) + basis_state(N, 1)) / np.sqrt(2)),
]

fig, axes = plt.subplots(2, len(cases), figsize=(13, 7))
for col, (label, loss, psi0) in enumerate(cases):
    model = build_one_mode(ModeParams(kerr=1.0, drive=DRIVE, loss=loss, pair_loss=1.0), N)
    rho = steady_state(model, "propagate", rho0=projector(psi0), tol=1e-6)

    dist = quadrature_distribution(rho, 0.0, xs)
    asym = np.abs(dist.density - dist.density[::-1]).sum() * (xs[1] - xs[0])
    print(f"{label}: quadrature asymmetry = {asym:.4f}")

    axes[0, col].plot(dist.xs, dist.density)
    axes[0, col].set_title(label, fontsize=9)
    axes[0, col].set_xlabel("X")
    axes[0, col].set_ylabel("P(X)")

    grid = wigner(rho, axis, axis)
    im = axes[1, col].pcolormesh(grid.re_axis, grid.im_axis, grid.values,
                                 cmap="RdBu_r", vmin=-2 / np.pi, vmax=2 / np.pi)
    axes[1, col].set_aspect("equal")
    fig.colorbar(im, ax=axes[1, col])

fig.tight_layout()
fig.savefig("quadrature_interference.png", dpi=150)
print("wrote quadrature_interference.png")
