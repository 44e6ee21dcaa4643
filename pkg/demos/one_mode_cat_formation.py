"""Formation of a Schrodinger cat in a two-photon driven-dissipative mode.

Starting from vacuum, the competition between the two-photon drive and
two-photon decay steers the mode into the even cat state whose coherent
amplitude follows from the drive/decay/Kerr balance.  Starting from a
single photon gives the odd cat instead.  We track photon number, parity
and cat fidelity along the way and draw the Wigner function of the result.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from catsim import (
    ModeParams,
    basis_state,
    build_one_mode,
    cat_state,
    evolve,
    expectation,
    fidelity_pure,
    ladder_operators,
    projector,
    steady_alpha,
    wigner,
)

N = 30                                   # Fock truncation
params = ModeParams(kerr=1.0, drive=10 * np.exp(-1j * np.pi / 4), pair_loss=1.0)
model = build_one_mode(params, N)
alpha = steady_alpha(params)
print(f"target cat amplitude: {alpha:.4f}  (|alpha|^2 = {abs(alpha)**2:.2f} photons)")

_, _, num_op, par_op = ladder_operators(N)
times = np.linspace(0.0, 3.0, 61)

fig, axes = plt.subplots(2, 3, figsize=(12, 7))

for row, (label, start) in enumerate([("even", 0), ("odd", 1)]):
    target = cat_state(alpha, label, N)
    traj = evolve(model, projector(basis_state(N, start)), times)
    n_t = [expectation(num_op, r).real for r in traj.states]
    p_t = [expectation(par_op, r).real for r in traj.states]
    f_t = [fidelity_pure(target, r) for r in traj.states]
    print(
        f"start |{start}>: final <n> = {n_t[-1]:.3f}, parity = {p_t[-1]:+.3f}, "
        f"{label}-cat fidelity = {f_t[-1]:.4f}"
    )

    ax = axes[row, 0]
    ax.plot(times, n_t, label="photon number")
    ax.plot(times, p_t, label="parity")
    ax.set_xlabel("t")
    ax.set_title(f"start in |{start}>")
    ax.legend()

    ax = axes[row, 1]
    ax.plot(times, f_t)
    ax.set_xlabel("t")
    ax.set_ylabel(f"{label}-cat fidelity")
    ax.set_ylim(0, 1.02)

    axis = np.linspace(-4.5, 4.5, 161)
    grid = wigner(traj.states[-1], axis, axis)
    ax = axes[row, 2]
    im = ax.pcolormesh(grid.re_axis, grid.im_axis, grid.values, cmap="RdBu_r",
                       vmin=-2 / np.pi, vmax=2 / np.pi)
    ax.set_aspect("equal")
    ax.set_title(f"Wigner at t = {times[-1]:g} (min {grid.values.min():.3f})")
    fig.colorbar(im, ax=ax)

fig.tight_layout()
fig.savefig("one_mode_cat_formation.png", dpi=150)
print("wrote one_mode_cat_formation.png")
