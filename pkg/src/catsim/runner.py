"""Scenario execution: evolve, snapshot, sweep, and persist results.

Output files (all deterministic: identical configs produce byte-identical
bodies, floats are written with shortest round-trip formatting):

  timeseries.csv            t, requested observables, trace_drift
  wigner_<mode>_<t>.csv     one header row naming the axes, then im-major rows
  wigner_<mode>_<t>.json    axes plus row-major values
  quadrature_<mode>_<t>.csv x, density (quadrature phase recorded in meta)
  quadrature_joint_<t>.csv  joint density, x_a-major rows over the x_b axis
  components_<t>.json       eigencomponent weights (per mode for two-mode runs)
  sweep.csv                 per-point summaries (sweeps only)
  meta.json                 resolved config, columns, file list, status
"""

from __future__ import annotations

import concurrent.futures
import json
import os
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .config import (
    ScenarioConfig,
    initial_density,
    parse_config,
    set_sweep_parameter,
)
from .dynamics import (
    NonConvergenceError,
    StepSizeUnderflowError,
    evolve,
    lindblad_rhs,
    steady_state,
)
from .fock import ladder_operators, partial_trace, tensor_product
from .models import SystemModel, build_one_mode, build_two_mode, cat_state, steady_alpha
from .observables import (
    dominant_eigencomponents,
    expectation,
    mutual_information,
    negativity,
    purity,
    von_neumann_entropy,
)
from .phasespace import (
    PhaseSpaceGrid,
    joint_quadrature_distribution,
    quadrature_distribution,
    wigner,
)

__all__ = ["run_scenario", "run_sweep", "ScenarioResult"]


def _fmt(x) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(x))


def _axis(spec: dict) -> np.ndarray:
    return np.linspace(spec["min"], spec["max"], spec["points"])


def _time_tag(t) -> str:
    return "steady" if t == "steady" else f"{float(t):g}"


def build_model(cfg: ScenarioConfig) -> SystemModel:
    if cfg.two_mode:
        return build_two_mode(cfg.mode_a, cfg.mode_b, cfg.coupling, cfg.n_a, cfg.n_b)
    return build_one_mode(cfg.mode_a, cfg.n_a)


class _ObservableSet:
    """Precomputed operators for the timeseries columns."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        _, _, num_a, par_a = ladder_operators(cfg.n_a)
        if cfg.two_mode:
            i_a = np.eye(cfg.n_a, dtype=complex)
            i_b = np.eye(cfg.n_b, dtype=complex)
            _, _, num_b, par_b = ladder_operators(cfg.n_b)
            self.num_a = tensor_product(num_a, i_b)
            self.par_a = tensor_product(par_a, i_b)
            self.num_b = tensor_product(i_a, num_b)
            self.par_b = tensor_product(i_a, par_b)
        else:
            self.num_a, self.par_a = num_a, par_a
            self.num_b = self.par_b = None
        self.cat_target = None
        if "fidelity_even_cat" in cfg.observables:
            alpha = steady_alpha(cfg.mode_a)
            target = cat_state(alpha, "even", cfg.n_a)
            self.cat_target = target

    def row(self, rho: np.ndarray) -> dict:
        cfg = self.cfg
        out = {}
        for name in cfg.observables:
            if name == "n_a":
                out[name] = expectation(self.num_a, rho).real
            elif name == "parity_a":
                out[name] = expectation(self.par_a, rho).real
            elif name == "entropy":
                out[name] = von_neumann_entropy(rho)
            elif name == "purity":
                out[name] = purity(rho)
            elif name == "n_b":
                out[name] = expectation(self.num_b, rho).real
            elif name == "parity_b":
                out[name] = expectation(self.par_b, rho).real
            elif name == "negativity":
                out[name] = negativity(rho, cfg.dims)
            elif name == "mutual_information":
                out[name] = mutual_information(rho, cfg.dims)
            elif name == "fidelity_even_cat":
                target = self.cat_target
                if cfg.two_mode:
                    rho_a = partial_trace(rho, cfg.dims, keep="a")
                    out[name] = float((target.conj() @ rho_a @ target).real)
                else:
                    out[name] = float((target.conj() @ rho @ target).real)
        return out


def _mode_density(rho: np.ndarray, cfg: ScenarioConfig, mode: str) -> np.ndarray:
    if not cfg.two_mode:
        if mode not in ("a", "joint"):
            raise ValueError(f"mode {mode!r} in a one-mode system")
        return rho
    if mode == "joint":
        return rho
    return partial_trace(rho, cfg.dims, keep=mode)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_grid(out_dir: str, stem: str, grid: PhaseSpaceGrid, files: list[str]) -> None:
    csv_path = os.path.join(out_dir, stem + ".csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("im\\re," + ",".join(_fmt(x) for x in grid.re_axis) + "\n")
        for i, y in enumerate(grid.im_axis):
            fh.write(_fmt(y) + "," + ",".join(_fmt(v) for v in grid.values[i]) + "\n")
    files.append(stem + ".csv")
    json_path = os.path.join(out_dir, stem + ".json")
    doc = {
        "re_axis": [float(x) for x in grid.re_axis],
        "im_axis": [float(y) for y in grid.im_axis],
        "values": [[float(v) for v in row] for row in grid.values],
    }
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(stem + ".json")


@dataclass
class ScenarioResult:
    """In-memory handles of a finished run (states are kept for reuse)."""

    config: ScenarioConfig
    times: np.ndarray
    states: np.ndarray
    steady: np.ndarray | None
    meta: dict


def _snapshot_states(trajectory_times, states, steady):
    """Return a lookup from a snapshot time ('steady' or a number merged
    into the sample grid) to the corresponding density matrix."""

    def lookup(t):
        if t == "steady":
            return steady
        idx = int(np.argmin(np.abs(trajectory_times - float(t))))
        return states[idx]

    return lookup


def run_scenario(raw_config: dict | ScenarioConfig, out_dir: str | None = None, quiet: bool = True) -> ScenarioResult:
    """Execute one scenario and write its output file set.

    Integrator failures are surfaced as exceptions after flagging the
    partial outputs in ``meta.json`` (status "partial").
    """
    cfg = raw_config if isinstance(raw_config, ScenarioConfig) else parse_config(raw_config)
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)

    def say(msg: str) -> None:
        if not quiet:
            print(msg)

    model = build_model(cfg)
    rho0 = initial_density(cfg)
    say(f"{cfg.system}: dim {cfg.dim}, evolving to t = {cfg.t_max:g}")

    # sample grid, with numeric snapshot times merged in so snapshots are exact
    times = set(np.linspace(0.0, cfg.t_max, cfg.samples))
    snap_times = []
    outputs = cfg.outputs
    for block in outputs["wigner"] + outputs["quadrature"] + outputs["joint_quadrature"]:
        snap_times += [t for t in block["times"] if t != "steady"]
    if "eigencomponents" in outputs:
        snap_times += [t for t in outputs["eigencomponents"]["times"] if t != "steady"]
    times.update(float(t) for t in snap_times)
    times = np.array(sorted(times))

    meta: dict = {
        "tool": "catsim",
        "version": __version__,
        "config": cfg.resolved,
        "columns": {"timeseries": ["t", *cfg.observables, "trace_drift"]},
        "files": [],
        "status": "ok",
        "failure": None,
    }
    files: list[str] = meta["files"]

    status_error: Exception | None = None
    steady = None
    states = None
    trajectory = None
    try:
        trajectory = evolve(model, rho0, times, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
        states = trajectory.states
    except StepSizeUnderflowError as exc:
        meta["status"] = "partial"
        meta["failure"] = str(exc)
        status_error = exc
    if status_error is None and cfg.steady_enabled:
        say(f"solving steady state ({cfg.steady_method}, tol {cfg.steady_tol:g})")
        try:
            steady = steady_state(
                model,
                method=cfg.steady_method,
                rho0=rho0,
                tol=cfg.steady_tol,
                t_max=cfg.steady_t_max,
                rel_tol=cfg.rel_tol,
                abs_tol=cfg.abs_tol,
            )
            meta["steady_state"] = {
                "residual": float(np.abs(lindblad_rhs(model, steady)).max()),
                "method": cfg.steady_method,
            }
        except (NonConvergenceError, StepSizeUnderflowError) as exc:
            meta["status"] = "partial"
            meta["failure"] = str(exc)
            status_error = exc

    if states is not None:
        obs = _ObservableSet(cfg)
        rows = []
        for i, t in enumerate(times):
            values = obs.row(states[i])
            rows.append([t, *[values[name] for name in cfg.observables], trajectory.trace_drift[i]])
        _write_csv(os.path.join(out_dir, "timeseries.csv"), meta["columns"]["timeseries"], rows)
        files.append("timeseries.csv")

        lookup = _snapshot_states(times, states, steady)

        def usable(t) -> bool:
            return t != "steady" or steady is not None

        for block in outputs["wigner"]:
            axis = _axis(block["axis"])
            for t in filter(usable, block["times"]):
                rho_m = _mode_density(lookup(t), cfg, block["mode"])
                grid = wigner(rho_m, axis, axis)
                _write_grid(out_dir, f"wigner_{block['mode']}_{_time_tag(t)}", grid, files)
        for block in outputs["quadrature"]:
            xs = _axis(block["axis"])
            for t in filter(usable, block["times"]):
                rho_m = _mode_density(lookup(t), cfg, block["mode"])
                dist = quadrature_distribution(rho_m, block["phi"], xs)
                stem = f"quadrature_{block['mode']}_{_time_tag(t)}"
                _write_csv(os.path.join(out_dir, stem + ".csv"), ["x", "density"],
                           zip(dist.xs, dist.density))
                files.append(stem + ".csv")
        for block in outputs["joint_quadrature"]:
            xs = _axis(block["axis"])
            for t in filter(usable, block["times"]):
                dens = joint_quadrature_distribution(lookup(t), cfg.dims, xs, xs)
                stem = f"quadrature_joint_{_time_tag(t)}"
                path = os.path.join(out_dir, stem + ".csv")
                with open(path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write("xa\\xb," + ",".join(_fmt(x) for x in xs) + "\n")
                    for i, x in enumerate(xs):
                        fh.write(_fmt(x) + "," + ",".join(_fmt(v) for v in dens[i]) + "\n")
                files.append(stem + ".csv")
        if "eigencomponents" in outputs:
            block = outputs["eigencomponents"]
            for t in filter(usable, block["times"]):
                doc = {"time": t if t == "steady" else float(t), "count": block["count"], "modes": {}}
                for mode in block["modes"]:
                    rho_m = _mode_density(lookup(t), cfg, mode)
                    comps = dominant_eigencomponents(rho_m, block["count"])
                    par = ladder_operators(rho_m.shape[0])[3]
                    doc["modes"][mode] = [
                        {
                            "weight": c.weight,
                            "parity": float((c.state.conj() @ par @ c.state).real),
                        }
                        for c in comps
                    ]
                name = f"components_{_time_tag(t)}.json"
                with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
                    json.dump(doc, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                files.append(name)

    files.append("meta.json")
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    say(f"wrote {len(files)} files to {out_dir}")

    if status_error is not None:
        raise status_error
    return ScenarioResult(
        config=cfg,
        times=times,
        states=states,
        steady=steady,
        meta=meta,
    )


_SWEEP_SUMMARY = [
    "alpha_fit_abs",
    "alpha_fit_arg",
    "max_fidelity_even_cat",
    "final_purity",
    "final_entropy",
]


def _even_sector_alpha_fit(rho: np.ndarray, n: int) -> complex:
    """Coherent amplitude of the dominant even-parity eigencomponent:
    magnitude sqrt(<n>), phase arg(<a^2>)/2 (cats are a^2 eigenstates)."""
    a, _, num, par = ladder_operators(n)
    comps = dominant_eigencomponents(rho, n)
    for comp in comps:
        v = comp.state
        if float((v.conj() @ par @ v).real) > 0:
            mag = np.sqrt(max(0.0, float((v.conj() @ num @ v).real)))
            a2 = complex(v.conj() @ (a @ (a @ v)))
            phase = 0.5 * np.angle(a2) if a2 != 0 else 0.0
            return mag * np.exp(1j * phase)
    return 0j


def _sweep_point(raw: dict, dotted: str, value, point_dir: str) -> list[float]:
    """Run one sweep point and compute its summary row."""
    point_raw = set_sweep_parameter(raw, dotted, value)
    point_raw.pop("sweep", None)
    point_raw.setdefault("steady_state", {})["enabled"] = True
    cfg = parse_config(point_raw)
    result = run_scenario(cfg, out_dir=point_dir)

    rho_ss = result.steady
    rho_a = rho_ss if not cfg.two_mode else partial_trace(rho_ss, cfg.dims, keep="a")
    alpha_fit = _even_sector_alpha_fit(rho_a, cfg.n_a)

    target = cat_state(steady_alpha(cfg.mode_a), "even", cfg.n_a)
    fidelities = []
    for rho in result.states:
        r = rho if not cfg.two_mode else partial_trace(rho, cfg.dims, keep="a")
        fidelities.append(float((target.conj() @ r @ target).real))

    # Wigner extrema of the steady state (configured grid, else a default one)
    if cfg.outputs["wigner"]:
        axis = _axis(cfg.outputs["wigner"][0]["axis"])
    else:
        half = abs(alpha_fit) + 3.0
        axis = np.linspace(-half, half, 121)
    key = [value] if isinstance(value, (int, float)) else [value[0], value[1]]
    row = [
        *key,
        abs(alpha_fit),
        float(np.angle(alpha_fit)),
        max(fidelities),
        purity(rho_ss),
        von_neumann_entropy(rho_ss),
    ]
    if cfg.two_mode:
        for mode in ("a", "b"):
            rho_m = partial_trace(rho_ss, cfg.dims, keep=mode)
            row.append(float(wigner(rho_m, axis, axis).values.min()))
    else:
        row.append(float(wigner(rho_ss, axis, axis).values.min()))
    return row


def run_sweep(raw_config: dict | ScenarioConfig, out_dir: str | None = None,
              workers: int = 1, quiet: bool = True) -> dict:
    """Run every sweep point and write sweep.csv plus per-point output sets.

    Points are independent; with workers > 1 they execute in a process
    pool.  Point ordering in sweep.csv always follows the configured
    values list.
    """
    cfg = raw_config if isinstance(raw_config, ScenarioConfig) else parse_config(raw_config)
    if cfg.sweep is None:
        raise ValueError("configuration has no sweep block")
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)

    dotted = cfg.sweep["parameter"]
    values = cfg.sweep["values"]
    point_dirs = [os.path.join(out_dir, f"point_{i:03d}") for i in range(len(values))]
    if not quiet:
        print(f"sweeping {dotted} over {len(values)} points (workers = {workers})")

    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(_sweep_point, [cfg.resolved] * len(values), [dotted] * len(values),
                         values, point_dirs)
            )
    else:
        rows = [
            _sweep_point(cfg.resolved, dotted, value, pdir)
            for value, pdir in zip(values, point_dirs)
        ]

    key = ["value"] if isinstance(values[0], (int, float)) else ["value_re", "value_im"]
    minw = ["min_wigner_a", "min_wigner_b"] if cfg.two_mode else ["min_wigner"]
    columns = key + _SWEEP_SUMMARY + minw
    _write_csv(os.path.join(out_dir, "sweep.csv"), columns, rows)
    meta = {
        "tool": "catsim",
        "version": __version__,
        "config": cfg.resolved,
        "columns": {"sweep": columns},
        "files": ["sweep.csv"] + [f"point_{i:03d}" for i in range(len(values))],
        "status": "ok",
        "failure": None,
    }
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return meta
