"""Scenario configuration: JSON schema, validation and typed loading.

A scenario is a single JSON document.  Complex numbers are encoded as
two-element ``[re, im]`` arrays everywhere (configs and output files) so
drive phases round-trip exactly.  All rates and times are expressed in the
unit the config declares in ``energy_unit``: "eta_a" (two-photon decay
rate of mode a) or, for scenarios where that rate vanishes, "G_a_over_10"
(a tenth of the drive magnitude).  The declared unit is metadata echoed to
``meta.json``; the numbers themselves are taken as given.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from typing import Any

import jsonschema
import numpy as np

from .fock import basis_state, projector, tensor_product
from .models import CouplingSpec, ModeParams, cat_state, coherent_state

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "config_schema",
    "parse_config",
    "load_config",
    "build_state_density",
    "initial_density",
    "resolve_sweep_parameter",
    "set_sweep_parameter",
]

_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
    "description": "complex number as [re, im]",
}

_MODE_PARAMS = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "detuning": {"type": "number"},
        "kerr": {"type": "number"},
        "drive": _COMPLEX,
        "loss": {"type": "number", "minimum": 0},
        "pair_loss": {"type": "number", "minimum": 0},
    },
}

_PURE_STATE = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "n"],
            "properties": {
                "kind": {"const": "fock"},
                "n": {"type": "integer", "minimum": 0},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "alpha"],
            "properties": {
                "kind": {"const": "coherent"},
                "alpha": _COMPLEX,
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "alpha", "parity"],
            "properties": {
                "kind": {"const": "cat"},
                "alpha": _COMPLEX,
                "parity": {"enum": ["even", "odd"]},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "terms"],
            "properties": {
                "kind": {"const": "superposition"},
                "terms": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["n", "amplitude"],
                        "properties": {
                            "n": {"type": "integer", "minimum": 0},
                            "amplitude": _COMPLEX,
                        },
                    },
                },
            },
        },
    ]
}

_STATE = {
    "oneOf": _PURE_STATE["oneOf"]
    + [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "components"],
            "properties": {
                "kind": {"const": "mixture"},
                "components": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["probability", "state"],
                        "properties": {
                            "probability": {"type": "number", "exclusiveMinimum": 0},
                            "state": _PURE_STATE,
                        },
                    },
                },
            },
        }
    ]
}

_AXIS = {
    "type": "object",
    "additionalProperties": False,
    "required": ["min", "max", "points"],
    "properties": {
        "min": {"type": "number"},
        "max": {"type": "number"},
        "points": {"type": "integer", "minimum": 2},
    },
}

_TIMES = {
    "type": "array",
    "minItems": 1,
    "items": {"oneOf": [{"type": "number", "minimum": 0}, {"const": "steady"}]},
}

_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "catsim scenario configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["system", "energy_unit", "modes", "truncation", "initial_state", "time_grid"],
    "properties": {
        "system": {"enum": ["one_mode", "two_mode_linear", "two_mode_nonlinear"]},
        "energy_unit": {"enum": ["eta_a", "G_a_over_10"]},
        "modes": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a"],
            "properties": {"a": _MODE_PARAMS, "b": _MODE_PARAMS},
        },
        "coupling": {
            "type": "object",
            "additionalProperties": False,
            "required": ["strength"],
            "properties": {"strength": {"type": "number", "minimum": 0}},
        },
        "truncation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a"],
            "properties": {
                "a": {"type": "integer", "minimum": 4},
                "b": {"type": "integer", "minimum": 4},
            },
        },
        "initial_state": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a"],
            "properties": {"a": _STATE, "b": _STATE},
        },
        "time_grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["t_max", "samples"],
            "properties": {
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "samples": {"type": "integer", "minimum": 2},
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "observables": {
                    "type": "array",
                    "items": {"type": "string"},
                },
                "wigner": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["mode", "times", "axis"],
                        "properties": {
                            "mode": {"enum": ["a", "b"]},
                            "times": _TIMES,
                            "axis": _AXIS,
                        },
                    },
                },
                "quadrature": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["mode", "times", "axis"],
                        "properties": {
                            "mode": {"enum": ["a", "b"]},
                            "phi": {"type": "number"},
                            "times": _TIMES,
                            "axis": _AXIS,
                        },
                    },
                },
                "joint_quadrature": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["times", "axis"],
                        "properties": {"times": _TIMES, "axis": _AXIS},
                    },
                },
                "eigencomponents": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["count", "times"],
                    "properties": {
                        "count": {"type": "integer", "minimum": 1},
                        "times": _TIMES,
                        "modes": {
                            "type": "array",
                            "minItems": 1,
                            "items": {"enum": ["a", "b", "joint"]},
                        },
                    },
                },
            },
        },
        "steady_state": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enabled": {"type": "boolean"},
                "method": {"enum": ["propagate", "kernel"]},
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["parameter", "values"],
            "properties": {
                "parameter": {"type": "string", "minLength": 1},
                "values": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"oneOf": [{"type": "number"}, _COMPLEX]},
                },
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rel": {"type": "number", "exclusiveMinimum": 0},
                "abs": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "output_dir": {"type": "string", "minLength": 1},
        "seed": {"type": "integer", "description": "reserved; the pipeline is deterministic"},
    },
}

_BASE_OBSERVABLES_ONE = ["n_a", "parity_a", "entropy", "purity"]
_BASE_OBSERVABLES_TWO = ["n_a", "parity_a", "entropy", "purity", "n_b", "negativity", "mutual_information"]
_EXTRA_OBSERVABLES_ONE = ["fidelity_even_cat"]
_EXTRA_OBSERVABLES_TWO = ["parity_b", "fidelity_even_cat"]
# canonical CSV column order (t first and trace_drift last are implicit)
OBSERVABLE_ORDER = [
    "n_a",
    "parity_a",
    "entropy",
    "purity",
    "fidelity_even_cat",
    "n_b",
    "parity_b",
    "negativity",
    "mutual_information",
]


class ConfigError(ValueError):
    """Configuration rejected; carries the dotted path of the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path or "<root>"
        super().__init__(f"{self.path}: {message}")


def config_schema() -> dict:
    """The JSON schema of the scenario configuration document."""
    return copy.deepcopy(_SCHEMA)


def _as_complex(value: Any) -> complex:
    return complex(float(value[0]), float(value[1]))


def _mode_params(raw: dict) -> ModeParams:
    return ModeParams(
        detuning=float(raw.get("detuning", 0.0)),
        kerr=float(raw.get("kerr", 0.0)),
        drive=_as_complex(raw.get("drive", [0.0, 0.0])),
        loss=float(raw.get("loss", 0.0)),
        pair_loss=float(raw.get("pair_loss", 0.0)),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario with defaults resolved.

    ``resolved`` is the fully materialized JSON document (defaults filled,
    superposition amplitudes normalized) that ``meta.json`` echoes; the
    typed fields below are derived from it.
    """

    system: str
    energy_unit: str
    mode_a: ModeParams
    mode_b: ModeParams | None
    coupling: CouplingSpec
    n_a: int
    n_b: int | None
    t_max: float
    samples: int
    observables: tuple[str, ...]
    rel_tol: float
    abs_tol: float
    steady_enabled: bool
    steady_method: str
    steady_tol: float
    steady_t_max: float
    output_dir: str
    resolved: dict

    @property
    def two_mode(self) -> bool:
        return self.system != "one_mode"

    @property
    def dims(self) -> tuple[int, int] | None:
        return (self.n_a, self.n_b) if self.two_mode else None

    @property
    def dim(self) -> int:
        return self.n_a * (self.n_b or 1)

    @property
    def outputs(self) -> dict:
        return self.resolved["outputs"]

    @property
    def sweep(self) -> dict | None:
        return self.resolved.get("sweep")


def _schema_error_path(err: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in err.absolute_path)


def _normalize_state(spec: dict, path: str) -> dict:
    """Normalize superposition amplitudes / check mixture probabilities."""
    spec = copy.deepcopy(spec)
    kind = spec["kind"]
    if kind == "superposition":
        amps = np.array([_as_complex(t["amplitude"]) for t in spec["terms"]])
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ConfigError(path + ".terms", "superposition amplitudes are all zero")
        amps = amps / norm
        for term, amp in zip(spec["terms"], amps):
            term["amplitude"] = [float(amp.real), float(amp.imag)]
        seen = set()
        for i, term in enumerate(spec["terms"]):
            if term["n"] in seen:
                raise ConfigError(f"{path}.terms.{i}.n", f"duplicate Fock index {term['n']}")
            seen.add(term["n"])
    elif kind == "mixture":
        total = sum(c["probability"] for c in spec["components"])
        if abs(total - 1.0) > 1e-10:
            raise ConfigError(path + ".components", f"probabilities sum to {total!r}, expected 1")
        for i, comp in enumerate(spec["components"]):
            comp["state"] = _normalize_state(comp["state"], f"{path}.components.{i}.state")
    elif kind == "cat":
        if _as_complex(spec["alpha"]) == 0 and spec["parity"] == "odd":
            raise ConfigError(path + ".alpha", "odd cat with alpha = 0 is the null vector")
    return spec


def _max_fock_index(spec: dict) -> int:
    kind = spec["kind"]
    if kind == "fock":
        return spec["n"]
    if kind == "superposition":
        return max(t["n"] for t in spec["terms"])
    if kind == "mixture":
        return max(_max_fock_index(c["state"]) for c in spec["components"])
    return 0


def _check_times_list(times: list, path: str, t_max: float, steady_enabled: bool) -> None:
    for i, t in enumerate(times):
        if t == "steady":
            if not steady_enabled:
                raise ConfigError(
                    f"{path}.{i}", "'steady' snapshot requested but steady_state.enabled is false"
                )
        elif not 0 <= float(t) <= t_max:
            raise ConfigError(f"{path}.{i}", f"snapshot time {t} outside [0, t_max={t_max}]")


def parse_config(raw: dict) -> ScenarioConfig:
    """Validate a raw config dict and resolve defaults.

    Raises ConfigError (with a dotted field path) on any violation.
    """
    validator = jsonschema.Draft7Validator(_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(_schema_error_path(err), err.message)

    cfg = copy.deepcopy(raw)
    system = cfg["system"]
    two_mode = system != "one_mode"

    if two_mode:
        for section in ("modes", "truncation", "initial_state"):
            if "b" not in cfg[section]:
                raise ConfigError(f"{section}.b", f"required for system '{system}'")
        if "coupling" not in cfg:
            raise ConfigError("coupling", f"required for system '{system}'")
        if system == "two_mode_nonlinear":
            drive = cfg["modes"]["b"].get("drive", [0.0, 0.0])
            if _as_complex(drive) != 0:
                raise ConfigError(
                    "modes.b.drive", "mode b carries no two-photon drive under nonlinear coupling"
                )
    else:
        for section in ("modes", "truncation", "initial_state"):
            if "b" in cfg.get(section, {}):
                raise ConfigError(f"{section}.b", "not allowed for a one-mode system")
        if "coupling" in cfg:
            raise ConfigError("coupling", "not allowed for a one-mode system")

    # defaults
    for mode in ("a",) + (("b",) if two_mode else ()):
        raw_mode = cfg["modes"].setdefault(mode, {})
        raw_mode.setdefault("detuning", 0.0)
        raw_mode.setdefault("kerr", 0.0)
        raw_mode.setdefault("drive", [0.0, 0.0])
        raw_mode.setdefault("loss", 0.0)
        raw_mode.setdefault("pair_loss", 0.0)
    outputs = cfg.setdefault("outputs", {})
    base = _BASE_OBSERVABLES_TWO if two_mode else _BASE_OBSERVABLES_ONE
    extras = _EXTRA_OBSERVABLES_TWO if two_mode else _EXTRA_OBSERVABLES_ONE
    observables = outputs.setdefault("observables", list(base))
    allowed = set(base) | set(extras)
    for i, name in enumerate(observables):
        if name not in allowed:
            raise ConfigError(
                f"outputs.observables.{i}",
                f"unknown observable {name!r} for system '{system}' (allowed: {sorted(allowed)})",
            )
    # canonical order, duplicates dropped
    requested = [name for name in OBSERVABLE_ORDER if name in observables]
    outputs["observables"] = requested
    outputs.setdefault("wigner", [])
    outputs.setdefault("quadrature", [])
    outputs.setdefault("joint_quadrature", [])
    for q in outputs["quadrature"]:
        q.setdefault("phi", 0.0)
    steady = cfg.setdefault("steady_state", {})
    steady.setdefault("enabled", False)
    steady.setdefault("method", "propagate")
    steady.setdefault("tolerance", 1e-6)
    steady.setdefault("t_max", 500.0)
    tol = cfg.setdefault("tolerances", {})
    tol.setdefault("rel", 1e-8)
    tol.setdefault("abs", 1e-10)
    cfg.setdefault("output_dir", "out")
    cfg.setdefault("seed", 0)

    n_a = cfg["truncation"]["a"]
    n_b = cfg["truncation"]["b"] if two_mode else None
    t_max = float(cfg["time_grid"]["t_max"])
    steady_enabled = bool(steady["enabled"])

    if steady["method"] == "kernel":
        dim = n_a * (n_b or 1)
        if dim * dim > 4096:
            raise ConfigError(
                "steady_state.method",
                f"kernel method needs dim^2 = {dim * dim} <= 4096; use 'propagate'",
            )

    # mode-specific output checks and snapshot times
    for i, w in enumerate(outputs["wigner"]):
        if w["mode"] == "b" and not two_mode:
            raise ConfigError(f"outputs.wigner.{i}.mode", "mode 'b' in a one-mode system")
        _check_times_list(w["times"], f"outputs.wigner.{i}.times", t_max, steady_enabled)
    for i, q in enumerate(outputs["quadrature"]):
        if q["mode"] == "b" and not two_mode:
            raise ConfigError(f"outputs.quadrature.{i}.mode", "mode 'b' in a one-mode system")
        _check_times_list(q["times"], f"outputs.quadrature.{i}.times", t_max, steady_enabled)
    if outputs["joint_quadrature"] and not two_mode:
        raise ConfigError("outputs.joint_quadrature", "requires a two-mode system")
    for i, q in enumerate(outputs["joint_quadrature"]):
        _check_times_list(q["times"], f"outputs.joint_quadrature.{i}.times", t_max, steady_enabled)
    if "eigencomponents" in outputs:
        comp = outputs["eigencomponents"]
        comp.setdefault("modes", ["a", "b"] if two_mode else ["joint"])
        if not two_mode and comp["modes"] != ["joint"]:
            raise ConfigError(
                "outputs.eigencomponents.modes", "one-mode systems only support ['joint']"
            )
        _check_times_list(comp["times"], "outputs.eigencomponents.times", t_max, steady_enabled)

    # initial states: normalize + truncation fit
    for mode, n in (("a", n_a),) + ((("b", n_b),) if two_mode else ()):
        path = f"initial_state.{mode}"
        cfg["initial_state"][mode] = _normalize_state(cfg["initial_state"][mode], path)
        top = _max_fock_index(cfg["initial_state"][mode])
        if top >= n:
            raise ConfigError(path, f"Fock index {top} outside truncation {n}")

    if "sweep" in cfg:
        resolve_sweep_parameter(cfg, cfg["sweep"]["parameter"])

    mode_a = _mode_params(cfg["modes"]["a"])
    mode_b = _mode_params(cfg["modes"]["b"]) if two_mode else None
    kind = {"one_mode": "none", "two_mode_linear": "linear", "two_mode_nonlinear": "nonlinear"}[system]
    strength = float(cfg["coupling"]["strength"]) if two_mode else 0.0
    return ScenarioConfig(
        system=system,
        energy_unit=cfg["energy_unit"],
        mode_a=mode_a,
        mode_b=mode_b,
        coupling=CouplingSpec(kind=kind, strength=strength),
        n_a=n_a,
        n_b=n_b,
        t_max=t_max,
        samples=int(cfg["time_grid"]["samples"]),
        observables=tuple(outputs["observables"]),
        rel_tol=float(tol["rel"]),
        abs_tol=float(tol["abs"]),
        steady_enabled=steady_enabled,
        steady_method=steady["method"],
        steady_tol=float(steady["tolerance"]),
        steady_t_max=float(steady["t_max"]),
        output_dir=cfg["output_dir"],
        resolved=cfg,
    )


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a scenario file."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    return parse_config(raw)


def _build_pure_state(spec: dict, n: int) -> np.ndarray:
    kind = spec["kind"]
    if kind == "fock":
        return basis_state(n, spec["n"])
    if kind == "coherent":
        return coherent_state(_as_complex(spec["alpha"]), n)
    if kind == "cat":
        return cat_state(_as_complex(spec["alpha"]), spec["parity"], n)
    if kind == "superposition":
        psi = np.zeros(n, dtype=complex)
        for term in spec["terms"]:
            psi[term["n"]] = _as_complex(term["amplitude"])
        return psi / np.linalg.norm(psi)
    raise ValueError(f"not a pure state spec: {kind!r}")


def build_state_density(spec: dict, n: int) -> np.ndarray:
    """Density matrix of a (validated) per-mode initial-state spec."""
    if spec["kind"] == "mixture":
        rho = np.zeros((n, n), dtype=complex)
        for comp in spec["components"]:
            rho += comp["probability"] * projector(_build_pure_state(comp["state"], n))
        return rho / np.trace(rho).real
    return projector(_build_pure_state(spec, n))


def initial_density(cfg: ScenarioConfig) -> np.ndarray:
    """Initial density matrix of the scenario (product state for two modes)."""
    rho_a = build_state_density(cfg.resolved["initial_state"]["a"], cfg.n_a)
    if not cfg.two_mode:
        return rho_a
    rho_b = build_state_density(cfg.resolved["initial_state"]["b"], cfg.n_b)
    return tensor_product(rho_a, rho_b)


def resolve_sweep_parameter(raw: dict, dotted: str):
    """Walk a dotted path into the raw config; return (container, key).

    The leaf must exist and be a number or a [re, im] pair.
    """
    parts = dotted.split(".")
    node: Any = raw
    for i, part in enumerate(parts[:-1]):
        if isinstance(node, list):
            try:
                node = node[int(part)]
                continue
            except (ValueError, IndexError):
                raise ConfigError("sweep.parameter", f"cannot resolve {'.'.join(parts[: i + 1])!r}") from None
        if not isinstance(node, dict) or part not in node:
            raise ConfigError("sweep.parameter", f"cannot resolve {'.'.join(parts[: i + 1])!r}")
        node = node[part]
    key = parts[-1]
    if isinstance(node, list):
        raise ConfigError("sweep.parameter", f"cannot resolve {dotted!r}")
    if not isinstance(node, dict) or key not in node:
        raise ConfigError("sweep.parameter", f"{dotted!r} does not exist in the config")
    leaf = node[key]
    if not isinstance(leaf, (int, float)) and not (
        isinstance(leaf, list) and len(leaf) == 2 and all(isinstance(v, (int, float)) for v in leaf)
    ):
        raise ConfigError("sweep.parameter", f"{dotted!r} is not a numeric or [re, im] field")
    return node, key


def set_sweep_parameter(raw: dict, dotted: str, value) -> dict:
    """Return a copy of the raw config with the swept parameter replaced."""
    out = copy.deepcopy(raw)
    node, key = resolve_sweep_parameter(out, dotted)
    node[key] = value
    return out
