"""JSON configuration: validation and construction of model objects."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import jsonschema
import numpy as np

from .crack_physics import (CrackSpec, NondimModel, NondimSummary, PhysicalBeam,
                            nondimensionalize)
from .dynamics import LoadModel, SimConfig
from .modal_algebra import State

__all__ = ["ConfigError", "Problem", "load_config", "parse_config", "build_load",
           "build_simulation", "SCHEMA"]


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending path."""


_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_COUNT = {"type": "integer", "minimum": 1}


def _obj(properties, required=()):
    return {
        "type": "object",
        "properties": properties,
        "required": list(required),
        "additionalProperties": False,
    }


SCHEMA = _obj({
    "physical": _obj({
        "length": _POS,
        "youngs_modulus": _POS,
        "area_moment": _POS,
        "cross_section_area": _POS,
        "density": _POS,
        "damping": _NONNEG,
        "viscosity": _NONNEG,
        "axial_force": _NUM,
        "section_height": _POS,
        "cracks": {
            "type": "array",
            "items": _obj({
                "position": _NUM,
                "kind": {"enum": ["single_sided", "double_sided", "direct"]},
                "depth_ratio": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                "flexibility": _NONNEG,
            }, required=("position", "kind")),
        },
    }, required=("length", "youngs_modulus", "area_moment", "cross_section_area", "density")),
    "nondim": _obj({
        "crack_positions": {"type": "array", "items": _NUM},
        "flexibilities": {"type": "array", "items": _POS},
        "beta": _NUM,
        "c_d": _NONNEG,
        "mu": _NONNEG,
    }),
    "modal": _obj({
        "n_modes": _COUNT,
        "scan_step": _POS,
        "lambda_max": _POS,
    }),
    "simulation": _obj({
        "model_kind": {"enum": ["beam", "arch"]},
        "t_final": _POS,
        "dt": _POS,
        "record_every": _COUNT,
        "initial": _obj({
            "modal": {"type": "array", "items": _NUM},
            "velocity": {"type": "array", "items": _NUM},
            "uniform": _NUM,
        }),
        "load": _obj({
            "kind": {"enum": ["zero", "modal", "uniform"]},
            "p0": _NUM,
            "modal": {"type": "array", "items": _NUM},
            "profile": _obj({
                "type": {"enum": ["constant", "sinusoid"]},
                "amplitude": _NUM,
                "omega": _NUM,
                "phase": _NUM,
            }, required=("type",)),
        }, required=("kind",)),
    }, required=("model_kind", "t_final", "dt")),
})


def _path(parts, root="config"):
    out = root
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _describe(error):
    path = list(error.absolute_path)
    if error.validator == "additionalProperties":
        allowed = set(error.schema.get("properties", {}))
        extra = sorted(k for k in error.instance if k not in allowed)
        return f"{_path(path + extra[:1])}: unknown key"
    return f"{_path(path)}: {error.message}"


def _validate(doc):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.validator))
    if errors:
        raise ConfigError("; ".join(_describe(e) for e in errors[:5]))
    if ("physical" in doc) == ("nondim" in doc):
        raise ConfigError("config: exactly one of 'physical' or 'nondim' is required")
    for key in ("physical", "nondim", "modal", "simulation"):
        _check_finite(doc.get(key), [key])


def _check_finite(node, path):
    if isinstance(node, dict):
        for k, v in node.items():
            _check_finite(v, path + [k])
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _check_finite(v, path + [i])
    elif isinstance(node, float) and not math.isfinite(node):
        raise ConfigError(f"{_path(path)}: must be finite")


@dataclass(frozen=True)
class Problem:
    """Everything a command needs, resolved from a configuration document."""

    model: NondimModel
    physical: PhysicalBeam | None
    summary: NondimSummary | None
    n_modes: int
    scan: dict
    simulation: dict | None


def _physical(doc):
    cracks = []
    for i, c in enumerate(doc.get("cracks", [])):
        try:
            cracks.append(CrackSpec(c["position"], c["kind"], c.get("depth_ratio", 0.0),
                                    c.get("flexibility", 0.0)))
        except ValueError as exc:
            raise ConfigError(f"config.physical.cracks[{i}]: {exc}") from None
        if c["kind"] == "direct" and "flexibility" not in c:
            raise ConfigError(f"config.physical.cracks[{i}].flexibility: required for kind 'direct'")
        if c["kind"] != "direct" and "depth_ratio" not in c:
            raise ConfigError(f"config.physical.cracks[{i}].depth_ratio: required for kind {c['kind']!r}")
    try:
        return PhysicalBeam(
            length=doc["length"],
            youngs_modulus=doc["youngs_modulus"],
            area_moment=doc["area_moment"],
            cross_section_area=doc["cross_section_area"],
            density=doc["density"],
            damping=doc.get("damping", 0.0),
            viscosity=doc.get("viscosity", 0.0),
            axial_force=doc.get("axial_force", 0.0),
            section_height=doc.get("section_height", 1.0),
            cracks=tuple(cracks),
        )
    except ValueError as exc:
        raise ConfigError(f"config.physical: {exc}") from None


def parse_config(doc) -> Problem:
    """Validate a decoded JSON document and build the problem it describes."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    _validate(doc)
    physical = summary = None
    if "physical" in doc:
        physical = _physical(doc["physical"])
        try:
            model, summary = nondimensionalize(physical)
        except ValueError as exc:
            raise ConfigError(f"config.physical.cracks: {exc}") from None
    else:
        nd = doc["nondim"]
        try:
            model = NondimModel(
                tuple(nd.get("crack_positions", ())), tuple(nd.get("flexibilities", ())),
                beta=nd.get("beta", 0.0), c_d=nd.get("c_d", 0.0), mu=nd.get("mu", 0.0),
            )
        except ValueError as exc:
            raise ConfigError(f"config.nondim: {exc}") from None
    modal = doc.get("modal", {})
    scan = {}
    if "scan_step" in modal:
        scan["step"] = modal["scan_step"]
    if "lambda_max" in modal:
        scan["lambda_max"] = modal["lambda_max"]
    return Problem(model, physical, summary, modal.get("n_modes", 16), scan, doc.get("simulation"))


def load_config(path) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)


def build_load(sim) -> LoadModel:
    spec = sim.get("load", {"kind": "zero"})
    profile = spec.get("profile", {"type": "constant"})
    kind = spec["kind"]
    if kind == "uniform" and "p0" not in spec:
        raise ConfigError("config.simulation.load.p0: required for kind 'uniform'")
    if kind == "modal" and "modal" not in spec:
        raise ConfigError("config.simulation.load.modal: required for kind 'modal'")
    if profile["type"] == "sinusoid" and "omega" not in profile:
        raise ConfigError("config.simulation.load.profile.omega: required for a sinusoid")
    return LoadModel(
        kind=kind,
        p0=spec.get("p0", 0.0),
        modal=tuple(spec.get("modal", ())),
        profile=profile["type"],
        amplitude=profile.get("amplitude", 1.0),
        omega=profile.get("omega", 0.0),
        phase=profile.get("phase", 0.0),
    )


def build_simulation(sim, basis) -> SimConfig:
    """Simulation settings, with the initial state resolved on `basis`."""
    n = basis.n
    init = sim.get("initial", {})
    if "modal" in init and "uniform" in init:
        raise ConfigError("config.simulation.initial: give either 'modal' or 'uniform', not both")
    c = np.zeros(n)
    v = np.zeros(n)
    for key, target in (("modal", c), ("velocity", v)):
        values = init.get(key, [])
        if len(values) > n:
            raise ConfigError(
                f"config.simulation.initial.{key}: {len(values)} entries for {n} modes")
        target[: len(values)] = values
    if "uniform" in init:
        c = LoadModel("uniform", p0=init["uniform"]).project(basis)
    return SimConfig(
        model_kind=sim["model_kind"],
        t_final=sim["t_final"],
        dt=sim["dt"],
        initial_state=State(c, v),
        record_every=sim.get("record_every", 1),
    )
