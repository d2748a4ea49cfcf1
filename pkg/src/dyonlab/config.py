"""Run configuration: JSON-schema per subcommand, loading and validation.

A config file looks like::

    {"version": 1, "command": "scatter", "seed": 42,
     "params": {"theta": 3.14159265, "k": 1.0, "phi": 3.14159265},
     "output": {"report": "scatter.json", "csv": "scatter.csv"}}

Command-line flags override ``params``; the merged parameters are validated
before anything is computed.  Unknown keys are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import jsonschema

SCHEMA_VERSION = 1
DEFAULT_SEED = 42

COMMANDS = ("phase", "charges", "flux", "loop-integral", "vacuum", "evolve", "two-path", "fringe",
            "scatter", "check")

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_int = {"type": "integer"}
_bool = {"type": "boolean"}
_pair = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}


def _obj(props: dict, doc: str) -> dict:
    return {"type": "object", "description": doc, "properties": props, "additionalProperties": False}


_CHARGE = {
    "alpha": dict(_pos, description="fine-structure constant (default CODATA value)"),
    "n_q": dict(_int, description="electric charge number"),
    "n_g": dict(_int, description="magnetic charge number"),
    "theta": dict(_num, description="vacuum angle, radians"),
    "q": dict(_num, description="raw electric charge; with g, overrides n_q/n_g"),
    "g": dict(_num, description="raw magnetic charge"),
}
_FLUX = {
    "flux_quanta": dict(_bool, description="use one magnetic and one electric flux quantum"),
    "n_phi_e": dict(_int, description="electric flux number (flux rule)"),
    "n_phi_m": dict(_int, description="magnetic flux number (flux rule)"),
    "phi_m": dict(_num, description="raw magnetic flux"),
    "phi_e": dict(_num, description="raw electric flux"),
    "radius_eps": dict(_pos, description="tube exclusion radius"),
}

PARAM_SCHEMAS: dict[str, dict] = {
    "phase": _obj({**_CHARGE, **_FLUX, "n": dict(_int, description="winding number")},
                  "dyon phase for a charge encircling a flux tube n times"),
    "charges": _obj({**_CHARGE,
                     "partner_n_q": dict(_int, description="second dyon charge number for the pairing"),
                     "partner_n_g": dict(_int, description="second dyon magnetic number"),
                     "xi": dict(_num, description="duality rotation angle applied to the charges")},
                    "Witten-effect charges, pairing condition and duality rotation"),
    "flux": _obj({"alpha": _CHARGE["alpha"], "theta": _CHARGE["theta"],
                  "n_phi_e": _FLUX["n_phi_e"], "n_phi_m": _FLUX["n_phi_m"],
                  "radius_eps": _FLUX["radius_eps"]},
                 "flux tube from integer flux numbers"),
    "loop-integral": _obj({**_CHARGE, **_FLUX,
                           "field": {"enum": ["beta", "dyon"],
                                     "description": "integrate grad beta (theta only) or qA + gC"},
                           "path_csv": {"type": "string", "description": "CSV with columns x,y"},
                           "radius": dict(_pos, description="circle radius when no CSV is given"),
                           "turns": dict(_int, description="signed number of turns of the circle"),
                           "center": dict(_pair, description="circle centre"),
                           "quadrature_step": dict(_pos, description="midpoint step (default 2^-10 of length)")},
                          "numerical loop integral and winding number"),
    "vacuum": _obj({"theta": _CHARGE["theta"],
                    "M": {"type": "integer", "minimum": 1, "description": "truncation, windings in [-M, M]"},
                    "normalize": dict(_bool, description="scale by 1/sqrt(2M+1)"),
                    "shifts": {"type": "integer", "minimum": 0, "description": "winding shifts to apply"}},
                   "truncated theta-vacuum in the winding basis"),
    "evolve": _obj({"grid": {"type": "integer", "minimum": 4, "description": "cells per side"},
                    "dx": _pos, "radius_eps": _FLUX["radius_eps"],
                    "mass": _pos, "dt": _pos,
                    "steps": {"type": "integer", "minimum": 0},
                    "absorb_margin": {"type": "integer", "minimum": 0},
                    "alpha_eff": dict(_num, description="flux of the tube at the origin"),
                    "center": dict(_pair, description="packet centre"),
                    "width": dict(_pos, description="packet std of |psi|^2"),
                    "k": dict(_pair, description="packet wave vector")},
                   "evolve one Gaussian packet on the lattice"),
    "two-path": _obj({"alpha_eff": dict(_num, description="tube flux (charge e, magnetic flux only)"),
                      "theta": dict(_num, description="vacuum case: witten(1,1,theta) around flux quanta"),
                      "resolution": {"enum": ["reference", "small"]}},
                     "two-path interference around the tube"),
    "fringe": _obj({"L": _pos, "d": _pos, "w": _pos, "wavelength": _pos, "delta0_bar": _num,
                    "theta": _CHARGE["theta"],
                    "periods": {"type": "integer", "minimum": 1},
                    "points_per_period": {"type": "integer", "minimum": 8}},
                   "two-slit fringe shift"),
    "scatter": _obj({"theta": dict(_num, description="vacuum angle; alpha_eff = theta / 2 pi"),
                     "alpha_eff": _num, "k": _pos,
                     "phi": dict(_num, description="single scattering angle"),
                     "angles": {"type": "array", "items": _num, "minItems": 1},
                     "m_max": {"type": "integer", "minimum": 100},
                     "regularization": {"enum": ["abel", "cesaro"]},
                     "forward_cutoff": _pos,
                     "oracle": dict(_bool, description="also evaluate the partial-wave sum")},
                    "differential cross section, closed form and partial waves"),
    "check": _obj({"suite": {"enum": ["all", "units", "phases", "gauge", "vacua", "scattering", "dynamics"]},
                   "two_path": dict(_bool, description="include the small-grid two-path runs")},
                  "seeded invariant suite"),
}

CONFIG_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "dyonlab-config",
    "title": "dyonlab run configuration",
    "description": f"schema version {SCHEMA_VERSION}",
    "type": "object",
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "seed": {"type": "integer", "minimum": 0},
        "params": {"type": "object"},
        "output": _obj({"report": {"type": "string"}, "csv": {"type": "string"}}, "output paths"),
    },
    "required": ["version"],
    "additionalProperties": False,
    "$defs": {name: schema for name, schema in PARAM_SCHEMAS.items()},
    "allOf": [
        {"if": {"properties": {"command": {"const": name}}, "required": ["command"]},
         "then": {"properties": {"params": {"$ref": f"#/$defs/{name}"}}}}
        for name in COMMANDS
    ],
}


class ConfigError(ValueError):
    """Malformed or invalid configuration (reported with exit code 2)."""


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    report: Optional[str] = None
    csv: Optional[str] = None


def _where(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate_params(command: str, params: dict) -> None:
    validator = jsonschema.Draft202012Validator(PARAM_SCHEMAS[command])
    errors = sorted(validator.iter_errors(params), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError("; ".join(f"params/{_where(e)}: {e.message}" for e in errors))


def load_config_file(path: str | Path) -> dict:
    """Parse and schema-check a config file; errors carry line/column or field path."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError("; ".join(f"{path}: {_where(e)}: {e.message}" for e in errors))
    return doc


def build_run_config(command: str, file_doc: Optional[dict], overrides: dict[str, Any],
                     seed: Optional[int] = None, report: Optional[str] = None,
                     csv: Optional[str] = None) -> RunConfig:
    """Merge file parameters with command-line overrides and validate the result."""
    doc = file_doc or {}
    if doc.get("command", command) != command:
        raise ConfigError(f"config is for '{doc['command']}', not '{command}'")
    params = dict(doc.get("params", {}))
    params.update({k: v for k, v in overrides.items() if v is not None})
    validate_params(command, params)
    out = doc.get("output", {})
    return RunConfig(command=command, params=params,
                     seed=seed if seed is not None else doc.get("seed", DEFAULT_SEED),
                     report=report or out.get("report"), csv=csv or out.get("csv"))
