"""Scenario configuration: schema-validated YAML/JSON documents.

A config is resolved before any computation: line-list files are inlined,
probe widths quoted in nm are converted to cm^-1, and command-line
overrides are folded in.  The resolved dictionary is what sidecars carry,
so re-running from a sidecar needs no external files.  Unknown keys are
rejected everywhere.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from coincars.engine import DispersionModel
from coincars.interferometry import (
    FlatExcitation,
    GaussianPulse,
    PhaseGrid,
    PulsePair,
    Scenario,
)
from coincars.probegen import (
    LayeredMediumProbe,
    MultiLorentzianProbe,
    ProbeSpec,
    RandomPhaseProbe,
)
from coincars.spectra import (
    ComplexSpectrum,
    FrequencyGrid,
    RamanLine,
    RamanMedium,
    read_line_list,
)

__all__ = [
    "ConfigError",
    "load_config",
    "resolve_config",
    "build_scenario",
    "build_probe",
    "data_path",
]


class ConfigError(ValueError):
    """Configuration file is malformed or violates the schema."""


_COMPLEX_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_RANGE_PAIR = _COMPLEX_PAIR

_MEDIUM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "lines_file": {"type": "string"},
        "lines": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 4,
                "maxItems": 4,
            },
        },
        "nonresonant": _COMPLEX_PAIR,
    },
}

_ENVELOPE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["center_cm1", "fwhm_cm1"],
    "properties": {
        "center_cm1": {"type": "number", "exclusiveMinimum": 0},
        "fwhm_cm1": {"type": "number", "exclusiveMinimum": 0},
        "reach_fwhm": {"type": "number", "exclusiveMinimum": 0},
    },
}

_PROBE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["multi-lorentzian", "random-phase", "layered"]},
        "count": {"type": "integer", "minimum": 1},
        "width_cm1": {"type": "number", "exclusiveMinimum": 0},
        "width_nm": {"type": "number", "exclusiveMinimum": 0},
        "band_cm1": _RANGE_PAIR,
        "correlation_cm1": {"type": "number", "exclusiveMinimum": 0},
        "envelope": _ENVELOPE_SCHEMA,
        "layers": {"type": "integer", "minimum": 0},
        "index_range": _RANGE_PAIR,
        "thickness_um": _RANGE_PAIR,
    },
}

_SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["sample", "reference", "excitation", "probe"],
    "properties": {
        "sample": _MEDIUM_SCHEMA,
        "reference": _MEDIUM_SCHEMA,
        "excitation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["flat", "gaussian-pulses"]},
                "amplitude": _COMPLEX_PAIR,
                "band": _RANGE_PAIR,
                "pump_nm": {"type": "number", "exclusiveMinimum": 0},
                "stokes_nm": {"type": "number", "exclusiveMinimum": 0},
                "duration_fs": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "probe": _PROBE_SCHEMA,
        "phases": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points_per_cycle": {"type": "integer", "minimum": 16},
                "cycles": {"type": "integer", "minimum": 1},
            },
        },
        "realizations": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "dispersion": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "reference_cm1": {"type": "number"},
                "linear": {"type": "number"},
                "quadratic": {"type": "number"},
            },
        },
        "attenuation": {"type": "number", "minimum": 0},
        "equal_power": {"type": "boolean"},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "step_cm1": {"type": "number", "exclusiveMinimum": 0},
                "tail_factor": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "scenario": _SCENARIO_SCHEMA,
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"basename": {"type": "string", "minLength": 1}},
        },
        "compare": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "threshold": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}
            },
        },
        "probe_preview": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "times_ps": {
                    "type": "array",
                    "minItems": 3,
                    "maxItems": 3,
                    "items": {"type": "number"},
                }
            },
        },
        "tmm": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "stack_file": {"type": "string"},
                "stack": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 3,
                        "maxItems": 3,
                    },
                },
                "grid": {
                    "type": "array",
                    "minItems": 3,
                    "maxItems": 3,
                    "items": {"type": "number"},
                },
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "start": {"type": "number"},
                "stop": {"type": "number"},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "phi_points": {"type": "integer", "minimum": 16},
            },
        },
    },
}


def data_path(name: str) -> Path:
    """Path of a bundled data file (line lists, demo configs, stacks)."""
    return Path(importlib.resources.files("coincars") / "data" / name)


def load_config(path) -> dict:
    """Load a config or sidecar file and return the validated config dict.

    YAML is a superset of JSON, so both hand-written ``.cfg`` files and
    JSON sidecars parse here; a document with ``tool: coincars`` and a
    ``config`` key is treated as a sidecar and unwrapped.
    """
    path = Path(path)
    try:
        document = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        fallback = data_path(path.name)
        if fallback.exists():
            document = yaml.safe_load(fallback.read_text())
            path = fallback
        else:
            raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML/JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    if document.get("tool") == "coincars" and "config" in document:
        document = document["config"]
        if not isinstance(document, dict):
            raise ConfigError(f"{path}: sidecar 'config' must be a mapping")
    validate_config(document, source=str(path))
    return document


def validate_config(document: dict, source: str = "<config>") -> None:
    validator = jsonschema.Draft202012Validator(_CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{source}: {where}: {err.message}")


def _resolve_medium(section: dict, base_dir: Path) -> dict:
    if ("lines_file" in section) == ("lines" in section):
        raise ConfigError("medium needs exactly one of 'lines_file' or 'lines'")
    resolved = dict(section)
    if "lines_file" in resolved:
        name = resolved.pop("lines_file")
        candidates = [base_dir / name, Path(name), data_path(name)]
        for candidate in candidates:
            if candidate.is_file():
                medium = read_line_list(candidate)
                break
        else:
            raise ConfigError(f"line list file not found: {name}")
        resolved["lines"] = [
            [ln.center, ln.hwhm, ln.amplitude.real, ln.amplitude.imag] for ln in medium.lines
        ]
        if medium.nonresonant != 0 and "nonresonant" not in resolved:
            resolved["nonresonant"] = [medium.nonresonant.real, medium.nonresonant.imag]
    return resolved


def _resolve_probe(section: dict) -> dict:
    resolved = dict(section)
    kind = resolved["kind"]
    if kind == "multi-lorentzian":
        for key in ("count", "band_cm1"):
            if key not in resolved:
                raise ConfigError(f"probe: multi-lorentzian needs '{key}'")
        if ("width_cm1" in resolved) == ("width_nm" in resolved):
            raise ConfigError("probe needs exactly one of 'width_cm1' or 'width_nm'")
        if "width_nm" in resolved:
            lo, hi = resolved["band_cm1"]
            center = 0.5 * (lo + hi)
            # d(nu)/d(lambda) = nu^2 / 1e7 at the band center
            resolved["width_cm1"] = center * center * resolved.pop("width_nm") / 1e7
    elif kind == "random-phase":
        for key in ("correlation_cm1", "envelope"):
            if key not in resolved:
                raise ConfigError(f"probe: random-phase needs '{key}'")
    elif kind == "layered":
        if "envelope" not in resolved:
            raise ConfigError("probe: layered needs 'envelope'")
    return resolved


def resolve_config(
    document: dict,
    base_dir: Path,
    seed: int | None = None,
    realizations: int | None = None,
) -> dict:
    """Inline external files and fold in CLI overrides; validates the result."""
    resolved = {k: dict(v) if isinstance(v, dict) else v for k, v in document.items()}
    if "scenario" in resolved:
        sc = resolved["scenario"]
        sc["sample"] = _resolve_medium(sc["sample"], base_dir)
        sc["reference"] = _resolve_medium(sc["reference"], base_dir)
        sc["probe"] = _resolve_probe(sc["probe"])
        if seed is not None:
            sc["seed"] = seed
        if realizations is not None:
            sc["realizations"] = realizations
    if "tmm" in resolved and "stack_file" in resolved["tmm"]:
        name = resolved["tmm"].pop("stack_file")
        from coincars.tmm import read_stack_file

        for candidate in (base_dir / name, Path(name), data_path(name)):
            if candidate.is_file():
                stack = read_stack_file(candidate)
                break
        else:
            raise ConfigError(f"stack file not found: {name}")
        resolved["tmm"]["stack"] = [
            [ly.index.real, ly.index.imag, ly.thickness] for ly in stack.layers
        ]
    validate_config(resolved, source="<resolved config>")
    return resolved


def _pair(value, default=None) -> complex:
    if value is None:
        return default
    return complex(value[0], value[1])


def _build_envelope(section: dict) -> ComplexSpectrum:
    center = section["center_cm1"]
    fwhm = section["fwhm_cm1"]
    reach = section.get("reach_fwhm", 3.0)
    sigma = fwhm / (2.0 * np.sqrt(np.log(2.0)))  # amplitude std from intensity FWHM
    grid = FrequencyGrid.from_span(center - reach * fwhm, center + reach * fwhm, fwhm / 64.0)
    w = grid.points()
    return ComplexSpectrum(grid, np.exp(-((w - center) ** 2) / (2.0 * sigma**2)))


def build_probe(section: dict, seed: int) -> ProbeSpec:
    kind = section["kind"]
    if kind == "multi-lorentzian":
        lo, hi = section["band_cm1"]
        return MultiLorentzianProbe(
            count=section["count"],
            width=section["width_cm1"],
            band=(lo, hi),
            seed=seed,
        )
    if kind == "random-phase":
        return RandomPhaseProbe(
            envelope=_build_envelope(section["envelope"]),
            correlation_width=section["correlation_cm1"],
            seed=seed,
        )
    if kind == "layered":
        return LayeredMediumProbe(
            envelope=_build_envelope(section["envelope"]),
            layer_count=section.get("layers", 60),
            index_range=tuple(section.get("index_range", (1.3, 2.2))),
            thickness_range=tuple(section.get("thickness_um", (0.5, 2.0))),
            seed=seed,
        )
    raise ConfigError(f"unknown probe kind {kind!r}")


def _build_medium(section: dict) -> RamanMedium:
    lines = tuple(
        RamanLine(row[0], row[1], complex(row[2], row[3])) for row in section.get("lines", [])
    )
    return RamanMedium(lines=lines, nonresonant=_pair(section.get("nonresonant"), 0j))


def build_scenario(resolved: dict) -> Scenario:
    """Turn a resolved config dict into a Scenario object."""
    if "scenario" not in resolved:
        raise ConfigError("config has no 'scenario' section")
    sc = resolved["scenario"]
    exc = sc["excitation"]
    if exc["kind"] == "flat":
        band = exc.get("band")
        excitation = FlatExcitation(
            amplitude=_pair(exc.get("amplitude"), 1.0 + 0j),
            band=tuple(band) if band is not None else None,
        )
    else:
        for key in ("pump_nm", "stokes_nm"):
            if key not in exc:
                raise ConfigError(f"excitation: gaussian-pulses needs '{key}'")
        duration = exc.get("duration_fs", 35.0)
        excitation = PulsePair(
            pump=GaussianPulse(exc["pump_nm"], duration),
            stokes=GaussianPulse(exc["stokes_nm"], duration),
        )
    seed = sc.get("seed", 0)
    phases = sc.get("phases", {})
    dispersion = sc.get("dispersion", {})
    grid = sc.get("grid", {})
    return Scenario(
        sample=_build_medium(sc["sample"]),
        reference=_build_medium(sc["reference"]),
        excitation=excitation,
        probe=build_probe(sc["probe"], seed),
        phases=PhaseGrid(
            points_per_cycle=phases.get("points_per_cycle", 64),
            cycles=phases.get("cycles", 1),
        ),
        realizations=sc.get("realizations", 1),
        dispersion=DispersionModel(
            reference=dispersion.get("reference_cm1", 0.0),
            linear=dispersion.get("linear", 0.0),
            quadratic=dispersion.get("quadratic", 0.0),
        ),
        attenuation=sc.get("attenuation", 1.0),
        equal_power=sc.get("equal_power", False),
        grid_step=grid.get("step_cm1"),
        tail_factor=grid.get("tail_factor", 200.0),
    )
