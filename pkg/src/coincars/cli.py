"""Command-line front end producing reproducible data products.

Subcommands:

* ``simulate-map``  -- noise-averaged (frequency, phase) interference map
* ``fringe-curve``  -- frequency-integrated fringe curve + visibility report
* ``compare``       -- SAME/DIFFERENT verdict from the fitted visibility
* ``probe-preview`` -- probe spectrum and temporal profile
* ``tmm-spectrum``  -- complex transmission of a layered stack
* ``sweep-wrs``     -- visibility versus line-center mismatch table

Every command writes a JSON sidecar with the fully resolved configuration;
re-running a command with the sidecar as ``--config`` reproduces the CSV
outputs bit-identically.  Exit codes: 0 success/SAME, 1 DIFFERENT,
2 usage or config error, 3 numerical domain error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from coincars.analytic import LinePair, pair_summary, pair_visibility_quadrature
from coincars.config import (
    ConfigError,
    build_probe,
    build_scenario,
    load_config,
    resolve_config,
)
from coincars.fileio import (
    write_columns_csv,
    write_curve_csv,
    write_map_csv,
    write_report_json,
    write_sidecar_json,
)
from coincars.interferometry import build_map, integrate_over_frequency, visibility
from coincars.probegen import (
    LayeredMediumProbe,
    MultiLorentzianProbe,
    RandomPhaseProbe,
    generate,
    temporal_profile,
)
from coincars.spectra import DomainError, FrequencyGrid
from coincars.tmm import Stack, Layer, transmission

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def _load_resolved(args) -> dict:
    document = load_config(args.config)
    base_dir = Path(args.config).resolve().parent
    return resolve_config(
        document,
        base_dir,
        seed=getattr(args, "seed", None),
        realizations=getattr(args, "realizations", None),
    )


def _basename(resolved: dict, default: str) -> str:
    return resolved.get("outputs", {}).get("basename", default)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scenario_extras(resolved: dict) -> dict:
    sc = resolved.get("scenario", {})
    return {"seed": sc.get("seed", 0), "realizations": sc.get("realizations", 1)}


def cmd_simulate_map(args) -> int:
    resolved = _load_resolved(args)
    scenario = build_scenario(resolved)
    imap = build_map(scenario)
    out = _out_dir(args)
    base = _basename(resolved, "run")
    map_csv = out / f"{base}-map.csv"
    write_map_csv(imap, map_csv)
    write_sidecar_json(
        out / f"{base}-map.json",
        "simulate-map",
        resolved,
        {"map_csv": map_csv.name},
        extra=_scenario_extras(resolved),
    )
    _info(f"wrote {map_csv}")
    return EXIT_OK


def _fringe_products(args, command: str, resolved: dict) -> object:
    scenario = build_scenario(resolved)
    curve = integrate_over_frequency(build_map(scenario))
    report = visibility(curve)
    out = _out_dir(args)
    base = _basename(resolved, "run")
    curve_csv = out / f"{base}-curve.csv"
    report_json = out / f"{base}-visibility.json"
    write_curve_csv(curve, curve_csv)
    write_report_json(report, report_json)
    outputs = {"curve_csv": curve_csv.name, "report_json": report_json.name}
    write_sidecar_json(
        out / f"{base}-{command}.json", command, resolved, outputs, extra=_scenario_extras(resolved)
    )
    _info(f"wrote {curve_csv}")
    return report


def cmd_fringe_curve(args) -> int:
    _fringe_products(args, "fringe-curve", _load_resolved(args))
    return EXIT_OK


def cmd_compare(args) -> int:
    resolved = _load_resolved(args)
    compare_section = resolved.setdefault("compare", {})
    if args.threshold is not None:
        compare_section["threshold"] = args.threshold
    threshold = compare_section.get("threshold")
    if threshold is None:
        raise ConfigError("compare needs --threshold or a 'compare.threshold' config entry")
    if not 0.0 < threshold < 1.0:
        raise ConfigError(f"threshold must be inside (0, 1), got {threshold}")
    report = _fringe_products(args, "compare", resolved)
    if report.degenerate:
        raise DomainError("fringe curve is identically zero; no visibility to compare")
    if report.v_fit >= threshold:
        print("SAME")
        return EXIT_OK
    print("DIFFERENT")
    return EXIT_DIFFERENT


def _preview_grid(probe) -> FrequencyGrid:
    if isinstance(probe, MultiLorentzianProbe):
        gamma = 0.5 * probe.width
        return FrequencyGrid.from_span(
            probe.band[0] - 50.0 * gamma, probe.band[1] + 50.0 * gamma, gamma / 8.0
        )
    if isinstance(probe, (RandomPhaseProbe, LayeredMediumProbe)):
        return probe.envelope.grid
    raise DomainError(f"unknown probe type {type(probe).__name__}")


def cmd_probe_preview(args) -> int:
    resolved = _load_resolved(args)
    if "scenario" not in resolved:
        raise ConfigError("probe-preview needs a 'scenario' section with a probe")
    sc = resolved["scenario"]
    seed = sc.get("seed", 0)
    probe = build_probe(sc["probe"], seed)
    grid = _preview_grid(probe)
    spectrum = generate(probe, args.realization, grid)
    t0, t1, n = resolved.get("probe_preview", {}).get("times_ps", (-0.5, 3.5, 1024))
    times = np.linspace(float(t0), float(t1), int(n))
    profile = temporal_profile(spectrum, times)
    out = _out_dir(args)
    base = _basename(resolved, "probe")
    spec_csv = out / f"{base}-probe-spectrum.csv"
    time_csv = out / f"{base}-probe-temporal.csv"
    write_columns_csv(
        spec_csv,
        "omega_cm1,re,im,intensity,phase_rad",
        [
            grid.points(),
            spectrum.amplitude.real,
            spectrum.amplitude.imag,
            spectrum.intensity(),
            np.angle(spectrum.amplitude),
        ],
    )
    write_columns_csv(time_csv, "t_ps,intensity", [times, profile])
    write_sidecar_json(
        out / f"{base}-probe.json",
        "probe-preview",
        resolved,
        {"spectrum_csv": spec_csv.name, "temporal_csv": time_csv.name},
        extra={"seed": seed, "realization": args.realization},
    )
    _info(f"wrote {spec_csv}")
    return EXIT_OK


def cmd_tmm_spectrum(args) -> int:
    if args.config:
        resolved = _load_resolved(args)
    else:
        resolved = {"tmm": {}}
        if args.stack is None:
            raise ConfigError("tmm-spectrum needs --stack or a config with a 'tmm' section")
    tmm_section = resolved.setdefault("tmm", {})
    if args.stack is not None:
        from coincars.tmm import read_stack_file

        stack_obj = read_stack_file(args.stack)
        tmm_section["stack"] = [
            [ly.index.real, ly.index.imag, ly.thickness] for ly in stack_obj.layers
        ]
    if args.grid is not None:
        tmm_section["grid"] = list(args.grid)
    rows = tmm_section.get("stack", [])
    stack = Stack(layers=tuple(Layer(complex(r[0], r[1]), r[2]) for r in rows))
    lo, hi, step = tmm_section.get("grid", (12000.0, 13000.0, 0.5))
    grid = FrequencyGrid.from_span(float(lo), float(hi), float(step))
    tmm_section["grid"] = [float(lo), float(hi), float(step)]
    t, r = transmission(stack, grid)
    out = _out_dir(args)
    base = _basename(resolved, "stack")
    tmm_csv = out / f"{base}-tmm.csv"
    write_columns_csv(
        tmm_csv,
        "omega_cm1,transmittance,phase_rad,reflectance",
        [grid.points(), t.intensity(), np.angle(t.amplitude), r.intensity()],
    )
    write_sidecar_json(out / f"{base}-tmm.json", "tmm-spectrum", resolved, {"tmm_csv": tmm_csv.name})
    _info(f"wrote {tmm_csv}")
    return EXIT_OK


def cmd_sweep_wrs(args) -> int:
    if args.config:
        resolved = _load_resolved(args)
    else:
        resolved = {"sweep": {}}
    sweep = resolved.setdefault("sweep", {})
    if args.start is not None:
        sweep["start"] = args.start
    if args.stop is not None:
        sweep["stop"] = args.stop
    if args.step is not None:
        sweep["step"] = args.step
    start = sweep.get("start", 0.0)
    stop = sweep.get("stop", 5.0)
    step = sweep.get("step", 0.5)
    phi_points = sweep.get("phi_points", 720)
    sweep.update({"start": start, "stop": stop, "step": step, "phi_points": phi_points})
    if stop < start:
        raise ConfigError(f"sweep range is empty: start={start} stop={stop}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    mismatches = start + step * np.arange(count)
    closed = np.empty(count)
    quad = np.empty(count)
    for i, m in enumerate(mismatches):
        pair = LinePair(1.0, 1.0, float(m), float(-m))
        summary = pair_summary(pair)
        closed[i] = summary.cross / summary.diag
        quad[i] = pair_visibility_quadrature(pair, phi_points=phi_points)
    out = _out_dir(args)
    base = _basename(resolved, "sweep")
    sweep_csv = out / f"{base}-sweep.csv"
    write_columns_csv(sweep_csv, "w_rs,v_closed,v_quadrature", [mismatches, closed, quad])
    write_sidecar_json(out / f"{base}-sweep.json", "sweep-wrs", resolved, {"sweep_csv": sweep_csv.name})
    _info(f"wrote {sweep_csv}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coincars",
        description="Interference spectroscopy of CARS with noisy broadband probes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument(
            "--config",
            required=config_required,
            default=None,
            help="scenario config (.cfg YAML/JSON) or a sidecar .json to re-run",
        )
        p.add_argument("--out", default=".", help="output directory (default: .)")

    def add_scenario_flags(p):
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument(
            "--realizations", type=int, default=None, help="override the realization count"
        )

    p = sub.add_parser("simulate-map", help="write the (frequency, phase) interference map")
    add_common(p)
    add_scenario_flags(p)
    p.set_defaults(handler=cmd_simulate_map)

    p = sub.add_parser("fringe-curve", help="write the integrated fringe curve and visibility")
    add_common(p)
    add_scenario_flags(p)
    p.set_defaults(handler=cmd_fringe_curve)

    p = sub.add_parser("compare", help="SAME/DIFFERENT verdict from fitted visibility")
    add_common(p)
    add_scenario_flags(p)
    p.add_argument("--threshold", type=float, default=None, help="visibility threshold in (0,1)")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("probe-preview", help="write probe spectrum and temporal profile")
    add_common(p)
    add_scenario_flags(p)
    p.add_argument("--realization", type=int, default=0, help="realization index (default 0)")
    p.set_defaults(handler=cmd_probe_preview)

    p = sub.add_parser("tmm-spectrum", help="transmission spectrum of a layered stack")
    add_common(p, config_required=False)
    p.add_argument("--stack", default=None, help="stack file: rows of n_re, n_im, d_um")
    p.add_argument(
        "--grid",
        type=float,
        nargs=3,
        metavar=("LO", "HI", "STEP"),
        default=None,
        help="wavenumber grid (default 12000 13000 0.5)",
    )
    p.set_defaults(handler=cmd_tmm_spectrum)

    p = sub.add_parser("sweep-wrs", help="visibility vs line-center mismatch table")
    add_common(p, config_required=False)
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(handler=cmd_sweep_wrs)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"numerical domain error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
