"""Render coincars CSV/JSON products to image files.

Usage:

    coincars-plot map-heatmap  --input run-map.csv [--sidecar run-map.json] -o map.png
    coincars-plot fringe-curve --input run-curve.csv [--report run-visibility.json] -o curve.png
    coincars-plot probe-preview --spectrum s.csv --temporal t.csv -o probe.png
    coincars-plot sweep        --input run-sweep.csv -o sweep.png

Inputs are never modified; a malformed CSV aborts with a row diagnostic and
a nonzero exit code.
"""

from __future__ import annotations

import argparse
import sys

from coincars_plots.readers import ContractError
from coincars_plots.render import (
    render_fringe_curve,
    render_map_heatmap,
    render_probe_preview,
    render_sweep,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coincars-plot", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)

    p = sub.add_parser("map-heatmap", help="interference map heatmap")
    p.add_argument("--input", required=True, help="map CSV")
    p.add_argument("--sidecar", default=None, help="run sidecar JSON (titles the figure)")
    p.add_argument("--output", "-o", required=True, help="image file to write")

    p = sub.add_parser("fringe-curve", help="integrated fringe curve")
    p.add_argument("--input", required=True, help="curve CSV")
    p.add_argument("--report", default=None, help="visibility report JSON (annotates V)")
    p.add_argument("--sidecar", default=None)
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("probe-preview", help="probe spectrum + temporal profile panels")
    p.add_argument("--spectrum", required=True, help="probe spectrum CSV")
    p.add_argument("--temporal", required=True, help="temporal profile CSV")
    p.add_argument("--sidecar", default=None)
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("sweep", help="visibility vs mismatch sweep")
    p.add_argument("--input", required=True, help="sweep CSV")
    p.add_argument("--sidecar", default=None)
    p.add_argument("--output", "-o", required=True)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.kind == "map-heatmap":
            out = render_map_heatmap(args.input, args.output, sidecar=args.sidecar)
        elif args.kind == "fringe-curve":
            out = render_fringe_curve(
                args.input, args.output, report=args.report, sidecar=args.sidecar
            )
        elif args.kind == "probe-preview":
            out = render_probe_preview(
                args.spectrum, args.temporal, args.output, sidecar=args.sidecar
            )
        else:
            out = render_sweep(args.input, args.output, sidecar=args.sidecar)
    except (ContractError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
