"""CSV and JSON data products: full-precision, diff-able, atomically written.

All CSVs carry ``#``-prefixed header lines.  Floats are written with
``repr`` so files round-trip bit-identically; writers go through a
temp-file-plus-rename so a failed run never leaves partial output.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from coincars.interferometry import FringeCurve, InterferenceMap, VisibilityReport
from coincars.spectra import DomainError, FrequencyGrid

__all__ = [
    "atomic_write_text",
    "write_map_csv",
    "read_map_csv",
    "write_curve_csv",
    "read_curve_csv",
    "write_report_json",
    "read_report_json",
    "write_columns_csv",
    "read_columns_csv",
    "write_sidecar_json",
    "read_json",
]


def _fmt(value: float) -> str:
    return repr(float(value))


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the destination directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _uniform_spec(values: np.ndarray, what: str) -> tuple[float, float, int]:
    if values.size < 2:
        raise DomainError(f"{what} needs at least 2 points")
    steps = np.diff(values)
    step = steps[0]
    if step <= 0 or not np.allclose(steps, step, rtol=1e-9, atol=0.0):
        raise DomainError(f"{what} must be uniformly increasing to export")
    return float(values[0]), float(step), int(values.size)


def write_map_csv(imap: InterferenceMap, path) -> None:
    """Interference map as a matrix with omega down the rows, phase across columns."""
    phi0, dphi, nphi = _uniform_spec(imap.phases, "phase grid")
    lines = [
        f"# omega_cm1 start={_fmt(imap.omega.start)} step={_fmt(imap.omega.step)} count={imap.omega.count}",
        f"# phi_rad start={_fmt(phi0)} step={_fmt(dphi)} count={nphi}",
    ]
    for row in imap.intensity:
        lines.append(",".join(_fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _parse_grid_header(line: str, name: str, path, lineno: int) -> tuple[float, float, int]:
    parts = line.lstrip("#").split()
    if not parts or parts[0] != name:
        raise DomainError(f"{path}:{lineno}: expected '# {name} ...' header")
    fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    try:
        return float(fields["start"]), float(fields["step"]), int(fields["count"])
    except (KeyError, ValueError) as exc:
        raise DomainError(f"{path}:{lineno}: malformed {name} header: {exc}") from exc


def read_map_csv(path) -> tuple[FrequencyGrid, np.ndarray, np.ndarray]:
    """Inverse of :func:`write_map_csv`; returns (omega grid, phases, intensity)."""
    path = Path(path)
    raw = path.read_text().splitlines()
    if len(raw) < 3:
        raise DomainError(f"{path}: too short to be a map file")
    w0, dw, nw = _parse_grid_header(raw[0], "omega_cm1", path, 1)
    p0, dp, np_ = _parse_grid_header(raw[1], "phi_rad", path, 2)
    rows = []
    for lineno, line in enumerate(raw[2:], start=3):
        if not line.strip():
            continue
        try:
            row = [float(f) for f in line.split(",")]
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: bad number: {exc}") from exc
        if len(row) != np_:
            raise DomainError(f"{path}:{lineno}: expected {np_} columns, got {len(row)}")
        rows.append(row)
    if len(rows) != nw:
        raise DomainError(f"{path}: expected {nw} data rows, got {len(rows)}")
    grid = FrequencyGrid(start=w0, step=dw, count=nw)
    phases = p0 + dp * np.arange(np_)
    return grid, phases, np.array(rows)


def write_columns_csv(path, header: str, columns) -> None:
    """Generic column CSV with one ``# name,name,...`` header line."""
    arrays = [np.asarray(c, dtype=float) for c in columns]
    n = arrays[0].size
    if any(a.size != n for a in arrays):
        raise DomainError("all columns must have equal length")
    lines = [f"# {header}"]
    for i in range(n):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_columns_csv(path, expected_header: str | None = None) -> np.ndarray:
    """Read a column CSV back as a (rows, cols) array."""
    path = Path(path)
    raw = path.read_text().splitlines()
    if not raw or not raw[0].startswith("#"):
        raise DomainError(f"{path}:1: missing '#' header line")
    if expected_header is not None and raw[0].lstrip("# ").strip() != expected_header:
        raise DomainError(f"{path}:1: expected header '{expected_header}'")
    width = None
    rows = []
    for lineno, line in enumerate(raw[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = [float(f) for f in line.split(",")]
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: bad number: {exc}") from exc
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DomainError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        rows.append(row)
    if not rows:
        raise DomainError(f"{path}: no data rows")
    return np.array(rows)


def write_curve_csv(curve: FringeCurve, path) -> None:
    write_columns_csv(path, "phi_rad,intensity", [curve.phases, curve.intensity])


def read_curve_csv(path) -> FringeCurve:
    data = read_columns_csv(path, "phi_rad,intensity")
    return FringeCurve(phases=data[:, 0], intensity=data[:, 1])


def _none_if_nan(value: float):
    return None if isinstance(value, float) and math.isnan(value) else value


def write_report_json(report: VisibilityReport, path) -> None:
    payload = {
        "v_raw": _none_if_nan(report.v_raw),
        "v_fit": _none_if_nan(report.v_fit),
        "phi_max_rad": _none_if_nan(report.phi_max),
        "phi_min_rad": _none_if_nan(report.phi_min),
        "fit_residual": _none_if_nan(report.fit_residual),
        "degenerate": report.degenerate,
    }
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_report_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_sidecar_json(path, command: str, config: dict, outputs: dict, extra: dict | None = None) -> None:
    """Reproducibility sidecar: tool id, command, resolved config, output names."""
    from coincars import __version__

    payload = {
        "tool": "coincars",
        "version": __version__,
        "command": command,
        "config": config,
        "outputs": outputs,
    }
    if extra:
        payload.update(extra)
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
