"""Parsers for the coincars CSV/JSON contracts.

Violations always fail loudly with a file/row diagnostic; partial data is
never returned.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = ["ContractError", "read_map", "read_columns", "read_json_file"]


class ContractError(ValueError):
    """Input file does not follow the documented CSV/JSON contract."""


def _parse_grid_header(line: str, name: str, path: Path, lineno: int) -> tuple[float, float, int]:
    parts = line.lstrip("#").split()
    if not parts or parts[0] != name:
        raise ContractError(f"{path}:{lineno}: expected '# {name} start=... step=... count=...'")
    fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    try:
        return float(fields["start"]), float(fields["step"]), int(fields["count"])
    except (KeyError, ValueError) as exc:
        raise ContractError(f"{path}:{lineno}: malformed {name} header: {exc}") from exc


def read_map(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Interference-map CSV -> (omega axis, phase axis, intensity matrix)."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if len(lines) < 3:
        raise ContractError(f"{path}: too short to be a map file")
    w0, dw, nw = _parse_grid_header(lines[0], "omega_cm1", path, 1)
    p0, dp, npts = _parse_grid_header(lines[1], "phi_rad", path, 2)
    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        try:
            row = [float(f) for f in line.split(",")]
        except ValueError as exc:
            raise ContractError(f"{path}:{lineno}: bad number: {exc}") from exc
        if len(row) != npts:
            raise ContractError(f"{path}:{lineno}: expected {npts} columns, got {len(row)}")
        rows.append(row)
    if len(rows) != nw:
        raise ContractError(f"{path}: expected {nw} data rows, got {len(rows)}")
    omega = w0 + dw * np.arange(nw)
    phases = p0 + dp * np.arange(npts)
    return omega, phases, np.array(rows)


def read_columns(path, expected: str | None = None) -> tuple[list[str], np.ndarray]:
    """Column CSV -> (column names, data matrix)."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ContractError(f"{path}:1: missing '#' header line")
    names = [n.strip() for n in lines[0].lstrip("# ").split(",")]
    if expected is not None and names != [n.strip() for n in expected.split(",")]:
        raise ContractError(f"{path}:1: expected columns '{expected}', got '{','.join(names)}'")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = [float(f) for f in line.split(",")]
        except ValueError as exc:
            raise ContractError(f"{path}:{lineno}: bad number: {exc}") from exc
        if len(row) != len(names):
            raise ContractError(
                f"{path}:{lineno}: expected {len(names)} columns, got {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise ContractError(f"{path}: no data rows")
    return names, np.array(rows)


def read_json_file(path) -> dict:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ContractError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ContractError(f"{path}: top level must be an object")
    return payload
