"""Figure builders for the four coincars plot kinds."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from coincars_plots.readers import read_columns, read_json_file, read_map

__all__ = ["render_map_heatmap", "render_fringe_curve", "render_probe_preview", "render_sweep"]

_DPI = 150


def _save(fig, output) -> Path:
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return output


def _title_from_sidecar(sidecar) -> str | None:
    if sidecar is None:
        return None
    meta = read_json_file(sidecar)
    base = meta.get("config", {}).get("outputs", {}).get("basename")
    command = meta.get("command")
    seed = meta.get("seed")
    bits = [b for b in (base, command) if b]
    if seed is not None:
        bits.append(f"seed {seed}")
    return ", ".join(bits) if bits else None


def render_map_heatmap(map_csv, output, sidecar=None) -> Path:
    """Interference map as a heatmap: phase across, frequency up."""
    omega, phases, intensity = read_map(map_csv)
    fig, ax = plt.subplots(figsize=(7, 5))
    mesh = ax.imshow(
        intensity,
        origin="lower",
        aspect="auto",
        extent=(phases[0], phases[-1], omega[0], omega[-1]),
        cmap="inferno",
    )
    ax.set_xlabel("interference phase (rad)")
    ax.set_ylabel("frequency (cm$^{-1}$)")
    title = _title_from_sidecar(sidecar)
    if title:
        ax.set_title(title)
    fig.colorbar(mesh, ax=ax, label="intensity (arb. u.)")
    return _save(fig, output)


def render_fringe_curve(curve_csv, output, report=None, sidecar=None) -> Path:
    """Integrated fringe curve with the fitted visibility annotated."""
    _, data = read_columns(curve_csv, expected="phi_rad,intensity")
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(data[:, 0], data[:, 1], "k.-", lw=1.2, ms=4)
    ax.set_xlabel("interference phase (rad)")
    ax.set_ylabel("integrated intensity (arb. u.)")
    ax.set_ylim(bottom=0)
    if report is not None:
        rep = read_json_file(report)
        v = rep.get("v_fit")
        if v is not None:
            ax.annotate(
                f"V = {v:.3f}",
                xy=(0.03, 0.93),
                xycoords="axes fraction",
                fontsize=12,
                fontweight="bold",
            )
    title = _title_from_sidecar(sidecar)
    if title:
        ax.set_title(title)
    return _save(fig, output)


def render_probe_preview(spectrum_csv, temporal_csv, output, sidecar=None) -> Path:
    """Two panels: spectral intensity with phase overlay, and temporal profile."""
    _, spec = read_columns(spectrum_csv, expected="omega_cm1,re,im,intensity,phase_rad")
    _, temporal = read_columns(temporal_csv, expected="t_ps,intensity")
    fig, (ax_spec, ax_time) = plt.subplots(2, 1, figsize=(7, 7))

    ax_spec.plot(spec[:, 0], spec[:, 3], "k-", lw=1.0, label="intensity")
    ax_spec.set_xlabel("frequency (cm$^{-1}$)")
    ax_spec.set_ylabel("spectral intensity (arb. u.)")
    ax_phase = ax_spec.twinx()
    ax_phase.plot(spec[:, 0], spec[:, 4], "r:", lw=1.0, label="phase")
    ax_phase.set_ylabel("phase (rad)", color="r")
    ax_phase.tick_params(axis="y", colors="r")

    ax_time.plot(temporal[:, 0], temporal[:, 1], "k-", lw=1.0)
    ax_time.set_xlabel("time (ps)")
    ax_time.set_ylabel("temporal intensity (norm.)")
    ax_time.set_ylim(bottom=0)

    title = _title_from_sidecar(sidecar)
    if title:
        ax_spec.set_title(title)
    fig.tight_layout()
    return _save(fig, output)


def render_sweep(sweep_csv, output, sidecar=None) -> Path:
    """Visibility versus line-center mismatch, closed form and quadrature."""
    _, data = read_columns(sweep_csv, expected="w_rs,v_closed,v_quadrature")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(data[:, 0], data[:, 1], "k-", lw=1.2, label="closed form")
    ax.plot(data[:, 0], data[:, 2], "ro", ms=5, mfc="none", label="quadrature")
    ax.set_xlabel("line-center mismatch")
    ax.set_ylabel("fringe visibility")
    ax.set_ylim(0, 1.05)
    ax.legend(frameon=False)
    title = _title_from_sidecar(sidecar)
    if title:
        ax.set_title(title)
    return _save(fig, output)
