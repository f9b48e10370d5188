"""Resonant and non-resonant anti-Stokes fields and their two-arm superposition.

The scattered field at frequency w is a convolution over Raman shift s of
the probe field with an excitation-weighted response kernel:

    resonant      kernel(s) = A(s) * sum_n C_n / (s - center_n + i*hwhm_n)
    non-resonant  kernel(s) = A(s) * C_nonres

Both a direct per-bin trapezoid quadrature and an FFT convolution are
provided; the direct path is normative and the FFT path must (and does, see
tests) reproduce it to 1e-10 when the grids share a common lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from coincars.spectra import ComplexSpectrum, DomainError, FrequencyGrid, RamanMedium

__all__ = [
    "DispersionModel",
    "resonant_field",
    "nonresonant_field",
    "dual_sample_field",
]

_ALIGN_RTOL = 1e-9


@dataclass(frozen=True)
class DispersionModel:
    """Quadratic spectral phase accumulated by the sample arm.

    phase(w) = linear*(w - reference) + quadratic*(w - reference)^2, with
    coefficients in rad/cm^-1 and rad/(cm^-1)^2.
    """

    reference: float = 0.0
    linear: float = 0.0
    quadratic: float = 0.0

    def __post_init__(self):
        for name in ("reference", "linear", "quadratic"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"dispersion {name} must be finite")

    @property
    def is_zero(self) -> bool:
        return self.linear == 0.0 and self.quadratic == 0.0

    def phase(self, omega) -> np.ndarray:
        d = np.asarray(omega, dtype=float) - self.reference
        return self.linear * d + self.quadratic * d * d


def _trapezoid_weights(count: int) -> np.ndarray:
    w = np.ones(count)
    w[0] = w[-1] = 0.5
    return w


def _grids_aligned(*grids: FrequencyGrid) -> bool:
    """True when all grids share one step and sit on a common lattice."""
    step = grids[0].step
    for g in grids[1:]:
        if abs(g.step - step) > _ALIGN_RTOL * step:
            return False
    for g in grids[1:]:
        offset = (g.start - grids[0].start) / step
        if abs(offset - round(offset)) > 1e-6:
            return False
    return True


def _convolve_direct(
    kernel: np.ndarray,
    shift_grid: FrequencyGrid,
    probe: ComplexSpectrum,
    out: FrequencyGrid,
    chunk: int = 128,
) -> np.ndarray:
    """Per-bin trapezoid quadrature of int probe(w - s) kernel(s) ds."""
    shifts = shift_grid.points()
    weights = _trapezoid_weights(shift_grid.count) * shift_grid.step
    kq = kernel * weights
    pp = probe.grid.points()
    w_out = out.points()
    result = np.empty(out.count, dtype=np.complex128)
    for i0 in range(0, out.count, chunk):
        block = w_out[i0 : i0 + chunk]
        arg = block[:, None] - shifts[None, :]
        re = np.interp(arg, pp, probe.amplitude.real, left=0.0, right=0.0)
        im = np.interp(arg, pp, probe.amplitude.imag, left=0.0, right=0.0)
        result[i0 : i0 + len(block)] = (re + 1j * im) @ kq
    return result


def _convolve_fft(
    kernel: np.ndarray,
    shift_grid: FrequencyGrid,
    probe: ComplexSpectrum,
    out: FrequencyGrid,
) -> np.ndarray:
    weights = _trapezoid_weights(shift_grid.count) * shift_grid.step
    conv = fftconvolve(probe.amplitude, kernel * weights)
    # conv[i] sits at probe.start + shift_grid.start + i*step
    step = out.step
    base = probe.grid.start + shift_grid.start
    offset = (out.start - base) / step
    k0 = int(round(offset))
    result = np.zeros(out.count, dtype=np.complex128)
    lo = max(0, -k0)
    hi = min(out.count, conv.size - k0)
    if hi > lo:
        result[lo:hi] = conv[lo + k0 : hi + k0]
    return result


def _scattered_field(
    kernel: np.ndarray,
    shift_grid: FrequencyGrid,
    probe: ComplexSpectrum,
    out: FrequencyGrid,
    method: str,
) -> ComplexSpectrum:
    if method == "auto":
        method = "fft" if _grids_aligned(shift_grid, probe.grid, out) else "direct"
    if method == "fft":
        if not _grids_aligned(shift_grid, probe.grid, out):
            raise DomainError("fft path needs probe/shift/output grids on one lattice")
        amp = _convolve_fft(kernel, shift_grid, probe, out)
    elif method == "direct":
        amp = _convolve_direct(kernel, shift_grid, probe, out)
    else:
        raise DomainError(f"unknown method {method!r}")
    return ComplexSpectrum(out, amp)


def _check_line_coverage(excitation: ComplexSpectrum, medium: RamanMedium) -> None:
    if not medium.lines:
        return
    lo, hi = excitation.grid.start, excitation.grid.stop
    missing = [ln.center for ln in medium.lines if not lo <= ln.center <= hi]
    if missing:
        raise DomainError(
            f"excitation grid [{lo}, {hi}] does not cover line centers {missing}"
        )


def resonant_field(
    excitation: ComplexSpectrum,
    probe: ComplexSpectrum,
    medium: RamanMedium,
    out: FrequencyGrid,
    method: str = "auto",
) -> ComplexSpectrum:
    """Resonant anti-Stokes field of one medium on the output grid.

    Computes sum_n C_n int probe(w - s) A(s) / (s - center_n + i*hwhm_n) ds
    per output bin.  The excitation grid must cover every line center; bins
    outside the reachable span (probe span shifted by the excitation span)
    are zero.
    """
    _check_line_coverage(excitation, medium)
    if not medium.lines:
        return ComplexSpectrum(out, np.zeros(out.count, dtype=complex))
    kernel = excitation.amplitude * medium.line_response(excitation.grid.points())
    return _scattered_field(kernel, excitation.grid, probe, out, method)


def nonresonant_field(
    excitation: ComplexSpectrum,
    probe: ComplexSpectrum,
    nonresonant: complex,
    out: FrequencyGrid,
    method: str = "auto",
) -> ComplexSpectrum:
    """Instantaneous-background field: C_nonres * int probe(w - s) A(s) ds."""
    if nonresonant == 0:
        return ComplexSpectrum(out, np.zeros(out.count, dtype=complex))
    kernel = complex(nonresonant) * excitation.amplitude
    return _scattered_field(kernel, excitation.grid, probe, out, method)


def dual_sample_field(
    sample_field: ComplexSpectrum,
    reference_field: ComplexSpectrum,
    phase: float,
    dispersion: DispersionModel | None = None,
) -> ComplexSpectrum:
    """Superpose the phase-shifted sample arm onto the reference arm.

    E(w) = exp(i*(phase + dispersion.phase(w))) * E_sample(w) + E_reference(w).
    """
    if sample_field.grid != reference_field.grid:
        raise DomainError("sample and reference fields must share a grid")
    total = float(phase)
    if dispersion is not None and not dispersion.is_zero:
        total = total + dispersion.phase(sample_field.grid.points())
    amp = np.exp(1j * total) * sample_field.amplitude + reference_field.amplitude
    return ComplexSpectrum(sample_field.grid, amp)
