"""Two-photon (pump-Stokes) excitation spectra.

The excitation spectrum at Raman shift ``s`` is the cross-correlation of the
Stokes and pump fields, A(s) = int E_stokes*(w - s) E_pump(w) dw.  A flat
idealization over a band is provided for multiplex-style scenarios.
"""

from __future__ import annotations

from typing import TypeAlias

import numpy as np

from coincars.spectra import ComplexSpectrum, DomainError, FrequencyGrid

__all__ = ["ExcitationSpectrum", "two_photon_spectrum", "uniform_excitation"]

# An excitation spectrum is a complex spectrum whose grid runs over Raman
# shift rather than absolute frequency.
ExcitationSpectrum: TypeAlias = ComplexSpectrum


def two_photon_spectrum(
    pump: ComplexSpectrum,
    stokes: ComplexSpectrum,
    out: FrequencyGrid,
    chunk: int = 256,
) -> ExcitationSpectrum:
    """Cross-correlate pump against Stokes on the requested shift grid.

    Evaluates A(s) = int E_stokes*(w - s) E_pump(w) dw by trapezoid
    quadrature over the pump grid for each output shift; the Stokes field is
    linearly interpolated at the shifted points (zero outside its span).
    Pass the same spectrum for both arguments for the joint-field reading.
    """
    w = pump.grid.points()
    sp = stokes.grid.points()
    shifts = out.points()
    amp = np.empty(out.count, dtype=np.complex128)
    for i0 in range(0, out.count, chunk):
        block = shifts[i0 : i0 + chunk]
        arg = w[None, :] - block[:, None]
        re = np.interp(arg, sp, stokes.amplitude.real, left=0.0, right=0.0)
        im = np.interp(arg, sp, stokes.amplitude.imag, left=0.0, right=0.0)
        integrand = (re - 1j * im) * pump.amplitude[None, :]
        amp[i0 : i0 + len(block)] = np.trapezoid(integrand, dx=pump.grid.step, axis=1)
    return ComplexSpectrum(out, amp)


def uniform_excitation(
    amplitude: complex, band: tuple[float, float], out: FrequencyGrid
) -> ExcitationSpectrum:
    """Flat excitation equal to ``amplitude`` inside ``band``, zero outside."""
    lo, hi = band
    if not hi > lo:
        raise DomainError(f"empty excitation band [{lo}, {hi}]")
    s = out.points()
    amp = np.where((s >= lo) & (s <= hi), complex(amplitude), 0j)
    return ComplexSpectrum(out, amp)
