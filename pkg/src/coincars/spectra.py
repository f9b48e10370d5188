"""Frequency grids, complex spectra, Raman media and unit conversions.

Everything downstream works on uniform wavenumber grids (cm^-1).  Raman
lines are complex amplitude Lorentzians 1/(shift - center + i*hwhm), so
``hwhm`` is the half-width of the amplitude and the intensity FWHM of a
line is 2*hwhm.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "C_CM_PER_PS",
    "DomainError",
    "FrequencyGrid",
    "ComplexSpectrum",
    "RamanLine",
    "RamanMedium",
    "wavelength_to_wavenumber",
    "wavenumber_to_wavelength",
    "resample",
    "total_power",
    "read_line_list",
]

# speed of light in cm/ps; converts wavenumbers (cm^-1) to 1/ps via 2*pi*c
C_CM_PER_PS = 0.0299792458


class DomainError(ValueError):
    """Input outside an operation's physical or numerical domain."""


def wavelength_to_wavenumber(wavelength_nm):
    """Convert vacuum wavelength (nm) to wavenumber (cm^-1)."""
    wl = np.asarray(wavelength_nm, dtype=float)
    if np.any(wl <= 0):
        raise DomainError("wavelength must be positive")
    out = 1e7 / wl
    return float(out) if out.ndim == 0 else out


def wavenumber_to_wavelength(wavenumber_cm1):
    """Convert wavenumber (cm^-1) to vacuum wavelength (nm)."""
    wn = np.asarray(wavenumber_cm1, dtype=float)
    if np.any(wn <= 0):
        raise DomainError("wavenumber must be positive")
    out = 1e7 / wn
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform wavenumber grid with points ``start + k*step``, k < count."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not np.isfinite(self.start):
            raise DomainError("grid start must be finite")
        if not (self.step > 0 and np.isfinite(self.step)):
            raise DomainError(f"grid step must be positive, got {self.step}")
        if self.count < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.count}")

    @property
    def stop(self) -> float:
        """Last grid point."""
        return self.start + (self.count - 1) * self.step

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    def covers(self, lo: float, hi: float) -> bool:
        return self.start <= lo and hi <= self.stop

    @classmethod
    def from_span(cls, lo: float, hi: float, step: float) -> "FrequencyGrid":
        """Smallest grid with the given step whose span contains [lo, hi].

        The start is snapped onto the ``step`` lattice so that grids built
        from overlapping spans stay mutually aligned.
        """
        if not hi > lo:
            raise DomainError(f"empty span [{lo}, {hi}]")
        start = np.floor(lo / step) * step
        count = int(np.ceil((hi - start) / step)) + 1
        return cls(start=float(start), step=float(step), count=max(count, 2))


@dataclass(frozen=True)
class ComplexSpectrum:
    """Complex field amplitude sampled on a :class:`FrequencyGrid`.

    The amplitude array is copied and frozen on construction; instances are
    immutable value objects and safe to share across threads.
    """

    grid: FrequencyGrid
    amplitude: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitude, dtype=np.complex128)
        if amp.shape != (self.grid.count,):
            raise DomainError(
                f"amplitude length {amp.shape} does not match grid count {self.grid.count}"
            )
        if not np.all(np.isfinite(amp)):
            raise DomainError("amplitude contains non-finite values")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitude", amp)

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2


def resample(spec: ComplexSpectrum, target: FrequencyGrid) -> ComplexSpectrum:
    """Linearly interpolate a spectrum onto ``target``.

    Real and imaginary parts are interpolated independently; points outside
    the source span are zero.  Raises :class:`DomainError` if the grids do
    not overlap at all.
    """
    src = spec.grid
    if target == src:
        return ComplexSpectrum(target, spec.amplitude)
    if target.start > src.stop or target.stop < src.start:
        raise DomainError(
            f"target span [{target.start}, {target.stop}] does not overlap "
            f"source span [{src.start}, {src.stop}]"
        )
    x = target.points()
    xp = src.points()
    re = np.interp(x, xp, spec.amplitude.real, left=0.0, right=0.0)
    im = np.interp(x, xp, spec.amplitude.imag, left=0.0, right=0.0)
    return ComplexSpectrum(target, re + 1j * im)


def total_power(spec: ComplexSpectrum) -> float:
    """Trapezoid integral of |amplitude|^2 over the grid."""
    return float(np.trapezoid(spec.intensity(), dx=spec.grid.step))


@dataclass(frozen=True)
class RamanLine:
    """Single vibrational resonance: center and half-width in cm^-1."""

    center: float
    hwhm: float
    amplitude: complex = 1.0 + 0j

    def __post_init__(self):
        if not (self.hwhm > 0 and np.isfinite(self.hwhm)):
            raise DomainError(f"line half-width must be positive, got {self.hwhm}")
        if not np.isfinite(self.center):
            raise DomainError("line center must be finite")
        object.__setattr__(self, "amplitude", complex(self.amplitude))


@dataclass(frozen=True)
class RamanMedium:
    """A set of Raman lines plus an instantaneous (non-resonant) response."""

    lines: tuple[RamanLine, ...] = ()
    nonresonant: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "nonresonant", complex(self.nonresonant))
        if not self.lines and self.nonresonant == 0:
            raise DomainError("medium needs at least one line or a non-resonant response")

    def centers(self) -> np.ndarray:
        return np.array([ln.center for ln in self.lines], dtype=float)

    def hwhms(self) -> np.ndarray:
        return np.array([ln.hwhm for ln in self.lines], dtype=float)

    def amplitudes(self) -> np.ndarray:
        return np.array([ln.amplitude for ln in self.lines], dtype=complex)

    def line_response(self, shift: np.ndarray) -> np.ndarray:
        """Sum of amplitude Lorentzians evaluated at the given Raman shifts."""
        shift = np.asarray(shift, dtype=float)
        out = np.zeros(shift.shape, dtype=np.complex128)
        for ln in self.lines:
            out += ln.amplitude / (shift - ln.center + 1j * ln.hwhm)
        return out

    def with_scaled_lines(self, factor: complex) -> "RamanMedium":
        """Same medium with every line amplitude multiplied by ``factor``."""
        lines = tuple(
            RamanLine(ln.center, ln.hwhm, ln.amplitude * factor) for ln in self.lines
        )
        return RamanMedium(lines=lines, nonresonant=self.nonresonant)

    def with_nonresonant(self, value: complex) -> "RamanMedium":
        return RamanMedium(lines=self.lines, nonresonant=value)

    def resonant_part(self) -> "RamanMedium":
        if not self.lines:
            raise DomainError("medium has no resonant lines")
        return RamanMedium(lines=self.lines, nonresonant=0j)


def read_line_list(path) -> RamanMedium:
    """Parse a plain-text Raman line list.

    Format: one resonance per line with comma-separated columns
    ``center_cm1, hwhm_cm1, amp_re, amp_im``; lines starting with ``#`` are
    comments.  A trailing record ``NONRES, re, im`` sets the non-resonant
    coefficient.
    """
    path = Path(path)
    lines: list[RamanLine] = []
    nonres = 0j
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        fields = [f.strip() for f in text.split(",")]
        try:
            if fields[0].upper() == "NONRES":
                if len(fields) != 3:
                    raise ValueError("NONRES record needs exactly 2 values")
                nonres = complex(float(fields[1]), float(fields[2]))
            else:
                if len(fields) != 4:
                    raise ValueError("expected 4 comma-separated columns")
                center, hwhm, re, im = (float(f) for f in fields)
                lines.append(RamanLine(center, hwhm, complex(re, im)))
        except (ValueError, DomainError) as exc:
            raise DomainError(f"{path}:{lineno}: {exc}") from exc
    return RamanMedium(lines=tuple(lines), nonresonant=nonres)
