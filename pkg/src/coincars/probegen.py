"""Seeded generators of noisy probe spectra and their diagnostics.

Three variants, all deterministic functions of (seed, realization index):

* multi-Lorentzian: N components at uniform random centers with uniform
  random phases, each a complex Lorentzian of amplitude half-width
  ``width/2`` so the component intensity FWHM equals ``width``;
* random-phase envelope: a fixed envelope times unit-modulus noise whose
  phase is piecewise-constant over blocks of the correlation width;
* layered medium: a fixed envelope times the transmission of a random
  layer stack regenerated per realization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from coincars.rng import mix64, stream_rng
from coincars.spectra import (
    C_CM_PER_PS,
    ComplexSpectrum,
    DomainError,
    FrequencyGrid,
    resample,
)

__all__ = [
    "MultiLorentzianProbe",
    "RandomPhaseProbe",
    "LayeredMediumProbe",
    "ProbeSpec",
    "generate",
    "temporal_profile",
    "spectral_correlation_length",
]


@dataclass(frozen=True)
class MultiLorentzianProbe:
    """N random narrowband Lorentzian components inside a band.

    ``width`` is the intensity FWHM of each component in cm^-1; centers are
    drawn uniformly over ``band`` with no minimum-separation constraint and
    all components carry equal peak amplitude.
    """

    count: int
    width: float
    band: tuple[float, float]
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"component count must be >= 1, got {self.count}")
        if not (self.width > 0 and np.isfinite(self.width)):
            raise DomainError(f"component width must be positive, got {self.width}")
        lo, hi = self.band
        if not hi > lo:
            raise DomainError(f"empty probe band [{lo}, {hi}]")
        object.__setattr__(self, "band", (float(lo), float(hi)))


@dataclass(frozen=True)
class RandomPhaseProbe:
    """Fixed envelope with random phase, piecewise-constant over blocks.

    ``correlation_width`` sets the block width in cm^-1 and therefore the
    spectral correlation length of the noise.
    """

    envelope: ComplexSpectrum
    correlation_width: float
    seed: int = 0

    def __post_init__(self):
        if not (self.correlation_width > 0 and np.isfinite(self.correlation_width)):
            raise DomainError("correlation width must be positive")


@dataclass(frozen=True)
class LayeredMediumProbe:
    """Fixed envelope filtered by a random layered medium.

    A fresh stack with the given layer statistics is generated for every
    realization index, so noise averaging sees independent transmission
    spectra.
    """

    envelope: ComplexSpectrum
    layer_count: int = 60
    index_range: tuple[float, float] = (1.3, 2.2)
    thickness_range: tuple[float, float] = (0.5, 2.0)
    seed: int = 0

    def __post_init__(self):
        if self.layer_count < 0:
            raise DomainError("layer count must be non-negative")


ProbeSpec = Union[MultiLorentzianProbe, RandomPhaseProbe, LayeredMediumProbe]


def _multi_lorentzian_draws(spec: MultiLorentzianProbe, realization: int):
    """Centers then phases, in documented draw order."""
    rng = stream_rng(spec.seed, realization)
    centers = rng.uniform(spec.band[0], spec.band[1], spec.count)
    phases = rng.uniform(0.0, 2.0 * np.pi, spec.count)
    return centers, phases


def generate(spec: ProbeSpec, realization: int, grid: FrequencyGrid) -> ComplexSpectrum:
    """Probe spectrum for one realization; bit-reproducible in (seed, index)."""
    if realization < 0:
        raise DomainError("realization index must be non-negative")
    if isinstance(spec, MultiLorentzianProbe):
        lo, hi = spec.band
        if not grid.covers(lo, hi):
            raise DomainError(
                f"probe band [{lo}, {hi}] outside grid span [{grid.start}, {grid.stop}]"
            )
        centers, phases = _multi_lorentzian_draws(spec, realization)
        gamma = 0.5 * spec.width
        w = grid.points()
        amp = np.zeros(grid.count, dtype=np.complex128)
        for c, ph in zip(centers, phases):
            amp += np.exp(1j * ph) * gamma / (w - c + 1j * gamma)
        return ComplexSpectrum(grid, amp)
    if isinstance(spec, RandomPhaseProbe):
        env = resample(spec.envelope, grid)
        span = grid.stop - grid.start
        blocks = max(1, int(np.ceil(span / spec.correlation_width)))
        rng = stream_rng(spec.seed, realization)
        phases = rng.uniform(0.0, 2.0 * np.pi, blocks)
        idx = np.minimum(
            ((grid.points() - grid.start) / spec.correlation_width).astype(int), blocks - 1
        )
        return ComplexSpectrum(grid, env.amplitude * np.exp(1j * phases[idx]))
    if isinstance(spec, LayeredMediumProbe):
        from coincars.tmm import random_stack, transmission

        env = resample(spec.envelope, grid)
        stack = random_stack(
            spec.layer_count,
            spec.index_range,
            spec.thickness_range,
            seed=mix64(spec.seed, realization),
        )
        t, _ = transmission(stack, grid)
        return ComplexSpectrum(grid, env.amplitude * t.amplitude)
    raise DomainError(f"unknown probe spec type {type(spec).__name__}")


def temporal_profile(spectrum: ComplexSpectrum, times_ps: np.ndarray) -> np.ndarray:
    """Pulse intensity |E(t)|^2 on the requested time grid, peak-normalized.

    Uses the e^{-i w t} convention with the phase 2*pi*c*wn*t, wn in cm^-1
    and t in ps.  The requested window must fit inside the alias period
    1/(c*step) implied by the frequency sampling.
    """
    times = np.asarray(times_ps, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise DomainError("need a 1-d time grid with at least 2 points")
    alias = 1.0 / (C_CM_PER_PS * spectrum.grid.step)
    window = times.max() - times.min()
    if window > alias:
        raise DomainError(
            f"time window {window:.3f} ps exceeds the alias period {alias:.3f} ps; "
            "refine the frequency grid"
        )
    wn = spectrum.grid.points()
    intensity = np.empty(times.size)
    chunk = max(1, int(4e6 / max(wn.size, 1)))
    for i0 in range(0, times.size, chunk):
        block = times[i0 : i0 + chunk]
        phase = np.exp(-2j * np.pi * C_CM_PER_PS * np.outer(block, wn))
        field = phase @ spectrum.amplitude * spectrum.grid.step
        intensity[i0 : i0 + block.size] = np.abs(field) ** 2
    peak = intensity.max()
    if peak == 0.0:
        raise DomainError("zero spectrum has no temporal profile")
    return intensity / peak


def spectral_correlation_length(spectrum: ComplexSpectrum) -> float:
    """Half-width at half maximum of the normalized field autocorrelation.

    g(lag) = |int E*(w) E(w + lag) dw| / int |E|^2 dw, evaluated on the grid
    lags; the half-maximum crossing is located by linear interpolation.
    """
    amp = spectrum.amplitude
    power = float(np.sum(np.abs(amp) ** 2))
    if power == 0.0:
        raise DomainError("zero spectrum has no correlation length")
    n = amp.size
    corr = np.correlate(amp, amp, mode="full")[n - 1 :]  # lag 0 .. n-1
    g = np.abs(corr) / power
    below = np.nonzero(g < 0.5)[0]
    if below.size == 0:
        raise DomainError("autocorrelation never falls below half maximum on this grid")
    k = below[0]
    if k == 0:
        return 0.0
    frac = (g[k - 1] - 0.5) / (g[k - 1] - g[k])
    return float((k - 1 + frac) * spectrum.grid.step)
