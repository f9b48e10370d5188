"""Two-sample interference maps, noise averaging, and fringe analysis.

A scenario pairs a sample and a reference medium with an excitation model
and a seeded probe.  For every noise realization the two scattered fields
are superposed with a scanned inter-arm phase; intensity (never the field)
is averaged over realizations.  Because the per-realization intensity is
bilinear in the two arm fields, the average map is assembled exactly from
accumulated second moments, which also lets the equal-power factor and the
arm attenuation be applied without re-simulating.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.fft import fft, ifft, next_fast_len
from scipy.optimize import minimize_scalar

from coincars.engine import DispersionModel, _trapezoid_weights
from coincars.excitation import two_photon_spectrum, uniform_excitation
from coincars.probegen import (
    LayeredMediumProbe,
    MultiLorentzianProbe,
    ProbeSpec,
    RandomPhaseProbe,
    generate,
)
from coincars.spectra import (
    C_CM_PER_PS,
    ComplexSpectrum,
    DomainError,
    FrequencyGrid,
    RamanMedium,
    wavelength_to_wavenumber,
)

__all__ = [
    "PhaseGrid",
    "GaussianPulse",
    "PulsePair",
    "FlatExcitation",
    "Scenario",
    "InterferenceMap",
    "FringeCurve",
    "VisibilityReport",
    "build_map",
    "integrate_over_frequency",
    "visibility",
    "vertical_strip_metric",
    "equalize_via_nrb",
    "nrb_visibility",
]


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform inter-arm phase grid over [0, 2*pi*cycles)."""

    points_per_cycle: int = 64
    cycles: int = 1

    def __post_init__(self):
        if self.points_per_cycle < 16:
            raise DomainError("need at least 16 phase points per cycle")
        if self.cycles < 1:
            raise DomainError("need at least one phase cycle")

    def values(self) -> np.ndarray:
        step = 2.0 * np.pi / self.points_per_cycle
        return step * np.arange(self.points_per_cycle * self.cycles)


@dataclass(frozen=True)
class GaussianPulse:
    """Transform-limited Gaussian pulse given center wavelength and duration.

    ``duration_fs`` is the intensity FWHM in time; the spectral amplitude
    standard deviation in cm^-1 follows from the Fourier pair.
    """

    center_nm: float
    duration_fs: float = 35.0

    def __post_init__(self):
        if self.center_nm <= 0 or self.duration_fs <= 0:
            raise DomainError("pulse center and duration must be positive")

    @property
    def center_cm1(self) -> float:
        return wavelength_to_wavenumber(self.center_nm)

    @property
    def sigma_cm1(self) -> float:
        sigma_t_ps = 1e-3 * self.duration_fs / (2.0 * np.sqrt(np.log(2.0)))
        return 1.0 / (2.0 * np.pi * C_CM_PER_PS * sigma_t_ps)

    def spectrum(self, points_per_sigma: int = 16, reach: float = 8.0) -> ComplexSpectrum:
        sigma = self.sigma_cm1
        grid = FrequencyGrid.from_span(
            self.center_cm1 - reach * sigma,
            self.center_cm1 + reach * sigma,
            sigma / points_per_sigma,
        )
        w = grid.points()
        return ComplexSpectrum(grid, np.exp(-((w - self.center_cm1) ** 2) / (2.0 * sigma**2)))


@dataclass(frozen=True)
class PulsePair:
    """Pump and Stokes pulses; their cross-correlation is the excitation.

    The labels are interchangeable: the excitation window always sits at
    the magnitude of the center-frequency difference (the pulse at the
    higher frequency acts as the pump), so a swapped assignment cannot
    silently park the window at negative Raman shifts.
    """

    pump: GaussianPulse
    stokes: GaussianPulse

    def ordered(self) -> tuple[GaussianPulse, GaussianPulse]:
        """(effective pump, effective stokes), pump at the higher frequency."""
        if self.pump.center_cm1 >= self.stokes.center_cm1:
            return self.pump, self.stokes
        return self.stokes, self.pump

    @property
    def shift_center(self) -> float:
        return abs(self.pump.center_cm1 - self.stokes.center_cm1)

    @property
    def shift_sigma(self) -> float:
        return float(np.hypot(self.pump.sigma_cm1, self.stokes.sigma_cm1))


@dataclass(frozen=True)
class FlatExcitation:
    """Idealized uniform excitation over a band (the whole grid if None)."""

    amplitude: complex = 1.0 + 0j
    band: tuple[float, float] | None = None


@dataclass(frozen=True)
class Scenario:
    """Complete description of one interference simulation."""

    sample: RamanMedium
    reference: RamanMedium
    excitation: FlatExcitation | PulsePair
    probe: ProbeSpec
    phases: PhaseGrid = field(default_factory=PhaseGrid)
    realizations: int = 1
    dispersion: DispersionModel = field(default_factory=DispersionModel)
    attenuation: float = 1.0
    equal_power: bool = False
    grid_step: float | None = None
    tail_factor: float = 200.0

    def __post_init__(self):
        if self.realizations < 1:
            raise DomainError("need at least one realization")
        if not (self.attenuation >= 0 and np.isfinite(self.attenuation)):
            raise DomainError("attenuation must be a non-negative real")
        if self.grid_step is not None and not self.grid_step > 0:
            raise DomainError("grid step override must be positive")
        if self.tail_factor <= 0:
            raise DomainError("tail factor must be positive")

    @property
    def seed(self) -> int:
        return self.probe.seed


@dataclass(frozen=True)
class InterferenceMap:
    """Noise-averaged intensity over (frequency, inter-arm phase)."""

    omega: FrequencyGrid
    phases: np.ndarray
    intensity: np.ndarray
    seed: int
    realizations: int

    def __post_init__(self):
        phases = np.array(self.phases, dtype=float)
        intensity = np.array(self.intensity, dtype=float)
        if intensity.shape != (self.omega.count, phases.size):
            raise DomainError("intensity shape does not match the grids")
        if intensity.size and intensity.min() < 0:
            raise DomainError("interference map intensity must be non-negative")
        phases.flags.writeable = False
        intensity.flags.writeable = False
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "intensity", intensity)


@dataclass(frozen=True)
class FringeCurve:
    """Frequency-integrated intensity versus inter-arm phase."""

    phases: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        phases = np.array(self.phases, dtype=float)
        intensity = np.array(self.intensity, dtype=float)
        if phases.shape != intensity.shape or phases.ndim != 1:
            raise DomainError("phase and intensity arrays must be 1-d and equal length")
        if intensity.size and intensity.min() < 0:
            raise DomainError("fringe intensity must be non-negative")
        phases.flags.writeable = False
        intensity.flags.writeable = False
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "intensity", intensity)


@dataclass(frozen=True)
class VisibilityReport:
    """Fringe visibility and extremum phases of one fringe curve.

    ``v_raw`` comes from the curve extrema; ``v_fit`` and the extremum
    phases come from the least-squares cosine fit a + b*cos(phi - c), which
    is robust at finite realization counts.  ``fit_residual`` is the rms
    misfit divided by the fitted mean level.  A degenerate (all-zero) curve
    reports NaN visibilities with ``degenerate`` set.
    """

    v_raw: float
    v_fit: float
    phi_max: float
    phi_min: float
    fit_residual: float
    degenerate: bool = False


# ---------------------------------------------------------------------------
# scenario geometry

_PROBE_PAD_HALFWIDTHS = 50.0


def _probe_layout(spec: ProbeSpec) -> tuple[float, float, float | None]:
    """(lo, hi, finest feature half-width or None) for the probe grid."""
    if isinstance(spec, MultiLorentzianProbe):
        gamma = 0.5 * spec.width
        pad = _PROBE_PAD_HALFWIDTHS * gamma
        return spec.band[0] - pad, spec.band[1] + pad, gamma
    if isinstance(spec, RandomPhaseProbe):
        g = spec.envelope.grid
        return g.start, g.stop, 0.5 * spec.correlation_width
    if isinstance(spec, LayeredMediumProbe):
        g = spec.envelope.grid
        return g.start, g.stop, None
    raise DomainError(f"unknown probe spec type {type(spec).__name__}")


def _media_width_bounds(sc: Scenario) -> tuple[float | None, float | None]:
    widths = [ln.hwhm for m in (sc.sample, sc.reference) for ln in m.lines]
    if not widths:
        return None, None
    return min(widths), max(widths)


def _auto_step(sc: Scenario) -> float:
    if sc.grid_step is not None:
        return float(sc.grid_step)
    min_hwhm, _ = _media_width_bounds(sc)
    _, _, probe_feature = _probe_layout(sc.probe)
    candidates = [v for v in (min_hwhm, probe_feature) if v is not None]
    if not candidates:
        raise DomainError("cannot infer a grid step; set grid_step explicitly")
    return min(candidates) / 8.0


def _shift_span(sc: Scenario) -> tuple[float, float]:
    if isinstance(sc.excitation, FlatExcitation) and sc.excitation.band is not None:
        return sc.excitation.band
    _, max_hwhm = _media_width_bounds(sc)
    centers = [ln.center for m in (sc.sample, sc.reference) for ln in m.lines]
    if centers:
        pad = sc.tail_factor * (max_hwhm or 0.0)
        return min(centers) - pad, max(centers) + pad
    if isinstance(sc.excitation, PulsePair):
        reach = 8.0 * sc.excitation.shift_sigma
        return sc.excitation.shift_center - reach, sc.excitation.shift_center + reach
    raise DomainError("line-free media need an explicit excitation band")


@dataclass(frozen=True)
class _Layout:
    probe_grid: FrequencyGrid
    shift_grid: FrequencyGrid
    out_grid: FrequencyGrid
    excitation: ComplexSpectrum


def _scenario_layout(sc: Scenario) -> _Layout:
    step = _auto_step(sc)
    p_lo, p_hi, _ = _probe_layout(sc.probe)
    probe_grid = FrequencyGrid.from_span(p_lo, p_hi, step)
    s_lo, s_hi = _shift_span(sc)
    shift_grid = FrequencyGrid.from_span(s_lo, s_hi, step)
    out_grid = FrequencyGrid(
        start=probe_grid.start + shift_grid.start,
        step=step,
        count=probe_grid.count + shift_grid.count - 1,
    )
    if isinstance(sc.excitation, FlatExcitation):
        band = sc.excitation.band or (shift_grid.start, shift_grid.stop)
        a_spec = uniform_excitation(sc.excitation.amplitude, band, shift_grid)
    else:
        pump, stokes = sc.excitation.ordered()
        a_spec = two_photon_spectrum(pump.spectrum(), stokes.spectrum(), shift_grid)
    return _Layout(probe_grid, shift_grid, out_grid, a_spec)


# ---------------------------------------------------------------------------
# moment accumulation

def _worker_count(threads: int | None) -> int:
    base = threads if threads is not None else min(4, os.cpu_count() or 1)
    cap = os.environ.get("COINCARS_THREADS")
    if cap is not None:
        base = min(base, max(1, int(cap)))
    return max(1, base)


class _ArmKernels:
    """Pre-transformed response kernels of one medium on the shift grid."""

    def __init__(self, medium: RamanMedium, layout: _Layout, nfft: int):
        shift = layout.shift_grid
        weights = _trapezoid_weights(shift.count) * shift.step
        a_amp = layout.excitation.amplitude
        lo, hi = shift.start, shift.stop
        missing = [ln.center for ln in medium.lines if not lo <= ln.center <= hi]
        if missing:
            raise DomainError(
                f"excitation grid [{lo}, {hi}] does not cover line centers {missing}"
            )
        if medium.lines:
            res = a_amp * medium.line_response(shift.points()) * weights
            self.resonant_hat = fft(res, nfft)
        else:
            self.resonant_hat = None
        if medium.nonresonant != 0:
            self.nonres_hat = fft(medium.nonresonant * a_amp * weights, nfft)
        else:
            self.nonres_hat = None


@dataclass
class _Moments:
    """Second moments of the two arm fields, summed over realizations."""

    sample_res: np.ndarray
    sample_nr: np.ndarray
    sample_cross: np.ndarray
    reference_tot: np.ndarray
    cross_res: np.ndarray
    cross_nr: np.ndarray
    power_sample_res: float
    power_reference_res: float
    count: int


def _accumulate_moments(sc: Scenario, threads: int | None = None) -> tuple[_Layout, _Moments]:
    layout = _scenario_layout(sc)
    n_out = layout.out_grid.count
    nfft = next_fast_len(n_out)
    kern_s = _ArmKernels(sc.sample, layout, nfft)
    kern_r = _ArmKernels(sc.reference, layout, nfft)
    step = layout.out_grid.step

    def one_realization(m: int):
        probe = generate(sc.probe, m, layout.probe_grid)
        probe_hat = fft(probe.amplitude, nfft)

        def conv(kern_hat):
            if kern_hat is None:
                return np.zeros(n_out, dtype=np.complex128)
            return ifft(probe_hat * kern_hat)[:n_out]

        es_res = conv(kern_s.resonant_hat)
        es_nr = conv(kern_s.nonres_hat)
        er_res = conv(kern_r.resonant_hat)
        er_nr = conv(kern_r.nonres_hat)
        er_tot = er_res + er_nr
        return (
            np.abs(es_res) ** 2,
            np.abs(es_nr) ** 2,
            es_res * np.conj(es_nr),
            np.abs(er_tot) ** 2,
            es_res * np.conj(er_tot),
            es_nr * np.conj(er_tot),
            float(np.trapezoid(np.abs(es_res) ** 2, dx=step)),
            float(np.trapezoid(np.abs(er_res) ** 2, dx=step)),
        )

    acc = [np.zeros(n_out) for _ in range(2)]
    acc += [np.zeros(n_out, dtype=np.complex128)]
    acc += [np.zeros(n_out)]
    acc += [np.zeros(n_out, dtype=np.complex128) for _ in range(2)]
    p_s = 0.0
    p_r = 0.0
    workers = _worker_count(threads)
    m_total = sc.realizations
    if workers == 1:
        results = map(one_realization, range(m_total))
        for terms in results:
            for slot, term in zip(acc, terms):
                slot += term
            p_s += terms[6]
            p_r += terms[7]
    else:
        chunk = workers * 4
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for start in range(0, m_total, chunk):
                block = range(start, min(start + chunk, m_total))
                # executor.map yields in submission order: the reduction
                # order is fixed regardless of thread scheduling.
                for terms in ex.map(one_realization, block):
                    for slot, term in zip(acc, terms):
                        slot += term
                    p_s += terms[6]
                    p_r += terms[7]
    moments = _Moments(
        sample_res=acc[0],
        sample_nr=acc[1],
        sample_cross=acc[2],
        reference_tot=acc[3],
        cross_res=acc[4],
        cross_nr=acc[5],
        power_sample_res=p_s,
        power_reference_res=p_r,
        count=m_total,
    )
    return layout, moments


def _equal_power_factor(sc: Scenario, moments: _Moments) -> float:
    if not sc.equal_power:
        return 1.0
    if moments.power_sample_res <= 0 or moments.power_reference_res <= 0:
        raise DomainError("equal-power normalization needs resonant signal in both media")
    return float(np.sqrt(moments.power_reference_res / moments.power_sample_res))


def _assemble_map(
    sc: Scenario, layout: _Layout, moments: _Moments, phi: np.ndarray
) -> InterferenceMap:
    g = _equal_power_factor(sc, moments)
    s = sc.attenuation
    sample_int = s * s * (
        g * g * moments.sample_res
        + moments.sample_nr
        + 2.0 * g * moments.sample_cross.real
    )
    cross = s * (g * moments.cross_res + moments.cross_nr)
    if not sc.dispersion.is_zero:
        cross = cross * np.exp(1j * sc.dispersion.phase(layout.out_grid.points()))
    base = sample_int + moments.reference_tot
    intensity = base[:, None] + 2.0 * np.real(cross[:, None] * np.exp(1j * phi)[None, :])
    intensity = np.maximum(intensity, 0.0) / moments.count
    return InterferenceMap(
        omega=layout.out_grid,
        phases=phi,
        intensity=intensity,
        seed=sc.seed,
        realizations=moments.count,
    )


def build_map(
    sc: Scenario, threads: int | None = None, phi_values: np.ndarray | None = None
) -> InterferenceMap:
    """Noise-averaged interference map of a scenario.

    For every realization the probe is generated from its seeded stream,
    both arm fields are computed, and the squared modulus of the superposed
    field is averaged (arithmetic mean, fixed ascending order).  ``threads``
    parallelizes realizations without changing the result; the
    ``COINCARS_THREADS`` environment variable caps the worker count.
    ``phi_values`` overrides the scenario phase grid.
    """
    phi = np.asarray(phi_values, dtype=float) if phi_values is not None else sc.phases.values()
    layout, moments = _accumulate_moments(sc, threads)
    return _assemble_map(sc, layout, moments, phi)


def integrate_over_frequency(imap: InterferenceMap) -> FringeCurve:
    """Trapezoid integral of the map over frequency, per phase column."""
    return FringeCurve(
        phases=imap.phases,
        intensity=np.trapezoid(imap.intensity, dx=imap.omega.step, axis=0),
    )


# ---------------------------------------------------------------------------
# fringe analysis

def _wrap_phase(angle: float) -> float:
    """Map an angle into [0, 2*pi), folding values within rounding of 2*pi to 0."""
    wrapped = float(angle) % (2.0 * np.pi)
    if 2.0 * np.pi - wrapped < 1e-9:
        return 0.0
    return wrapped


def _cosine_fit(phases: np.ndarray, values: np.ndarray) -> tuple[float, float, float, float]:
    """Least-squares a + b*cos(phi - c); returns (a, b, c, rms residual)."""
    design = np.column_stack([np.ones_like(phases), np.cos(phases), np.sin(phases)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    a, p, q = (float(v) for v in coef)
    b = float(np.hypot(p, q))
    c = float(np.arctan2(q, p))
    rms = float(np.sqrt(np.mean((values - design @ coef) ** 2)))
    return a, b, c, rms


def visibility(curve: FringeCurve) -> VisibilityReport:
    """Extract raw and cosine-fit visibility from a fringe curve."""
    top = float(curve.intensity.max()) if curve.intensity.size else 0.0
    if top <= 0.0:
        return VisibilityReport(
            v_raw=float("nan"),
            v_fit=float("nan"),
            phi_max=float("nan"),
            phi_min=float("nan"),
            fit_residual=float("nan"),
            degenerate=True,
        )
    bottom = float(curve.intensity.min())
    v_raw = (top - bottom) / (top + bottom)
    a, b, c, rms = _cosine_fit(curve.phases, curve.intensity)
    return VisibilityReport(
        v_raw=v_raw,
        v_fit=b / a if a > 0 else float("nan"),
        phi_max=_wrap_phase(c),
        phi_min=_wrap_phase(c + np.pi),
        fit_residual=rms / a if a > 0 else float("nan"),
    )


def vertical_strip_metric(imap: InterferenceMap, power_floor: float = 0.01) -> float:
    """Power-weighted circular spread of the per-frequency fringe phase.

    Zero means every frequency fringes at the same phase (vertical strips);
    dispersion or uncorrelated per-frequency fringes raise it.  Frequencies
    whose mean power is below ``power_floor`` times the strongest one are
    ignored.
    """
    phases = imap.phases
    design = np.column_stack([np.ones_like(phases), np.cos(phases), np.sin(phases)])
    coef, *_ = np.linalg.lstsq(design, imap.intensity.T, rcond=None)
    mean_level = coef[0]
    top = mean_level.max()
    if top <= 0:
        raise DomainError("map has no signal rows")
    keep = mean_level >= power_floor * top
    weights = mean_level[keep]
    angles = np.arctan2(coef[2][keep], coef[1][keep])
    resultant = np.abs(np.sum(weights * np.exp(1j * angles))) / weights.sum()
    resultant = min(max(resultant, 1e-300), 1.0)
    return float(np.sqrt(max(0.0, -2.0 * np.log(resultant))))


# ---------------------------------------------------------------------------
# non-resonant equalization

def _nrb_only(sc: Scenario) -> Scenario:
    for name, medium in (("sample", sc.sample), ("reference", sc.reference)):
        if medium.nonresonant == 0:
            raise DomainError(f"{name} medium has no non-resonant response to equalize on")
    excitation = sc.excitation
    if isinstance(excitation, FlatExcitation) and excitation.band is None:
        # freeze the parent scenario's excitation window before the lines
        # (which anchor it) are stripped
        excitation = replace(excitation, band=_shift_span(sc))
    return replace(
        sc,
        sample=RamanMedium((), sc.sample.nonresonant),
        reference=RamanMedium((), sc.reference.nonresonant),
        excitation=excitation,
        equal_power=False,
        attenuation=1.0,
    )


def _nrb_curve_terms(sc: Scenario, threads: int | None) -> tuple[float, float, float]:
    layout, moments = _accumulate_moments(_nrb_only(sc), threads)
    step = layout.out_grid.step
    power_s = float(np.trapezoid(moments.sample_nr, dx=step))
    power_r = float(np.trapezoid(moments.reference_tot, dx=step))
    cross = moments.cross_nr
    if not sc.dispersion.is_zero:
        cross = cross * np.exp(1j * sc.dispersion.phase(layout.out_grid.points()))
    cross_mag = float(np.abs(np.trapezoid(cross, dx=step)))
    if power_s <= 0 or power_r <= 0:
        raise DomainError("non-resonant fields carry no power on this grid")
    return power_s, power_r, cross_mag


def nrb_visibility(sc: Scenario, attenuation: float = 1.0, threads: int | None = None) -> float:
    """Fringe visibility of the non-resonant-only interference at a given attenuation."""
    power_s, power_r, cross = _nrb_curve_terms(sc, threads)
    a = float(attenuation)
    return 2.0 * a * cross / (a * a * power_s + power_r)


def equalize_via_nrb(sc: Scenario, threads: int | None = None) -> float:
    """Sample-arm attenuation that maximizes the non-resonant fringe visibility.

    With only the instantaneous background interfering, visibility is
    2*a*|X| / (a^2*P_s + P_r); the scalar search recovers the attenuation
    that equalizes the two arm amplitudes.
    """
    power_s, power_r, cross = _nrb_curve_terms(sc, threads)

    def negative_visibility(a: float) -> float:
        return -2.0 * a * cross / (a * a * power_s + power_r)

    guess = float(np.sqrt(power_r / power_s))
    result = minimize_scalar(
        negative_visibility,
        bounds=(guess / 16.0, guess * 16.0),
        method="bounded",
        options={"xatol": 1e-12 * max(guess, 1.0)},
    )
    return float(result.x)
