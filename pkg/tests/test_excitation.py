import numpy as np
import pytest

from coincars.excitation import two_photon_spectrum, uniform_excitation
from coincars.spectra import ComplexSpectrum, FrequencyGrid, total_power

from helpers import make_spectrum


def gaussian_spec(sigma, step, reach=10.0, center=0.0):
    return make_spectrum(
        center - reach * sigma,
        center + reach * sigma,
        step,
        lambda w: np.exp(-((w - center) ** 2) / (2 * sigma**2)),
    )


class TestTwoPhotonSpectrum:
    def test_single_bin_autocorrelation(self):
        grid = FrequencyGrid(0.0, 0.5, 21)
        amp = np.zeros(21, dtype=complex)
        amp[10] = 1.0
        spec = ComplexSpectrum(grid, amp)
        out = FrequencyGrid(-2.0, 0.5, 9)
        a = two_photon_spectrum(spec, spec, out)
        values = np.abs(a.amplitude)
        peak = np.argmax(values)
        assert out.points()[peak] == pytest.approx(0.0)
        assert values[peak] == pytest.approx(0.5, rel=1e-12)  # |1|^2 * step
        off = np.delete(values, peak)
        assert np.all(off < 1e-12)

    def test_zero_lag_equals_total_power(self, rng):
        grid = FrequencyGrid(-10.0, 0.1, 201)
        spec = ComplexSpectrum(grid, rng.normal(size=201) + 1j * rng.normal(size=201))
        out = FrequencyGrid(0.0, 0.1, 2)
        a = two_photon_spectrum(spec, spec, out)
        assert a.amplitude[0].real == pytest.approx(total_power(spec), rel=1e-12)
        assert abs(a.amplitude[0].imag) < 1e-10

    def test_gaussian_closed_form(self):
        # pump = stokes = exp(-w^2/(2 sigma^2)) gives sigma*sqrt(pi)*exp(-s^2/(4 sigma^2))
        sigma = 3.0
        spec = gaussian_spec(sigma, sigma / 40.0)
        out = FrequencyGrid.from_span(-4 * sigma, 4 * sigma, sigma / 10.0)
        a = two_photon_spectrum(spec, spec, out)
        s = out.points()
        expected = sigma * np.sqrt(np.pi) * np.exp(-(s**2) / (4 * sigma**2))
        assert np.allclose(a.amplitude.real, expected, rtol=1e-6)
        assert np.max(np.abs(a.amplitude.imag)) < 1e-10 * expected.max()

    def test_cross_correlation_peaks_at_center_difference(self):
        sigma = 5.0
        pump = gaussian_spec(sigma, 0.25, center=100.0)
        stokes = gaussian_spec(sigma, 0.25, center=60.0)
        out = FrequencyGrid.from_span(0.0, 80.0, 0.5)
        a = two_photon_spectrum(pump, stokes, out)
        peak = out.points()[np.argmax(np.abs(a.amplitude))]
        assert peak == pytest.approx(40.0, abs=out.step)

    def test_cauchy_schwarz_bound(self, rng):
        grid = FrequencyGrid(-5.0, 0.05, 401)
        pump = ComplexSpectrum(grid, rng.normal(size=401) + 1j * rng.normal(size=401))
        stokes = ComplexSpectrum(grid, rng.normal(size=401) + 1j * rng.normal(size=401))
        out = FrequencyGrid(-8.0, 0.2, 81)
        a = two_photon_spectrum(pump, stokes, out)
        bound = np.sqrt(total_power(pump) * total_power(stokes))
        assert np.all(np.abs(a.amplitude) <= bound * (1 + 1e-9))

    def test_linearity(self, rng):
        grid = FrequencyGrid(-2.0, 0.1, 41)
        e1 = rng.normal(size=41) + 1j * rng.normal(size=41)
        e2 = rng.normal(size=41) + 1j * rng.normal(size=41)
        out = FrequencyGrid(-1.0, 0.25, 9)
        s = ComplexSpectrum(grid, e2)

        def tps(p, st):
            return two_photon_spectrum(p, st, out).amplitude

        # linear in pump
        lhs = tps(ComplexSpectrum(grid, 2.0 * e1 + (1 - 1j) * e2), s)
        rhs = 2.0 * tps(ComplexSpectrum(grid, e1), s) + (1 - 1j) * tps(ComplexSpectrum(grid, e2), s)
        assert np.allclose(lhs, rhs, rtol=1e-10)
        # conjugate-linear in stokes
        p = ComplexSpectrum(grid, e1)
        lhs = tps(p, ComplexSpectrum(grid, (2 + 1j) * e2))
        rhs = np.conj(2 + 1j) * tps(p, ComplexSpectrum(grid, e2))
        assert np.allclose(lhs, rhs, rtol=1e-10)

    def test_autocorrelation_hermitian(self, rng):
        # commensurate grids (shift values on the pump lattice) and a
        # compactly supported field, per the operation's preconditions
        grid = FrequencyGrid(-2.0, 0.1, 41)
        window = np.exp(-grid.points() ** 2)
        amp = window * (rng.normal(size=41) + 1j * rng.normal(size=41))
        amp[0] = amp[-1] = 0.0
        spec = ComplexSpectrum(grid, amp)
        out = FrequencyGrid(-1.0, 0.2, 11)  # symmetric about 0, step = 2x pump step
        a = two_photon_spectrum(spec, spec, out).amplitude
        assert np.allclose(a, np.conj(a[::-1]), rtol=1e-10, atol=1e-12)


class TestUniformExcitation:
    def test_all_ones(self):
        out = FrequencyGrid(0.0, 1.0, 11)
        a = uniform_excitation(1.0, (-5.0, 15.0), out)
        assert np.all(a.amplitude == 1.0)

    def test_zero_amplitude(self):
        out = FrequencyGrid(0.0, 1.0, 11)
        a = uniform_excitation(0.0, (0.0, 10.0), out)
        assert np.all(a.amplitude == 0.0)

    def test_half_band_indicator(self):
        out = FrequencyGrid(0.0, 1.0, 11)
        a = uniform_excitation(1j, (0.0, 5.0), out)
        assert np.all(a.amplitude[:6] == 1j)
        assert np.all(a.amplitude[6:] == 0.0)
