import numpy as np
import pytest

from coincars.spectra import (
    ComplexSpectrum,
    DomainError,
    FrequencyGrid,
    RamanLine,
    RamanMedium,
    read_line_list,
    resample,
    total_power,
    wavelength_to_wavenumber,
    wavenumber_to_wavelength,
)


class TestWavelengthConversion:
    def test_800nm(self):
        assert wavelength_to_wavenumber(800.0) == pytest.approx(12500.0, rel=1e-12)

    def test_identity_scale(self):
        assert wavelength_to_wavenumber(1e7) == pytest.approx(1.0, rel=1e-12)

    def test_1125nm(self):
        # direct division cross-check
        assert wavelength_to_wavenumber(1125.0) == pytest.approx(1e7 / 1125.0, rel=1e-12)
        assert wavelength_to_wavenumber(1125.0) == pytest.approx(8888.888888888889, rel=1e-9)

    def test_round_trip(self):
        for wl in (200.0, 800.0, 1125.0, 1240.0, 1e7):
            assert wavenumber_to_wavelength(wavelength_to_wavenumber(wl)) == pytest.approx(
                wl, rel=1e-12
            )

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            wavelength_to_wavenumber(0.0)
        with pytest.raises(DomainError):
            wavelength_to_wavenumber(-5.0)


class TestFrequencyGrid:
    def test_points_increasing(self):
        g = FrequencyGrid(start=100.0, step=0.5, count=11)
        pts = g.points()
        assert pts[0] == 100.0 and pts[-1] == 105.0
        assert np.all(np.diff(pts) > 0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            FrequencyGrid(start=0.0, step=-1.0, count=5)
        with pytest.raises(DomainError):
            FrequencyGrid(start=0.0, step=1.0, count=1)

    def test_from_span_lattice_aligned(self):
        a = FrequencyGrid.from_span(10.3, 20.0, 0.5)
        b = FrequencyGrid.from_span(15.1, 30.0, 0.5)
        offset = (b.start - a.start) / 0.5
        assert offset == pytest.approx(round(offset))
        assert a.start <= 10.3 and a.stop >= 20.0


class TestComplexSpectrum:
    def test_length_mismatch(self):
        g = FrequencyGrid(0.0, 1.0, 4)
        with pytest.raises(DomainError):
            ComplexSpectrum(g, np.ones(5))

    def test_nonfinite_rejected(self):
        g = FrequencyGrid(0.0, 1.0, 4)
        with pytest.raises(DomainError):
            ComplexSpectrum(g, np.array([1.0, np.nan, 0.0, 0.0]))

    def test_immutable(self):
        g = FrequencyGrid(0.0, 1.0, 4)
        s = ComplexSpectrum(g, np.ones(4))
        with pytest.raises(ValueError):
            s.amplitude[0] = 2.0


class TestResample:
    def test_constant_on_finer_grid(self):
        src = ComplexSpectrum(FrequencyGrid(0.0, 1.0, 11), np.full(11, 3 - 2j))
        out = resample(src, FrequencyGrid(0.0, 0.25, 41))
        assert np.allclose(out.amplitude, 3 - 2j, rtol=0, atol=1e-14)

    def test_identity_grid_bit_identical(self):
        g = FrequencyGrid(5.0, 0.3, 17)
        src = ComplexSpectrum(g, np.sin(np.arange(17)) + 1j * np.cos(np.arange(17)))
        out = resample(src, g)
        assert np.array_equal(out.amplitude, src.amplitude)

    def test_linear_ramp_midpoints(self):
        g = FrequencyGrid(0.0, 1.0, 5)
        src = ComplexSpectrum(g, np.arange(5.0) * (2.0 + 1.0j))
        half = FrequencyGrid(0.0, 0.5, 9)
        out = resample(src, half)
        expected = np.arange(0.0, 4.01, 0.5) * (2.0 + 1.0j)
        assert np.allclose(out.amplitude, expected, rtol=1e-12)

    def test_affine_exact(self):
        src = ComplexSpectrum(
            FrequencyGrid(-3.0, 0.7, 21),
            (1.5 * (np.arange(21) * 0.7 - 3.0) + 0.25) + 1j * (-(np.arange(21) * 0.7 - 3.0) + 2.0),
        )
        target = FrequencyGrid(-2.9, 0.31, 30)
        out = resample(src, target)
        x = target.points()
        assert np.allclose(out.amplitude, (1.5 * x + 0.25) + 1j * (-x + 2.0), rtol=1e-12)

    def test_outside_span_zero(self):
        src = ComplexSpectrum(FrequencyGrid(0.0, 1.0, 5), np.ones(5))
        out = resample(src, FrequencyGrid(-2.0, 1.0, 10))
        assert np.all(out.amplitude[:2] == 0)

    def test_empty_overlap(self):
        src = ComplexSpectrum(FrequencyGrid(0.0, 1.0, 5), np.ones(5))
        with pytest.raises(DomainError):
            resample(src, FrequencyGrid(100.0, 1.0, 5))


class TestTotalPower:
    def test_zero(self):
        s = ComplexSpectrum(FrequencyGrid(0.0, 1.0, 9), np.zeros(9))
        assert total_power(s) == 0.0

    def test_unit_rectangle(self):
        s = ComplexSpectrum(FrequencyGrid(0.0, 0.5, 21), np.ones(21))
        assert total_power(s) == pytest.approx(10.0, rel=1e-12)

    def test_lorentzian_kernel(self):
        # amplitude 1/(w + i*gamma): |a|^2 integrates to pi/gamma; dense
        # trapezoid over a +-2000*gamma window is the oracle
        gamma = 2.5
        grid = FrequencyGrid.from_span(-2000 * gamma, 2000 * gamma, gamma / 10)
        s = ComplexSpectrum(grid, 1.0 / (grid.points() + 1j * gamma))
        assert total_power(s) == pytest.approx(np.pi / gamma, rel=1e-3)

    def test_global_phase_invariant(self, rng):
        grid = FrequencyGrid(0.0, 0.1, 301)
        amp = rng.normal(size=301) + 1j * rng.normal(size=301)
        base = total_power(ComplexSpectrum(grid, amp))
        for phase in (0.3, 1.7, -2.2):
            rotated = total_power(ComplexSpectrum(grid, amp * np.exp(1j * phase)))
            assert rotated == pytest.approx(base, rel=1e-12)


class TestRamanMedium:
    def test_requires_line_or_nonresonant(self):
        with pytest.raises(DomainError):
            RamanMedium(())
        RamanMedium((), nonresonant=0.5)  # fine
        RamanMedium((RamanLine(1000.0, 2.0, 1.0),))  # fine

    def test_line_width_positive(self):
        with pytest.raises(DomainError):
            RamanLine(1000.0, 0.0, 1.0)

    def test_line_response_sum(self):
        med = RamanMedium((RamanLine(10.0, 1.0, 2.0), RamanLine(-5.0, 0.5, 1j)))
        shift = np.array([0.0, 10.0])
        expected = 2.0 / (shift - 10.0 + 1j) + 1j / (shift + 5.0 + 0.5j)
        assert np.allclose(med.line_response(shift), expected, rtol=1e-14)

    def test_scaled_lines(self):
        med = RamanMedium((RamanLine(10.0, 1.0, 2.0),), nonresonant=0.3)
        scaled = med.with_scaled_lines(0.5)
        assert scaled.lines[0].amplitude == 1.0
        assert scaled.nonresonant == 0.3


class TestLineListFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "demo.lines"
        path.write_text(
            "# demo medium\n"
            "1003.6, 2.0, 1.0, 0.0\n"
            "786.2, 2.6, 0.74, -0.1\n"
            "NONRES, 0.2, 0.05\n"
        )
        med = read_line_list(path)
        assert len(med.lines) == 2
        assert med.lines[1].amplitude == pytest.approx(0.74 - 0.1j)
        assert med.nonresonant == pytest.approx(0.2 + 0.05j)

    def test_bad_row_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.lines"
        path.write_text("1003.6, 2.0, 1.0, 0.0\n1030.0, oops, 1.0, 0.0\n")
        with pytest.raises(DomainError, match="bad.lines:2"):
            read_line_list(path)

    def test_bundled_lists_parse(self):
        from coincars.config import data_path

        for name in ("toluene.lines", "oxylene.lines"):
            med = read_line_list(data_path(name))
            assert len(med.lines) >= 5
            assert med.nonresonant == 0
