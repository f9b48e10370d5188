import numpy as np
import pytest

from coincars.analytic import media_summary
from coincars.engine import DispersionModel
from coincars.interferometry import (
    FlatExcitation,
    FringeCurve,
    GaussianPulse,
    PhaseGrid,
    PulsePair,
    Scenario,
    build_map,
    equalize_via_nrb,
    integrate_over_frequency,
    nrb_visibility,
    vertical_strip_metric,
    visibility,
)
from coincars.probegen import MultiLorentzianProbe
from coincars.spectra import DomainError, RamanLine, RamanMedium

SINGLE = RamanMedium((RamanLine(1000.0, 5.0, 1.0),))
PROBE = MultiLorentzianProbe(count=25, width=10.0, band=(12200.0, 12800.0), seed=77)
NARROW = MultiLorentzianProbe(count=1, width=2.0, band=(12495.0, 12505.0), seed=11)


def scenario(**kw):
    base = dict(
        sample=SINGLE,
        reference=SINGLE,
        excitation=FlatExcitation(),
        probe=PROBE,
        phases=PhaseGrid(64),
        realizations=1,
    )
    base.update(kw)
    return Scenario(**base)


class TestBuildMap:
    def test_identical_samples_narrowband(self):
        imap = build_map(scenario(probe=NARROW))
        # zero intensity along phi = pi, column-independent fringes
        phi = imap.phases
        k_pi = np.argmin(np.abs(phi - np.pi))
        assert imap.intensity[:, k_pi].max() <= 1e-12 * imap.intensity.max()
        signal_rows = imap.intensity.max(axis=1) > 1e-3 * imap.intensity.max()
        mins = phi[np.argmin(imap.intensity[signal_rows], axis=1)]
        assert np.allclose(mins, np.pi, atol=phi[1] - phi[0])

    def test_identical_samples_noisy_per_frequency_contrast(self):
        imap = build_map(scenario(realizations=2))
        rows = imap.intensity[imap.intensity.max(axis=1) > 0.01 * imap.intensity.max()]
        v = (rows.max(axis=1) - rows.min(axis=1)) / (rows.max(axis=1) + rows.min(axis=1))
        assert np.all(v > 0.999)

    def test_disjoint_lines_do_not_interfere(self):
        far = RamanMedium((RamanLine(1800.0, 5.0, 1.0),))
        sc = scenario(reference=far, probe=NARROW)
        rep = visibility(integrate_over_frequency(build_map(sc)))
        assert rep.v_fit < 0.05

    def test_map_symmetry_under_swap_and_phase_negation(self):
        other = RamanMedium((RamanLine(1012.0, 4.0, 0.6 + 0.3j),))
        phi = PhaseGrid(32).values()
        sc_fwd = scenario(reference=other)
        sc_swp = scenario(sample=other, reference=SINGLE)
        fwd = build_map(sc_fwd, phi_values=phi)
        swp = build_map(sc_swp, phi_values=-phi)
        assert np.allclose(fwd.intensity, swp.intensity, rtol=1e-10, atol=1e-14)

    def test_threaded_matches_serial(self):
        sc = scenario(realizations=8)
        serial = build_map(sc, threads=1)
        threaded = build_map(sc, threads=4)
        assert np.array_equal(serial.intensity, threaded.intensity)

    def test_env_var_caps_workers(self, monkeypatch):
        sc = scenario(realizations=6)
        baseline = build_map(sc, threads=4)
        monkeypatch.setenv("COINCARS_THREADS", "1")
        capped = build_map(sc, threads=4)
        assert np.array_equal(baseline.intensity, capped.intensity)

    def test_gaussian_pulse_excitation_runs(self):
        pair = PulsePair(GaussianPulse(1240.0, 35.0), GaussianPulse(1125.0, 35.0))
        assert pair.shift_center == pytest.approx(824.37, abs=0.01)
        sc = scenario(excitation=pair, probe=NARROW)
        imap = build_map(sc)
        assert imap.intensity.max() > 0

    def test_noise_average_matches_closed_form(self):
        # mean integrated curve approaches the closed form with the probe
        # half-width added to every line width
        sample = RamanMedium((RamanLine(1005.0, 5.0, 1.0),))
        refer = RamanMedium((RamanLine(995.0, 5.0, 1.0),))
        sc = scenario(sample=sample, reference=refer, realizations=600)
        curve = integrate_over_frequency(build_map(sc, threads=4))
        smear = 0.5 * PROBE.width
        pred = media_summary(
            RamanMedium((RamanLine(1005.0, 5.0 + smear, 1.0),)),
            RamanMedium((RamanLine(995.0, 5.0 + smear, 1.0),)),
        )
        shape = pred.diag + pred.cross * np.cos(curve.phases - pred.phase)
        ratio = curve.intensity.mean() / shape.mean()
        assert np.max(np.abs(curve.intensity - ratio * shape)) / curve.intensity.mean() < 0.05

    def test_equal_power_restores_full_contrast(self):
        # same line, four-times-weaker sample amplitude: unbalanced arms cap
        # the visibility at 2r/(1+r^2); the equal-power factor removes that
        weak = RamanMedium((RamanLine(1000.0, 5.0, 0.25),))
        unbalanced = visibility(
            integrate_over_frequency(build_map(scenario(sample=weak, realizations=2)))
        )
        assert unbalanced.v_fit == pytest.approx(2 * 0.25 / (1 + 0.25**2), rel=1e-9)
        balanced = visibility(
            integrate_over_frequency(
                build_map(scenario(sample=weak, realizations=2, equal_power=True))
            )
        )
        assert balanced.v_fit == pytest.approx(1.0, abs=1e-9)


class TestFringeAnalysis:
    def test_constant_map_constant_curve(self):
        imap = build_map(scenario(probe=NARROW))
        curve = integrate_over_frequency(imap)
        assert curve.intensity.shape == imap.phases.shape

    def test_cosine_visibility_one(self):
        phi = PhaseGrid(64).values()
        rep = visibility(FringeCurve(phi, 1.0 + np.cos(phi)))
        assert rep.v_raw == pytest.approx(1.0, abs=1e-12)
        assert rep.v_fit == pytest.approx(1.0, abs=1e-12)
        assert rep.phi_max == pytest.approx(0.0, abs=1e-9)
        assert rep.phi_min == pytest.approx(np.pi, abs=1e-9)

    def test_offset_cosine_visibility(self):
        # I = 2 + cos: extrema 3 and 1, so (max-min)/(max+min) = 1/2
        phi = PhaseGrid(64).values()
        rep = visibility(FringeCurve(phi, 2.0 + np.cos(phi)))
        assert rep.v_fit == pytest.approx(0.5, rel=1e-9)
        assert rep.v_raw == pytest.approx(0.5, rel=1e-9)

    def test_constant_curve_zero_visibility(self):
        phi = PhaseGrid(64).values()
        rep = visibility(FringeCurve(phi, np.full(phi.size, 2.5)))
        assert rep.v_raw == pytest.approx(0.0, abs=1e-12)
        assert rep.v_fit == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_zero_curve(self):
        phi = PhaseGrid(64).values()
        rep = visibility(FringeCurve(phi, np.zeros(phi.size)))
        assert rep.degenerate
        assert np.isnan(rep.v_fit)

    def test_fit_matches_raw_for_pure_cosine(self):
        phi = PhaseGrid(48).values()
        rep = visibility(FringeCurve(phi, 3.0 + 1.7 * np.cos(phi - 1.2)))
        assert abs(rep.v_fit - rep.v_raw) < 0.02
        assert rep.phi_max == pytest.approx(1.2, abs=1e-9)

    def test_phase_grid_validation(self):
        with pytest.raises(DomainError):
            PhaseGrid(points_per_cycle=8)


class TestStripMetric:
    def test_identical_no_dispersion_vertical(self):
        metric = vertical_strip_metric(build_map(scenario(probe=NARROW)))
        assert metric < 2 * np.pi / 64

    def test_dispersion_monotone(self):
        metrics = []
        for c2 in (1e-6, 5e-6, 2e-5):
            sc = scenario(dispersion=DispersionModel(reference=13500.0, quadratic=c2))
            metrics.append(vertical_strip_metric(build_map(sc)))
        assert metrics[0] < metrics[1] < metrics[2]

    def test_disjoint_noisy_single_shot_scrambled(self):
        far = RamanMedium((RamanLine(1600.0, 5.0, 1.0),))
        sc = scenario(reference=far, realizations=1)
        metric = vertical_strip_metric(build_map(sc))
        assert metric > 1.0


class TestNrbEffects:
    def test_shared_nrb_raises_visibility(self):
        sample = RamanMedium((RamanLine(1005.0, 5.0, 1.0),))
        refer = RamanMedium((RamanLine(995.0, 5.0, 1.0),))
        vis = []
        for level in (0.0, 0.02, 0.08):
            sc = scenario(
                sample=sample.with_nonresonant(level),
                reference=refer.with_nonresonant(level),
                realizations=20,
            )
            vis.append(visibility(integrate_over_frequency(build_map(sc, threads=4))).v_fit)
        assert vis[0] <= vis[1] <= vis[2]

    def test_equalization_recovers_ratio(self):
        med_s = RamanMedium((RamanLine(1000.0, 5.0, 1.0),), nonresonant=0.5)
        med_r = RamanMedium((RamanLine(1000.0, 5.0, 1.0),), nonresonant=1.0)
        sc = scenario(sample=med_s, reference=med_r, realizations=2)
        alpha = equalize_via_nrb(sc)
        assert alpha == pytest.approx(2.0, abs=1e-6)
        assert nrb_visibility(sc, alpha) == pytest.approx(1.0, abs=1e-9)

    def test_identical_nrb_alpha_one(self):
        med = RamanMedium((RamanLine(1000.0, 5.0, 1.0),), nonresonant=0.7)
        sc = scenario(sample=med, reference=med, realizations=2)
        assert equalize_via_nrb(sc) == pytest.approx(1.0, abs=1e-6)
        assert nrb_visibility(sc, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_unequalized_closed_form(self):
        med_s = RamanMedium((RamanLine(1000.0, 5.0, 1.0),), nonresonant=0.5)
        med_r = RamanMedium((RamanLine(1000.0, 5.0, 1.0),), nonresonant=1.0)
        sc = scenario(sample=med_s, reference=med_r, realizations=2)
        assert nrb_visibility(sc, 1.0) == pytest.approx(0.8, abs=1e-9)

    def test_missing_nrb_rejected(self):
        sc = scenario()  # no non-resonant response on either side
        with pytest.raises(DomainError):
            equalize_via_nrb(sc)


class TestScenarioValidation:
    def test_bad_realizations(self):
        with pytest.raises(DomainError):
            scenario(realizations=0)

    def test_bad_attenuation(self):
        with pytest.raises(DomainError):
            scenario(attenuation=-1.0)

    def test_line_free_flat_needs_band(self):
        media = RamanMedium((), nonresonant=1.0)
        sc = scenario(sample=media, reference=media)
        with pytest.raises(DomainError):
            build_map(sc)
        ok = scenario(sample=media, reference=media, excitation=FlatExcitation(band=(500.0, 1500.0)))
        assert build_map(ok).intensity.max() > 0
