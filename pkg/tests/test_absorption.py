import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import trapezoid

from optorf.absorption import (TransmissionSpectrum, VoigtLine, ZeemanQuartet, detunings_from_wavelength,
                               fit_absorption, gauss_width_for_total, quartet_from_fit, synthesize_transmission,
                               voigt_fwhm, voigt_peak_normalized)
from optorf.core import ConvergenceError, DomainError

TRUTH = dict(od_direct=0.518, od_crossed=0.028, lorentz_fwhm=50e6, gauss_fwhm=727.985e6, g_ground=8.20,
             g_excited=8.13, center_shift=0.0, temperature=2.5)
B0 = 0.105
WIDE = np.linspace(-16e9, 16e9, 1601)
# dense windows on the direct pair and both crossed lines
WINDOWS = np.concatenate([np.linspace(c - 2.5e9, c + 2.5e9, 2001) for c in (-12e9, 0.0, 12e9)])


def perturbed_guess(pin_ground=False):
    g = {k: v * (1.2 if i % 2 == 0 else 0.8) for i, (k, v) in enumerate(TRUTH.items())}
    g["center_shift"] = 100e6
    if pin_ground:
        g["g_ground"] = TRUTH["g_ground"]
    return g


def convolution_oracle(x, wl, wg, n=200001):
    """Brute-force Lorentzian * Gaussian, normalized to its value at zero."""
    sigma = wg / (2 * np.sqrt(2 * np.log(2)))
    hw = wl / 2
    t = np.linspace(-14 * sigma, 14 * sigma, n)
    gauss = np.exp(-t ** 2 / (2 * sigma ** 2))

    def conv(x0):
        return trapezoid(gauss * hw / ((x0 - t) ** 2 + hw ** 2), t)

    return conv(x) / conv(0.0)


def test_voigt_examples():
    assert voigt_peak_normalized(0.0, 1.0, 2.0) == pytest.approx(1.0, abs=1e-15)
    assert voigt_peak_normalized(0.5, 1.0, 0.0) == pytest.approx(0.5, rel=1e-12)
    assert voigt_peak_normalized(1.0, 0.0, 2.0) == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(DomainError):
        voigt_peak_normalized(0.0, 0.0, 0.0)


def test_voigt_against_convolution():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        wl, wg = rng.uniform(0.2, 2.0, 2)
        x = rng.uniform(-3.0, 3.0)
        ref = convolution_oracle(x, wl, wg)
        worst = max(worst, abs(voigt_peak_normalized(x, wl, wg) / ref - 1))
    assert worst < 1e-6


@given(st.floats(0.01, 5), st.floats(0.01, 5))
def test_voigt_shape_properties(wl, wg):
    x = np.linspace(0, 10, 401)
    v = voigt_peak_normalized(x, wl, wg)
    assert np.allclose(v, voigt_peak_normalized(-x, wl, wg), rtol=0, atol=1e-15)
    assert np.all(v <= 1 + 1e-15)
    assert np.all(np.diff(v) < 0)


def test_voigt_fwhm_limits():
    assert voigt_fwhm(1.0, 0.0) == pytest.approx(1.0, rel=1e-9)
    assert voigt_fwhm(0.0, 1.0) == pytest.approx(1.0, rel=1e-9)
    # Olivero-Longbothum approximation, accurate to ~2e-4
    wl, wg = 50e6, 727.985e6
    approx = 0.5346 * wl + np.sqrt(0.2166 * wl ** 2 + wg ** 2)
    assert voigt_fwhm(wl, wg) == pytest.approx(approx, rel=3e-4)
    assert voigt_fwhm(wl, wg) == pytest.approx(755e6, rel=1e-6)
    assert gauss_width_for_total(755e6, 50e6) == pytest.approx(727.985e6, rel=1e-5)


def test_line_validation():
    with pytest.raises(DomainError):
        VoigtLine(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        VoigtLine(0.0, 1.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        ZeemanQuartet(temperature=0.0)


def test_quartet_geometry():
    q = ZeemanQuartet()
    nu_g, nu_e = q.splittings
    centers = [line.center for line in q.lines()]
    assert centers[0] == pytest.approx(-centers[1])
    assert abs(centers[2]) > abs(centers[0])
    assert centers[2] == pytest.approx(0.5 * (nu_g + nu_e))
    assert 11.5e9 < centers[2] < 12.5e9


@given(st.floats(0.05, 300))
def test_population_weights_sum(T):
    q = ZeemanQuartet(temperature=T)
    amps = [line.peak_od for line in q.lines()]
    assert amps[0] + amps[1] == pytest.approx(q.od_direct, rel=1e-12)
    assert amps[2] + amps[3] == pytest.approx(q.od_crossed, rel=1e-12)


def test_transparent_medium():
    spec = synthesize_transmission(ZeemanQuartet(od_direct=0.0, od_crossed=0.0), WIDE)
    assert np.all(spec.transmission == 1.0)


def test_direct_line_depth():
    # isolated-line estimate exp(-0.518 rho_gg) with rho_gg = 1/(1+exp(-0.236))
    rho_gg = 1 / (1 + np.exp(-0.236))
    assert rho_gg == pytest.approx(0.559, abs=1e-3)
    wide = ZeemanQuartet(B0=0.5, g_excited=6.0)
    rho = wide.populations[0]
    line = wide.lines()[0]
    T = synthesize_transmission(wide, [line.center]).transmission[0]
    assert T == pytest.approx(np.exp(-0.518 * rho), rel=2e-3)
    # with the default splittings the direct pair overlaps, so the full sum is deeper
    q = ZeemanQuartet()
    T_full = synthesize_transmission(q, [q.lines()[0].center]).transmission[0]
    assert T_full < np.exp(-0.518 * q.populations[0])


def test_crossed_positions_read_back():
    q = ZeemanQuartet()
    spec = synthesize_transmission(q, WIDE)
    step = WIDE[1] - WIDE[0]
    nu_g, nu_e = q.splittings
    for sign in (+1, -1):
        window = np.sign(spec.detunings) == sign
        window &= np.abs(spec.detunings) > 6e9
        found = spec.detunings[window][np.argmin(spec.transmission[window])]
        assert abs(abs(found) - 0.5 * (nu_g + nu_e)) <= step


def test_transmission_monotone_in_od():
    rng = np.random.default_rng(3)
    for _ in range(20):
        od_d, od_c = rng.uniform(0, 1, 2)
        base = synthesize_transmission(ZeemanQuartet(od_direct=od_d, od_crossed=od_c), WIDE).transmission
        more = synthesize_transmission(ZeemanQuartet(od_direct=od_d + 0.1, od_crossed=od_c), WIDE).transmission
        assert np.all(more <= base)
        assert np.all(more[np.abs(WIDE) < 1e9] < base[np.abs(WIDE) < 1e9])


def test_wavelength_detuning():
    assert detunings_from_wavelength(1532.636) == 0.0
    assert detunings_from_wavelength(1532.727) == pytest.approx(-11.6e9, rel=0.01)


def test_round_trip_clean():
    data = synthesize_transmission(ZeemanQuartet(), WIDE)
    res = fit_absorption(data, perturbed_guess(), B0)
    assert res["od_direct"] == pytest.approx(0.518, rel=0.02)
    assert res["od_crossed"] == pytest.approx(0.028, rel=0.02)
    assert res.info["total_fwhm"] == pytest.approx(755e6, rel=0.02)
    q = quartet_from_fit(res, B0)
    assert q.od_direct == res["od_direct"]


def test_flat_input():
    data = TransmissionSpectrum(WIDE, np.ones_like(WIDE))
    res = fit_absorption(data, perturbed_guess(), B0)
    assert res["od_direct"] < 1e-4 and res["od_crossed"] < 1e-4


N_SEEDS = 8


@pytest.fixture(scope="module")
def noisy_fits():
    clean = synthesize_transmission(ZeemanQuartet(), WINDOWS).transmission
    out = []
    for seed in range(N_SEEDS):
        rng = np.random.default_rng(seed)
        data = TransmissionSpectrum(WINDOWS, clean + 0.01 * rng.standard_normal(WINDOWS.size))
        # g_ground is the RF-measured value; the optical data constrain only g sums and differences
        out.append(fit_absorption(data, perturbed_guess(pin_ground=True), B0,
                                  bounds={"g_ground": (TRUTH["g_ground"], TRUTH["g_ground"])}))
    return out


def _errors(fits):
    return np.array([[f["od_direct"] / 0.518 - 1, f["od_crossed"] / 0.028 - 1, f.info["total_fwhm"] / 755e6 - 1]
                     for f in fits])


def test_noisy_direct_od_and_width_per_draw(noisy_fits):
    e = _errors(noisy_fits)
    assert np.all(np.abs(e[:, [0, 2]]) < 0.05)


def test_noisy_monte_carlo_mean(noisy_fits):
    assert np.all(np.abs(_errors(noisy_fits).mean(axis=0)) < 0.05)


@pytest.mark.xfail(strict=True, reason="the crossed lines are ~1.5% deep, so at 1% noise od_crossed scatters "
                                       "by ~4% rms and single draws exceed 5%")
def test_noisy_crossed_od_per_draw(noisy_fits):
    assert np.all(np.abs(_errors(noisy_fits)[:, 1]) < 0.05)


def test_non_convergence():
    data = synthesize_transmission(ZeemanQuartet(), WIDE)
    with pytest.raises(ConvergenceError):
        fit_absorption(data, perturbed_guess(), B0, max_evals=100)


def test_rejects_guess_outside_bounds():
    data = synthesize_transmission(ZeemanQuartet(), WIDE)
    with pytest.raises(ValueError):
        fit_absorption(data, TRUTH, B0, bounds={"temperature": (3.0, 4.0)})
