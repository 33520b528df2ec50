"""Four-line Zeeman absorption model with Voigt line shapes.

The ground and excited Kramers doublets split by nu_g and nu_e. Direct
transitions sit at +-(nu_g - nu_e)/2 from the zero-field line, crossed
ones at +-(nu_g + nu_e)/2. Line strengths are the peak optical depth of
the transition family times the thermal population of its ground level.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import voigt_profile

from .core import ConvergenceError, DomainError, h, mu_B, thermal_populations, angular, wavelength_to_frequency
from .fitting import FitProblem, minimize, rounding_level

ZERO_FIELD_WAVELENGTH_NM = 1532.636
_FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))


def _check_widths(lorentz_fwhm, gauss_fwhm):
    if lorentz_fwhm < 0 or gauss_fwhm < 0:
        raise ValueError("line widths must be non-negative")
    if lorentz_fwhm == 0 and gauss_fwhm == 0:
        raise DomainError("Voigt shape needs a nonzero Lorentzian or Gaussian width")


def _voigt_unit(x, lorentz_fwhm, gauss_fwhm):
    sigma = gauss_fwhm * _FWHM_TO_SIGMA
    gamma = 0.5 * lorentz_fwhm
    return voigt_profile(x, sigma, gamma) / voigt_profile(0.0, sigma, gamma)


def voigt_peak_normalized(detuning, lorentz_fwhm, gauss_fwhm):
    """Voigt profile scaled to 1 at zero detuning.

    Uses the Faddeeva-function evaluation behind scipy.special.voigt_profile.
    Widths are FWHM in the same unit as ``detuning``.
    """
    _check_widths(lorentz_fwhm, gauss_fwhm)
    out = _voigt_unit(np.asarray(detuning, dtype=float), lorentz_fwhm, gauss_fwhm)
    return float(out) if np.ndim(out) == 0 else out


def voigt_fwhm(lorentz_fwhm, gauss_fwhm):
    """Full width at half maximum of the Voigt profile, found by root bracketing."""
    _check_widths(lorentz_fwhm, gauss_fwhm)
    hi = lorentz_fwhm + gauss_fwhm
    half = brentq(lambda x: _voigt_unit(x, lorentz_fwhm, gauss_fwhm) - 0.5, 0.0, hi, xtol=1e-12 * hi, rtol=1e-14)
    return 2.0 * half


def gauss_width_for_total(total_fwhm, lorentz_fwhm):
    """Gaussian FWHM giving a Voigt of the requested total FWHM."""
    if not 0 <= lorentz_fwhm < total_fwhm:
        raise ValueError("Lorentzian part must be smaller than the total width")
    if lorentz_fwhm == 0:
        return float(total_fwhm)
    return brentq(lambda g: voigt_fwhm(lorentz_fwhm, g) - total_fwhm, 0.0, total_fwhm, xtol=1e-9 * total_fwhm)


@dataclass(frozen=True)
class VoigtLine:
    center: float
    lorentz_fwhm: float
    gauss_fwhm: float
    peak_od: float

    def __post_init__(self):
        _check_widths(self.lorentz_fwhm, self.gauss_fwhm)
        if self.peak_od < 0:
            raise ValueError("peak_od must be non-negative")

    def optical_depth(self, nu):
        return self.peak_od * _voigt_unit(np.asarray(nu, float) - self.center, self.lorentz_fwhm, self.gauss_fwhm)


@dataclass(frozen=True)
class ZeemanQuartet:
    """Direct + crossed Zeeman lines of a Kramers-doublet optical transition.

    Frequencies in Hz. ``od_direct`` and ``od_crossed`` are peak optical
    depths for a fully polarized ensemble.
    """

    B0: float = 0.105
    g_ground: float = 8.20
    g_excited: float = 8.13
    od_direct: float = 0.518
    od_crossed: float = 0.028
    temperature: float = 2.5
    lorentz_fwhm: float = 50e6
    gauss_fwhm: float = 727.985e6
    center_freq: float = float(wavelength_to_frequency(ZERO_FIELD_WAVELENGTH_NM))

    def __post_init__(self):
        _check_widths(self.lorentz_fwhm, self.gauss_fwhm)
        if self.B0 < 0:
            raise ValueError("B0 must be non-negative")
        if not (self.g_ground > 0 and self.g_excited > 0):
            raise ValueError("g-factors must be positive")
        if self.od_direct < 0 or self.od_crossed < 0:
            raise ValueError("optical depths must be non-negative")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")

    @property
    def splittings(self):
        """(nu_g, nu_e) Zeeman splittings in Hz."""
        return self.g_ground * mu_B * self.B0 / h, self.g_excited * mu_B * self.B0 / h

    @property
    def populations(self):
        nu_g, _ = self.splittings
        return thermal_populations(angular(nu_g), self.temperature)

    def lines(self):
        """The four lines as VoigtLine objects, positions relative to center_freq.

        Order: g- -> e-, g+ -> e+ (direct), g- -> e+, g+ -> e- (crossed);
        g- is the lower, more populated ground level.
        """
        nu_g, nu_e = self.splittings
        rho_gg, rho_ss = self.populations
        d, x = 0.5 * (nu_g - nu_e), 0.5 * (nu_g + nu_e)
        spec = [(+d, self.od_direct * rho_gg), (-d, self.od_direct * rho_ss),
                (+x, self.od_crossed * rho_gg), (-x, self.od_crossed * rho_ss)]
        return [VoigtLine(pos, self.lorentz_fwhm, self.gauss_fwhm, amp) for pos, amp in spec]

    @property
    def total_fwhm(self):
        return voigt_fwhm(self.lorentz_fwhm, self.gauss_fwhm)


@dataclass
class TransmissionSpectrum:
    detunings: np.ndarray
    transmission: np.ndarray

    def __post_init__(self):
        self.detunings = np.asarray(self.detunings, dtype=float)
        self.transmission = np.asarray(self.transmission, dtype=float)
        if self.detunings.shape != self.transmission.shape:
            raise ValueError("detunings and transmission must have equal lengths")


def _optical_depth(nu, model: ZeemanQuartet):
    return sum(line.optical_depth(nu) for line in model.lines())


def synthesize_transmission(model: ZeemanQuartet, detunings):
    """Beer-Lambert transmission exp(-sum of line optical depths)."""
    nu = np.asarray(detunings, dtype=float)
    return TransmissionSpectrum(nu, np.exp(-_optical_depth(nu, model)))


def detunings_from_wavelength(wavelength_nm, center_wavelength_nm=ZERO_FIELD_WAVELENGTH_NM):
    """Frequency detuning (Hz) of vacuum wavelengths from the line center."""
    return wavelength_to_frequency(wavelength_nm) - wavelength_to_frequency(center_wavelength_nm)


ABSORPTION_PARAMS = ("od_direct", "od_crossed", "lorentz_fwhm", "gauss_fwhm",
                     "g_ground", "g_excited", "center_shift", "temperature")


def default_absorption_bounds(guess):
    return {
        "od_direct": (0.0, max(3 * guess["od_direct"], 0.1)),
        "od_crossed": (0.0, max(3 * guess["od_crossed"], 0.1)),
        "lorentz_fwhm": (0.0, 3 * (guess["lorentz_fwhm"] + guess["gauss_fwhm"])),
        "gauss_fwhm": (0.0, 3 * (guess["lorentz_fwhm"] + guess["gauss_fwhm"])),
        "g_ground": (0.6 * guess["g_ground"], 1.4 * guess["g_ground"]),
        "g_excited": (0.6 * guess["g_excited"], 1.4 * guess["g_excited"]),
        "center_shift": (guess["center_shift"] - 2e9, guess["center_shift"] + 2e9),
        "temperature": (0.3, 50.0),
    }


def fit_absorption(data: TransmissionSpectrum, initial_guess: dict, B0: float, bounds: dict = None,
                   max_evals=40000, scan_points=81):
    """Least-squares fit of the quartet to a baseline-corrected transmission spectrum.

    ``initial_guess`` maps every name of ABSORPTION_PARAMS to a value;
    ``center_shift`` is the line-center offset (Hz) from the detuning
    origin of the data. The bias field is held fixed. Because the line
    positions depend only on g_ground +- g_excited, the sum and difference
    are scanned on a coarse grid before the simplex.

    Returns a FitResult whose ``info`` adds the total Voigt FWHM. Raises
    ConvergenceError on budget exhaustion.
    """
    nu = data.detunings
    T = data.transmission
    if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(T))):
        raise ValueError("transmission data must be finite")
    guess = {k: float(initial_guess[k]) for k in ABSORPTION_PARAMS}
    box = default_absorption_bounds(guess)
    if bounds:
        box.update({k: tuple(map(float, v)) for k, v in bounds.items()})
    names = ABSORPTION_PARAMS
    lower = np.array([box[k][0] for k in names])
    upper = np.array([box[k][1] for k in names])
    p0 = np.array([guess[k] for k in names])
    if np.any(p0 < lower) or np.any(p0 > upper):
        raise ValueError("initial guess lies outside the bounds")
    zeeman_per_g = mu_B * B0 / h

    def model_T(p):
        od_d, od_c, wl, wg, gg, ge, shift, temp = p
        if wl <= 0 and wg <= 0:
            return np.full_like(nu, np.nan)
        nu_g, nu_e = gg * zeeman_per_g, ge * zeeman_per_g
        rho_gg, rho_ss = thermal_populations(angular(nu_g), temp)
        d, x = 0.5 * (nu_g - nu_e), 0.5 * (nu_g + nu_e)
        y = nu - shift
        od = (od_d * (rho_gg * _voigt_unit(y - d, wl, wg) + rho_ss * _voigt_unit(y + d, wl, wg))
              + od_c * (rho_gg * _voigt_unit(y - x, wl, wg) + rho_ss * _voigt_unit(y + x, wl, wg)))
        return np.exp(-od)

    def residual(p):
        return model_T(p) - T

    ig, ie = names.index("g_ground"), names.index("g_excited")
    if scan_points:
        # crossed lines (sum) first, then direct lines (difference)
        for combo in (+1, -1):
            s0, d0 = p0[ig] + p0[ie], p0[ig] - p0[ie]
            span = 0.4 * (p0[ig] + p0[ie]) if combo > 0 else 0.4 * max(abs(d0), 0.05 * s0)
            best, best_pt = np.inf, (p0[ig], p0[ie])
            for v in np.linspace(-span, span, scan_points):
                s, dd = (s0 + v, d0) if combo > 0 else (s0, d0 + v)
                gg, ge = 0.5 * (s + dd), 0.5 * (s - dd)
                if not (lower[ig] <= gg <= upper[ig] and lower[ie] <= ge <= upper[ie]):
                    continue
                trial = p0.copy()
                trial[ig], trial[ie] = gg, ge
                r = residual(trial)
                cost = r @ r
                if cost < best:
                    best, best_pt = cost, (gg, ge)
            p0[ig], p0[ie] = best_pt

    res = minimize(FitProblem(residual, p0, lower, upper, max_evals=max_evals, names=names,
                              abs_tolerance=rounding_level(T.size)))
    fit = res.as_dict()
    res.info["total_fwhm"] = voigt_fwhm(fit["lorentz_fwhm"], fit["gauss_fwhm"])
    if not res.converged:
        raise ConvergenceError("absorption fit did not converge within the evaluation budget", res)
    return res


def quartet_from_fit(result, B0, reference_freq=None):
    """Build the ZeemanQuartet described by a fit result."""
    p = result.as_dict()
    ref = ZeemanQuartet().center_freq if reference_freq is None else reference_freq
    return ZeemanQuartet(B0=B0, g_ground=p["g_ground"], g_excited=p["g_excited"], od_direct=p["od_direct"],
                         od_crossed=p["od_crossed"], temperature=p["temperature"], lorentz_fwhm=p["lorentz_fwhm"],
                         gauss_fwhm=p["gauss_fwhm"], center_freq=ref + p["center_shift"])
