"""Reflection of a spin-loaded RF cavity and fits of |S11|(frequency, field) maps."""

from dataclasses import dataclass

import numpy as np

from .core import ConvergenceError, SingularityError, angular, larmor_frequency, mu_B, hbar
from .fitting import FitProblem, estimate_uncertainties, minimize, rounding_level


@dataclass(frozen=True)
class CavityParams:
    """RF resonator. All rates are angular (rad/s)."""

    omega_c: float
    kappa_c: float
    kappa_t: float

    def __post_init__(self):
        if not 0 < self.kappa_c <= self.kappa_t:
            raise ValueError(f"need 0 < kappa_c <= kappa_t, got kappa_c={self.kappa_c}, kappa_t={self.kappa_t}")
        if not self.omega_c / self.kappa_t > 1:
            raise ValueError("quality factor omega_c/kappa_t must exceed 1")

    @property
    def quality_factor(self):
        return self.omega_c / self.kappa_t


@dataclass(frozen=True)
class SpinEnsembleParams:
    g_factor: float
    gamma: float
    C_mu: float

    def __post_init__(self):
        if not self.g_factor > 0:
            raise ValueError("g_factor must be positive")
        if not self.gamma > 0:
            raise ValueError("spin linewidth gamma must be positive")
        if not self.C_mu >= 0:
            raise ValueError("cooperativity C_mu must be non-negative")


@dataclass
class S11Map:
    """Reflection grid, rows = frequencies, columns = fields.

    ``values`` already include the line attenuation. Magnitude-only data
    are stored as real values.
    """

    frequencies: np.ndarray
    fields: np.ndarray
    values: np.ndarray
    attenuation_db: float = 0.0

    def __post_init__(self):
        self.frequencies = np.asarray(self.frequencies, dtype=float)
        self.fields = np.asarray(self.fields, dtype=float)
        self.values = np.asarray(self.values)
        if self.values.shape != (self.frequencies.size, self.fields.size):
            raise ValueError(f"grid shape {self.values.shape} does not match axes "
                             f"({self.frequencies.size}, {self.fields.size})")

    @property
    def magnitude(self):
        return np.abs(self.values)


def _spin_term(omega_rf, omega_s, kappa_t, gamma, C_mu):
    return C_mu * (0.5j * kappa_t) / (2j * (omega_rf - omega_s) / gamma - 1.0)


def _s11(omega_rf, omega_s, omega_c, kappa_c, kappa_t, gamma, C_mu):
    W = _spin_term(omega_rf, omega_s, kappa_t, gamma, C_mu)
    return 1.0 - 1j * kappa_c / (omega_rf - omega_c + 0.5j * kappa_t - W)


def spin_term(omega_rf, omega_s, cavity: CavityParams, spins: SpinEnsembleParams):
    """Complex spin susceptibility W entering the cavity denominator."""
    return _spin_term(np.asarray(omega_rf, float), omega_s, cavity.kappa_t, spins.gamma, spins.C_mu)


def s11(omega_rf, omega_s, cavity: CavityParams, spins: SpinEnsembleParams):
    """Complex reflection coefficient 1 - i kappa_c / (w - w_c + i kappa_t/2 - W)."""
    omega_rf = np.asarray(omega_rf, dtype=float)
    W = _spin_term(omega_rf, omega_s, cavity.kappa_t, spins.gamma, spins.C_mu)
    den = omega_rf - cavity.omega_c + 0.5j * cavity.kappa_t - W
    if np.any(den == 0):
        raise SingularityError("S11 denominator vanished (zero total damping)")
    out = 1.0 - 1j * cavity.kappa_c / den
    return complex(out) if out.ndim == 0 else out


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size == 0:
        raise ValueError(f"{name} axis must be a nonempty 1-D sequence")
    d = np.diff(axis)
    if axis.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError(f"{name} axis must be strictly monotonic")
    return axis


def _synth_grid(freqs_hz, fields_t, omega_c, kappa_c, kappa_t, gamma, C_mu, g, attenuation_db):
    w = angular(freqs_hz)[:, None]
    ws = (g * mu_B / hbar) * np.asarray(fields_t)[None, :]
    return 10.0 ** (attenuation_db / 20.0) * _s11(w, ws, omega_c, kappa_c, kappa_t, gamma, C_mu)


def synthesize_s11_map(cavity: CavityParams, spins: SpinEnsembleParams, freq_axis, field_axis,
                       attenuation_db=0.0):
    """Complex S11 on a (frequency [Hz], field [T]) grid.

    The spin frequency of each column follows the Larmor relation for the
    ensemble g-factor; every value is scaled by the round-trip amplitude
    factor 10**(attenuation_db/20).
    """
    f = _check_axis(freq_axis, "frequency")
    B = _check_axis(field_axis, "field")
    larmor_frequency(spins.g_factor, B)  # validates the field axis
    vals = _synth_grid(f, B, cavity.omega_c, cavity.kappa_c, cavity.kappa_t,
                       spins.gamma, spins.C_mu, spins.g_factor, attenuation_db)
    return S11Map(f, B, vals, attenuation_db)


S11_PARAMS = ("kappa_c", "kappa_t", "gamma", "C_mu", "g_factor", "omega_c", "attenuation_db")


def default_s11_bounds(guess):
    """Generous box around a guess (rates within a factor 3, omega_c within 3 kappa_t)."""
    kt = guess["kappa_t"]
    return {
        "kappa_c": (guess["kappa_c"] / 3, guess["kappa_c"] * 3),
        "kappa_t": (kt / 3, kt * 3),
        "gamma": (guess["gamma"] / 3, guess["gamma"] * 3),
        "C_mu": (0.0, max(3 * guess["C_mu"], 1.0)),
        "g_factor": (guess["g_factor"] * 0.7, guess["g_factor"] * 1.3),
        "omega_c": (guess["omega_c"] - 3 * kt, guess["omega_c"] + 3 * kt),
        "attenuation_db": (guess["attenuation_db"] - 10.0, min(guess["attenuation_db"] + 10.0, 0.0)),
    }


def fit_s11_map(data: S11Map, initial_guess: dict, bounds: dict = None, max_evals=40000,
                g_scan_points=121, with_uncertainties=False):
    """Global least-squares fit of the cavity-spin model to a measured |S11| map.

    Residuals are linear |S11| differences, uniformly weighted over the
    grid. Before the simplex, the g-factor is scanned over its bounds with
    the other parameters held at the guess, because the spin feature only
    constrains g once it falls inside the field window.

    Raises ConvergenceError (carrying the best point) when the budget runs
    out.
    """
    mag = data.magnitude
    if not np.all(np.isfinite(mag)):
        raise ValueError("S11 map contains non-finite values")
    guess = {k: float(initial_guess[k]) for k in S11_PARAMS}
    box = default_s11_bounds(guess)
    if bounds:
        box.update({k: tuple(map(float, v)) for k, v in bounds.items()})
    lower = np.array([box[k][0] for k in S11_PARAMS])
    upper = np.array([box[k][1] for k in S11_PARAMS])
    p0 = np.array([guess[k] for k in S11_PARAMS])
    if np.any(p0 < lower) or np.any(p0 > upper):
        raise ValueError("initial guess lies outside the bounds")

    w = angular(data.frequencies)[:, None]
    B = data.fields[None, :]

    def residual(p):
        kc, kt, gam, C, g, wc, att = p
        model = 10.0 ** (att / 20.0) * np.abs(_s11(w, (g * mu_B / hbar) * B, wc, kc, kt, gam, C))
        return (model - mag).ravel()

    ig = S11_PARAMS.index("g_factor")
    if g_scan_points and upper[ig] > lower[ig]:
        trial = p0.copy()
        costs = []
        scan = np.linspace(lower[ig], upper[ig], g_scan_points)
        for g in scan:
            trial[ig] = g
            r = residual(trial)
            costs.append(r @ r)
        p0[ig] = scan[int(np.argmin(costs))]

    res = minimize(FitProblem(residual, p0, lower, upper, max_evals=max_evals, names=S11_PARAMS,
                              abs_tolerance=rounding_level(mag.size, float(np.max(mag)))))
    res.info["n_points"] = mag.size
    if with_uncertainties:
        res.uncertainties = estimate_uncertainties(residual, res.params, lower, upper)
    if not res.converged:
        raise ConvergenceError("S11 map fit did not converge within the evaluation budget", res)
    return res
