"""Physical constants, frequency/dB conversions and error types.

Internally every rate and frequency is angular (rad/s). Helpers here are
the only place where the factor 2*pi enters.
"""

import numpy as np
from scipy import constants as _sc

hbar = _sc.hbar
h = _sc.h
mu_B = _sc.physical_constants["Bohr magneton"][0]
mu_0 = _sc.mu_0
epsilon_0 = _sc.epsilon_0
c = _sc.c
k_B = _sc.k

TWO_PI = 2.0 * np.pi


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularityError(ArithmeticError):
    """A model denominator vanished."""


class ConvergenceError(RuntimeError):
    """A fit exhausted its budget; ``result`` holds the best point found."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def angular(f_hz):
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return _scalar_or_array(TWO_PI * np.asarray(f_hz, dtype=float))


def ordinary(omega):
    """Angular frequency (rad/s) to ordinary frequency (Hz)."""
    return _scalar_or_array(np.asarray(omega, dtype=float) / TWO_PI)


def wavelength_to_frequency(wavelength_nm):
    """Vacuum wavelength in nm to frequency in Hz."""
    return _scalar_or_array(c / (np.asarray(wavelength_nm, dtype=float) * 1e-9))


def frequency_to_wavelength(f_hz):
    return _scalar_or_array(c / np.asarray(f_hz, dtype=float) * 1e9)


def db_power(ratio):
    """10*log10 of a power-like ratio.

    Amplitude ratios must be squared by the caller.
    """
    r = np.asarray(ratio, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError(f"db_power needs a positive ratio, got {ratio!r}")
    return _scalar_or_array(10.0 * np.log10(r))


def from_db(db):
    """Inverse of :func:`db_power`."""
    return _scalar_or_array(10.0 ** (np.asarray(db, dtype=float) / 10.0))


def dbm_to_watt(dbm):
    return 1e-3 * from_db(dbm)


def watt_to_dbm(p_w):
    return db_power(np.asarray(p_w, dtype=float) / 1e-3)


def larmor_frequency(g, B0):
    """Spin transition angular frequency g*mu_B*B0/hbar (rad/s)."""
    if np.any(np.asarray(g) <= 0):
        raise DomainError("g-factor must be positive")
    if np.any(np.asarray(B0) < 0):
        raise DomainError("bias field must be non-negative")
    return g * mu_B * B0 / hbar


def thermal_population_imbalance(omega_s, T):
    """Boltzmann population difference rho_gg - rho_ss of a two-level spin.

    Equal to tanh(hbar*omega_s / 2kT). Evaluated as tanh to stay accurate
    both near degeneracy and in the fully polarized limit.
    """
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise DomainError(f"temperature must be positive, got {T!r}")
    return _scalar_or_array(np.tanh(hbar * np.asarray(omega_s, dtype=float) / (2.0 * k_B * T)))


def thermal_populations(omega_s, T):
    """Return (rho_gg, rho_ss) for the lower and upper spin level."""
    p = thermal_population_imbalance(omega_s, T)
    return 0.5 * (1.0 + p), 0.5 * (1.0 - p)
