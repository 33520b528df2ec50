"""Heterodyne efficiency calibration, RF power bookkeeping and the interferometer noise filter."""

from dataclasses import dataclass

import numpy as np

from .core import DomainError, c, dbm_to_watt


@dataclass(frozen=True)
class HeterodyneCalibration:
    eta_lo: float
    v_sa: float
    v_fringes: float
    contrast: float = 0.8  # informational; already folded into v_fringes

    def __post_init__(self):
        if not 0 < self.eta_lo <= 1:
            raise ValueError("eta_lo must lie in (0, 1]")
        if self.v_sa < 0 or self.v_fringes < 0:
            raise ValueError("voltages must be non-negative")


@dataclass(frozen=True)
class PowerChain:
    source_power_dbm: float = 18.4
    line_attenuation_db: float = -5.4
    input_split: float = 0.5

    def __post_init__(self):
        if not 0 <= self.input_split <= 1:
            raise ValueError("input_split must lie in [0, 1]")


def eta_eo_from_measurement(cal: HeterodyneCalibration):
    """Electro-optics efficiency (V_sa / V_fringes)^2 / eta_lo.

    V_sa is the beatnote amplitude with the transduced sideband, V_fringes
    the fringe amplitude of the carrier beating with the LO sideband.
    """
    if cal.v_fringes == 0:
        raise DomainError("fringe amplitude is zero")
    return (cal.v_sa / cal.v_fringes) ** 2 / cal.eta_lo


def voltage_ratio_for_efficiency(eta_eo, eta_lo):
    """V_sa / V_fringes that a given electro-optics efficiency produces."""
    if eta_eo < 0:
        raise DomainError("efficiency must be non-negative")
    if not 0 < eta_lo <= 1:
        raise ValueError("eta_lo must lie in (0, 1]")
    return np.sqrt(eta_eo * eta_lo)


def cavity_input_dbm(chain: PowerChain):
    return chain.source_power_dbm + chain.input_split * chain.line_attenuation_db


def cavity_input_power(chain: PowerChain):
    """RF power (W) reaching the cavity after the input share of the line loss."""
    return dbm_to_watt(cavity_input_dbm(chain))


def mz_filter_minima(path_difference, band_max):
    """Noise-free frequencies c/2L, 3c/2L, ... (Hz) of an unbalanced interferometer up to band_max."""
    if not path_difference > 0:
        raise ValueError("path_difference must be positive")
    first = c / (2.0 * path_difference)
    if band_max < first:
        return np.empty(0)
    n = int(np.floor((band_max / first - 1.0) / 2.0)) + 1
    return first * (2 * np.arange(n) + 1)


def path_difference_for_minimum(f_min):
    """Arm length difference L (m) whose first minimum sits at f_min."""
    if not f_min > 0:
        raise ValueError("frequency must be positive")
    return c / (2.0 * f_min)
