"""Model efficiency sweeps along the experimental scan axes."""

from dataclasses import dataclass

import numpy as np

from .core import angular, c, db_power, dbm_to_watt, wavelength_to_frequency
from .resonator import DriveConditions, rf_rabi_frequency
from .transduction import eta_eo, eta_q_from_eta_eo, model_rescale

AXES = ("spin_detuning", "cavity_detuning", "wavelength", "rf_power")
# spin/cavity detunings in Hz, wavelength in nm, rf_power in dBm at the cavity input
AXIS_UNITS = {"spin_detuning": "Hz", "cavity_detuning": "Hz", "wavelength": "nm", "rf_power": "dBm"}


@dataclass
class SweepSpec:
    axis: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; choose one of {', '.join(AXES)}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError("steps must be an integer >= 2")
        if self.start == self.stop:
            raise ValueError("start and stop must differ")
        self.steps = int(self.steps)

    @property
    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


def default_sweep(axis, config, steps=201):
    """Scan ranges a few linewidths wide around the operating point."""
    if axis == "spin_detuning":
        span = 5 * config["spins"]["gamma_hz"]
        return SweepSpec(axis, -span, span, steps)
    if axis == "cavity_detuning":
        span = 5 * config["cavity"]["kappa_t_hz"]
        return SweepSpec(axis, -span, span, steps)
    if axis == "wavelength":
        lam = config["lambda"]["optical_wavelength_nm"]
        dlam = 5 * config["lambda"]["Gamma_hz"] * lam ** 2 * 1e-9 / c
        return SweepSpec(axis, lam - dlam, lam + dlam, steps)
    if axis == "rf_power":
        return SweepSpec(axis, -10.0, 20.0, steps)
    raise ValueError(f"unknown sweep axis {axis!r}")


def photon_conversion_db(P_o, P_rf, omega_o, omega_rf):
    """eta_Q - eta_eo in dB for the given powers and carrier frequencies."""
    return db_power(eta_q_from_eta_eo(1.0, P_o, P_rf, omega_o, omega_rf))


def operating_point(config):
    """(LambdaParams, mu) at the configured drive, with the resonator Rabi frequency."""
    mu = rf_rabi_frequency(config.geometry(), config.drive(), config.cavity(),
                           config["resonator"]["include_position_factor"])
    return config.lambda_params(mu=mu), mu


def simulate_sweep(config, spec: SweepSpec):
    """Model efficiencies along one axis.

    Returns (axis_values, eta_eo_db, eta_q_db); the configured rescale is
    applied to both efficiencies. The photon-number conversion uses the
    configured optical and RF carrier frequencies throughout, so eta_Q
    tracks eta_eo at a constant offset except on the rf_power axis.
    """
    x = spec.values
    geom, cavity = config.geometry(), config.cavity()
    drive0 = config.drive()
    base, _ = operating_point(config)
    pos = config["resonator"]["include_position_factor"]
    P_o, omega_o = config.optical_power, config.omega_o
    eo = np.empty_like(x)
    prf = np.full_like(x, drive0.P_rf)
    for i, v in enumerate(x):
        if spec.axis == "spin_detuning":
            p = base.with_(delta=base.delta + angular(v))
        elif spec.axis == "cavity_detuning":
            # RF detuned from the cavity with the spins kept on the cavity line
            drive = DriveConditions(drive0.P_rf, cavity.omega_c + angular(v), drive0.g_x)
            p = base.with_(mu=rf_rabi_frequency(geom, drive, cavity, pos), delta=base.delta + angular(v))
        elif spec.axis == "wavelength":
            detuning = angular(wavelength_to_frequency(v)) - omega_o
            p = base.with_(Delta=base.Delta + detuning)
        else:
            prf[i] = dbm_to_watt(v)
            drive = DriveConditions(prf[i], drive0.omega_rf, drive0.g_x)
            p = base.with_(mu=rf_rabi_frequency(geom, drive, cavity, pos))
        eo[i] = model_rescale(eta_eo(p), config.rescale_db)
    eo_db = db_power(np.maximum(eo, 1e-300))
    q_db = eo_db + photon_conversion_db(P_o, prf, omega_o, drive0.omega_rf)
    return x, eo_db, q_db
