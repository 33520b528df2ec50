"""Experiment configuration: TOML sections with fitted-value defaults.

External units are ordinary frequencies in Hz, lengths in m, powers in W
and wavelengths in nm; the builders convert to the angular convention used
by the models.
"""

import copy
import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .absorption import ZeemanQuartet, ZERO_FIELD_WAVELENGTH_NM
from .calibration import PowerChain
from .cavity import CavityParams, SpinEnsembleParams
from .core import angular, thermal_population_imbalance, wavelength_to_frequency
from .resonator import DriveConditions, ResonatorGeometry, SampleSpec
from .transduction import LambdaParams

DEFAULTS = {
    "cavity": {"freq_hz": 12.29e9, "kappa_c_hz": 4.52e6, "kappa_t_hz": 8.57e6, "attenuation_db": -5.4},
    "spins": {"g_factor": 8.20, "gamma_hz": 219.14e6, "C_mu": 0.135},
    "absorption": {"B0_T": 0.105, "g_ground": 8.20, "g_excited": 8.13, "od_direct": 0.518, "od_crossed": 0.028,
                   "temperature_K": 2.5, "lorentz_fwhm_hz": 50e6, "gauss_fwhm_hz": 727.985e6,
                   "center_wavelength_nm": ZERO_FIELD_WAVELENGTH_NM},
    "resonator": {"a_m": 15e-3, "b_m": 10e-3, "d_m": 20e-3, "probe_x_m": 7.5e-3, "probe_z_m": 2e-3,
                  "include_position_factor": False},
    "drive": {"P_rf_W": 37e-3, "rf_freq_hz": 12.29e9, "g_x": 8.45},
    "power_chain": {"source_dbm": 18.4, "line_attenuation_db": -5.4, "input_split": 0.5},
    "sample": {"host_density_m3": 1.3e28, "doping": 50e-6, "isotope_fraction": 0.77,
               "crystal_volume_m3": 6e-8, "temperature_K": 2.5},
    "lambda": {"Delta_hz": 0.0, "delta_hz": 0.0, "Gamma_hz": 755e6, "Omega_hz": 0.0,
               "alpha_E_z": 0.518, "alpha_Omega_z": 0.028, "pop_imbalance": "thermal",
               "optical_power_W": 1.05e-3, "optical_wavelength_nm": 1532.727},
    "model": {"rescale_db": 0.0},
}

# values never fitted or printed, flagged in reports
ASSUMED_DEFAULTS = {("absorption", "g_excited"), ("absorption", "lorentz_fwhm_hz"), ("absorption", "gauss_fwhm_hz")}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


def _merge(base, updates, origin):
    for section, values in updates.items():
        if section not in base:
            raise ConfigError(f"{origin}: unknown section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(f"{origin}: [{section}] must be a table")
        for key, val in values.items():
            if key not in base[section]:
                raise ConfigError(f"{origin}: unknown field {section}.{key}")
            ref = DEFAULTS[section][key]
            if isinstance(ref, bool):
                if not isinstance(val, bool):
                    raise ConfigError(f"{origin}: {section}.{key} must be true or false")
            elif key == "pop_imbalance":
                if not (val == "thermal" or (isinstance(val, (int, float)) and not isinstance(val, bool))):
                    raise ConfigError(f"{origin}: {section}.{key} must be a number or \"thermal\"")
            elif isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ConfigError(f"{origin}: {section}.{key} must be a number, got {val!r}")
            base[section][key] = float(val) if isinstance(val, int) and not isinstance(val, bool) else val


def parse_override(text):
    """'section.key=value' -> {section: {key: value}}; the value is read as TOML."""
    if "=" not in text or "." not in text.split("=", 1)[0]:
        raise ConfigError(f"override {text!r} must look like section.key=value")
    path, raw = text.split("=", 1)
    section, key = path.strip().split(".", 1)
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return {section: {key.strip(): value}}


@dataclass
class ExperimentConfig:
    values: dict

    @classmethod
    def load(cls, path=None, overrides=(), rescale_db=None):
        values = copy.deepcopy(DEFAULTS)
        if path is not None:
            try:
                with open(path, "rb") as fh:
                    data = tomllib.load(fh)
            except OSError as exc:
                raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
            _merge(values, data, str(path))
        for text in overrides:
            _merge(values, parse_override(text), "--set")
        if rescale_db is not None:
            values["model"]["rescale_db"] = float(rescale_db)
        cfg = cls(values)
        cfg.validate()
        return cfg

    def __getitem__(self, section):
        return self.values[section]

    def validate(self):
        for name in ("cavity", "spins", "quartet", "geometry", "drive", "sample", "power_chain", "lambda_params"):
            try:
                getattr(self, name)()
            except ConfigError:
                raise
            except (ValueError, ArithmeticError) as exc:
                raise ConfigError(f"[{self._section_of(name)}] {exc}") from None
        self.optical_power

    @staticmethod
    def _section_of(builder):
        return {"quartet": "absorption", "geometry": "resonator", "lambda_params": "lambda"}.get(builder, builder)

    # builders

    def cavity(self):
        s = self["cavity"]
        return CavityParams(angular(s["freq_hz"]), angular(s["kappa_c_hz"]), angular(s["kappa_t_hz"]))

    def spins(self):
        s = self["spins"]
        return SpinEnsembleParams(s["g_factor"], angular(s["gamma_hz"]), s["C_mu"])

    def quartet(self):
        s = self["absorption"]
        return ZeemanQuartet(B0=s["B0_T"], g_ground=s["g_ground"], g_excited=s["g_excited"],
                             od_direct=s["od_direct"], od_crossed=s["od_crossed"], temperature=s["temperature_K"],
                             lorentz_fwhm=s["lorentz_fwhm_hz"], gauss_fwhm=s["gauss_fwhm_hz"],
                             center_freq=float(wavelength_to_frequency(s["center_wavelength_nm"])))

    def geometry(self):
        s = self["resonator"]
        return ResonatorGeometry(s["a_m"], s["b_m"], s["d_m"], s["probe_x_m"], s["probe_z_m"])

    def drive(self):
        s = self["drive"]
        return DriveConditions(P_rf=s["P_rf_W"], omega_rf=angular(s["rf_freq_hz"]), g_x=s["g_x"])

    def sample(self):
        s = self["sample"]
        return SampleSpec(s["host_density_m3"], s["doping"], s["isotope_fraction"],
                          s["crystal_volume_m3"], s["temperature_K"])

    def power_chain(self):
        s = self["power_chain"]
        return PowerChain(s["source_dbm"], s["line_attenuation_db"], s["input_split"])

    @property
    def omega_o(self):
        return angular(wavelength_to_frequency(self["lambda"]["optical_wavelength_nm"]))

    @property
    def optical_power(self):
        p = self["lambda"]["optical_power_W"]
        if not p > 0:
            raise ConfigError("lambda.optical_power_W must be positive")
        return p

    @property
    def rescale_db(self):
        return self["model"]["rescale_db"]

    def pop_imbalance(self):
        val = self["lambda"]["pop_imbalance"]
        if val == "thermal":
            return float(thermal_population_imbalance(angular(self["drive"]["rf_freq_hz"]),
                                                      self["sample"]["temperature_K"]))
        return float(val)

    def lambda_params(self, mu=0.0):
        s = self["lambda"]
        return LambdaParams(Delta=angular(s["Delta_hz"]), delta=angular(s["delta_hz"]), Gamma=angular(s["Gamma_hz"]),
                            gamma=angular(self["spins"]["gamma_hz"]), Omega=angular(s["Omega_hz"]), mu=mu,
                            alpha_E_z=s["alpha_E_z"], alpha_Omega_z=s["alpha_Omega_z"],
                            pop_imbalance=self.pop_imbalance())

    def to_toml(self):
        """Serialize the full configuration (defaults included) as TOML text."""
        out = []
        for section, vals in self.values.items():
            out.append(f"[{section}]")
            for key, val in vals.items():
                if isinstance(val, bool):
                    text = "true" if val else "false"
                elif isinstance(val, str):
                    text = f'"{val}"'
                else:
                    text = repr(float(val))
                out.append(f"{key} = {text}")
            out.append("")
        return "\n".join(out)


def is_assumed(section, key):
    return (section, key) in ASSUMED_DEFAULTS
