"""Forward models and fits for resonant opto-RF transduction in a three-level spin ensemble."""

from .core import (ConvergenceError, DomainError, SingularityError, angular, db_power, from_db,
                   larmor_frequency, ordinary, thermal_population_imbalance, wavelength_to_frequency)
from .cavity import CavityParams, S11Map, SpinEnsembleParams, fit_s11_map, s11, spin_term, synthesize_s11_map
from .absorption import (TransmissionSpectrum, VoigtLine, ZeemanQuartet, fit_absorption, synthesize_transmission,
                         voigt_fwhm, voigt_peak_normalized)
from .transduction import (LambdaParams, QuantizedCouplings, eta_eo, eta_q_cooperativity_form, eta_q_from_eta_eo,
                           model_rescale, steady_state_coherences, transduction_field_full,
                           transduction_field_low_od)
from .resonator import (DriveConditions, ResonatorGeometry, SampleSpec, cooperativity_estimate,
                        intracavity_b_amplitude, mode_fields, mode_frequency, rf_rabi_frequency, vacuum_coupling)
from .fitting import FitProblem, FitResult, LorentzianFloorModel, fit_sweep, lorentzian_floor, minimize
from .calibration import (HeterodyneCalibration, PowerChain, cavity_input_power, eta_eo_from_measurement,
                          mz_filter_minima)
from .config import ConfigError, ExperimentConfig
from .sweeps import SweepSpec, simulate_sweep

__version__ = "0.1.0"
