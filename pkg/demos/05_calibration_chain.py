"""Heterodyne calibration: from spectrum-analyzer voltages to efficiencies.

The transduced sideband beats with the optical local oscillator; its
amplitude V_sa is referenced to the fringe amplitude V_fringes of the
carrier beating with the LO's own sideband of efficiency eta_lo.
"""

import numpy as np

from optorf import HeterodyneCalibration, eta_eo_from_measurement, eta_q_from_eta_eo, mz_filter_minima
from optorf.calibration import cavity_input_power, path_difference_for_minimum, voltage_ratio_for_efficiency
from optorf.config import ExperimentConfig
from optorf.core import db_power

cfg = ExperimentConfig.load()
eta_lo = 0.068

# voltage ratio that a -84 dB conversion produces, and back
ratio = voltage_ratio_for_efficiency(10 ** -8.4, eta_lo)
cal = HeterodyneCalibration(eta_lo=eta_lo, v_sa=ratio * 0.35, v_fringes=0.35)
eo = eta_eo_from_measurement(cal)
print(f"V_sa/V_fringes = {ratio:.4g} -> eta_eo = {db_power(eo):.2f} dB")

P_rf = cavity_input_power(cfg.power_chain())
q = eta_q_from_eta_eo(eo, cfg.optical_power, P_rf, cfg.omega_o, cfg.drive().omega_rf)
print(f"with {cfg.optical_power * 1e3:.2f} mW optical and {P_rf * 1e3:.1f} mW RF: eta_Q = {db_power(q):.1f} dB")

# laser phase noise is suppressed by an unbalanced interferometer whose minima sit at odd multiples of c/2L
L = path_difference_for_minimum(44e6)
print(f"arm difference for a 44 MHz first minimum: {L:.3f} m")
print("minima up to 300 MHz [MHz]:", np.round(mz_filter_minima(L, 300e6) / 1e6, 1))
