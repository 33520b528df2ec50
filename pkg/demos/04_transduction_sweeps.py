"""Model efficiency along the four scan axes, and a Lorentzian fit to a noisy spin scan.

Writes one CSV per axis into ./sweeps_out (plot-ready, same schema the
``optorf fit sweep`` command reads).
"""

from pathlib import Path

import numpy as np

from optorf import ExperimentConfig, fit_sweep
from optorf.io import write_sweep_csv
from optorf.sweeps import AXES, AXIS_UNITS, default_sweep, simulate_sweep

cfg = ExperimentConfig.load(rescale_db=-14.0)
out = Path("sweeps_out")
out.mkdir(exist_ok=True)

for axis in AXES:
    spec = default_sweep(axis, cfg, 201)
    x, eo, q = simulate_sweep(cfg, spec)
    write_sweep_csv(out / f"{axis}.csv", x, eo, q, [f"axis: {axis} [{AXIS_UNITS[axis]}]"])
    print(f"{axis:<16} {spec.start:>12.6g} .. {spec.stop:<12.6g} {AXIS_UNITS[axis]:<4} "
          f"peak eta_eo {eo.max():7.2f} dB, eta_Q {q.max():7.2f} dB")

# spin scan as a spectrum analyzer would see it: model plus a -103.5 dB floor and 1 dB noise
x, eo, _ = simulate_sweep(cfg, default_sweep("spin_detuning", cfg, 201))
floor = 10 ** (-103.5 / 10)
rng = np.random.default_rng(0)
measured = 10 * np.log10(10 ** (eo / 10) + floor) + rng.standard_normal(x.size)
res = fit_sweep(x, measured)
print(f"spin scan fit: FWHM {res['fwhm'] / 1e6:.1f} MHz (model linewidth "
      f"{cfg['spins']['gamma_hz'] / 1e6:.1f} MHz), peak {res.info['peak_db']:.1f} dB, "
      f"floor {res.info['floor_db']:.1f} dB, detection {res.info['detection']:.0f} sigma")
