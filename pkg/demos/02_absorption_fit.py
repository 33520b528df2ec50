"""Fit the four-line Zeeman absorption model to a noisy transmission spectrum.

The spectrum is sampled densely around the direct pair near zero detuning
and around the two crossed lines near +-12 GHz. The ground g-factor and
the temperature are held fixed (they come from the S11 fit and the
cryostat), which leaves the depths, widths and the excited g-factor free.
"""

import numpy as np

from optorf import ZeemanQuartet, fit_absorption, synthesize_transmission
from optorf.absorption import TransmissionSpectrum

truth = ZeemanQuartet()
nu_g, nu_e = truth.splittings
print(f"ground splitting {nu_g / 1e9:.3f} GHz, excited {nu_e / 1e9:.3f} GHz at {truth.B0 * 1e3:.0f} mT")
print("line centers [GHz]: " + ", ".join(f"{ln.center / 1e9:+.3f}" for ln in truth.lines()))

nu = np.concatenate([np.linspace(c - 2.5e9, c + 2.5e9, 2001) for c in (-12e9, 0.0, 12e9)])
clean = synthesize_transmission(truth, nu)
rng = np.random.default_rng(3)
data = TransmissionSpectrum(nu, clean.transmission + 0.002 * rng.standard_normal(nu.size))

guess = dict(od_direct=0.6, od_crossed=0.02, lorentz_fwhm=60e6, gauss_fwhm=600e6, g_ground=truth.g_ground,
             g_excited=7.8, center_shift=50e6, temperature=truth.temperature)
pinned = {"g_ground": (truth.g_ground,) * 2, "temperature": (truth.temperature,) * 2}
res = fit_absorption(data, guess, truth.B0, bounds=pinned)

print(f"{'parameter':<16} {'true':>12} {'fitted':>12}")
rows = [("od_direct", truth.od_direct, res["od_direct"]), ("od_crossed", truth.od_crossed, res["od_crossed"]),
        ("g_excited", truth.g_excited, res["g_excited"]),
        ("total FWHM [MHz]", truth.total_fwhm / 1e6, res.info["total_fwhm"] / 1e6)]
for name, t, f in rows:
    print(f"{name:<16} {t:>12.5g} {f:>12.5g}")
print(f"converged: {res.converged} ({res.message})")

# the Lorentzian/Gaussian split of the 755 MHz width is poorly constrained;
# only the combined width is a robust fit output
print(f"Lorentz {res['lorentz_fwhm'] / 1e6:.1f} MHz, Gauss {res['gauss_fwhm'] / 1e6:.1f} MHz")
