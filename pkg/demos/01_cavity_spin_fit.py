"""Fit the cavity-spin reflection model to a noisy synthetic |S11| map.

The map covers 50 MHz around the cavity line and 40 mT around the field
where the spin Larmor frequency crosses it. The fit starts 20% away from
the generating values.
"""

import numpy as np

from optorf import CavityParams, SpinEnsembleParams, fit_s11_map, synthesize_s11_map
from optorf.core import angular, h, mu_B, ordinary

cavity = CavityParams(omega_c=angular(12.29e9), kappa_c=angular(4.52e6), kappa_t=angular(8.57e6))
spins = SpinEnsembleParams(g_factor=8.20, gamma=angular(219.14e6), C_mu=0.135)

b_res = h * 12.29e9 / (spins.g_factor * mu_B)
freqs = np.linspace(12.29e9 - 25e6, 12.29e9 + 25e6, 50)
fields = np.linspace(b_res - 20e-3, b_res + 20e-3, 50)
data = synthesize_s11_map(cavity, spins, freqs, fields, attenuation_db=-5.4)

rng = np.random.default_rng(1)
data.values = np.abs(data.values) + 0.01 * rng.standard_normal(data.values.shape)
print(f"spin resonance at {b_res * 1e3:.2f} mT, map {freqs.size} x {fields.size}, 1% noise on |S11|")

guess = dict(kappa_c=1.2 * cavity.kappa_c, kappa_t=0.8 * cavity.kappa_t, gamma=1.2 * spins.gamma,
             C_mu=0.8 * spins.C_mu, g_factor=0.8 * spins.g_factor, omega_c=cavity.omega_c + angular(1e6),
             attenuation_db=-6.5)
res = fit_s11_map(data, guess, with_uncertainties=True)

truth = dict(kappa_c=cavity.kappa_c, kappa_t=cavity.kappa_t, gamma=spins.gamma, C_mu=spins.C_mu,
             g_factor=spins.g_factor)
sigmas = dict(zip(res.names, res.uncertainties))
print(f"{'parameter':<14} {'true':>10} {'fitted':>10} {'sigma':>8}")
for name, true in truth.items():
    fitted, sigma = res[name], sigmas[name]
    if name in ("kappa_c", "kappa_t", "gamma"):
        true, fitted, sigma = ordinary(true) / 1e6, ordinary(fitted) / 1e6, ordinary(sigma) / 1e6
        name += " [MHz]"
    print(f"{name:<14} {true:>10.5g} {fitted:>10.5g} {sigma:>8.2g}")
print(f"converged: {res.converged} ({res.message}, {res.n_evals} evaluations)")

# spin linewidth and cooperativity trade off against each other in the
# avoided crossing, so their scatter at this noise level is several percent
