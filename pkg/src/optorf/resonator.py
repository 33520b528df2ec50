"""Rectangular TE101 resonator: mode fields, intracavity RF field and spin coupling.

The box spans a x b x d along x, y, z. The electric field points along y
(the short side b); the magnetic field circulates in the x-z plane.
"""

from dataclasses import dataclass

import numpy as np

from .core import (DomainError, c, epsilon_0, hbar, mu_0, mu_B,
                   thermal_population_imbalance)
from .cavity import CavityParams, SpinEnsembleParams


@dataclass(frozen=True)
class ResonatorGeometry:
    a: float = 15e-3
    b: float = 10e-3
    d: float = 20e-3
    probe_x: float = 7.5e-3
    probe_z: float = 2e-3

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.d > 0):
            raise ValueError("box dimensions must be positive")
        if not 0 < self.probe_x < self.a:
            raise ValueError("probe_x must lie strictly inside (0, a)")
        if not 0 < self.probe_z < self.d:
            raise ValueError("probe_z must lie strictly inside (0, d)")

    @property
    def volume(self):
        return self.a * self.b * self.d

    @property
    def bx_projection(self):
        """a / sqrt(a^2 + d^2), the share of the mode's B along x."""
        return self.a / np.hypot(self.a, self.d)


@dataclass(frozen=True)
class DriveConditions:
    P_rf: float = 37e-3
    omega_rf: float = 2 * np.pi * 12.29e9
    g_x: float = 8.45

    def __post_init__(self):
        if self.P_rf < 0:
            raise ValueError("P_rf must be non-negative")
        if not self.g_x > 0:
            raise ValueError("g_x must be positive")


@dataclass(frozen=True)
class SampleSpec:
    host_density: float = 1.3e28  # Ca sites per m^3
    doping: float = 50e-6
    isotope_fraction: float = 0.77
    crystal_volume: float = 5e-3 * 4e-3 * 3e-3
    temperature: float = 2.5

    def __post_init__(self):
        if not (self.host_density > 0 and self.crystal_volume > 0 and self.temperature > 0):
            raise ValueError("density, crystal volume and temperature must be positive")
        if not 0 <= self.doping < 1e-2:
            raise ValueError("doping must be a small non-negative fraction")
        if not 0 < self.isotope_fraction <= 1:
            raise ValueError("isotope_fraction must lie in (0, 1]")


def mode_frequency(geom: ResonatorGeometry):
    """TE101 resonance (Hz) of the empty box."""
    return 0.5 * c * np.sqrt(1.0 / geom.a ** 2 + 1.0 / geom.d ** 2)


def position_factor(geom: ResonatorGeometry):
    """cos(pi z0/d): relative B_x at the probe height, 1 at the bottom wall."""
    return float(np.cos(np.pi * geom.probe_z / geom.d))


def intracavity_b_amplitude(geom: ResonatorGeometry, drive: DriveConditions, cavity: CavityParams,
                            include_position_factor=False):
    """|B_x| (T) at the laser spot for an empty cavity driven with P_rf.

    The cos(pi z0/d) factor (about 0.95 at the default probe height) is
    left out unless ``include_position_factor`` is set.
    """
    lorentz = 2.0 * cavity.kappa_c / (4.0 * (drive.omega_rf - cavity.omega_c) ** 2 + cavity.kappa_t ** 2)
    B = 4.0 * np.sqrt(mu_0) * geom.bx_projection * np.sqrt(drive.P_rf / geom.volume) * np.sqrt(lorentz)
    if include_position_factor:
        B *= position_factor(geom)
    return float(B)


def rf_rabi_frequency(geom: ResonatorGeometry, drive: DriveConditions, cavity: CavityParams,
                      include_position_factor=False):
    """RF Rabi frequency mu = g_x mu_B |B| / hbar (rad/s)."""
    B = intracavity_b_amplitude(geom, drive, cavity, include_position_factor)
    return drive.g_x * mu_B * B / hbar


def vacuum_coupling(geom: ResonatorGeometry, omega, g_x):
    """Single-photon spin coupling g_x mu_B (a/sqrt(a^2+d^2)) sqrt(2 omega mu0 / (hbar V)).

    Implemented as commonly written for this box. It is half of
    g_x mu_B B_vac / hbar with B_vac = 2 (a/sqrt(a^2+d^2)) sqrt(2 hbar omega mu0 / V);
    see ``vacuum_field``.
    """
    if not (omega > 0 and g_x > 0):
        raise ValueError("omega and g_x must be positive")
    return g_x * mu_B * geom.bx_projection * np.sqrt(2.0 * omega * mu_0 / (hbar * geom.volume))


def vacuum_field(geom: ResonatorGeometry, omega):
    """Zero-point B amplitude (T) when the stored energy equals hbar*omega."""
    return 2.0 * geom.bx_projection * np.sqrt(2.0 * hbar * omega * mu_0 / geom.volume)


def effective_spin_number(sample: SampleSpec, omega_s):
    """Polarization-weighted number of probed spins in the crystal."""
    n = sample.host_density * sample.doping * sample.isotope_fraction * sample.crystal_volume
    return n * thermal_population_imbalance(omega_s, sample.temperature)


def cooperativity_estimate(geom: ResonatorGeometry, sample: SampleSpec, cavity: CavityParams,
                           spins: SpinEnsembleParams, omega, g_x=8.45):
    """A-priori spin cooperativity g_mu^2 N_eff / (gamma kappa_c).

    ``omega`` sets both the vacuum coupling and the thermal polarization.
    Using g_x mu_B B_vac / hbar for the coupling instead would give four
    times this value; the printed coupling formula is used as is.
    """
    g_mu = vacuum_coupling(geom, omega, g_x)
    return g_mu ** 2 * effective_spin_number(sample, omega) / (spins.gamma * cavity.kappa_c)


def mode_fields(geom: ResonatorGeometry, E0, x, z):
    """(E_y, B_x, B_z) complex amplitudes of the TE101 mode at (x, z).

    B components carry the -j / +j quadrature relative to E_y.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any((x < 0) | (x > geom.a) | (z < 0) | (z > geom.d)):
        raise DomainError("position lies outside the resonator")
    sx, cx = np.sin(np.pi * x / geom.a), np.cos(np.pi * x / geom.a)
    sz, cz = np.sin(np.pi * z / geom.d), np.cos(np.pi * z / geom.d)
    hyp = np.hypot(geom.a, geom.d)
    Ey = E0 * sx * sz
    Bx = -1j * (E0 / c) * (geom.a / hyp) * sx * cz
    Bz = 1j * (E0 / c) * (geom.d / hyp) * cx * sz
    return Ey, Bx, Bz


def stored_energy(geom: ResonatorGeometry, E0):
    """Total time-averaged energy eps0 V E0^2 / 8 (J)."""
    return epsilon_0 * geom.volume * E0 ** 2 / 8.0


def field_for_energy(geom: ResonatorGeometry, energy):
    """E0 (V/m) that stores ``energy`` joules."""
    return np.sqrt(8.0 * energy / (epsilon_0 * geom.volume))


def stored_energy_driven(geom: ResonatorGeometry, drive: DriveConditions, cavity: CavityParams):
    """Steady-state stored energy 4 kappa_c P_rf / (4 (w - w_c)^2 + kappa_t^2) of the empty cavity."""
    return 4.0 * cavity.kappa_c * drive.P_rf / (4.0 * (drive.omega_rf - cavity.omega_c) ** 2 + cavity.kappa_t ** 2)


def magnetic_energy(geom: ResonatorGeometry, E0, order=64):
    """Time-averaged magnetic energy (1/4 mu0) * integral |B|^2 dV by Gauss-Legendre quadrature.

    Equals half the stored energy for the ideal mode.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    x = 0.5 * geom.a * (nodes + 1.0)
    z = 0.5 * geom.d * (nodes + 1.0)
    wx = 0.5 * geom.a * weights
    wz = 0.5 * geom.d * weights
    X, Z = np.meshgrid(x, z, indexing="ij")
    _, Bx, Bz = mode_fields(geom, E0, X, Z)
    integrand = np.abs(Bx) ** 2 + np.abs(Bz) ** 2
    return float(wx @ integrand @ wz) * geom.b / (4.0 * mu_0)
