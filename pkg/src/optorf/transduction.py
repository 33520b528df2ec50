"""Steady-state Lambda-system transduction and efficiency formulas.

Three levels |g>, |s>, |e>: the RF field (Rabi frequency mu) drives g-s,
the optical pump (Omega) drives s-e, and the signal E is emitted on g-e.
Decay enters only through the complex detunings

    Delta_c = Delta - i*Gamma/2,    delta_c = delta - i*gamma/2

with Gamma, gamma the optical and spin FWHM. All quantities are angular
frequencies (rad/s); fields are expressed as Rabi frequencies.

With this sign choice the stationary point of the coherence equations is
a repeller of the forward-time dynamics and the full propagation exponent
has positive real part on resonance. Efficiencies depend only on moduli
and are unaffected.
"""

from dataclasses import dataclass, replace

import numpy as np

from .core import SingularityError, hbar, epsilon_0, c, from_db


@dataclass(frozen=True)
class LambdaParams:
    Delta: float = 0.0
    delta: float = 0.0
    Gamma: float = 2 * np.pi * 755e6
    gamma: float = 2 * np.pi * 219.14e6
    Omega: float = 0.0  # real: its phase is absorbed into the signal field
    mu: complex = 0.0
    alpha_E_z: float = 0.518
    alpha_Omega_z: float = 0.028
    pop_imbalance: float = 1.0

    def __post_init__(self):
        if np.iscomplexobj(self.Omega):
            if np.imag(self.Omega) != 0:
                raise ValueError("Omega must be real (choose the optical phase reference along the pump)")
            object.__setattr__(self, "Omega", float(np.real(self.Omega)))
        if not (self.Gamma > 0 and self.gamma > 0):
            raise ValueError("linewidths Gamma and gamma must be positive")
        if self.alpha_E_z < 0 or self.alpha_Omega_z < 0:
            raise ValueError("optical depths must be non-negative")
        if not 0 <= self.pop_imbalance <= 1:
            raise ValueError("pop_imbalance must lie in [0, 1]")

    @property
    def Delta_c(self):
        return self.Delta - 0.5j * self.Gamma

    @property
    def delta_c(self):
        return self.delta - 0.5j * self.gamma

    def with_(self, **changes):
        return replace(self, **changes)


def _raman_denominator(p: LambdaParams):
    return 4.0 * p.delta_c * p.Delta_c - p.Omega ** 2


def steady_state_coherences(p: LambdaParams, E=0.0):
    """Stationary optical (P) and spin (S) coherences for a signal field E.

    P = (2 delta_c E + Omega mu) / (4 delta_c Delta_c - Omega^2); S follows
    from the stationary spin equation. The RF drive is mu as given; apply
    the population factor to mu beforehand if wanted.
    """
    den = _raman_denominator(p)
    if den == 0:
        raise SingularityError("4 delta_c Delta_c - Omega^2 vanished")
    P = (2.0 * p.delta_c * E + p.Omega * p.mu) / den
    S = (np.conj(p.Omega) * P + p.mu) / (2.0 * p.delta_c)
    return complex(P), complex(S)


def coherence_rhs(p: LambdaParams, E=0.0):
    """Right-hand side f(P, S) of the perturbative coherence equations.

    Returned as a callable on a complex array [P, S]; used to check the
    stationary solution against direct time integration.
    """
    Dc, dc = p.Delta_c, p.delta_c
    Om, Om_c, mu = p.Omega, np.conj(p.Omega), p.mu

    def f(y):
        P, S = y[0], y[1]
        return np.array([1j * Dc * P - 0.5j * Om * S - 0.5j * E,
                         -0.5j * Om_c * P + 1j * dc * S - 0.5j * mu])

    return f


def _mixing_drive(p: LambdaParams):
    return p.Omega * p.mu * p.pop_imbalance


def transduction_field_full(p: LambdaParams, z_fraction=1.0):
    """Signal Rabi frequency after propagating a fraction of the crystal.

    E(z) = [exp(-2i delta_c Gamma alpha z / (4 delta_c Delta_c - Omega^2)) - 1]
           * Omega mu (rho_gg - rho_ss) / (2 delta_c)
    """
    if not 0 <= z_fraction <= 1:
        raise ValueError("z_fraction must lie in [0, 1]")
    den = _raman_denominator(p)
    if den == 0:
        raise SingularityError("4 delta_c Delta_c - Omega^2 vanished")
    az = p.alpha_E_z * z_fraction
    expo = -2j * p.delta_c * p.Gamma * az / den
    return complex(np.expm1(expo) * _mixing_drive(p) / (2.0 * p.delta_c))


def transduction_field_low_od(p: LambdaParams):
    """First-order (optically thin) signal: -i Gamma alpha z Omega mu / (4 delta_c Delta_c)."""
    return complex(-1j * p.Gamma / (4.0 * p.delta_c * p.Delta_c) * p.alpha_E_z * _mixing_drive(p))


def eta_eo(p: LambdaParams):
    """Electro-optics efficiency |Gamma/(4 delta_c Delta_c)|^2 aE z aO z |mu|^2 (rho_gg-rho_ss)^2."""
    pref = abs(p.Gamma / (4.0 * p.delta_c * p.Delta_c)) ** 2
    return float(pref * p.alpha_E_z * p.alpha_Omega_z * abs(p.mu) ** 2 * p.pop_imbalance ** 2)


def eta_q_from_eta_eo(eta_eo, P_o, P_rf, omega_o, omega_rf):
    """Photon-number efficiency from the electro-optics one."""
    for name, v in (("P_o", P_o), ("P_rf", P_rf), ("omega_o", omega_o), ("omega_rf", omega_rf)):
        if not np.all(np.asarray(v) > 0):
            raise ValueError(f"{name} must be positive")
    return eta_eo * (P_o * omega_rf) / (P_rf * omega_o)


def eta_q_cooperativity_form(Omega, Gamma, gamma, delta_c, Delta_c, C_E, C_mu, S_E, z, V_crystal,
                             pop_imbalance=None):
    """Quantum efficiency written with the optical and spin cooperativities."""
    if not (S_E > 0 and z > 0 and V_crystal > 0):
        raise ValueError("S_E, z and V_crystal must be positive")
    pref = abs(Omega * np.sqrt(Gamma * gamma) / (4.0 * delta_c * Delta_c)) ** 2
    eta = pref * C_E * C_mu * S_E * z / V_crystal
    if pop_imbalance is not None:
        eta *= pop_imbalance ** 2
    return float(eta)


def model_rescale(eta, rescale_db=0.0):
    """Multiply an efficiency by 10**(rescale_db/10)."""
    return eta * from_db(rescale_db)


# quantized-field bookkeeping

@dataclass(frozen=True)
class QuantizedCouplings:
    """Couplings and cooperativities of a single-pass optical beam and an RF cavity.

    The optical quantization volume is the beam cross-section times the
    free-space length c/(2 kappa_c) of a photon with the cavity bandwidth.
    """

    g_E: float
    g_mu: float
    N_mu: float
    N_E: float
    S_E: float
    V_crystal: float
    kappa_c: float
    Gamma: float
    gamma: float
    alpha_E: float
    alpha_Omega: float
    z: float

    @property
    def V_E(self):
        return self.S_E * c / (2.0 * self.kappa_c)

    @property
    def C_E(self):
        return self.g_E ** 2 * self.N_E / (self.Gamma * self.kappa_c)

    @property
    def C_mu(self):
        return self.g_mu ** 2 * self.N_mu / (self.gamma * self.kappa_c)


def absorption_coefficient(density, omega_o, dipole, Gamma):
    """Resonant absorption coefficient (1/m) of a homogeneous ensemble."""
    return density * omega_o * dipole ** 2 / (hbar * c * epsilon_0 * Gamma)


def optical_coupling(dipole, omega_o, V_E):
    """Single-photon optical coupling constant (rad/s)."""
    return dipole * np.sqrt(omega_o / (2.0 * hbar * epsilon_0 * V_E))


def quantized_couplings(density, S_E, z, V_crystal, d_E, d_Omega, omega_o, g_mu, kappa_c, Gamma, gamma):
    """Assemble couplings, atom numbers and absorption coefficients from microscopic inputs."""
    V_E = S_E * c / (2.0 * kappa_c)
    return QuantizedCouplings(
        g_E=optical_coupling(d_E, omega_o, V_E),
        g_mu=g_mu,
        N_mu=density * V_crystal,
        N_E=density * S_E * z,
        S_E=S_E, V_crystal=V_crystal, kappa_c=kappa_c, Gamma=Gamma, gamma=gamma,
        alpha_E=absorption_coefficient(density, omega_o, d_E, Gamma),
        alpha_Omega=absorption_coefficient(density, omega_o, d_Omega, Gamma),
        z=z,
    )


def optical_rabi_from_power(P_o, dipole, S_E):
    """Rabi frequency of a beam of power P_o over cross-section S_E (I = c eps0 |E|^2 / 2)."""
    E_field = np.sqrt(2.0 * P_o / (c * epsilon_0 * S_E))
    return dipole * E_field / hbar


def rf_rabi_from_flux(P_rf, omega_rf, g_mu, kappa_c):
    """RF Rabi frequency g_mu * B with |B|^2 = 2 (P_rf / hbar omega_rf) / kappa_c.

    This normalization of the quantized RF amplitude matches the photon
    bookkeeping of the optical field in the c/(2 kappa_c) volume, so that
    both efficiency routes agree. It differs from the cavity-field route
    (resonator.rf_rabi_frequency) by a convention-dependent factor of
    order one.
    """
    return g_mu * np.sqrt(2.0 * P_rf / (hbar * omega_rf * kappa_c))
