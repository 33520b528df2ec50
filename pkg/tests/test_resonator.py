import numpy as np
import pytest
from hypothesis import given, strategies as st

from optorf.cavity import CavityParams, SpinEnsembleParams
from optorf.core import DomainError, angular, c, db_power, epsilon_0
from optorf.resonator import (DriveConditions, ResonatorGeometry, SampleSpec, cooperativity_estimate,
                              effective_spin_number, field_for_energy, intracavity_b_amplitude, magnetic_energy,
                              mode_fields, mode_frequency, position_factor, rf_rabi_frequency, stored_energy,
                              stored_energy_driven, vacuum_coupling)
from optorf.transduction import LambdaParams, eta_eo

from conftest import GAMMA_OPT, GAMMA_SPIN, KAPPA_C, KAPPA_T, OMEGA_C

GEOM = ResonatorGeometry()
DRIVE = DriveConditions()
CAV = CavityParams(OMEGA_C, KAPPA_C, KAPPA_T)
SPINS = SpinEnsembleParams(8.20, GAMMA_SPIN, 0.135)
SAMPLE = SampleSpec(1.3e28, 50e-6, 0.77, 6e-8, 2.5)


def test_geometry_validation():
    with pytest.raises(ValueError):
        ResonatorGeometry(a=0.0)
    with pytest.raises(ValueError):
        ResonatorGeometry(probe_x=15e-3)
    with pytest.raises(ValueError):
        ResonatorGeometry(probe_z=0.0)
    with pytest.raises(ValueError):
        DriveConditions(P_rf=-1.0)
    with pytest.raises(ValueError):
        SampleSpec(1.3e28, 0.5, 0.77, 6e-8, 2.5)
    with pytest.raises(ValueError):
        SampleSpec(1.3e28, 50e-6, 0.0, 6e-8, 2.5)
    assert GEOM.volume == pytest.approx(3e-6, rel=1e-15)
    assert GEOM.bx_projection == pytest.approx(0.6, rel=1e-15)


def test_mode_frequency():
    f0 = 10e9
    side = c / (2 * f0) * np.sqrt(2)
    assert mode_frequency(ResonatorGeometry(a=side, d=side, probe_x=side / 2, probe_z=side / 2)) == pytest.approx(f0)
    assert abs(mode_frequency(GEOM) - 12.49e9) < 0.01e9
    long_box = ResonatorGeometry(d=1e6, probe_z=1.0)
    assert mode_frequency(long_box) == pytest.approx(c / (2 * 15e-3), rel=1e-9)
    assert mode_frequency(long_box) == pytest.approx(9.993e9, abs=1e6)


def test_position_factor():
    assert position_factor(GEOM) == pytest.approx(np.cos(0.1 * np.pi), rel=1e-15)
    assert position_factor(GEOM) == pytest.approx(0.951, abs=5e-4)
    ratio = (intracavity_b_amplitude(GEOM, DRIVE, CAV, include_position_factor=True)
             / intracavity_b_amplitude(GEOM, DRIVE, CAV))
    assert ratio == pytest.approx(position_factor(GEOM), rel=1e-14)


def test_zero_power():
    off = DriveConditions(P_rf=0.0)
    assert intracavity_b_amplitude(GEOM, off, CAV) == 0
    assert rf_rabi_frequency(GEOM, off, CAV) == 0


def test_b_scales_with_root_power():
    b1 = intracavity_b_amplitude(GEOM, DRIVE, CAV)
    b2 = intracavity_b_amplitude(GEOM, DriveConditions(P_rf=2 * DRIVE.P_rf), CAV)
    assert b2 / b1 == pytest.approx(np.sqrt(2), rel=1e-14)


def test_rabi_frozen():
    mu = rf_rabi_frequency(GEOM, DRIVE, CAV)
    # frozen from the 40-digit oracle
    assert mu / (2 * np.pi) == pytest.approx(4945817.7623370782218, rel=1e-9)
    p = LambdaParams(Gamma=GAMMA_OPT, gamma=GAMMA_SPIN, Omega=angular(2e6), mu=mu, pop_imbalance=0.11742122792583)
    assert abs(db_power(eta_eo(p)) + 70.2) < 1.5


def test_rabi_detuned_by_kappa_t():
    det = DriveConditions(omega_rf=CAV.omega_c + CAV.kappa_t)
    ratio = rf_rabi_frequency(GEOM, det, CAV) / rf_rabi_frequency(GEOM, DRIVE, CAV)
    assert ratio == pytest.approx(1 / np.sqrt(5), rel=1e-12)


def test_rabi_half_power_points():
    top = rf_rabi_frequency(GEOM, DRIVE, CAV) ** 2
    for sign in (-1, 1):
        d = DriveConditions(omega_rf=CAV.omega_c + sign * CAV.kappa_t / 2)
        assert rf_rabi_frequency(GEOM, d, CAV) ** 2 == pytest.approx(top / 2, rel=1e-9)


def test_vacuum_coupling():
    omega = angular(12.29e9)
    g = vacuum_coupling(GEOM, omega, 8.45)
    # frozen from the 40-digit oracle
    assert g == pytest.approx(1.1645620132866594622, rel=1e-9)
    big = ResonatorGeometry(a=15e-3, b=40e-3, d=20e-3)
    assert vacuum_coupling(big, omega, 8.45) == pytest.approx(g / 2, rel=1e-14)
    with pytest.raises(ValueError):
        vacuum_coupling(GEOM, 0.0, 8.45)


def test_cooperativity():
    omega = angular(12.29e9)
    C = cooperativity_estimate(GEOM, SAMPLE, CAV, SPINS, omega)
    # frozen from the 40-digit oracle
    assert C == pytest.approx(0.12229462245461828593, rel=1e-9)
    assert 0.12 / 3 < C < 0.12 * 3
    dry = SampleSpec(1.3e28, 0.0, 0.77, 6e-8, 2.5)
    assert cooperativity_estimate(GEOM, dry, CAV, SPINS, omega) == 0
    double = SampleSpec(1.3e28, 50e-6, 0.77, 12e-8, 2.5)
    assert cooperativity_estimate(GEOM, double, CAV, SPINS, omega) == pytest.approx(2 * C, rel=1e-14)


def test_cooperativity_recovers_spin_number():
    omega = angular(12.29e9)
    C = cooperativity_estimate(GEOM, SAMPLE, CAV, SPINS, omega)
    g = vacuum_coupling(GEOM, omega, 8.45)
    assert C * SPINS.gamma * CAV.kappa_c / g ** 2 == pytest.approx(effective_spin_number(SAMPLE, omega), rel=1e-14)


def test_mode_fields_nodes():
    Ey, Bx, Bz = mode_fields(GEOM, 1.0, GEOM.a / 2, GEOM.d / 2)
    assert Ey == pytest.approx(1.0)
    assert abs(Bx) < 1e-20 and abs(Bz) < 1e-20
    walls_x = np.array([0.0, GEOM.a, 0.3 * GEOM.a, 0.7 * GEOM.a])
    walls_z = np.array([0.4 * GEOM.d, 0.6 * GEOM.d, 0.0, GEOM.d])
    Ey, _, _ = mode_fields(GEOM, 1.0, walls_x, walls_z)
    assert np.all(np.abs(Ey) < 1e-15)


def test_mode_fields_out_of_box():
    with pytest.raises(DomainError):
        mode_fields(GEOM, 1.0, -1e-3, 0.01)
    with pytest.raises(DomainError):
        mode_fields(GEOM, 1.0, 0.01, GEOM.d * 1.01)


def test_stored_energy():
    assert stored_energy(GEOM, 2.0) == pytest.approx(epsilon_0 * GEOM.volume * 4 / 8, rel=1e-15)
    assert field_for_energy(GEOM, stored_energy(GEOM, 123.0)) == pytest.approx(123.0, rel=1e-14)


@given(st.floats(1.0, 1e6))
def test_magnetic_energy_is_half(E0):
    assert magnetic_energy(GEOM, E0) == pytest.approx(stored_energy(GEOM, E0) / 2, rel=1e-6)


def test_driven_energy_matches_field():
    # the B amplitude follows from the stored energy through the B_x mode amplitude at the antinode
    W = stored_energy_driven(GEOM, DRIVE, CAV)
    E0 = field_for_energy(GEOM, W)
    Bx_peak = (E0 / c) * GEOM.bx_projection
    assert intracavity_b_amplitude(GEOM, DRIVE, CAV) == pytest.approx(Bx_peak, rel=1e-12)
