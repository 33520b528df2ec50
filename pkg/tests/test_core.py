import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import constants

from optorf.core import (DomainError, angular, c, db_power, dbm_to_watt, epsilon_0, from_db,
                         frequency_to_wavelength, hbar, larmor_frequency, mu_0, ordinary,
                         thermal_population_imbalance, thermal_populations, watt_to_dbm,
                         wavelength_to_frequency)

TWO_PI = 2 * np.pi


def test_constants_consistent():
    assert abs(c ** 2 * epsilon_0 * mu_0 - 1) < 1e-9
    assert hbar == pytest.approx(constants.h / TWO_PI, rel=1e-15)


@given(st.floats(1e-3, 1e12))
def test_hz_round_trip(f):
    assert ordinary(angular(f)) == pytest.approx(f, rel=1e-12)


def test_db_examples():
    assert db_power(1.0) == 0.0
    assert db_power(2.8e-2) == pytest.approx(-15.5, abs=0.05)
    assert db_power(6.3e-5) == pytest.approx(-42.0, abs=0.05)


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan])
def test_db_rejects_non_positive(bad):
    with pytest.raises(DomainError):
        db_power(bad)


@given(st.floats(1e-12, 1e12), st.floats(1e-12, 1e12))
def test_db_additive(a, b):
    assert db_power(a * b) == pytest.approx(db_power(a) + db_power(b), abs=1e-9)


def test_dbm_conversions():
    assert dbm_to_watt(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert watt_to_dbm(37e-3) == pytest.approx(15.68, abs=0.01)
    assert from_db(db_power(0.37)) == pytest.approx(0.37, rel=1e-14)


def test_wavelength_round_trip():
    f = wavelength_to_frequency(1532.636)
    assert f == pytest.approx(195.604e12, rel=1e-4)
    assert frequency_to_wavelength(f) == pytest.approx(1532.636, rel=1e-14)


def test_larmor_examples():
    assert larmor_frequency(8.2, 0.0) == 0.0
    # frozen from the 40-digit oracle
    assert larmor_frequency(8.20, 0.107) / TWO_PI == pytest.approx(12.2803052902257e9, rel=1e-12)
    assert larmor_frequency(8.45, 0.100) / TWO_PI == pytest.approx(11.8268269549131e9, rel=1e-12)
    assert abs(larmor_frequency(8.20, 0.107) / TWO_PI - 12.28e9) < 0.05e9


@given(st.floats(0.1, 20), st.floats(0, 2))
def test_larmor_linear(g, B):
    assert larmor_frequency(g, 2 * B) == 2 * larmor_frequency(g, B)


@pytest.mark.parametrize("g,B", [(0.0, 0.1), (-1.0, 0.1), (8.2, -0.1)])
def test_larmor_domain(g, B):
    with pytest.raises(DomainError):
        larmor_frequency(g, B)


def test_thermal_examples():
    assert thermal_population_imbalance(0.0, 2.5) == 0.0
    assert thermal_population_imbalance(angular(12.29e9), 2.5) == pytest.approx(0.11742122792583, rel=1e-12)
    assert abs(thermal_population_imbalance(angular(12.29e9), 2.5) - 0.12) < 0.005
    omega = 60 * constants.k * 1.0 / hbar
    assert abs(thermal_population_imbalance(omega, 1.0) - 1) < 1e-10


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_thermal_rejects_T(T):
    with pytest.raises(DomainError):
        thermal_population_imbalance(1e9, T)


def test_thermal_monotonic(rng):
    omegas = np.sort(rng.uniform(1e8, 1e12, 200))
    temps = np.sort(rng.uniform(0.05, 300, 200))
    p_w = thermal_population_imbalance(omegas, 2.5)
    p_t = thermal_population_imbalance(angular(12e9), temps)
    assert np.all(np.diff(p_w) > 0)
    assert np.all(np.diff(p_t) < 0)


def test_populations_sum():
    gg, ss = thermal_populations(angular(12.29e9), 2.5)
    assert gg + ss == pytest.approx(1.0, abs=1e-15)
    assert gg - ss == pytest.approx(0.11742122792583, rel=1e-12)
