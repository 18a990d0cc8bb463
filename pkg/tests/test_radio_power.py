import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from haps_cellswitch.power import (
    HAPS_PROFILE,
    SC_PROFILE,
    PowerProfile,
    haps_power,
    network_power,
    sc_power,
    slot_energy,
)
from haps_cellswitch.radio import NoiseModel, data_rate, noise_power, sinr, sinr_matrix

PROFILES = (HAPS_PROFILE,) + (SC_PROFILE,) * 4


# --- noise, SINR, rate -------------------------------------------------------

def test_noise_power_default():
    assert noise_power(NoiseModel()) == pytest.approx(-113.98970004336019, rel=1e-12)


def test_noise_density_anchor():
    assert noise_power(NoiseModel(per_ue_bandwidth_hz=1.0, noise_figure_db=0.0)) == -174.0


def test_noise_doubling_bandwidth():
    a = noise_power(NoiseModel(per_ue_bandwidth_hz=100e3))
    b = noise_power(NoiseModel(per_ue_bandwidth_hz=200e3))
    assert b - a == pytest.approx(10 * math.log10(2))


def test_sinr_noise_only():
    assert sinr(0, [-100.0], -100.0) == pytest.approx(1.0)


def test_sinr_symmetric_interferer():
    assert sinr(0, [-40.0, -40.0], -250.0) == pytest.approx(1.0)


def test_sinr_haps_link():
    s = sinr(0, [-35.8, -60.0], -113.98970004336019, active=[True, False])
    assert 10 * math.log10(s) == pytest.approx(78.18970004336019, rel=1e-12)


def test_sinr_rejects_inactive_server():
    with pytest.raises(ValueError):
        sinr(1, [-40.0, -50.0], -100.0, active=[True, False])


def test_sinr_matrix_matches_scalar():
    rng = np.random.default_rng(5)
    rx = rng.uniform(-90, -30, size=(20, 5))
    active = np.array([1, 0, 1, 1, 0], bool)
    m = sinr_matrix(rx, -110.0, active)
    for i in range(20):
        for k in np.flatnonzero(active):
            assert m[i, k] == pytest.approx(sinr(k, rx[i], -110.0, active))
    assert np.isnan(m[:, ~active]).all()


@given(st.lists(st.floats(-100, -20), min_size=2, max_size=5))
def test_interference_lowers_sinr(rx):
    snr = sinr(0, rx, -110.0, active=[True] + [False] * (len(rx) - 1))
    assert sinr(0, rx, -110.0) < snr


@given(st.lists(st.floats(-100, -20), min_size=3, max_size=5), st.data())
def test_switching_off_non_server_never_hurts(rx, data):
    off = data.draw(st.integers(1, len(rx) - 1))
    active = [True] * len(rx)
    before = sinr(0, rx, -110.0, active)
    active[off] = False
    assert sinr(0, rx, -110.0, active) >= before


def test_data_rate_values():
    assert data_rate(1.0, 200e3) == pytest.approx(200e3)
    assert data_rate(0.0, 200e3) == 0.0
    assert data_rate(10 ** 7.82, 200e3) == pytest.approx(5195495.544771049, rel=1e-12)


def test_data_rate_monotone_and_linear():
    s = np.logspace(-3, 8, 200)
    r = data_rate(s, 200e3)
    assert np.all(np.diff(r) > 0)
    assert np.allclose(data_rate(s, 400e3), 2 * r)


# --- power ------------------------------------------------------------------

def test_sc_power_values():
    assert sc_power(SC_PROFILE, 1.0) == pytest.approx(72.38)
    assert sc_power(SC_PROFILE, 0.3, active=False) == 39.0
    assert sc_power(SC_PROFILE, 0.0) == 56.0


def test_haps_power_values():
    assert haps_power(HAPS_PROFILE, 1.0) == pytest.approx(224.0)
    assert haps_power(HAPS_PROFILE, 0.0) == 130.0
    assert haps_power(HAPS_PROFILE, 0.5) == pytest.approx(177.0)


@pytest.mark.parametrize("rho", [-0.1, 1.01])
def test_load_bounds(rho):
    with pytest.raises(ValueError):
        sc_power(SC_PROFILE, rho)
    with pytest.raises(ValueError):
        haps_power(HAPS_PROFILE, rho)


@pytest.mark.parametrize("policy,loads,expected", [
    ((1, 0, 0, 0, 0), (0, 0, 0, 0, 0), 286.0),
    ((1, 1, 1, 1, 1), (0, 0, 0, 0, 0), 354.0),
    ((1, 1, 1, 1, 1), (1, 1, 1, 1, 1), 513.52),
])
def test_network_power(policy, loads, expected):
    assert network_power(policy, loads, PROFILES) == pytest.approx(expected, rel=1e-12)


def test_network_power_rejects_load_on_sleeping_cell():
    with pytest.raises(ValueError):
        network_power((1, 0, 1, 1, 1), (0.1, 0.2, 0, 0, 0), PROFILES)


def test_sleep_undercuts_idle():
    assert SC_PROFILE.p_sleep < SC_PROFILE.p_c


@given(st.floats(0, 1), st.lists(st.sampled_from([0, 1]), min_size=4, max_size=4))
def test_all_off_is_cheapest(rho_h, bits):
    loads = [rho_h] + [0.0] * 4
    assert network_power((1, 0, 0, 0, 0), loads, PROFILES) <= network_power((1, *bits), loads, PROFILES)


@given(st.floats(0, 0.999))
def test_affine_increasing(rho):
    for prof in (SC_PROFILE, HAPS_PROFILE):
        lo, hi = sc_power(prof, rho), sc_power(prof, min(1.0, rho + 0.001))
        assert hi > lo


def test_slot_energy():
    assert slot_energy(286.0, 1.0) == 286.0
    assert slot_energy(0.0, 1.0) == 0.0
    assert slot_energy(513.52, 1.0) == pytest.approx(513.52)
    with pytest.raises(ValueError):
        slot_energy(1.0, 0.0)


def test_profile_rejects_negative():
    with pytest.raises(ValueError):
        PowerProfile(-1, 1, 1, 1)
