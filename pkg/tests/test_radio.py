import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from nrucoex.radio import (
    OMNI,
    ChannelParams,
    Endpoint,
    InfeasiblePattern,
    cone_solid_angle,
    fspl_db,
    gain,
    make_pattern,
    noise_power_dbm,
    pathloss_db,
    rx_power_dbm,
)

CH = ChannelParams()


def side_gain_oracle(main_db, bw_deg):
    # floor g_s solving g_m * omega + g_s * (4 pi - omega) = 4 pi
    g = 10 ** (main_db / 10)
    omega = 2 * math.pi * (1 - math.cos(math.radians(bw_deg) / 2))
    return (4 * math.pi - g * omega) / (4 * math.pi - omega)


def sphere_power(pattern):
    """Integrate the gain over the sphere, polar axis on boresight."""
    def integrand(theta, phi):
        return gain(pattern, 0.0, theta) * math.sin(theta)

    edge = pattern.beamwidth / 2
    inner, _ = integrate.dblquad(integrand, 0, 2 * math.pi, 0, min(edge, math.pi))
    outer = 0.0
    if edge < math.pi:
        outer, _ = integrate.dblquad(integrand, 0, 2 * math.pi, edge, math.pi)
    return inner + outer


def test_side_gain_values():
    assert make_pattern(10, 30).side_gain == pytest.approx(0.8440, abs=1e-4)
    assert make_pattern(10, 30).side_gain_db == pytest.approx(-0.736, abs=1e-3)
    assert make_pattern(7, 90).side_gain == pytest.approx(0.3116, abs=1e-4)
    assert make_pattern(7, 90).side_gain_db == pytest.approx(-5.06, abs=1e-2)


@pytest.mark.parametrize("main_db, bw", [(10, 30), (7, 90), (3, 120), (20, 10), (0.2, 200)])
def test_side_gain_matches_oracle(main_db, bw):
    assert make_pattern(main_db, bw).side_gain == pytest.approx(side_gain_oracle(main_db, bw),
                                                               rel=1e-12)


def test_omni_identity():
    p = make_pattern(0, 360)
    assert p.is_omni and p.side_gain == 1.0 and p.main_gain == 1.0
    assert p.beamwidth == pytest.approx(2 * math.pi)


def test_infeasible():
    with pytest.raises(InfeasiblePattern):
        make_pattern(15, 90)
    with pytest.raises(InfeasiblePattern):
        make_pattern(3, 360)
    with pytest.raises(ValueError):
        make_pattern(10, 0)


@given(st.floats(0, 20), st.floats(1, 359))
def test_energy_conservation_closed_form(main_db, bw):
    try:
        p = make_pattern(main_db, bw)
    except InfeasiblePattern:
        return
    omega = cone_solid_angle(p.beamwidth)
    total = p.main_gain * omega + p.side_gain * (4 * math.pi - omega)
    assert total == pytest.approx(4 * math.pi, rel=1e-9)
    assert p.side_gain <= p.main_gain


@pytest.mark.parametrize("main_db, bw", [(10, 30), (7, 90)])
def test_energy_conservation_numeric(main_db, bw):
    assert sphere_power(make_pattern(main_db, bw)) == pytest.approx(4 * math.pi, rel=1e-4)


def test_gain_cone_boundary():
    p = make_pattern(10, 30)
    assert gain(p, 1.0, 1.0) == p.main_gain
    assert gain(p, 0.0, math.radians(14.9999)) == p.main_gain
    assert gain(p, 0.0, math.radians(15.0001)) == p.side_gain
    assert gain(p, math.radians(350), math.radians(5)) == p.main_gain  # wraps
    assert gain(OMNI, 0.3, 2.9) == 1.0


@given(st.floats(-10, 10), st.floats(0, math.pi))
def test_gain_symmetric(bore, off):
    p = make_pattern(7, 90)
    assert gain(p, bore, bore + off) == gain(p, bore, bore - off)


def test_gain_vectorised():
    p = make_pattern(10, 30)
    g = gain(p, 0.0, np.radians([0, 10, 20, 180]))
    assert list(g) == [p.main_gain, p.main_gain, p.side_gain, p.side_gain]


def test_fspl_friis():
    lam = 299_792_458.0 / 60e9
    friis = -20 * math.log10(lam / (4 * math.pi * 1.0))
    assert fspl_db(60e9, 1.0) == pytest.approx(friis, rel=1e-12)


def test_pathloss_examples():
    assert pathloss_db(CH, 1.0) == pytest.approx(68.0, abs=0.1)
    assert pathloss_db(CH, 10.0) == pytest.approx(88.0, abs=0.1)
    assert pathloss_db(CH, CH.ref_distance) == fspl_db(CH.carrier_freq, CH.ref_distance)
    assert pathloss_db(CH, 0.2) == pathloss_db(CH, 1.0)
    assert pathloss_db(CH, 5.0, shadow_draw=3.0) == pytest.approx(pathloss_db(CH, 5.0) + 3.0)


@given(st.floats(0.01, 500), st.floats(0.01, 500))
def test_pathloss_monotone(a, b):
    lo, hi = sorted((a, b))
    assert pathloss_db(CH, lo) <= pathloss_db(CH, hi)


def test_rx_power_examples():
    tx_p = make_pattern(10, 30)
    fspl = pathloss_db(CH, 1.0)
    tx = Endpoint((0.0, 0.0), tx_p, 0.0)
    assert rx_power_dbm(CH, tx, Endpoint((1.0, 0.0), OMNI)) == pytest.approx(10 + 10 - fspl)
    assert rx_power_dbm(CH, tx, Endpoint((1.0, 0.0), OMNI)) == pytest.approx(-48.0, abs=0.1)
    quasi = Endpoint((1.0, 0.0), make_pattern(7, 90), math.pi)
    assert rx_power_dbm(CH, tx, quasi) == pytest.approx(-41.0, abs=0.1)
    # both ends facing away
    back_tx = Endpoint((0.0, 0.0), tx_p, math.pi)
    back_rx = Endpoint((1.0, 0.0), tx_p, 0.0)
    assert rx_power_dbm(CH, back_tx, back_rx) == pytest.approx(10 + 2 * -0.736 - 68.0, abs=0.1)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20))
def test_omni_reciprocity(x1, y1, x2, y2):
    if math.hypot(x2 - x1, y2 - y1) < 1e-6:
        return
    a, b = Endpoint((x1, y1), OMNI), Endpoint((x2, y2), OMNI)
    d = math.hypot(x2 - x1, y2 - y1)
    assert rx_power_dbm(CH, a, b) == pytest.approx(CH.tx_power - pathloss_db(CH, d))
    assert rx_power_dbm(CH, a, b) == pytest.approx(rx_power_dbm(CH, b, a))


def test_noise_power():
    assert noise_power_dbm(ChannelParams(noise_figure=0)) == pytest.approx(-84.0)
    assert noise_power_dbm(CH) == pytest.approx(-77.0)
    assert noise_power_dbm(ChannelParams(noise_figure=0, bandwidth=1e6)) == pytest.approx(-114.0)


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelParams(pathloss_exponent=0.5)
    with pytest.raises(ValueError):
        ChannelParams(shadowing_sigma=-1)
