import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ep_groundtrack.constants import MU_EARTH, OMEGA_EARTH, R_EARTH
from ep_groundtrack.dynamics import EnvironmentConfig, propagate
from ep_groundtrack.elements import (AngleTracker, OrbitalElements, cart_to_kep, kep_to_cart,
                                     osc_to_mean, unwrap, wrap_2pi, wrap_pi)
from ep_groundtrack.groundtrack import (DEFAULT_X_LIM, TrackTarget, control_gain,
                                        equator_crossing_longitude, greenwich_nodal_period,
                                        groundtrack_spacing, nodal_period, target_longitude_for,
                                        track_error)

TWO_PI = 2 * math.pi
R = Fraction(3, 46)


def test_target_validation():
    assert TrackTarget(3, 46).ratio == R
    assert TrackTarget.from_ratio("3/46").ratio == R
    for args in [(0, 46), (3, -46), (6, 92)]:
        with pytest.raises(ValueError):
            TrackTarget(*args)
    with pytest.raises(ValueError):
        TrackTarget(3, 46, target_longitude=TWO_PI)
    with pytest.raises(ValueError):
        TrackTarget(3, 46, error_tolerance=0.0)


def test_default_tolerance_is_two_km():
    assert DEFAULT_X_LIM == pytest.approx(3.136e-4, rel=1e-3)


def test_nodal_period_examples():
    n = math.sqrt(MU_EARTH / 6.838e6 ** 3)
    assert n == pytest.approx(1.11657e-3, rel=1e-4)
    assert nodal_period(n) == pytest.approx(5627.1, abs=0.5)
    assert nodal_period(TWO_PI) == pytest.approx(1.0, rel=1e-15)
    assert nodal_period(TWO_PI / 86400) == pytest.approx(86400.0, rel=1e-15)
    for bad in (0.0, -1e-3):
        with pytest.raises(ValueError):
            nodal_period(bad)


def test_greenwich_nodal_period_examples():
    assert greenwich_nodal_period(0.0) == pytest.approx(86164.1, abs=0.05)
    sso = TWO_PI / (365.2422 * 86400)
    assert sso == pytest.approx(1.9910e-7, rel=1e-4)
    assert greenwich_nodal_period(sso) == pytest.approx(86400.0, abs=0.5)
    assert greenwich_nodal_period(-OMEGA_EARTH) == pytest.approx(43082, abs=1)
    with pytest.raises(ValueError):
        greenwich_nodal_period(OMEGA_EARTH)


def test_spacing_examples():
    assert groundtrack_spacing(86400.0, 86400.0) == pytest.approx(TWO_PI, rel=1e-15)
    assert groundtrack_spacing(5627.1, 86400.0) == pytest.approx(TWO_PI * 5627.1 / 86400,
                                                                 rel=1e-15)
    assert groundtrack_spacing(5627.1, 86400.0) == pytest.approx(0.40921, abs=1e-5)
    assert groundtrack_spacing(R * 86400, 86400) == pytest.approx(0.409773, abs=1e-6)
    with pytest.raises(ValueError):
        groundtrack_spacing(0.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(num=st.integers(1, 50), den=st.integers(1, 500), t_g=st.integers(1, 10 ** 6))
def test_spacing_exact_at_repeat(num, den, t_g):
    r = Fraction(num, den)
    assert groundtrack_spacing(r * t_g, Fraction(t_g)) == TWO_PI * r


def test_track_error_examples():
    lam = 1.0
    target = TrackTarget(3, 46, target_longitude=lam)
    assert track_error(0.0, lam, target, 0.0).error == 0.0
    s = track_error(2.0, 3.0, target, 0.0)
    assert s.error == float(R) * 2.0 + 3.0 - lam
    assert (s.gamma_unwrapped, s.raan_unwrapped) == (2.0, 3.0)
    # frozen orbit: Earth rotates underneath
    x0 = track_error(2.0, 3.0, target, 0.0).error
    x1 = track_error(2.0, 3.0, target, 1000.0).error
    assert x1 - x0 == pytest.approx(-OMEGA_EARTH * 1000.0, rel=1e-12)


def test_track_error_constant_under_repeat_condition():
    target = TrackTarget(3, 46)
    gamma_rate, raan_rate = 1.1e-3, 2e-7
    raan_rate = OMEGA_EARTH - float(R) * gamma_rate
    xs = [track_error(gamma_rate * t, raan_rate * t, target, t).error
          for t in np.linspace(0, 86400 * 3, 7)]
    np.testing.assert_allclose(xs, xs[0], atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(m=st.integers(0, 200), lam=st.floats(0.0, TWO_PI, exclude_max=True),
       lam_g0=st.floats(0.0, TWO_PI), epoch=st.floats(0.0, 3e6))
def test_node_longitude_equals_target(m, lam, lam_g0, epoch):
    target = TrackTarget(3, 46, target_longitude=lam, greenwich_epoch_longitude=lam_g0)
    gamma = TWO_PI * m * 46 / 3  # r * gamma is a multiple of 2pi
    raan = target.greenwich_longitude(epoch) + lam - float(R) * gamma
    assert track_error(gamma, raan, target, epoch).error == pytest.approx(0.0, abs=1e-9)
    assert abs(wrap_pi(equator_crossing_longitude(raan, target, epoch) - lam)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(gamma=st.floats(-10, 10), raan=st.floats(-10, 10), lam_g0=st.floats(0, 6.28),
       x0=st.floats(-1e-3, 1e-3), epoch=st.floats(0, 1e5))
def test_target_longitude_inverse(gamma, raan, lam_g0, x0, epoch):
    lam = target_longitude_for(gamma, raan, lam_g0, R, x0, epoch)
    target = TrackTarget(3, 46, target_longitude=lam, greenwich_epoch_longitude=lam_g0)
    x = track_error(gamma, raan, target, epoch).error
    assert abs(wrap_pi(x - x0)) < 1e-9


def test_control_gain():
    target = TrackTarget(3, 46)
    assert control_gain(target, 5e-5, 6.838e6) == pytest.approx(1.4306e-12, rel=1e-4)
    assert control_gain(target, 0.0, 6.838e6) == 0.0
    double = TrackTarget(3, 23)
    assert control_gain(double, 5e-5, 6.838e6) == pytest.approx(
        2 * control_gain(target, 5e-5, 6.838e6), rel=1e-15)


def test_error_rate_along_j2_trajectory():
    # finite-difference rate of x equals r*dgamma + dOmega - wE*dt on propagated samples
    env = EnvironmentConfig(zonal_degree=2, density_ref=0.0, sun_enabled=False,
                            moon_enabled=False, srp_enabled=False)
    el = OrbitalElements(6838e3, 0.001, math.radians(97.28), 0.0, math.radians(90.0),
                         math.radians(270.0))
    times = np.arange(0.0, 3 * 5627.0, 30.0)
    traj = propagate(kep_to_cart(el), times[-1], env=env, t_eval=times)
    target = TrackTarget(3, 46)
    g_tr = o_tr = None
    xs, gs, os_ = [], [], []
    for i in range(len(traj)):
        mean = osc_to_mean(cart_to_kep(traj.state(i)))
        if g_tr is None:
            g_tr = AngleTracker.start(mean.mean_latitude)
            o_tr = AngleTracker.start(mean.raan)
        else:
            g_tr = unwrap(g_tr, wrap_2pi(mean.mean_latitude))
            o_tr = unwrap(o_tr, wrap_2pi(mean.raan))
        xs.append(track_error(g_tr.accumulated, o_tr.accumulated, target, times[i]).error)
        gs.append(g_tr.accumulated)
        os_.append(o_tr.accumulated)
    dx = np.diff(xs)
    expected = float(R) * np.diff(gs) + np.diff(os_) - OMEGA_EARTH * np.diff(times)
    np.testing.assert_allclose(dx, expected, atol=1e-12)
    # the case-study orbit nearly satisfies the repeat condition: x drifts slowly
    assert abs(xs[-1] - xs[0]) < 1e-2
