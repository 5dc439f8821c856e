import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ep_groundtrack.constants import MU_EARTH
from ep_groundtrack.controller import (AdaptiveSettings, ControllerState, activate,
                                       adapt_y_lim, adaptive_step, burn_duration,
                                       clamp_disturbance, delta_e_per_burn, hysteresis_step,
                                       limit_cycle_metrics, switching_function)
from ep_groundtrack.errors import InfeasibleBandError, InfeasibleGainError

P = 2.23e-14
K = 1.4306e-12
Y_LIM = 1.79e-4
A_STAR = 6.838e6
N_STAR = math.sqrt(MU_EARTH / A_STAR ** 3)
ORBIT = 2 * math.pi / N_STAR
X_LIM = 2000.0 / 6378137.0


def _coasting(y_lim=1.0, k=2.0, **kw):
    return ControllerState(0, 0, y_lim, k, "coasting", **kw)


# --- switching function ---

def test_switching_function_examples():
    assert switching_function(0.0, 0.0, 1.0, 2.0) == 0.0
    assert switching_function(0.0, 2.0, 1.0, 2.0) == pytest.approx(2.0)
    assert switching_function(0.0, -2.0, 1.0, 2.0) == pytest.approx(-2.0)


@pytest.mark.parametrize("p,k", [(2.0, 2.0), (3.0, 2.0), (0.0, 2.0), (-1.0, 2.0)])
def test_switching_function_infeasible(p, k):
    with pytest.raises(InfeasibleGainError):
        switching_function(0.0, 0.0, p, k)


@settings(max_examples=200, deadline=None)
@given(y=st.floats(-1e-3, 1e-3), frac=st.floats(0.001, 0.999))
def test_switching_curve_on_axis(y, frac):
    assert switching_function(y, 0.0, frac * K, K) == y


@settings(max_examples=200, deadline=None)
@given(y=st.floats(-1e-3, 1e-3), yd=st.floats(1e-12, 1e-7), frac=st.floats(0.001, 0.999))
def test_switching_function_is_stopping_point(y, yd, frac):
    # oracle: coasting (yd < 0) or firing (yd > 0) until the velocity vanishes
    p = frac * K
    accel = p - K
    t_stop = -yd / accel
    y_stop = y + yd * t_stop + 0.5 * accel * t_stop ** 2
    assert switching_function(y, yd, p, K) == pytest.approx(y_stop, rel=1e-9, abs=1e-18)
    t_stop = yd / p
    y_stop = y - yd * t_stop + 0.5 * p * t_stop ** 2
    assert switching_function(y, -yd, p, K) == pytest.approx(y_stop, rel=1e-9, abs=1e-18)


# --- hysteresis ---

def test_thresholds():
    st_ = _coasting()
    out = hysteresis_step(st_, 1.0 + 1e-9, 0.0, 1.0)
    assert (out.command, out.phase) == (1, "firing")
    out = hysteresis_step(replace(out), -1.0 - 1e-9, 0.0, 1.0)
    assert (out.command, out.phase) == (0, "coasting")


def test_hysteresis_memory():
    st_ = hysteresis_step(_coasting(), 1.5, 0.0, 1.0)
    assert st_.command == 1
    for y in (0.9, 0.0, -0.9):
        st_ = hysteresis_step(st_, y, 0.0, 1.0)
        assert st_.command == 1 and st_.hysteresis_memory == 1
    st_ = hysteresis_step(st_, -1.0, 0.0, 1.0)
    assert st_.command == 0
    for y in (-0.9, 0.0, 0.9):
        st_ = hysteresis_step(st_, y, 0.0, 1.0)
        assert st_.command == 0


def test_inactive_controller_holds():
    st_ = ControllerState(0, 0, 1.0, 2.0)
    assert hysteresis_step(st_, 100.0, 0.0, 1.0) is st_
    on = activate(st_)
    assert on.phase == "coasting"
    assert activate(on) is on


def test_phasing_waits_for_f0():
    st_ = _coasting(phasing=True, f0_target=math.pi)
    st_ = hysteresis_step(st_, 2.0, 0.0, 1.0, true_anomaly=1.0)
    assert (st_.command, st_.phase, st_.hysteresis_memory) == (0, "awaiting_f0", 1)
    st_ = hysteresis_step(st_, 0.5, 0.0, 1.0, true_anomaly=2.0)
    assert st_.phase == "awaiting_f0"
    st_ = hysteresis_step(st_, 0.5, 0.0, 1.0, true_anomaly=math.pi + math.radians(0.3))
    assert (st_.command, st_.phase) == (1, "firing")
    # once firing, the anomaly no longer matters
    st_ = hysteresis_step(st_, 0.5, 0.0, 1.0, true_anomaly=0.0)
    assert st_.command == 1


def test_phasing_wraps_angle():
    st_ = _coasting(phasing=True, f0_target=0.0)
    st_ = hysteresis_step(st_, 2.0, 0.0, 1.0, true_anomaly=2 * math.pi - 0.001)
    assert st_.command == 1


def test_phasing_request_can_lapse():
    st_ = hysteresis_step(_coasting(phasing=True), 2.0, 0.0, 1.0, true_anomaly=1.0)
    st_ = hysteresis_step(st_, -2.0, 0.0, 1.0, true_anomaly=1.0)
    assert (st_.command, st_.phase) == (0, "coasting")


def test_state_invariants():
    with pytest.raises(ValueError):
        ControllerState(1, 1, 1.0, 2.0, "coasting")
    with pytest.raises(ValueError):
        ControllerState(0, 0, 1.0, 2.0, "firing")
    with pytest.raises(InfeasibleGainError):
        ControllerState(0, 0, 1.0, 0.0)
    with pytest.raises(ValueError):
        ControllerState(0, 0, 0.0, 2.0)


@settings(max_examples=200, deadline=None)
@given(y=st.floats(-5, 5), yd=st.floats(-5, 5), cmd=st.integers(0, 1), f=st.floats(0, 7))
def test_hysteresis_deterministic(y, yd, cmd, f):
    st_ = ControllerState(cmd, cmd, 1.0, 2.0, "firing" if cmd else "coasting", phasing=True)
    assert hysteresis_step(st_, y, yd, 1.0, f) == hysteresis_step(st_, y, yd, 1.0, f)


def simulate_plant(p, k, y_lim, y0, yd0, duration, dt=1.0):
    """Exact integration of y'' = p - k v with the switching law every dt."""
    st_ = ControllerState(0, 0, y_lim, k, "coasting")
    y, yd = y0, yd0
    ts, ys, vs = [], [], []
    for j in range(int(duration / dt) + 1):
        if j:
            a = p - k * st_.command
            y += yd * dt + 0.5 * a * dt * dt
            yd += a * dt
        st_ = hysteresis_step(st_, y, yd, p)
        ts.append(j * dt)
        ys.append(y)
        vs.append(st_.command)
    return ts, ys, vs


def test_limit_cycle_from_off_axis_start():
    m = limit_cycle_metrics(P, K, Y_LIM)
    ts, ys, vs = simulate_plant(P, K, Y_LIM, -2.5e-4, 2e-9, 6 * m.period, dt=5.0)
    ons = [ts[i] for i in range(1, len(vs)) if vs[i] > vs[i - 1]]
    offs = [ts[i] for i in range(1, len(vs)) if vs[i] < vs[i - 1]]
    periods = [b - a for a, b in zip(ons[1:], ons[2:])]
    assert len(periods) >= 2
    for per in periods:
        assert per == pytest.approx(m.period, rel=1e-2)
    # two switches per cycle in steady state
    tail = [t for t in ons + offs if t > ons[1]]
    assert len(tail) <= 2 * (ts[-1] - ons[1]) / m.period + 2
    late = [y for t, y in zip(ts, ys) if t > ons[2]]
    assert max(late) - min(late) == pytest.approx(2 * Y_LIM, rel=1e-2)


# --- band adaptation and cycle formulas ---

def test_adapt_y_lim_case_study():
    y = adapt_y_lim(P, K, 5627.1, X_LIM)
    assert y == pytest.approx(1.79e-4, rel=1e-2)
    assert y < X_LIM


def test_adapt_y_lim_scaling_and_limits():
    y1 = adapt_y_lim(P, K, 5627.1, X_LIM)
    assert adapt_y_lim(P, K, 5627.1 / 2, X_LIM) == pytest.approx(y1 / 4, rel=1e-14)
    assert adapt_y_lim(K * (1 - 1e-9), K, 5627.1, X_LIM) < 1e-12
    with pytest.raises(InfeasibleBandError):
        adapt_y_lim(P, K, 2 * 5627.1, X_LIM)
    with pytest.raises(InfeasibleBandError):
        adapt_y_lim(P, K, 5627.1, X_LIM, alpha_margin=X_LIM - 1e-4)
    with pytest.raises(InfeasibleGainError):
        adapt_y_lim(K, K, 5627.1, X_LIM)
    with pytest.raises(ValueError):
        adapt_y_lim(P, K, 0.0, X_LIM)


def test_limit_cycle_case_study():
    m = limit_cycle_metrics(P, K, Y_LIM)
    assert m.period == pytest.approx(3.61e5, rel=1e-2)
    assert m.firing_time == pytest.approx(5.6e3, rel=1e-2)
    assert m.duty_cycle == pytest.approx(0.0156, rel=1e-2)
    assert m.firing_time + m.coasting_time == pytest.approx(m.period, rel=1e-15)
    assert m.firing_time / m.period == pytest.approx(m.duty_cycle, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(frac=st.floats(0.001, 0.999), T=st.floats(10.0, 1e4))
def test_adapt_and_metrics_are_inverse(frac, T):
    p = frac * K
    y = adapt_y_lim(p, K, T, 1e9)
    assume(y > 0.0)
    assert limit_cycle_metrics(p, K, y).firing_time == pytest.approx(T, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(frac=st.floats(0.001, 0.999), y=st.floats(1e-6, 1e-2))
def test_period_square_root_scaling(frac, y):
    a = limit_cycle_metrics(frac * K, K, y)
    b = limit_cycle_metrics(frac * K, K, 4 * y)
    assert b.period == pytest.approx(2 * a.period, rel=1e-12)
    assert 0 < a.duty_cycle < 1


def test_limit_cycle_errors():
    with pytest.raises(InfeasibleGainError):
        limit_cycle_metrics(K, K, Y_LIM)
    with pytest.raises(ValueError):
        limit_cycle_metrics(P, K, 0.0)


def test_delta_e_examples():
    u = 5e-5
    for f0 in (0.0, 0.7, math.pi / 2, 4.0):
        assert delta_e_per_burn(u, A_STAR, MU_EARTH, f0, 2 * math.pi / N_STAR) == \
            pytest.approx(0.0, abs=1e-20)
    assert delta_e_per_burn(u, A_STAR, MU_EARTH, 0.0, math.pi / N_STAR) == \
        pytest.approx(0.0, abs=1e-20)
    de = delta_e_per_burn(u, A_STAR, MU_EARTH, math.pi / 2, math.pi / N_STAR)
    assert de == pytest.approx(-2.346e-5, rel=1e-3)
    assert 2 * A_STAR ** 2 * u / MU_EARTH == pytest.approx(1.1731e-5, rel=1e-4)
    assert delta_e_per_burn(u, A_STAR, MU_EARTH, 1.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        delta_e_per_burn(u, A_STAR, MU_EARTH, 0.0, -1.0)


def test_burn_duration_modes():
    assert burn_duration(1, N_STAR) == pytest.approx(ORBIT, rel=1e-15)
    assert burn_duration(1, N_STAR, "half") == pytest.approx(ORBIT / 2, rel=1e-15)
    assert burn_duration(Fraction(3, 2), N_STAR) == pytest.approx(1.5 * ORBIT, rel=1e-15)
    with pytest.raises(ValueError):
        burn_duration(0, N_STAR)
    with pytest.raises(ValueError):
        burn_duration(1, N_STAR, "quarter")


# --- adaptive wrapper ---

def test_clamp_disturbance():
    cfg = AdaptiveSettings(ORBIT, X_LIM)
    assert clamp_disturbance(P, K, cfg) == (P, False)
    assert clamp_disturbance(-1e-14, K, cfg) == (1e-16, True)
    assert clamp_disturbance(2 * K, K, cfg) == (0.9 * K, True)


def test_adaptive_step_adapts_while_coasting():
    cfg = AdaptiveSettings(ORBIT, X_LIM)
    st_ = ControllerState(0, 0, 1e-4, K, "coasting")
    out, rep = adaptive_step(st_, 0.0, 0.0, P, 0.0, cfg)
    assert out.y_lim == pytest.approx(adapt_y_lim(P, K, ORBIT, X_LIM), rel=1e-15)
    assert not rep.p_clamped and not rep.band_saturated


def test_adaptive_step_holds_band_while_firing():
    cfg = AdaptiveSettings(ORBIT, X_LIM)
    st_ = ControllerState(1, 1, 1e-4, K, "firing")
    out, _ = adaptive_step(st_, 0.0, 0.0, 2 * P, 0.0, cfg)
    assert out.y_lim == 1e-4


def test_adaptive_step_saturates_small_disturbance():
    cfg = AdaptiveSettings(ORBIT, X_LIM)
    st_ = ControllerState(0, 0, 1e-4, K, "coasting")
    out, rep = adaptive_step(st_, 0.0, 0.0, 1e-20, 0.0, cfg)
    assert rep.p_clamped and rep.band_saturated
    assert out.y_lim == pytest.approx(X_LIM)


def test_adaptive_step_without_adaptation():
    cfg = AdaptiveSettings(ORBIT, X_LIM, adapt=False)
    st_ = ControllerState(0, 0, 1e-4, K, "coasting")
    out, _ = adaptive_step(st_, 0.0, 0.0, P, 0.0, cfg)
    assert out.y_lim == 1e-4



def test_burn_cap_ends_overrunning_arc():
    cfg = AdaptiveSettings(ORBIT, X_LIM, cap_burn=True, tick=30.0)
    st_ = ControllerState(1, 1, Y_LIM, K, "firing")
    # the law would keep firing here, but the arc has reached one orbit
    assert adaptive_step(st_, 0.0, 0.0, P, 0.0, cfg, burn_elapsed=ORBIT)[0].command == 0


@pytest.mark.parametrize("elapsed, command", [(ORBIT - 16.0, 1), (ORBIT - 14.0, 0),
                                              (ORBIT + 100.0, 0)])
def test_burn_cap_rounds_to_nearest_tick(elapsed, command):
    cfg = AdaptiveSettings(ORBIT, X_LIM, cap_burn=True, tick=30.0)
    st_ = ControllerState(1, 1, Y_LIM, K, "firing")
    out, _ = adaptive_step(st_, 0.0, 0.0, P, 0.0, cfg, burn_elapsed=elapsed)
    assert out.command == command
    if command == 0:
        assert out.hysteresis_memory == 0 and out.phase == "coasting"


@settings(max_examples=200, deadline=None)
@given(y=st.floats(-1e-3, 1e-3), yd=st.floats(-1e-8, 1e-8), cmd=st.integers(0, 1),
       elapsed=st.floats(0.0, ORBIT - 16.0))
def test_burn_cap_matches_law_before_the_cap(y, yd, cmd, elapsed):
    capped = AdaptiveSettings(ORBIT, X_LIM, cap_burn=True, tick=30.0)
    plain = AdaptiveSettings(ORBIT, X_LIM)
    st_ = ControllerState(cmd, cmd, Y_LIM, K, "firing" if cmd else "coasting")
    assert (adaptive_step(st_, y, yd, P, 0.0, capped, elapsed)
            == adaptive_step(st_, y, yd, P, 0.0, plain, elapsed))
