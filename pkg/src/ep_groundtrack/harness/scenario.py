"""Closed-loop scenario: truth, sensing, estimation, control and actuation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..controller import (AdaptiveSettings, ControllerState, activate, adaptive_step,
                          burn_duration, delta_e_per_burn, hysteresis_step)
from ..dynamics import Propagator, accel_drag, body_position
from ..elements import (InertialState, OrbitalElements, cart_to_kep, kep_to_cart, mean_to_osc,
                        osc_to_mean, wrap_pi)
from ..estimator import estimates, reset_on_switch, rls_init, rls_update
from ..groundtrack import TrackTarget, control_gain, target_longitude_for
from ..sensors import ThrusterActuator, gps_measure, measure_track_error
from .config import ScenarioConfig
from .metrics import MetricsSummary, summarize
from .records import LogRecord

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class ScenarioSetup:
    """Quantities derived from a configuration before the loop starts."""

    initial_state: InertialState
    initial_mean: OrbitalElements
    target: TrackTarget
    j2: float
    a_star: float
    n_star: float
    u_max: float
    gain: float
    burn_duration: float


@dataclass(frozen=True)
class BurnRecord:
    """One firing arc. ``delta_e`` compares the mean eccentricity at burn end
    with a thrust-free twin propagated from the burn start."""

    start: float
    end: float
    true_anomaly_start: float
    delta_v: float
    delta_e: float
    delta_e_predicted: float


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    setup: ScenarioSetup
    records: list[LogRecord]
    summary: MetricsSummary
    burns: list[BurnRecord] = field(default_factory=list)
    applied_delta_v: float = 0.0
    clamp_events: int = 0
    band_saturations: int = 0


def onboard_j2(config: ScenarioConfig) -> float:
    """J2 used by the mean-element filter; matches the truth model's zonal set."""
    env = config.env
    return float(env.zonal_coeffs[0]) if env.zonal_degree >= 2 else 0.0


def prepare(config: ScenarioConfig) -> ScenarioSetup:
    env = config.env
    j2 = onboard_j2(config)
    el = config.orbit.elements()
    if el.variant == "mean":
        mean0, osc0 = el, mean_to_osc(el, j2, env.r_eq)
    else:
        mean0, osc0 = osc_to_mean(el, j2, env.r_eq), el
    tc = config.target
    lam_g0 = math.radians(tc.greenwich_longitude_deg)
    if tc.target_longitude_deg is None:
        # same angle branches as the measurement trackers start on
        lam = target_longitude_for(wrap_pi(mean0.mean_latitude), wrap_pi(mean0.raan), lam_g0,
                                   tc.repeat_ratio, tc.initial_error, 0.0, env.earth_rate)
    else:
        lam = math.radians(tc.target_longitude_deg) % (2.0 * math.pi)
    r = tc.repeat_ratio
    target = TrackTarget(r.numerator, r.denominator, lam, lam_g0, env.earth_rate, tc.x_lim)
    a_star = mean0.semi_major_axis
    n_star = math.sqrt(env.mu / a_star ** 3)
    u_max = config.thruster.nominal_force / config.body.mass
    cc = config.controller
    return ScenarioSetup(
        initial_state=kep_to_cart(osc0, env.mu, 0.0), initial_mean=mean0, target=target, j2=j2,
        a_star=a_star, n_star=n_star, u_max=u_max, gain=control_gain(target, u_max, a_star),
        burn_duration=burn_duration(cc.burn_multiple, n_star, cc.burn_mode))


def estimated_force(config: ScenarioConfig, setup: ScenarioSetup, p_hat: float) -> float:
    """Disturbance force equivalent to the curvature estimate."""
    return config.body.mass * setup.a_star * p_hat / (3.0 * float(setup.target.ratio))


def drag_force(state: InertialState, config: ScenarioConfig) -> float:
    env = config.env
    if env.density_ref == 0.0:
        return 0.0
    sun = body_position("sun", state.epoch, env.epoch_jd)
    return float(np.linalg.norm(accel_drag(state, config.body, env, sun))) * config.body.mass


def _initial_controller(config: ScenarioConfig, gain: float, y_lim: float,
                        phase: str = "inactive", phasing: bool | None = None) -> ControllerState:
    cc = config.controller
    return ControllerState(
        command=0, hysteresis_memory=0, y_lim=y_lim, gain=gain, phase=phase,
        f0_target=math.radians(cc.f0_deg), burn_period_multiple=cc.burn_multiple,
        phasing=cc.phasing_enabled if phasing is None else phasing,
        phasing_tolerance=math.radians(cc.phasing_tolerance_deg))


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run the configured scenario and summarize its log."""
    if config.sim.mode == "double-integrator":
        return _run_double_integrator(config)
    return _run_full(config)


def _mean_eccentricity(y: np.ndarray, t: float, config: ScenarioConfig, j2: float) -> float:
    osc = cart_to_kep(InertialState.from_vector(y, t), config.env.mu)
    return osc_to_mean(osc, j2, config.env.r_eq).eccentricity


def _run_full(config: ScenarioConfig) -> ScenarioResult:
    setup = prepare(config)
    env, body, cc = config.env, config.body, config.controller
    target, k = setup.target, setup.gain
    mu, r_eq, j2 = env.mu, env.r_eq, setup.j2
    tick = config.sim.tick
    n_ticks = int(round(config.sim.duration_days * SECONDS_PER_DAY / tick))
    warmup = cc.warmup_days * SECONDS_PER_DAY

    gps_rng, thrust_rng = (np.random.default_rng(s)
                           for s in np.random.SeedSequence(config.sim.seed).spawn(2))
    actuator = ThrusterActuator(config.thruster, thrust_rng)
    truth_prop = Propagator(body, env)
    settings = AdaptiveSettings(setup.burn_duration, target.error_tolerance, cc.alpha_margin,
                                cc.p_min, cc.p_max_fraction, cc.adapt, cc.cap_burn, tick)
    ctrl = _initial_controller(config, k, cc.y_lim)

    y = setup.initial_state.as_vector()
    truth_tr = meas_tr = rls = None
    accel = 0.0
    applied_dv = 0.0
    clamps = saturations = 0
    records: list[LogRecord] = []
    burns: list[BurnRecord] = []
    burn_open = None

    for j in range(n_ticks + 1):
        t = j * tick
        if j > 0:
            y = truth_prop.step_to(y, t - tick, t, thrust_rtn=(0.0, accel, 0.0))
            applied_dv += accel * tick
            if burn_open is not None:
                burn_open["dv"] += accel * tick
        truth = InertialState.from_vector(y, t)
        tm = measure_track_error(truth, target, truth_tr, mu, j2, r_eq)
        truth_tr = tm.trackers
        mm = measure_track_error(gps_measure(truth, config.gps, gps_rng), target, meas_tr,
                                 mu, j2, r_eq)
        meas_tr = mm.trackers

        if rls is None:
            ec = config.estimator
            rls = rls_init(t, mm.error, ec.p_guess, ec.p0, ec.forgetting, ec.time_scale,
                           covariance_reset=ec.covariance_reset)
        else:
            rls = rls_update(rls, t, mm.error)
        y_hat, ydot_hat, p_hat = estimates(rls, t, ctrl.command, k)

        if ctrl.phase == "inactive" and t >= warmup:
            ctrl = activate(ctrl)
        previous = ctrl.command
        elapsed = t - burn_open["start"] if burn_open is not None else 0.0
        ctrl, report = adaptive_step(ctrl, y_hat, ydot_hat, p_hat, mm.true_anomaly, settings,
                                     elapsed)
        if ctrl.phase != "inactive":
            clamps += report.p_clamped
            saturations += report.band_saturated
        if ctrl.command != previous:
            rls = reset_on_switch(rls, t, ctrl.command, k)
            if ctrl.command == 1:
                burn_open = {"start": t, "y": y.copy(), "f": tm.true_anomaly, "dv": 0.0}
            else:
                burns.append(_close_burn(burn_open, t, y, config, setup))
                burn_open = None
        accel = actuator.force(ctrl.command, t) / body.mass

        records.append(LogRecord(
            t, tm.error, mm.error, y_hat, ydot_hat, p_hat, ctrl.command, ctrl.y_lim,
            tm.osculating.semi_major_axis, tm.osculating.eccentricity,
            tm.osculating.inclination, tm.mean.semi_major_axis, drag_force(truth, config),
            estimated_force(config, setup, p_hat), tm.error - y_hat))

    summary = summarize(records, setup.u_max, p_hat_after=warmup)
    return ScenarioResult(config, setup, records, summary, burns, applied_dv, clamps, saturations)


def _close_burn(burn: dict, t_end: float, y_end: np.ndarray, config: ScenarioConfig,
                setup: ScenarioSetup) -> BurnRecord:
    twin = Propagator(config.body, config.env).step_to(burn["y"], burn["start"], t_end)
    de = (_mean_eccentricity(y_end, t_end, config, setup.j2)
          - _mean_eccentricity(twin, t_end, config, setup.j2))
    predicted = delta_e_per_burn(setup.u_max, setup.a_star, config.env.mu, burn["f"],
                                 t_end - burn["start"])
    return BurnRecord(burn["start"], t_end, burn["f"], burn["dv"], de, predicted)


def _run_double_integrator(config: ScenarioConfig) -> ScenarioResult:
    """Averaged plant y'' = p - k v, integrated exactly, with the exact state fed back."""
    setup = prepare(config)
    di = config.di
    k = setup.gain if di.k is None else di.k
    if di.k is not None:
        setup = replace(setup, gain=k, u_max=k * setup.a_star / (3.0 * float(setup.target.ratio)))
    p, tick = di.p, di.tick
    n_ticks = int(round(config.sim.duration_days * SECONDS_PER_DAY / tick))
    ctrl = _initial_controller(config, k, di.y_lim, phase="coasting", phasing=False)
    f_hat = estimated_force(config, setup, p)
    nan = math.nan

    y, yd = di.y0, di.ydot0
    records: list[LogRecord] = []
    applied_dv = 0.0
    for j in range(n_ticks + 1):
        if j > 0:
            acc = p - k * ctrl.command
            y += yd * tick + 0.5 * acc * tick * tick
            yd += acc * tick
            applied_dv += setup.u_max * ctrl.command * tick
        ctrl = hysteresis_step(ctrl, y, yd, p)
        if j % di.log_every == 0:
            records.append(LogRecord(j * tick, y, y, y, yd, p, ctrl.command, ctrl.y_lim,
                                     nan, nan, nan, nan, nan, f_hat, 0.0))
    summary = summarize(records, setup.u_max)
    return ScenarioResult(config, setup, records, summary, [], applied_dv)


def mean_drag_force(config: ScenarioConfig, duration: float = SECONDS_PER_DAY,
                    sample: float = 60.0) -> float:
    """Average drag force magnitude along the thrust-free initial trajectory."""
    setup = prepare(config)
    times = np.arange(0.0, duration + 0.5 * sample, sample)
    traj = Propagator(config.body, config.env).propagate(setup.initial_state, duration,
                                                         t_eval=times)
    return float(np.mean([drag_force(traj.state(i), config) for i in range(len(traj))]))


def calibrate_density(config: ScenarioConfig, target_force: float,
                      duration: float = SECONDS_PER_DAY) -> float:
    """Reference density giving ``target_force`` mean drag on the initial orbit.

    Drag is linear in the reference density, and over ``duration`` the orbit
    decay is too small to change the average, so one rescaling suffices.
    """
    if not config.env.density_ref > 0.0:
        raise ValueError("calibration needs a positive starting density")
    force = mean_drag_force(config, duration)
    return config.env.density_ref * target_force / force
