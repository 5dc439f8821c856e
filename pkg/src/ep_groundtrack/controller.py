"""Hysteresis on/off switching law for the averaged double integrator.

The plant is y'' = p - k*v with v in {0, 1}. The switching function
measures where the free (coast or fire) parabola through (y, y') reaches
zero velocity; firing starts when it crosses +y_lim and stops at -y_lim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal

from .elements import wrap_pi
from .errors import InfeasibleBandError, InfeasibleGainError

Phase = Literal["inactive", "coasting", "awaiting_f0", "firing"]
BurnMode = Literal["full", "half"]

DEFAULT_PHASING_TOL = math.radians(0.5)


def _check_gain(p: float, k: float) -> None:
    if not (0.0 < p < k):
        raise InfeasibleGainError(f"need 0 < p < k, got p={p:.6e}, k={k:.6e}")


def switching_function(y: float, y_dot: float, p: float, k: float) -> float:
    _check_gain(p, k)
    if y_dot >= 0.0:
        return y - y_dot * y_dot / (2.0 * (p - k))
    return y - y_dot * y_dot / (2.0 * p)


def burn_duration(m, n_star: float, mode: BurnMode = "full") -> float:
    """T(m): ``m`` orbital periods (full mode) or half periods (half mode)."""
    m = Fraction(m)
    if m <= 0:
        raise ValueError("burn multiple must be positive")
    if mode not in ("full", "half"):
        raise ValueError(f"unknown burn mode {mode!r}")
    unit = 2.0 * math.pi if mode == "full" else math.pi
    return float(m) * unit / n_star


@dataclass(frozen=True)
class ControllerState:
    command: int
    hysteresis_memory: int
    y_lim: float
    gain: float
    phase: Phase = "inactive"
    f0_target: float = 0.0
    burn_period_multiple: Fraction = Fraction(1)
    phasing: bool = False
    phasing_tolerance: float = DEFAULT_PHASING_TOL

    def __post_init__(self):
        if not self.gain > 0.0:
            raise InfeasibleGainError("control gain must be positive")
        if not self.y_lim > 0.0:
            raise ValueError("y_lim must be positive")
        if self.command not in (0, 1) or self.hysteresis_memory not in (0, 1):
            raise ValueError("command and memory must be 0 or 1")
        if self.phase not in ("inactive", "coasting", "awaiting_f0", "firing"):
            raise ValueError(f"unknown phase {self.phase!r}")
        if (self.command == 1) != (self.phase == "firing"):
            raise ValueError("command 1 must coincide with the firing phase")


def activate(state: ControllerState) -> ControllerState:
    """Leave the warm-up phase; no-op if already active."""
    if state.phase != "inactive":
        return state
    return replace(state, phase="coasting", command=0, hysteresis_memory=0)


def hysteresis_step(state: ControllerState, y: float, y_dot: float, p: float,
                    true_anomaly: float = 0.0) -> ControllerState:
    """One tick of the switching law; inactive controllers are returned unchanged."""
    if state.phase == "inactive":
        return state
    s = switching_function(y, y_dot, p, state.gain)
    memory = state.hysteresis_memory
    if s >= state.y_lim:
        memory = 1
    elif s <= -state.y_lim:
        memory = 0
    if memory == 0:
        command, phase = 0, "coasting"
    elif state.command == 1:
        command, phase = 1, "firing"
    elif state.phasing and abs(wrap_pi(true_anomaly - state.f0_target)) >= state.phasing_tolerance:
        command, phase = 0, "awaiting_f0"
    else:
        command, phase = 1, "firing"
    if (command, memory, phase) == (state.command, state.hysteresis_memory, state.phase):
        return state
    return replace(state, command=command, hysteresis_memory=memory, phase=phase)


def adapt_y_lim(p_hat: float, k: float, burn_duration: float, x_lim: float,
                alpha_margin: float = 0.0) -> float:
    """Band half-width whose limit cycle fires for exactly ``burn_duration``."""
    _check_gain(p_hat, k)
    if not burn_duration > 0.0:
        raise ValueError("burn duration must be positive")
    y_lim = k * (k - p_hat) / (16.0 * p_hat) * burn_duration ** 2
    bound = x_lim - alpha_margin
    if not 0.0 < y_lim <= bound:
        raise InfeasibleBandError(
            f"adapted y_lim {y_lim:.4e} rad exceeds the feasible bound {bound:.4e} rad")
    return y_lim


@dataclass(frozen=True)
class LimitCycleMetrics:
    period: float
    firing_time: float
    coasting_time: float
    duty_cycle: float


def limit_cycle_metrics(p: float, k: float, y_lim: float) -> LimitCycleMetrics:
    _check_gain(p, k)
    if not y_lim > 0.0:
        raise ValueError("y_lim must be positive")
    period = 4.0 * math.sqrt(k * y_lim / (p * k - p * p))
    firing = 4.0 * math.sqrt(p * y_lim / (k * k - k * p))
    return LimitCycleMetrics(period, firing, period - firing, p / k)


def delta_e_per_burn(u_max: float, a_star: float, mu: float, f0: float,
                     burn_duration: float) -> float:
    """Eccentricity change of a tangential burn starting at true anomaly ``f0``."""
    if burn_duration < 0.0:
        raise ValueError("burn duration must be non-negative")
    n_star = math.sqrt(mu / a_star ** 3)
    return 2.0 * a_star ** 2 * u_max / mu * (math.sin(n_star * burn_duration + f0) - math.sin(f0))


@dataclass(frozen=True)
class AdaptiveSettings:
    """Guards wrapped around the switching law when driven by estimates.

    ``p_min`` and ``p_max_fraction`` clamp the estimated disturbance into the
    open interval (0, k) required by the law. When the adapted band would
    not fit inside ``x_lim - alpha_margin`` it is saturated at that bound.
    With ``cap_burn`` a firing arc that has lasted ``burn_duration`` (to the
    nearest ``tick``) is ended even if the lower threshold has not been
    reached, so estimation noise cannot stretch a burn past its
    eccentricity-neutral length. Shorter arcs still end at the threshold.
    """

    burn_duration: float
    x_lim: float
    alpha_margin: float = 0.0
    p_min: float = 1e-16
    p_max_fraction: float = 0.9
    adapt: bool = True
    cap_burn: bool = False
    tick: float = 0.0


@dataclass(frozen=True)
class TickReport:
    p_used: float
    p_clamped: bool
    band_saturated: bool


def clamp_disturbance(p_hat: float, k: float, settings: AdaptiveSettings) -> tuple[float, bool]:
    hi = settings.p_max_fraction * k
    p = min(max(p_hat, settings.p_min), hi)
    return p, p != p_hat


def adaptive_step(state: ControllerState, y: float, y_dot: float, p_hat: float,
                  true_anomaly: float, settings: AdaptiveSettings, burn_elapsed: float = 0.0
                  ) -> tuple[ControllerState, TickReport]:
    """Switching-law tick on estimator outputs.

    While the engine is off the band is re-adapted from the current estimate
    before the threshold test, so the value in force at the coast-to-fire
    decision is the one held through the burn. ``burn_elapsed`` is the
    thrust time of the current arc, used only with ``settings.cap_burn``.
    """
    p, clamped = clamp_disturbance(p_hat, state.gain, settings)
    if (settings.cap_burn and state.command == 1
            and burn_elapsed + 0.5 * settings.tick >= settings.burn_duration):
        report = TickReport(p, clamped, False)
        return replace(state, command=0, hysteresis_memory=0, phase="coasting"), report
    saturated = False
    if settings.adapt and state.phase == "coasting":
        bound = settings.x_lim - settings.alpha_margin
        try:
            y_lim = adapt_y_lim(p, state.gain, settings.burn_duration, settings.x_lim,
                                settings.alpha_margin)
        except InfeasibleBandError:
            y_lim, saturated = bound, True
        state = replace(state, y_lim=y_lim)
    return hysteresis_step(state, y, y_dot, p, true_anomaly), TickReport(p, clamped, saturated)
