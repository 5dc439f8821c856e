"""Recursive least squares fit of the quadratic groundtrack-error model.

Between command switches the error follows x(tau) = theta1*tau**2 +
theta2*tau + theta3 with tau measured from the last switch. Internally tau
is expressed in units of ``time_scale`` seconds so that the regressor
[tau**2, tau, 1] stays within a few decades over a day; ``theta`` and the
covariance are kept in those scaled units and converted at the interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NoSwitchError, TimeRegressionError

DEFAULT_TIME_SCALE = 1.0e4
DEFAULT_P0 = (1.0e2, 1.0e1, 1.0e2)
DEFAULT_FORGETTING = 0.9999


def _spd(P: np.ndarray) -> bool:
    # leading principal minors of a symmetric 3x3 matrix
    if P[0, 0] <= 0.0:
        return False
    if P[0, 0] * P[1, 1] - P[0, 1] * P[1, 0] <= 0.0:
        return False
    return np.linalg.det(P) > 0.0


@dataclass(frozen=True)
class RlsState:
    theta: np.ndarray
    covariance: np.ndarray
    forgetting: float = DEFAULT_FORGETTING
    reference_time: float = 0.0
    last_command: int = 0
    last_measurement_time: float = 0.0
    time_scale: float = DEFAULT_TIME_SCALE
    initial_covariance: np.ndarray = field(
        default_factory=lambda: np.diag(DEFAULT_P0))
    covariance_reset: str = "transform"

    def __post_init__(self):
        if not 0.0 < self.forgetting <= 1.0:
            raise ValueError(f"forgetting factor must be in (0, 1], got {self.forgetting}")
        if self.last_command not in (0, 1):
            raise ValueError("command must be 0 or 1")
        if self.covariance_reset not in ("initial", "transform"):
            raise ValueError(f"unknown covariance reset {self.covariance_reset!r}")
        if not self.time_scale > 0.0:
            raise ValueError("time scale must be positive")
        for P in (self.covariance, self.initial_covariance):
            if P.shape != (3, 3) or not np.allclose(P, P.T, rtol=0.0, atol=0.0) or not _spd(P):
                raise ValueError("covariance must be a symmetric positive-definite 3x3 matrix")

    @property
    def theta_physical(self) -> np.ndarray:
        """[theta1 rad/s^2, theta2 rad/s, theta3 rad]."""
        s = self.time_scale
        return self.theta / np.array([s * s, s, 1.0])


def rls_init(t0: float, x0: float, p_guess: float = 0.0, p0=DEFAULT_P0,
             forgetting: float = DEFAULT_FORGETTING, time_scale: float = DEFAULT_TIME_SCALE,
             command: int = 0, covariance_reset: str = "transform") -> RlsState:
    """Filter state at ``t0`` seeded with the first measurement ``x0``.

    ``p0`` is the prior covariance in scaled units, either the three
    diagonal entries or a full matrix.
    """
    P0 = np.asarray(p0, dtype=float)
    if P0.ndim == 1:
        P0 = np.diag(P0)
    theta = np.array([0.5 * p_guess * time_scale ** 2, 0.0, x0])
    return RlsState(theta, P0.copy(), forgetting, t0, command, t0, time_scale, P0.copy(),
                    covariance_reset)


def _regressor(tau_s: float) -> np.ndarray:
    return np.array([tau_s * tau_s, tau_s, 1.0])


def rls_update(state: RlsState, t_j: float, x_measured: float) -> RlsState:
    """One recursive least squares step with exponential forgetting."""
    if t_j < state.last_measurement_time:
        raise TimeRegressionError(
            f"measurement at {t_j} precedes the previous one at {state.last_measurement_time}")
    phi = _regressor((t_j - state.reference_time) / state.time_scale)
    eta = state.forgetting
    P = state.covariance
    Pphi = P @ phi
    denom = eta + phi @ Pphi
    gain = Pphi / denom
    theta = state.theta + gain * (x_measured - phi @ state.theta)
    P = (P - np.outer(gain, Pphi)) / eta
    P = 0.5 * (P + P.T)
    if not _spd(P):
        raise ArithmeticError("RLS covariance lost positive definiteness")
    return replace(state, theta=theta, covariance=P, last_measurement_time=t_j)


def reset_on_switch(state: RlsState, t_bar: float, v_new: int, k: float) -> RlsState:
    """Re-center the quadratic at a command switch.

    Value and slope of the fitted parabola are carried across ``t_bar``; the
    curvature jumps by the known thrust contribution k*(v_old - v_new)/2.
    The covariance either restarts from the initial one or, with
    ``covariance_reset == "transform"``, is mapped through the same linear
    re-centering so the information gathered before the switch is kept.
    """
    if v_new not in (0, 1):
        raise ValueError("command must be 0 or 1")
    if v_new == state.last_command:
        raise NoSwitchError(f"command is already {v_new}")
    s = state.time_scale
    tau = (t_bar - state.reference_time) / s
    t1, t2, t3 = state.theta
    theta = np.array([
        t1 + 0.5 * k * s * s * (state.last_command - v_new),
        2.0 * t1 * tau + t2,
        t1 * tau * tau + t2 * tau + t3,
    ])
    if state.covariance_reset == "transform":
        A = np.array([[1.0, 0.0, 0.0], [2.0 * tau, 1.0, 0.0], [tau * tau, tau, 1.0]])
        P = A @ state.covariance @ A.T
        P = 0.5 * (P + P.T)
    else:
        P = state.initial_covariance.copy()
    return replace(state, theta=theta, covariance=P, reference_time=t_bar, last_command=v_new)


def estimates(state: RlsState, t: float, v_current: int, k: float) -> tuple[float, float, float]:
    """(y_hat, y_hat_dot, p_hat) interpolated at epoch ``t``."""
    s = state.time_scale
    tau = (t - state.reference_time) / s
    t1, t2, t3 = state.theta
    y = t1 * tau * tau + t2 * tau + t3
    ydot = (2.0 * t1 * tau + t2) / s
    p = 2.0 * t1 / (s * s) + k * v_current
    return float(y), float(ydot), float(p)
