"""Cowell propagation of the truth model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..elements import InertialState
from .forces import EnvironmentConfig, ForceModel, SpacecraftBody, equations_of_motion
from .integrator import dopri5

DEFAULT_RTOL = 1e-12
DEFAULT_ATOL_POS = 1e-9
DEFAULT_ATOL_VEL = 1e-12


@dataclass(frozen=True)
class Trajectory:
    """Samples of a propagated trajectory; ``final`` is the state at the span end."""

    times: np.ndarray
    states: np.ndarray
    final: InertialState
    n_steps: int

    def state(self, i: int) -> InertialState:
        return InertialState.from_vector(self.states[i], float(self.times[i]))

    def __len__(self):
        return len(self.times)


class Propagator:
    """Reusable integrator bound to one force model.

    Keeps the last accepted step size so that consecutive short arcs (one
    per control tick) do not restart step-size selection from scratch.
    """

    def __init__(self, body: SpacecraftBody, env: EnvironmentConfig,
                 rtol: float = DEFAULT_RTOL, atol_pos: float = DEFAULT_ATOL_POS,
                 atol_vel: float = DEFAULT_ATOL_VEL, max_step: float = math.inf):
        self.model = ForceModel(body, env)
        self.rtol = rtol
        self.atol = np.array([atol_pos] * 3 + [atol_vel] * 3)
        self.max_step = max_step
        self._h = None

    def _rhs(self, thrust_rtn, thrust):
        params, jcoef = self.model.params, self.model.jcoef
        rtn = np.zeros(3) if thrust_rtn is None else np.asarray(thrust_rtn, dtype=float)
        if thrust is None:
            return lambda t, y: equations_of_motion(t, y, params, jcoef, rtn)

        def rhs(t, y):
            dy = equations_of_motion(t, y, params, jcoef, rtn)
            dy[3:] += thrust(t, y)
            return dy
        return rhs

    def step_to(self, y, t0: float, t1: float, thrust_rtn=None, thrust=None) -> np.ndarray:
        res = dopri5(self._rhs(thrust_rtn, thrust), t0, y, t1, rtol=self.rtol, atol=self.atol,
                     h0=self._h, max_step=self.max_step)
        self._h = res.h_next
        return res.y

    def propagate(self, state: InertialState, t_end: float, thrust_rtn=None, thrust=None,
                  t_eval=None) -> Trajectory:
        t_eval = np.asarray([] if t_eval is None else t_eval, dtype=float)
        res = dopri5(self._rhs(thrust_rtn, thrust), state.epoch, state.as_vector(), t_end,
                     rtol=self.rtol, atol=self.atol, h0=self._h, t_eval=t_eval,
                     max_step=self.max_step)
        self._h = res.h_next
        return Trajectory(res.t_samples, res.y_samples,
                          InertialState.from_vector(res.y, res.t), res.n_steps)


def propagate(state: InertialState, t_end: float, body: SpacecraftBody | None = None,
              env: EnvironmentConfig | None = None, thrust=None, thrust_rtn=None,
              t_eval=None, rtol: float = DEFAULT_RTOL, atol_pos: float = DEFAULT_ATOL_POS,
              atol_vel: float = DEFAULT_ATOL_VEL) -> Trajectory:
    """Integrate the truth dynamics from ``state`` to epoch ``t_end``.

    ``thrust`` is an optional callable ``(t, y) -> ECI acceleration``;
    ``thrust_rtn`` is a constant acceleration resolved in the instantaneous
    RTN frame (evaluated inside the compiled equations of motion). Samples
    at the ``t_eval`` epochs come from the integrator's dense output.
    """
    body = body or SpacecraftBody()
    env = env or EnvironmentConfig()
    return Propagator(body, env, rtol, atol_pos, atol_vel).propagate(
        state, t_end, thrust_rtn=thrust_rtn, thrust=thrust, t_eval=t_eval)


def tangential_thrust(acceleration: float):
    """Callback producing a constant acceleration along the RTN tangential axis."""
    def thrust(t, y):
        r, v = y[:3], y[3:6]
        R = r / np.linalg.norm(r)
        N = np.cross(r, v)
        N /= np.linalg.norm(N)
        return acceleration * np.cross(N, R)
    return thrust
