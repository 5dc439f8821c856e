"""GPS and thruster signal models, and the GPS to groundtrack-error pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import J2, MU_EARTH, R_EARTH
from .elements import (AngleTracker, InertialState, OrbitalElements, cart_to_kep,
                       osc_to_mean, unwrap, wrap_pi)
from .groundtrack import TrackTarget, track_error


@dataclass(frozen=True)
class GpsModel:
    position_sigma: float = 20.0
    velocity_sigma: float = 0.1
    update_period: float = 30.0

    def __post_init__(self):
        if self.position_sigma < 0.0 or self.velocity_sigma < 0.0:
            raise ValueError("GPS sigmas must be non-negative")
        if not self.update_period > 0.0:
            raise ValueError("GPS update period must be positive")


@dataclass(frozen=True)
class ThrusterModel:
    nominal_force: float = 0.01
    force_sigma: float = 5e-4
    update_period: float = 30.0

    def __post_init__(self):
        if not self.nominal_force > 0.0:
            raise ValueError("nominal thrust must be positive")
        if self.force_sigma < 0.0:
            raise ValueError("thrust sigma must be non-negative")
        if not self.update_period > 0.0:
            raise ValueError("thruster update period must be positive")


def gps_measure(truth: InertialState, model: GpsModel, rng: np.random.Generator) -> InertialState:
    """Truth plus independent zero-mean Gaussian noise on each axis.

    Six normals are drawn on every call, even with zero sigmas, so that the
    random stream consumed does not depend on the noise settings.
    """
    noise = rng.standard_normal(6)
    pos = truth.position + model.position_sigma * noise[:3]
    vel = truth.velocity + model.velocity_sigma * noise[3:]
    return InertialState(pos, vel, truth.epoch)


def thruster_force(command: int, model: ThrusterModel, rng: np.random.Generator) -> float:
    """Thrust magnitude for one hold interval; exactly zero when off."""
    if command not in (0, 1):
        raise ValueError("command must be 0 or 1")
    if command == 0:
        return 0.0
    return model.nominal_force + model.force_sigma * float(rng.standard_normal())


class ThrusterActuator:
    """Zero-order hold of the noisy thrust, redrawn every ``update_period``.

    A new draw is also taken whenever the command changes, so each firing
    arc starts with a fresh sample.
    """

    def __init__(self, model: ThrusterModel, rng: np.random.Generator):
        self.model = model
        self.rng = rng
        self._command = 0
        self._force = 0.0
        self._drawn_at = -math.inf

    def force(self, command: int, t: float) -> float:
        if command != self._command or t - self._drawn_at >= self.model.update_period:
            self._force = thruster_force(command, self.model, self.rng)
            self._command = command
            self._drawn_at = t
        return self._force


@dataclass(frozen=True)
class AngleTrackers:
    """Unwrapping state for the mean latitude and the RAAN."""

    gamma: AngleTracker
    raan: AngleTracker


@dataclass(frozen=True)
class TrackMeasurement:
    error: float
    true_anomaly: float
    trackers: AngleTrackers
    osculating: OrbitalElements
    mean: OrbitalElements


def initial_trackers(mean: OrbitalElements, target: TrackTarget, epoch: float) -> AngleTrackers:
    """Start both trackers on the branch that puts the initial error in [-pi, pi).

    Unwrapped angles are only defined up to a starting branch; the RAAN
    branch absorbs whole turns of the error so the controller sees a small
    signal from the first sample.
    """
    gamma0 = wrap_pi(mean.mean_latitude)
    raan0 = wrap_pi(mean.raan)
    x0 = track_error(gamma0, raan0, target, epoch).error
    raan0 += wrap_pi(x0) - x0
    return AngleTrackers(AngleTracker.start(gamma0), AngleTracker.start(raan0))


def measure_track_error(gps: InertialState, target: TrackTarget,
                        trackers: AngleTrackers | None = None, mu: float = MU_EARTH,
                        j2: float = J2, r_eq: float = R_EARTH) -> TrackMeasurement:
    """GPS state to osculating and mean elements, then the unwrapped error.

    Passing ``trackers=None`` starts new trackers at this sample.
    """
    osc = cart_to_kep(gps, mu)
    mean = osc_to_mean(osc, j2, r_eq)
    if trackers is None:
        trackers = initial_trackers(mean, target, gps.epoch)
    else:
        trackers = AngleTrackers(unwrap(trackers.gamma, mean.mean_latitude),
                                 unwrap(trackers.raan, mean.raan))
    sample = track_error(trackers.gamma.accumulated, trackers.raan.accumulated,
                         target, gps.epoch)
    return TrackMeasurement(sample.error, osc.true_anomaly, trackers, osc, mean)
