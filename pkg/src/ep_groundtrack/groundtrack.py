"""Repeat-groundtrack geometry and the groundtrack error signal."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constants import OMEGA_EARTH, R_EARTH
from .elements import TWO_PI, wrap_2pi

DEFAULT_X_LIM = 2000.0 / R_EARTH


@dataclass(frozen=True)
class TrackTarget:
    """Repeat ratio r = num/den (days per revolution) and equator-crossing target.

    ``target_longitude`` is the desired east longitude of the ascending node
    crossings; ``greenwich_epoch_longitude`` is the Greenwich longitude at
    epoch zero.
    """

    repeat_ratio_num: int
    repeat_ratio_den: int
    target_longitude: float = 0.0
    greenwich_epoch_longitude: float = 0.0
    earth_rate: float = OMEGA_EARTH
    error_tolerance: float = DEFAULT_X_LIM

    def __post_init__(self):
        if self.repeat_ratio_num <= 0 or self.repeat_ratio_den <= 0:
            raise ValueError("repeat ratio terms must be positive")
        if math.gcd(self.repeat_ratio_num, self.repeat_ratio_den) != 1:
            raise ValueError("repeat ratio terms must be coprime")
        if not 0.0 <= self.target_longitude < TWO_PI:
            raise ValueError("target longitude must be in [0, 2pi)")
        if not self.error_tolerance > 0.0:
            raise ValueError("error tolerance must be positive")

    @classmethod
    def from_ratio(cls, ratio, **kw) -> TrackTarget:
        r = Fraction(ratio)
        return cls(r.numerator, r.denominator, **kw)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.repeat_ratio_num, self.repeat_ratio_den)

    def greenwich_longitude(self, epoch: float) -> float:
        return self.greenwich_epoch_longitude + self.earth_rate * epoch


@dataclass(frozen=True)
class TrackErrorSample:
    epoch: float
    error: float
    gamma_unwrapped: float
    raan_unwrapped: float


def nodal_period(gamma_rate: float) -> float:
    if not gamma_rate > 0.0:
        raise ValueError(f"mean latitude rate must be positive, got {gamma_rate}")
    return TWO_PI / gamma_rate


def greenwich_nodal_period(raan_rate: float, earth_rate: float = OMEGA_EARTH) -> float:
    rel = earth_rate - raan_rate
    if not rel > 0.0:
        raise ValueError("Earth rate relative to the node must be positive")
    return TWO_PI / rel


def groundtrack_spacing(T_gamma, T_G) -> float:
    """Longitude spacing of consecutive ascending node crossings.

    The period ratio is formed before scaling by 2pi so that exact (Fraction)
    inputs give exactly ``2pi * r`` at the repeat condition.
    """
    if not (T_gamma > 0 and T_G > 0):
        raise ValueError("periods must be positive")
    return TWO_PI * (T_gamma / T_G)


def track_error(gamma: float, raan: float, target: TrackTarget, epoch: float) -> TrackErrorSample:
    """x = r*gamma + Omega - lambda_G(t) - lambda*, all angles unwrapped."""
    x = (float(target.ratio) * gamma + raan
         - target.greenwich_longitude(epoch) - target.target_longitude)
    return TrackErrorSample(epoch, x, gamma, raan)


def equator_crossing_longitude(raan: float, target: TrackTarget, epoch: float) -> float:
    """East longitude of the node at ``epoch``, in [0, 2pi)."""
    return wrap_2pi(raan - target.greenwich_longitude(epoch))


def target_longitude_for(gamma: float, raan: float, greenwich_epoch_longitude: float,
                         ratio, initial_error: float = 0.0, epoch: float = 0.0,
                         earth_rate: float = OMEGA_EARTH) -> float:
    """lambda* that makes the error equal ``initial_error`` (mod 2pi) at ``epoch``."""
    lam_g = greenwich_epoch_longitude + earth_rate * epoch
    return wrap_2pi(float(Fraction(ratio)) * gamma + raan - lam_g - initial_error)


def control_gain(target: TrackTarget, u_max: float, a_star: float) -> float:
    """k = 3 r u_max / a*: error curvature produced by full tangential thrust."""
    if u_max < 0.0 or not a_star > 0.0:
        raise ValueError("u_max must be non-negative and a* positive")
    return 3.0 * float(target.ratio) * u_max / a_star
