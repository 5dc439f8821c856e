"""Truth-model dynamics: force models, integrator and propagation."""

from .forces import (EnvironmentConfig, ForceModel, RtnAcceleration, SpacecraftBody,
                     accel_drag, accel_srp, accel_third_body, accel_zonal_gravity,
                     body_position, density, eci_to_rtn, in_shadow, rtn_to_eci,
                     third_body_accel)
from .integrator import dopri5
from .propagator import Propagator, Trajectory, propagate, tangential_thrust

__all__ = [
    "EnvironmentConfig", "ForceModel", "RtnAcceleration", "SpacecraftBody",
    "accel_drag", "accel_srp", "accel_third_body", "accel_zonal_gravity", "body_position",
    "density", "eci_to_rtn", "in_shadow", "rtn_to_eci", "third_body_accel", "dopri5",
    "Propagator", "Trajectory", "propagate", "tangential_thrust",
]
