"""Perturbing accelerations for the truth model.

The kernels are numba-compiled scalar code so the equations of motion stay
cheap inside the integrator; the public ``accel_*`` functions wrap them
with array/dataclass arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..constants import (AU, JD_J2000, MU_EARTH, MU_MOON, MU_SUN, OMEGA_EARTH,
                         R_EARTH, SOLAR_PRESSURE_1AU, ZONAL_J)
from ..elements import InertialState
from .ephemeris import moon_position, sun_position


@dataclass(frozen=True)
class SpacecraftBody:
    mass: float = 200.0
    drag_area: float = 1.0
    drag_coeff: float = 2.2
    srp_area: float = 1.0
    reflectivity_coeff: float = 1.3

    def __post_init__(self):
        for name in ("mass", "drag_area", "drag_coeff", "srp_area", "reflectivity_coeff"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class EnvironmentConfig:
    """Switchable environment surrogate.

    ``zonal_degree`` 0 means central gravity only; otherwise zonal terms
    J2..J<degree> are included. Density follows
    ``rho = density_ref * exp(-(h - ref_altitude)/scale_height)`` modulated by
    ``1 + diurnal_amplitude * cos(angle(position, sun))``.
    """

    zonal_degree: int = 6
    zonal_coeffs: tuple = ZONAL_J
    density_ref: float = 2.4615e-12
    ref_altitude: float = 460e3
    scale_height: float = 65e3
    diurnal_amplitude: float = 0.3
    sun_enabled: bool = True
    moon_enabled: bool = True
    srp_enabled: bool = True
    srp_pressure: float = SOLAR_PRESSURE_1AU
    epoch_jd: float = JD_J2000
    mu: float = MU_EARTH
    r_eq: float = R_EARTH
    earth_rate: float = OMEGA_EARTH

    def __post_init__(self):
        if self.zonal_degree != 0 and not 2 <= self.zonal_degree <= 6:
            raise ValueError("zonal_degree must be 0 or in 2..6")
        if not self.scale_height > 0.0:
            raise ValueError("scale_height must be positive")
        if self.density_ref < 0.0:
            raise ValueError("density_ref must be non-negative")
        if not 0.0 <= self.diurnal_amplitude < 1.0:
            raise ValueError("diurnal_amplitude must be in [0, 1)")

    @classmethod
    def two_body(cls, **kw) -> EnvironmentConfig:
        """Central gravity only."""
        base = dict(zonal_degree=0, density_ref=0.0, sun_enabled=False,
                    moon_enabled=False, srp_enabled=False)
        base.update(kw)
        return cls(**base)


@dataclass(frozen=True)
class RtnAcceleration:
    radial: float
    tangential: float
    normal: float

    def as_array(self) -> np.ndarray:
        return np.array([self.radial, self.tangential, self.normal])


# --- kernels ---

@njit(cache=True)
def _zonal(r, mu, re, jcoef, degree):
    x, y, z = r[0], r[1], r[2]
    rn = math.sqrt(x * x + y * y + z * z)
    ux, uy, uz = x / rn, y / rn, z / rn
    base = -mu / (rn * rn)
    ax, ay, az = base * ux, base * uy, base * uz
    if degree < 2:
        return np.array([ax, ay, az])
    s = uz
    # Legendre P_n(s) and P_n'(s) by recursion
    p_prev, p_cur = 1.0, s
    dp_prev, dp_cur = 0.0, 1.0
    ratio = re / rn
    scale = mu / (rn * rn) * ratio
    for n in range(2, degree + 1):
        p_next = ((2 * n - 1) * s * p_cur - (n - 1) * p_prev) / n
        dp_next = n * p_cur + s * dp_cur
        p_prev, p_cur = p_cur, p_next
        dp_prev, dp_cur = dp_cur, dp_next
        scale *= ratio
        c = scale * jcoef[n - 2]
        radial = c * ((n + 1) * p_cur + s * dp_cur)
        ax += radial * ux
        ay += radial * uy
        az += radial * uz - c * dp_cur
    return np.array([ax, ay, az])


@njit(cache=True)
def _density(r, sun_unit, rho0, h0, H, diurnal, re):
    rn = math.sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    rho = rho0 * math.exp(-(rn - re - h0) / H)
    if diurnal != 0.0:
        cpsi = (r[0] * sun_unit[0] + r[1] * sun_unit[1] + r[2] * sun_unit[2]) / rn
        rho *= 1.0 + diurnal * cpsi
    return rho


@njit(cache=True)
def _drag(r, v, sun_unit, ballistic, rho0, h0, H, diurnal, re, we):
    vrx = v[0] + we * r[1]
    vry = v[1] - we * r[0]
    vrz = v[2]
    vr = math.sqrt(vrx * vrx + vry * vry + vrz * vrz)
    rho = _density(r, sun_unit, rho0, h0, H, diurnal, re)
    c = -0.5 * rho * ballistic * vr
    return np.array([c * vrx, c * vry, c * vrz])


@njit(cache=True)
def _third_body(r, s, mu_b):
    dx, dy, dz = s[0] - r[0], s[1] - r[1], s[2] - r[2]
    d3 = (dx * dx + dy * dy + dz * dz) ** 1.5
    s3 = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]) ** 1.5
    return np.array([mu_b * (dx / d3 - s[0] / s3),
                     mu_b * (dy / d3 - s[1] / s3),
                     mu_b * (dz / d3 - s[2] / s3)])


@njit(cache=True)
def _in_shadow(r, s, re):
    sn = math.sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2])
    proj = (r[0] * s[0] + r[1] * s[1] + r[2] * s[2]) / sn
    if proj >= 0.0:
        return False
    px = r[0] - proj * s[0] / sn
    py = r[1] - proj * s[1] / sn
    pz = r[2] - proj * s[2] / sn
    return px * px + py * py + pz * pz < re * re


@njit(cache=True)
def _srp(r, s, coeff, re):
    if coeff == 0.0 or _in_shadow(r, s, re):
        return np.zeros(3)
    dx, dy, dz = r[0] - s[0], r[1] - s[1], r[2] - s[2]
    d = math.sqrt(dx * dx + dy * dy + dz * dz)
    c = coeff * (AU / d) ** 2 / d
    return np.array([c * dx, c * dy, c * dz])


@njit(cache=True)
def _rtn_to_eci(r, v, rtn):
    rn = math.sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    R0, R1, R2 = r[0] / rn, r[1] / rn, r[2] / rn
    hx = r[1] * v[2] - r[2] * v[1]
    hy = r[2] * v[0] - r[0] * v[2]
    hz = r[0] * v[1] - r[1] * v[0]
    hn = math.sqrt(hx * hx + hy * hy + hz * hz)
    N0, N1, N2 = hx / hn, hy / hn, hz / hn
    T0 = N1 * R2 - N2 * R1
    T1 = N2 * R0 - N0 * R2
    T2 = N0 * R1 - N1 * R0
    return np.array([rtn[0] * R0 + rtn[1] * T0 + rtn[2] * N0,
                     rtn[0] * R1 + rtn[1] * T1 + rtn[2] * N1,
                     rtn[0] * R2 + rtn[1] * T2 + rtn[2] * N2])


# parameter vector layout used by the equations of motion
P_MU, P_RE, P_DEG, P_BALLISTIC, P_RHO0, P_H0, P_H, P_DIURNAL, P_WE, P_SRP, \
    P_SUN, P_MOON, P_JD0 = range(13)


@njit(cache=True)
def _perturbed_accel(t, y, params, jcoef):
    r = y[:3]
    v = y[3:6]
    acc = _zonal(r, params[P_MU], params[P_RE], jcoef, int(params[P_DEG]))
    need_sun = params[P_SUN] != 0.0 or params[P_SRP] != 0.0 or \
        (params[P_RHO0] != 0.0 and params[P_DIURNAL] != 0.0)
    jd = params[P_JD0] + t / 86400.0
    if need_sun:
        s = sun_position(jd)
    else:
        s = np.array([AU, 0.0, 0.0])
    if params[P_RHO0] != 0.0:
        sn = math.sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2])
        acc += _drag(r, v, s / sn, params[P_BALLISTIC], params[P_RHO0], params[P_H0],
                     params[P_H], params[P_DIURNAL], params[P_RE], params[P_WE])
    if params[P_SUN] != 0.0:
        acc += _third_body(r, s, MU_SUN)
    if params[P_MOON] != 0.0:
        acc += _third_body(r, moon_position(jd), MU_MOON)
    if params[P_SRP] != 0.0:
        acc += _srp(r, s, params[P_SRP], params[P_RE])
    return acc


@njit(cache=True)
def equations_of_motion(t, y, params, jcoef, thrust_rtn):
    acc = _perturbed_accel(t, y, params, jcoef)
    if thrust_rtn[0] != 0.0 or thrust_rtn[1] != 0.0 or thrust_rtn[2] != 0.0:
        acc += _rtn_to_eci(y[:3], y[3:6], thrust_rtn)
    out = np.empty(6)
    out[:3] = y[3:6]
    out[3:] = acc
    return out


@dataclass(frozen=True)
class ForceModel:
    """Packed parameters for the compiled equations of motion."""

    body: SpacecraftBody
    env: EnvironmentConfig
    params: np.ndarray = field(init=False, repr=False)
    jcoef: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b, e = self.body, self.env
        p = np.zeros(13)
        p[P_MU] = e.mu
        p[P_RE] = e.r_eq
        p[P_DEG] = e.zonal_degree
        p[P_BALLISTIC] = b.drag_coeff * b.drag_area / b.mass
        p[P_RHO0] = e.density_ref
        p[P_H0] = e.ref_altitude
        p[P_H] = e.scale_height
        p[P_DIURNAL] = e.diurnal_amplitude
        p[P_WE] = e.earth_rate
        p[P_SRP] = (e.srp_pressure * b.reflectivity_coeff * b.srp_area / b.mass
                    if e.srp_enabled else 0.0)
        p[P_SUN] = float(e.sun_enabled)
        p[P_MOON] = float(e.moon_enabled)
        p[P_JD0] = e.epoch_jd
        jc = np.zeros(5)
        jc[:len(e.zonal_coeffs)] = e.zonal_coeffs
        object.__setattr__(self, "params", p)
        object.__setattr__(self, "jcoef", jc)

    def derivative(self, t: float, y: np.ndarray, thrust_rtn=None) -> np.ndarray:
        th = _ZERO3 if thrust_rtn is None else np.asarray(thrust_rtn, dtype=float)
        return equations_of_motion(t, y, self.params, self.jcoef, th)


_ZERO3 = np.zeros(3)


# --- public wrappers ---

def accel_zonal_gravity(state: InertialState, degree: int = 6, mu: float = MU_EARTH,
                        r_eq: float = R_EARTH, jcoef=ZONAL_J) -> np.ndarray:
    """Central plus zonal-harmonic gravity; ``degree`` 0 gives central only."""
    jc = np.zeros(5)
    jc[:len(jcoef)] = jcoef
    return _zonal(state.position, mu, r_eq, jc, int(degree))


def accel_drag(state: InertialState, body: SpacecraftBody, env: EnvironmentConfig,
               sun_direction) -> np.ndarray:
    s = np.asarray(sun_direction, dtype=float)
    s = s / np.linalg.norm(s)
    return _drag(state.position, state.velocity, s, body.drag_coeff * body.drag_area / body.mass,
                 env.density_ref, env.ref_altitude, env.scale_height, env.diurnal_amplitude,
                 env.r_eq, env.earth_rate)


def density(state: InertialState, env: EnvironmentConfig, sun_direction) -> float:
    s = np.asarray(sun_direction, dtype=float)
    return float(_density(state.position, s / np.linalg.norm(s), env.density_ref,
                          env.ref_altitude, env.scale_height, env.diurnal_amplitude, env.r_eq))


def third_body_accel(position, body_position, mu_body: float) -> np.ndarray:
    """Differential point-mass acceleration from a body at ``body_position``."""
    return _third_body(np.asarray(position, dtype=float),
                       np.asarray(body_position, dtype=float), mu_body)


def body_position(body: str, t: float, epoch_jd: float = JD_J2000) -> np.ndarray:
    jd = epoch_jd + t / 86400.0
    if body == "sun":
        return sun_position(jd)
    if body == "moon":
        return moon_position(jd)
    raise ValueError(f"unknown body {body!r}")


def accel_third_body(state: InertialState, t: float, body: str,
                     epoch_jd: float = JD_J2000) -> np.ndarray:
    mu_b = {"sun": MU_SUN, "moon": MU_MOON}.get(body)
    if mu_b is None:
        raise ValueError(f"unknown body {body!r}")
    return _third_body(state.position, body_position(body, t, epoch_jd), mu_b)


def in_shadow(state: InertialState, sun_pos, r_eq: float = R_EARTH) -> bool:
    return bool(_in_shadow(state.position, np.asarray(sun_pos, dtype=float), r_eq))


def accel_srp(state: InertialState, body: SpacecraftBody, env: EnvironmentConfig,
              sun_pos) -> np.ndarray:
    """Cannonball radiation pressure, zero inside the cylindrical shadow."""
    coeff = env.srp_pressure * body.reflectivity_coeff * body.srp_area / body.mass
    return _srp(state.position, np.asarray(sun_pos, dtype=float), coeff, env.r_eq)


def eci_to_rtn(state: InertialState, vector) -> RtnAcceleration:
    r, v = state.position, state.velocity
    h = np.cross(r, v)
    hn = np.linalg.norm(h)
    if hn <= 1e-12 * np.linalg.norm(r) * np.linalg.norm(v):
        raise ValueError("RTN frame undefined for zero angular momentum")
    R = r / np.linalg.norm(r)
    N = h / hn
    T = np.cross(N, R)
    w = np.asarray(vector, dtype=float)
    return RtnAcceleration(float(R @ w), float(T @ w), float(N @ w))


def rtn_to_eci(state: InertialState, rtn) -> np.ndarray:
    if isinstance(rtn, RtnAcceleration):
        rtn = rtn.as_array()
    return _rtn_to_eci(state.position, state.velocity, np.asarray(rtn, dtype=float))
