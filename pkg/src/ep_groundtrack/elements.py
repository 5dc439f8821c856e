"""Orbital element sets, Cartesian conversions and mean-element filtering.

Angles are radians, lengths metres. Near-circular and near-equatorial
orbits are handled with the node-relative convention: below the singularity
thresholds the argument of periapsis (resp. the RAAN) is set to zero and the
phase is folded into the anomaly (resp. the argument of periapsis), so that
the mean latitude ``M + omega`` and the RAAN stay well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .constants import J2, MU_EARTH, R_EARTH
from .errors import DegenerateOrbitError, RegimeError, StepTooLargeError

TWO_PI = 2.0 * math.pi
ECC_SINGULAR = 1e-8
INC_SINGULAR = 1e-8
KEPLER_TOL = 1e-12
KEPLER_MAX_ITER = 50
MEAN_THEORY_MAX_ECC = 0.1

AnomalyKind = Literal["mean", "true", "eccentric"]
Variant = Literal["osculating", "mean"]


def wrap_2pi(angle: float) -> float:
    """Wrap to [0, 2pi)."""
    w = math.fmod(angle, TWO_PI)
    if w < 0.0:
        w += TWO_PI
    return 0.0 if w == TWO_PI else w


def wrap_pi(angle: float) -> float:
    """Wrap to [-pi, pi)."""
    return wrap_2pi(angle + math.pi) - math.pi


# --- anomaly conversions ---

def eccentric_from_mean(M: float, e: float) -> float:
    """Solve Kepler's equation ``M = E - e sin E`` by Newton iteration."""
    E = M
    for _ in range(KEPLER_MAX_ITER):
        dE = (E - e * math.sin(E) - M) / (1.0 - e * math.cos(E))
        E -= dE
        if abs(dE) < KEPLER_TOL:
            return E
    raise RegimeError(f"Kepler iteration did not converge (M={M}, e={e})")


def true_from_eccentric(E: float, e: float) -> float:
    return 2.0 * math.atan2(math.sqrt(1.0 + e) * math.sin(0.5 * E),
                            math.sqrt(1.0 - e) * math.cos(0.5 * E))


def eccentric_from_true(f: float, e: float) -> float:
    return 2.0 * math.atan2(math.sqrt(1.0 - e) * math.sin(0.5 * f),
                            math.sqrt(1.0 + e) * math.cos(0.5 * f))


def mean_from_eccentric(E: float, e: float) -> float:
    return E - e * math.sin(E)


def true_from_mean(M: float, e: float) -> float:
    if e == 0.0:
        return M
    k = math.floor((M + math.pi) / TWO_PI)
    f = true_from_eccentric(eccentric_from_mean(M - k * TWO_PI, e), e)
    return f + k * TWO_PI


def mean_from_true(f: float, e: float) -> float:
    if e == 0.0:
        return f
    k = math.floor((f + math.pi) / TWO_PI)
    M = mean_from_eccentric(eccentric_from_true(f - k * TWO_PI, e), e)
    return M + k * TWO_PI


# --- value types ---

@dataclass(frozen=True)
class OrbitalElements:
    """Keplerian element set with explicit anomaly kind and variant."""

    semi_major_axis: float
    eccentricity: float
    inclination: float
    raan: float
    arg_periapsis: float
    anomaly: float
    anomaly_kind: AnomalyKind = "true"
    variant: Variant = "osculating"

    def __post_init__(self):
        if not self.semi_major_axis > 0.0:
            raise ValueError(f"semi-major axis must be positive, got {self.semi_major_axis}")
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError(f"eccentricity must be in [0, 1), got {self.eccentricity}")
        if not 0.0 <= self.inclination <= math.pi:
            raise ValueError(f"inclination must be in [0, pi], got {self.inclination}")
        if self.anomaly_kind not in ("mean", "true", "eccentric"):
            raise ValueError(f"unknown anomaly kind {self.anomaly_kind!r}")
        if self.variant not in ("osculating", "mean"):
            raise ValueError(f"unknown variant {self.variant!r}")

    @property
    def mean_anomaly(self) -> float:
        e = self.eccentricity
        if self.anomaly_kind == "mean":
            return self.anomaly
        if self.anomaly_kind == "eccentric":
            return mean_from_eccentric(self.anomaly, e)
        return mean_from_true(self.anomaly, e)

    @property
    def true_anomaly(self) -> float:
        e = self.eccentricity
        if self.anomaly_kind == "true":
            return self.anomaly
        if self.anomaly_kind == "eccentric":
            return true_from_eccentric(self.anomaly, e)
        return true_from_mean(self.anomaly, e)

    @property
    def eccentric_anomaly(self) -> float:
        e = self.eccentricity
        if self.anomaly_kind == "eccentric":
            return self.anomaly
        if self.anomaly_kind == "true":
            return eccentric_from_true(self.anomaly, e)
        return eccentric_from_mean(wrap_pi(self.anomaly), e)

    @property
    def mean_latitude(self) -> float:
        """gamma = M + omega."""
        return self.mean_anomaly + self.arg_periapsis

    @property
    def argument_of_latitude(self) -> float:
        return self.true_anomaly + self.arg_periapsis

    def mean_motion(self, mu: float = MU_EARTH) -> float:
        return math.sqrt(mu / self.semi_major_axis**3)

    def with_anomaly(self, kind: AnomalyKind) -> OrbitalElements:
        value = {"mean": self.mean_anomaly, "true": self.true_anomaly,
                 "eccentric": self.eccentric_anomaly}[kind]
        return replace(self, anomaly=value, anomaly_kind=kind)


@dataclass(frozen=True)
class InertialState:
    """Earth-centred inertial position (m) and velocity (m/s) at an epoch (s)."""

    position: np.ndarray
    velocity: np.ndarray
    epoch: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(3))
        object.__setattr__(self, "velocity", np.asarray(self.velocity, dtype=float).reshape(3))

    @classmethod
    def from_vector(cls, y, epoch: float = 0.0) -> InertialState:
        y = np.asarray(y, dtype=float)
        return cls(y[:3].copy(), y[3:6].copy(), epoch)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity])

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.position))

    @property
    def angular_momentum(self) -> np.ndarray:
        return np.cross(self.position, self.velocity)


# --- Cartesian <-> Keplerian ---

def cart_to_kep(state: InertialState, mu: float = MU_EARTH) -> OrbitalElements:
    """Osculating elements of an inertial state (true anomaly)."""
    rx, ry, rz = (float(c) for c in state.position)
    vx, vy, vz = (float(c) for c in state.velocity)
    r = math.sqrt(rx * rx + ry * ry + rz * rz)
    v2 = vx * vx + vy * vy + vz * vz
    hx = ry * vz - rz * vy
    hy = rz * vx - rx * vz
    hz = rx * vy - ry * vx
    h = math.sqrt(hx * hx + hy * hy + hz * hz)
    if r == 0.0 or h <= 1e-12 * r * math.sqrt(v2 + 1e-300):
        raise DegenerateOrbitError("angular momentum is zero (rectilinear orbit)")

    energy = 0.5 * v2 - mu / r
    if energy >= 0.0:
        raise DegenerateOrbitError("orbit is not elliptical")
    a = -mu / (2.0 * energy)

    # e = (v x h)/mu - r/|r|
    ex = (vy * hz - vz * hy) / mu - rx / r
    ey = (vz * hx - vx * hz) / mu - ry / r
    ez = (vx * hy - vy * hx) / mu - rz / r
    e = math.sqrt(ex * ex + ey * ey + ez * ez)
    if e >= 1.0 - 1e-12:
        raise DegenerateOrbitError(f"eccentricity {e} is not elliptical")

    hxy = math.hypot(hx, hy)
    inc = math.atan2(hxy, hz)
    wx, wy, wz = hx / h, hy / h, hz / h
    if hxy < INC_SINGULAR * h:
        raan = 0.0
        px, py, pz = 1.0, 0.0, 0.0
    else:
        raan = wrap_2pi(math.atan2(hx, -hy))
        px, py, pz = math.cos(raan), math.sin(raan), 0.0
    # Q = W x P completes the in-plane basis
    qx = wy * pz - wz * py
    qy = wz * px - wx * pz
    qz = wx * py - wy * px

    u = math.atan2(rx * qx + ry * qy + rz * qz, rx * px + ry * py + rz * pz)
    if e < ECC_SINGULAR:
        argp = 0.0
        f = u
    else:
        argp = math.atan2(ex * qx + ey * qy + ez * qz, ex * px + ey * py + ez * pz)
        f = u - argp
    return OrbitalElements(a, e, inc, raan, wrap_2pi(argp), wrap_2pi(f), "true", "osculating")


def kep_to_cart(elements: OrbitalElements, mu: float = MU_EARTH, epoch: float = 0.0) -> InertialState:
    a = elements.semi_major_axis
    e = elements.eccentricity
    inc = elements.inclination
    raan = elements.raan
    argp = elements.arg_periapsis
    f = elements.true_anomaly

    p = a * (1.0 - e * e)
    r = p / (1.0 + e * math.cos(f))
    u = argp + f
    cO, sO = math.cos(raan), math.sin(raan)
    ci, si = math.cos(inc), math.sin(inc)
    P = np.array([cO, sO, 0.0])
    Q = np.array([-sO * ci, cO * ci, si])
    cu, su = math.cos(u), math.sin(u)
    vp = math.sqrt(mu / p)
    position = r * (cu * P + su * Q)
    velocity = vp * (-(su + e * math.sin(argp)) * P + (cu + e * math.cos(argp)) * Q)
    return InertialState(position, velocity, epoch)


# --- mean elements (first-order J2 short-period theory) ---

def _j2_short_period(a, e, inc, raan, argp, M, gamma2):
    """Apply the first-order J2 short-period map with Lyddane's recombination.

    ``gamma2 = +J2/2 (R/a)^2`` maps mean to osculating elements, the negated
    value maps osculating to mean. Only short-period terms are kept; the
    recombination through ``(e sin M, e cos M)`` and ``(sin(i/2) sin Omega,
    sin(i/2) cos Omega)`` avoids the 1/e and 1/sin(i) singularities.
    """
    eta2 = 1.0 - e * e
    eta = math.sqrt(eta2)
    g1 = gamma2 / eta2**2
    f = true_from_mean(M, e)
    th = math.cos(inc)
    th2 = th * th
    s2 = 1.0 - th2
    a_r = (1.0 + e * math.cos(f)) / eta2
    cf = math.cos(f)
    eq_center = f - M + e * math.sin(f)

    c2u = math.cos(2.0 * argp + 2.0 * f)
    s2u = math.sin(2.0 * argp + 2.0 * f)
    c1 = math.cos(2.0 * argp + f)
    s1 = math.sin(2.0 * argp + f)
    c3 = math.cos(2.0 * argp + 3.0 * f)
    s3 = math.sin(2.0 * argp + 3.0 * f)

    a_new = a + a * gamma2 * ((3.0 * th2 - 1.0) * (a_r**3 - 1.0 / eta**3)
                              + 3.0 * s2 * a_r**3 * c2u)

    radial = e + 3.0 * cf + 3.0 * e * cf * cf + e * e * cf**3
    de = 0.5 * eta2 * (
        gamma2 * ((3.0 * th2 - 1.0) / eta2**3 * (e * eta + e / (1.0 + eta) + 3.0 * cf
                                                  + 3.0 * e * cf * cf + e * e * cf**3)
                  + 3.0 * s2 / eta2**3 * radial * c2u)
        - g1 * s2 * (3.0 * c1 + c3))

    di = 0.5 * g1 * th * math.sqrt(s2) * (3.0 * c2u + 3.0 * e * c1 + e * c3)

    periodic = 3.0 * s2u + 3.0 * e * s1 + e * s3
    dRAAN = -0.5 * g1 * th * (6.0 * eq_center - periodic)
    lam_sum = (M + argp + raan
               + 0.25 * g1 * (-6.0 * (1.0 - 5.0 * th2) * eq_center + (3.0 - 5.0 * th2) * periodic)
               + dRAAN)

    ar_eta2 = (a_r * eta) ** 2
    e_dM = -0.25 * g1 * eta**3 * (
        2.0 * (3.0 * th2 - 1.0) * (ar_eta2 + a_r + 1.0) * math.sin(f)
        + 3.0 * s2 * ((-ar_eta2 - a_r + 1.0) * s1 + (ar_eta2 + a_r + 1.0 / 3.0) * s3))

    sM, cM = math.sin(M), math.cos(M)
    d1 = (e + de) * sM + e_dM * cM
    d2 = (e + de) * cM - e_dM * sM
    e_new = math.hypot(d1, d2)
    M_new = math.atan2(d1, d2)

    shi, chi = math.sin(0.5 * inc), math.cos(0.5 * inc)
    sO, cO = math.sin(raan), math.cos(raan)
    d3 = (shi + 0.5 * chi * di) * sO + shi * dRAAN * cO
    d4 = (shi + 0.5 * chi * di) * cO - shi * dRAAN * sO
    inc_new = 2.0 * math.asin(min(1.0, math.hypot(d3, d4)))
    raan_new = math.atan2(d3, d4) if (d3 != 0.0 or d4 != 0.0) else raan
    argp_new = lam_sum - raan_new - M_new
    return a_new, e_new, inc_new, raan_new, argp_new, M_new


def _nonsingular(a, e, inc, raan, argp, M):
    return np.array([a, e * math.cos(argp), e * math.sin(argp), inc, raan, M + argp])


def _from_nonsingular(x, variant: Variant) -> OrbitalElements:
    a, ex, ey, inc, raan, lam = (float(c) for c in x)
    e = math.hypot(ex, ey)
    argp = math.atan2(ey, ex) if e >= ECC_SINGULAR else 0.0
    inc = min(max(inc, 0.0), math.pi)
    return OrbitalElements(a, e, inc, wrap_2pi(raan), wrap_2pi(argp),
                           wrap_2pi(lam - argp), "mean", variant)


def _angle_diff(x, y):
    d = x - y
    for k in (3, 4, 5):
        d[k] = wrap_pi(d[k])
    return d


def mean_to_osc(mean: OrbitalElements, j2: float = J2, r_eq: float = R_EARTH) -> OrbitalElements:
    """Osculating elements corresponding to a mean element set."""
    if j2 == 0.0:
        return replace(mean, variant="osculating")
    a, e, M = mean.semi_major_axis, mean.eccentricity, mean.mean_anomaly
    gamma2 = 0.5 * j2 * (r_eq / a) ** 2
    out = _j2_short_period(a, e, mean.inclination, mean.raan, mean.arg_periapsis, M, gamma2)
    return _from_nonsingular(_nonsingular(*out), "osculating")


def osc_to_mean(osc: OrbitalElements, j2: float = J2, r_eq: float = R_EARTH,
                refinements: int = 1) -> OrbitalElements:
    """Mean elements with the first-order J2 short-period terms removed.

    The initial estimate applies the short-period map with negated J2 at the
    osculating elements; each refinement then corrects the estimate by the
    residual of the forward (mean to osculating) map, in nonsingular
    variables ``(a, e cos w, e sin w, i, Omega, M + w)``.
    """
    if j2 == 0.0:
        return replace(osc, variant="mean")
    if osc.eccentricity >= MEAN_THEORY_MAX_ECC:
        raise RegimeError(f"eccentricity {osc.eccentricity} outside near-circular mean theory")
    a, e, M = osc.semi_major_axis, osc.eccentricity, osc.mean_anomaly
    target = _nonsingular(a, e, osc.inclination, osc.raan, osc.arg_periapsis, M)
    gamma2 = -0.5 * j2 * (r_eq / a) ** 2
    guess = _nonsingular(*_j2_short_period(a, e, osc.inclination, osc.raan,
                                           osc.arg_periapsis, M, gamma2))
    for _ in range(refinements):
        mean = _from_nonsingular(guess, "mean")
        fwd = mean_to_osc(mean, j2, r_eq)
        guess = guess + _angle_diff(target, _nonsingular(
            fwd.semi_major_axis, fwd.eccentricity, fwd.inclination, fwd.raan,
            fwd.arg_periapsis, fwd.mean_anomaly))
    return _from_nonsingular(guess, "mean")


# --- unwrapping ---

@dataclass(frozen=True)
class AngleTracker:
    """Continuous (unwrapped) accumulation of a wrapped angle."""

    last_wrapped: float
    accumulated: float

    @classmethod
    def start(cls, angle: float) -> AngleTracker:
        return cls(wrap_2pi(angle), float(angle))


def unwrap(tracker: AngleTracker, new_wrapped: float, max_step: float = math.pi) -> AngleTracker:
    """Advance ``tracker`` by the shortest signed distance to ``new_wrapped``.

    Raises StepTooLargeError when the step reaches ``max_step``, which means
    the angle is sampled too coarsely to be unwrapped unambiguously.
    """
    step = wrap_pi(new_wrapped - tracker.last_wrapped)
    if abs(step) >= max_step:
        raise StepTooLargeError(f"angle step {step:.6f} rad exceeds {max_step:.6f} rad")
    return AngleTracker(wrap_2pi(new_wrapped), tracker.accumulated + step)
