"""Low-precision analytic Sun and Moon positions (ECI, metres).

Series from the Astronomical Almanac low-precision formulae (arcminute
class), which is ample for point-mass perturbations and eclipse geometry.
"""

import math

import numpy as np
from numba import njit

from ..constants import AU, JD_J2000, R_EARTH

_DEG = math.pi / 180.0


@njit(cache=True)
def sun_position(jd):
    T = (jd - JD_J2000) / 36525.0
    lam_m = 280.460 + 36000.771 * T
    M = (357.5291092 + 35999.05034 * T) * _DEG
    lam = (lam_m + 1.914666471 * math.sin(M) + 0.019994643 * math.sin(2.0 * M)) * _DEG
    r = (1.000140612 - 0.016708617 * math.cos(M) - 0.000139589 * math.cos(2.0 * M)) * AU
    eps = (23.439291 - 0.0130042 * T) * _DEG
    out = np.empty(3)
    out[0] = r * math.cos(lam)
    out[1] = r * math.cos(eps) * math.sin(lam)
    out[2] = r * math.sin(eps) * math.sin(lam)
    return out


@njit(cache=True)
def moon_position(jd):
    T = (jd - JD_J2000) / 36525.0
    lam = (218.32 + 481267.8813 * T
           + 6.29 * math.sin((134.9 + 477198.85 * T) * _DEG)
           - 1.27 * math.sin((259.2 - 413335.38 * T) * _DEG)
           + 0.66 * math.sin((235.7 + 890534.23 * T) * _DEG)
           + 0.21 * math.sin((269.9 + 954397.70 * T) * _DEG)
           - 0.19 * math.sin((357.5 + 35999.05 * T) * _DEG)
           - 0.11 * math.sin((186.6 + 966404.05 * T) * _DEG)) * _DEG
    phi = (5.13 * math.sin((93.3 + 483202.03 * T) * _DEG)
           + 0.28 * math.sin((228.2 + 960400.87 * T) * _DEG)
           - 0.28 * math.sin((318.3 + 6003.18 * T) * _DEG)
           - 0.17 * math.sin((217.6 - 407332.20 * T) * _DEG)) * _DEG
    parallax = (0.9508
                + 0.0518 * math.cos((134.9 + 477198.85 * T) * _DEG)
                + 0.0095 * math.cos((259.2 - 413335.38 * T) * _DEG)
                + 0.0078 * math.cos((235.7 + 890534.23 * T) * _DEG)
                + 0.0028 * math.cos((269.9 + 954397.70 * T) * _DEG)) * _DEG
    eps = (23.439291 - 0.0130042 * T) * _DEG
    r = R_EARTH / math.sin(parallax)
    cphi = math.cos(phi)
    out = np.empty(3)
    out[0] = r * cphi * math.cos(lam)
    out[1] = r * (math.cos(eps) * cphi * math.sin(lam) - math.sin(eps) * math.sin(phi))
    out[2] = r * (math.sin(eps) * cphi * math.sin(lam) + math.cos(eps) * math.sin(phi))
    return out
