"""Dormand-Prince 5(4) integrator with PI step control and dense output."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import IntegrationError

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
               -10690763975 / 1880347072, 701980252875 / 199316789632,
               -1453857185 / 822651844, 69997945 / 29380423])

SAFETY = 0.9
BETA = 0.04
EXPO = 0.2 - 0.75 * BETA
# bounds on the step ratio h_new / h
FAC_MIN = 0.2
FAC_MAX = 10.0


@dataclass
class IntegrationResult:
    t: float
    y: np.ndarray
    h_next: float
    n_steps: int
    n_rejected: int
    n_eval: int
    t_samples: np.ndarray
    y_samples: np.ndarray


def _initial_step(fun, t0, y0, f0, direction, rtol, atol):
    sc = atol + np.abs(y0) * rtol
    d0 = math.sqrt(np.mean((y0 / sc) ** 2))
    d1 = math.sqrt(np.mean((f0 / sc) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = fun(t0 + direction * h0, y1)
    d2 = math.sqrt(np.mean(((f1 - f0) / sc) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def dopri5(fun, t0: float, y0, t1: float, rtol: float = 1e-12, atol=1e-12,
           h0: float | None = None, t_eval=None, max_step: float = math.inf,
           min_step: float = 1e-9, max_steps: int = 10_000_000) -> IntegrationResult:
    """Integrate ``y' = fun(t, y)`` from ``t0`` to ``t1``.

    ``atol`` may be a scalar or a per-component array. ``t_eval`` epochs
    (inside the span, in integration order) are filled from the continuous
    extension of each accepted step. Raises IntegrationError when the
    controller asks for a step below ``min_step``.
    """
    y = np.array(y0, dtype=float)
    atol = np.broadcast_to(np.asarray(atol, dtype=float), y.shape)
    t = float(t0)
    span = float(t1) - t
    direction = 1.0 if span >= 0.0 else -1.0
    samples_t = np.asarray([] if t_eval is None else t_eval, dtype=float)
    samples_y = np.empty((len(samples_t), len(y)))
    i_sample = 0
    while i_sample < len(samples_t) and samples_t[i_sample] == t:
        samples_y[i_sample] = y
        i_sample += 1

    K = np.empty((7, len(y)))
    K[0] = fun(t, y)
    n_eval = 1
    if span == 0.0:
        return IntegrationResult(t, y, h0 or 0.0, 0, 0, n_eval, samples_t, samples_y)
    h = h0 if h0 else _initial_step(fun, t, y, K[0], direction, rtol, atol)
    h = min(abs(h), max_step)
    fac_old = 1e-4
    n_steps = n_rej = 0
    last = False
    rejected = False

    while not last:
        if n_steps >= max_steps:
            raise IntegrationError("maximum number of steps exceeded")
        remaining = (t1 - t) * direction
        if h >= remaining * (1.0 - 1e-12):
            h_try = remaining
            last = True
        else:
            h_try = h
        if h_try < min_step and not last:
            raise IntegrationError(f"step size {h_try:.3e} s below minimum at t={t:.3f} s")
        hs = direction * h_try

        for s in range(1, 7):
            K[s] = fun(t + _C[s] * hs, y + hs * (_A[s - 1] @ K[:s]))
        n_eval += 6
        y_new = y + hs * (_A[5] @ K[:6])
        err_vec = hs * (_E @ K)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(np.mean((err_vec / sc) ** 2))

        fac11 = err ** EXPO if err > 0.0 else 0.0
        if err <= 1.0:
            fac = fac11 / fac_old ** BETA
            fac = min(1.0 / FAC_MIN, max(1.0 / FAC_MAX, fac / SAFETY))
            t_new = t1 if last else t + hs
            if i_sample < len(samples_t):
                i_sample = _fill_samples(samples_t, samples_y, i_sample, t, t_new, hs,
                                         y, y_new, K, direction)
            fac_old = max(err, 1e-4)
            h_next = h_try / fac
            if rejected:
                h_next = min(h_next, h_try)
            y = y_new
            t = t_new
            K[0] = K[6]
            n_steps += 1
            rejected = False
            if not last:
                h = min(h_next, max_step)
            else:
                h = min(max(h, h_next) if h_try < h else h_next, max_step)
        else:
            last = False
            h = h_try / min(1.0 / FAC_MIN, fac11 / SAFETY)
            n_rej += 1
            rejected = True
    return IntegrationResult(t, y, h, n_steps, n_rej, n_eval, samples_t, samples_y)


def _fill_samples(ts, ys, i, t_old, t_new, hs, y_old, y_new, K, direction):
    ydiff = y_new - y_old
    bspl = hs * K[0] - ydiff
    r4 = ydiff - hs * K[6] - bspl
    r5 = hs * (_D @ K)
    while i < len(ts) and (ts[i] - t_new) * direction <= 0.0:
        th = (ts[i] - t_old) / hs
        th1 = 1.0 - th
        ys[i] = y_old + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)))
        i += 1
    return i
