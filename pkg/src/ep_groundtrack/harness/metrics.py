"""Post-run metrics extracted from a tick log."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.signal import find_peaks

from ..errors import InsufficientDataError


@dataclass(frozen=True)
class MetricsSummary:
    """Run metrics; cycle-based fields are ``None`` when the log is too short."""

    duration: float
    switch_count: int
    settling_epoch: float | None
    max_abs_x_after_settling: float | None
    amplitude: float | None
    period: float | None
    burn_count: int
    burn_duration: float | None
    inter_burn_interval: float | None
    duty_cycle: float | None
    delta_v: float
    delta_e: float
    p_hat_mean: float | None
    p_hat_std: float | None

    def require(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise InsufficientDataError(f"{name} unavailable: the log holds less than one cycle")
        return value

    def as_lines(self) -> list[str]:
        return [f"{k} = {'unavailable' if v is None else v}" for k, v in asdict(self).items()]


def _transitions(epochs: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Epochs of 0->1 and 1->0 command changes."""
    dv = np.diff(v)
    return epochs[1:][dv > 0], epochs[1:][dv < 0]


def _cycle_shape(t: np.ndarray, x: np.ndarray) -> tuple[float | None, float | None]:
    """Peak-to-peak amplitude and period from prominent extrema of ``x``."""
    if len(x) < 3:
        return None, None
    prominence = 0.5 * (x.max() - x.min())
    if prominence <= 0.0:
        return None, None
    peaks, _ = find_peaks(x, prominence=prominence)
    troughs, _ = find_peaks(-x, prominence=prominence)
    if len(peaks) < 2 and len(troughs) < 2:
        return None, None
    amplitude = None
    if len(peaks) and len(troughs):
        amplitude = float(x[peaks].mean() - x[troughs].mean())
    ext = peaks if len(peaks) >= 2 else troughs
    return amplitude, float(np.diff(t[ext]).mean())


def summarize(records, u_max: float = 0.0, settle_transitions: int = 2,
              p_hat_after: float | None = None) -> MetricsSummary:
    """Metrics from a tick log.

    ``u_max`` converts firing time to delta-v (the log stores commands, not
    forces). Settling is the epoch of the ``settle_transitions``-th command
    change, or the log start when it is 0. ``p_hat_after`` (default: the
    settling epoch) opens the window of the steady-state disturbance
    statistics.
    """
    if len(records) == 0:
        raise InsufficientDataError("empty log")
    t = np.array([r.epoch for r in records])
    x = np.array([r.x_true for r in records])
    v = np.array([r.v for r in records])
    e = np.array([r.e_osc for r in records])
    p_hat = np.array([r.p_hat for r in records])
    dt = np.diff(t)
    delta_v = float(u_max * np.sum(v[:-1] * dt)) if len(t) > 1 else 0.0

    # secular eccentricity change from a linear fit, robust to short-period terms
    ok = np.isfinite(e)
    delta_e = 0.0
    if ok.sum() > 2 and t[ok][-1] > t[ok][0]:
        slope = np.polyfit(t[ok] - t[ok][0], e[ok], 1)[0]
        delta_e = float(slope * (t[ok][-1] - t[ok][0]))

    on, off = _transitions(t, v)
    changes = np.sort(np.concatenate([on, off]))
    if settle_transitions == 0:
        settling = float(t[0])
    elif len(changes) >= settle_transitions:
        settling = float(changes[settle_transitions - 1])
    else:
        settling = None

    max_x = amplitude = period = None
    if settling is not None:
        post = t >= settling
        max_x = float(np.max(np.abs(x[post])))
        amplitude, period = _cycle_shape(t[post], x[post])

    # burn statistics use only arcs that start after settling (steady cycle)
    if settling is not None:
        on = on[on >= settling]
    burns = [(a, b) for a in on for b in off[off > a][:1]]
    burn_len = float(np.mean([b - a for a, b in burns])) if burns else None
    interval = float(np.diff(on).mean()) if len(on) >= 2 else None
    duty = None
    if len(on) >= 2:
        span = (t >= on[0]) & (t < on[-1])
        idx = np.nonzero(span)[0]
        idx = idx[idx < len(dt)]
        duty = float(np.sum(v[idx] * dt[idx]) / (on[-1] - on[0]))

    start = p_hat_after if p_hat_after is not None else settling
    p_mean = p_std = None
    if start is not None:
        sel = t >= start
        if sel.sum() > 1:
            p_mean, p_std = float(p_hat[sel].mean()), float(p_hat[sel].std())

    return MetricsSummary(
        duration=float(t[-1] - t[0]), switch_count=int(len(changes)), settling_epoch=settling,
        max_abs_x_after_settling=max_x, amplitude=amplitude, period=period,
        burn_count=len(burns), burn_duration=burn_len, inter_burn_interval=interval,
        duty_cycle=duty, delta_v=delta_v, delta_e=delta_e, p_hat_mean=p_mean, p_hat_std=p_std)
