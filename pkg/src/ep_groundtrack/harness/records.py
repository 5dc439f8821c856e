"""Per-tick log records and their CSV serialization."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass
from pathlib import Path

CSV_COLUMNS = (
    "epoch_s", "x_true_rad", "x_meas_rad", "y_hat_rad", "ydot_hat_rad_s", "p_hat_rad_s2", "v",
    "y_lim_rad", "a_osc_m", "e_osc", "i_osc_rad", "a_mean_m", "f_drag_N", "f_hat_N", "alpha_rad",
)


@dataclass(frozen=True)
class LogRecord:
    epoch: float
    x_true: float
    x_meas: float
    y_hat: float
    ydot_hat: float
    p_hat: float
    v: int
    y_lim: float
    a_osc: float
    e_osc: float
    i_osc: float
    a_mean: float
    f_drag: float
    f_hat: float
    alpha: float


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def format_csv(records) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for rec in records:
        buf.write(",".join(_fmt(v) for v in astuple(rec)) + "\n")
    return buf.getvalue()


def write_csv(records, path) -> None:
    Path(path).write_text(format_csv(records))


def read_csv(path) -> list[LogRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected CSV header")
        out = []
        for row in reader:
            vals = [float(x) for x in row]
            vals[6] = int(vals[6])
            out.append(LogRecord(*vals))
    return out

