"""CSV and text output.  Floats are written with ``repr`` so they round-trip."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import GaitParams
from .planner import sample_trajectory
from .simulator import JOINT_COLUMNS, POSE_COLUMNS, SimTrace, summarize

TRACE_COLUMNS = ("t", "cycle", "swing_side", "phase", *POSE_COLUMNS, *JOINT_COLUMNS,
                 "dx_foot", "dz_foot", "dz_pelvis", "left_dx", "left_dz", "right_dx", "right_dz",
                 "pelvis_dz", "con_sw_left", "con_sw_right", "swing_landed",
                 "zmp_x", "zmp_y", "zmp_margin", "mu_req")
ZMP_COLUMNS = ("t", "zmp_x", "zmp_y", "zmp_margin", "mu_req")
OFFSETS_COLUMNS = ("t", "dx_foot", "dz_foot", "dz_pelvis", "phase", "con_sw_left", "con_sw_right",
                   "left_dx", "left_dz", "right_dx", "right_dz", "pelvis_dz")
JOINTS_COLUMNS = ("t", *JOINT_COLUMNS)
_INT_COLUMNS = {"cycle", "con_sw_left", "con_sw_right", "swing_landed"}


def _cell(name: str, value) -> str:
    if isinstance(value, str):
        return value
    if name in _INT_COLUMNS:
        return str(int(value))
    return repr(float(value))


def write_columns(path: str | Path, names, getter, n: int) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        cols = [getter(c) for c in names]
        for i in range(n):
            w.writerow([_cell(c, col[i]) for c, col in zip(names, cols)])


def _trace_getter(trace: SimTrace):
    def get(name):
        if name == "phase":
            return trace.phase
        if name == "swing_side":
            return trace.swing_side
        return trace.columns[name]
    return get


def write_trace(trace: SimTrace, out_dir: str | Path) -> list[Path]:
    """Write ``trace.csv``, ``zmp.csv``, ``offsets.csv``, ``joints.csv`` and ``report.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    get = _trace_getter(trace)
    files = []
    for name, cols in (("trace.csv", TRACE_COLUMNS), ("zmp.csv", ZMP_COLUMNS),
                       ("offsets.csv", OFFSETS_COLUMNS), ("joints.csv", JOINTS_COLUMNS)):
        write_columns(out / name, cols, get, len(trace))
        files.append(out / name)
    (out / "report.txt").write_text(summarize(trace).to_text(), encoding="utf-8")
    files.append(out / "report.txt")
    return files


def write_plan(p: GaitParams, path: str | Path, n_cycles: int = 2, rate_hz: float = 200.0) -> Path:
    """Preplanned world-frame trajectories (no adaptation) to CSV."""
    cols = sample_trajectory(p, n_cycles, rate_hz)
    names = tuple(cols)
    write_columns(path, names, cols.__getitem__, len(cols["t"]))
    return Path(path)


def read_csv(path: str | Path) -> dict[str, np.ndarray | list[str]]:
    """Load a CSV written here; numeric columns become float arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        vals = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in vals])
        except ValueError:
            out[name] = vals
    return out
