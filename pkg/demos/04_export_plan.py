"""Write the preplanned walk and a simulated run to CSV.

These are the same files the command line tool writes.  Floats are
printed with ``repr`` so reading them back gives identical arrays.
"""
import sys
import tempfile
from pathlib import Path

import numpy as np

from gaitadapt import GaitParams, load_scenario, run
from gaitadapt.export import read_csv, write_plan, write_trace

root = Path(__file__).resolve().parents[1]
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="gaitadapt_"))
out.mkdir(parents=True, exist_ok=True)

plan_path = write_plan(GaitParams(), out / "plan.csv", n_cycles=2)
cols = read_csv(plan_path)
print(f"{plan_path}: {len(cols['t'])} rows, columns {', '.join(list(cols)[:6])}, ...")

trace = run(load_scenario(root / "scenarios" / "block_20mm.txt"))
for path in write_trace(trace, out):
    print(path)

back = read_csv(out / "trace.csv")
assert np.array_equal(back["pelvis_z"], trace["pelvis_z"])
print("trace.csv reads back bit for bit")
