"""Step onto a 20 mm block and back down again.

The block sits under the left foot's third footfall.  That foot touches
early (advance path) and the plan is shifted up by the touch height.  The
next footfall is back on the floor, so the other foot now finds ground
late (retard path).  After that the modifications are released over the
following single-support phases and the gait returns to the plan.
"""
import numpy as np

from gaitadapt import run, summarize
from gaitadapt import scenarios

sc = scenarios.block(0.02, n_cycles=9)
trace = run(sc)

print("landings:")
for e in trace.events:
    L = e.landing
    print(f"  cycle {L.cycle}  {L.side.value:5s} {L.path:7s} touch at {L.touch_time:.4f} s  "
          f"rest {L.rest_z * 1e3: 7.3f} mm over ground {e.terrain_height * 1e3:5.1f} mm")

offsets = np.abs(trace.total_offsets())
cycle = trace["cycle"]
print("\nlargest applied offset per cycle:")
for k in range(sc.n_cycles):
    print(f"  {k}: {offsets[cycle == k].max():.2e} m")

rep = summarize(trace)
print(f"\nmin ZMP margin {rep.min_zmp_margin * 1e3:.1f} mm, max landing speed {rep.max_landing_speed:.1e} m/s")
