"""Step into a shallow hole, then one that is too deep.

When the switches are still open at the end of the swing, the foot and the
pelvis are lowered together by a fixed drop per tick until contact.  If the
double-support phase runs out first, the run stops with an error that
carries the tick where it happened.
"""
from gaitadapt import DSPExhaustedError, run
from gaitadapt import scenarios

sc = scenarios.hole(0.02)
trace = run(sc)
print(f"drop per tick h = {sc.step_drop * 1e3:.2f} mm")
for e in trace.events:
    L = e.landing
    print(f"  cycle {L.cycle} {L.path:7s} rest {L.rest_z * 1e3: 8.3f} mm  ground {e.terrain_height * 1e3: 6.1f} mm")

# the switches sit above the sole, so the stepped descent stops short of the
# ground and the last few millimetres come from the landing polynomial
low = trace["pelvis_dz"].min()
print(f"pelvis followed the foot down by {-low * 1e3:.2f} mm")

try:
    run(scenarios.hole(0.1, n_cycles=4))
except DSPExhaustedError as err:
    print(f"\n100 mm hole: {err}")
