"""Walk four cycles on flat ground and look at what the planner produces.

On flat ground the contact switches close exactly where the plan expects
the sole to land, so the adaptation stays idle apart from sub-micron
corrections.  The interesting numbers are the balance ones.
"""
import numpy as np

from gaitadapt import GaitParams, plan_cycle, run, sample_plan, summarize
from gaitadapt import scenarios

p = GaitParams()
print(f"step {p.step_length} m, SSP {p.ssp_period} s, cycle {p.cycle_period} s")

# one cycle of the preplanned motion, cycle-local time
plan = plan_cycle(p, 0)
for t in np.linspace(0.0, p.cycle_period, 7):
    s = sample_plan(plan, t)
    print(f"t={t:4.2f}  swing x={s.left_foot.x: .4f} z={s.left_foot.z:.4f}  "
          f"pelvis y={s.pelvis.y: .4f} z={s.pelvis.z:.4f}  {s.phase.value}")

trace = run(scenarios.flat(n_cycles=4))
rep = summarize(trace)
print()
print(rep.to_text())

# distance from the ZMP to the nearest support polygon edge
margin = trace["zmp_margin"]
worst = int(np.nanargmin(margin))
print(f"tightest balance at t={trace['t'][worst]:.3f} s ({trace.phase[worst]}), margin {margin[worst] * 1e3:.1f} mm")
print(f"largest applied offset {np.abs(trace.total_offsets()).max():.2e} m")
