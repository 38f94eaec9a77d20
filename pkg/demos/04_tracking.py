"""Follow the optimum as output mixing grows, with the pump held at N_out = 1e-3.

Numeric tracking costs a few seconds per step; the schedule is short here.
"""
from upblockade import calibrate_pump, track_minimum, upb_parameters
from upblockade.explore import numeric_observables

target = 1e-3
p = upb_parameters(gamma1=0.4, gamma2=0.0)
schedule = [0.0, 0.0125, 0.025, 0.05, 0.1]
records = track_minimum(p, schedule, "numeric", target)
base = records[0]
print(f"start: E1={base.E1:+.3f} E2={base.E2:+.3f} g2={base.g2:.4f} F={base.F:.3f}")

for r in records[1:]:
    q = p.replace(gamma2=r.ratio * p.gamma1)
    F = calibrate_pump(q.replace(E1=base.E1, E2=base.E2), target)
    g_fixed, _ = numeric_observables(q.replace(E1=base.E1, E2=base.E2, F=F))
    print(f"gamma2/gamma1={r.ratio:<6g} retuned g2={r.g2:.4f} at ({r.E1:+.3f}, {r.E2:+.3f}); "
          f"fixed detunings g2={g_fixed:.4f} ({g_fixed / r.g2:.1f}x worse)")
