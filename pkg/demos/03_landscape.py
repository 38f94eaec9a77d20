"""Detuning landscapes: one minimum without output mixing, two with it."""
import numpy as np

from upblockade import find_local_minima, sweep_detunings, upb_parameters

p = upb_parameters(gamma1=0.4, gamma2=0.0, F=1e-2)
for ratio in (0.0, 0.025, 0.1):
    grid = sweep_detunings(p.replace(gamma2=ratio * p.gamma1), (-2, 2), (-2, 2), resolution=101)
    minima = find_local_minima(grid)
    print(f"gamma2/gamma1={ratio:g}: {len(minima)} minima, log10 g2 range "
          f"[{np.log10(np.nanmin(grid.g2)):.1f}, {np.log10(np.nanmax(grid.g2)):.1f}]")
    for m in minima:
        print(f"  {m.label}: E1={m.E1:+.3f} E2={m.E2:+.3f} g2={m.g2:.3g}")
