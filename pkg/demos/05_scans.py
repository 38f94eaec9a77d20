"""Best g2 along lines of fixed inter-cavity detuning, and the cost of pure dephasing."""
import numpy as np

from upblockade import scan_dephasing, scan_fixed_detuning, upb_parameters

p = upb_parameters(gamma1=0.3, gamma2=0.03, input_mixing=True)
deltas = np.arange(-0.5, 3.01, 0.5)
# the weak-pump engine makes the full scan take a second
for pt in scan_fixed_detuning(p, deltas, engine="analytic", target_n_out=None):
    print(f"delta12={pt.delta12:+.2f}: E1={pt.E1:+.3f} g2={pt.g2:.4g}")

# dephasing at N_out = 1e-3 along the line through the undephased optimum:
# the minimum rises steeply while its position barely moves
q = upb_parameters(gamma1=0.4, gamma2=0.0)
for pt in scan_dephasing(q, [0.0, 0.01 * q.U, 0.1 * q.U], target_n_out=1e-3, delta12=-0.31):
    print(f"Gpd={pt.Gpd / q.U:.2f} U: g2={pt.g2:.4f} at ({pt.E1:+.4f}, {pt.E2:+.4f}), F={pt.F:.3f}")
