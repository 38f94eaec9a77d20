"""Closed-form weak-pump g2 against the full numerics as the drive is lowered."""
from upblockade import g2_out, output_mode, solve, upb_parameters
from upblockade.analytic import analytic_observables

p = upb_parameters(gamma1=0.4, gamma2=0.02, E1=0.4, E2=0.2)
g_exact, _ = analytic_observables(p, form="exact")
g_grouped, _ = analytic_observables(p, form="paper")
print(f"weak-pump g2: exact {g_exact:.5g}, grouped form {g_grouped:.5g}")

for F in (1e-1, 1e-2, 1e-3):
    q = p.replace(F=F)
    g = g2_out(solve(q), output_mode(q))
    print(f"F={F:g}: numeric {g:.5g}, relative deviation from exact {abs(g_exact / g - 1):.2e}")
