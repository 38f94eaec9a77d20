"""Acceptance criteria A1-A10.

Each criterion runs at its stated tolerance and prints one ``A<n> PASS|FAIL``
line (repeated in the terminal summary). Expensive landscapes are computed
once per module. Every stationary state solved while this module runs is
recorded for the physicality criterion (A9).
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from upblockade import explore as ex
from upblockade import lindblad
from upblockade.analytic import analytic_observables, two_photon_numerator, weak_pump_amplitudes
from upblockade.fock import FockSpace
from upblockade.inout import OutputMode, g2_out
from upblockade.model import SystemParams, optimal_detunings, optimal_nonlinearity, upb_parameters

GAMMA1 = 0.4
A1_RATIOS = (0.0, 0.02, 0.04, 0.06, 0.08, 0.1)
A1_RES = 41
GRID_RES = 101
CELL = 4.0 / (GRID_RES - 1)
SCHEDULE = np.round(np.arange(0, 0.5 + 1e-9, 0.0125), 10)
TARGET = 1e-3
E_OPT = optimal_detunings(1.0)
E_LITERAL = (1 / (2 * math.sqrt(3)), -1 / (2 * math.sqrt(3)))


# -- physicality log -----------------------------------------------------------------


class PhysicalityLog:
    def __init__(self):
        self.count = 0
        self.violations = []
        self.worst = dict(trace_error=0.0, hermiticity_error=0.0, min_eigenvalue=0.0, residual=0.0)

    def __call__(self, rho, L):
        self.count += 1
        try:
            report = lindblad.check_density_matrix(rho, L)
        except lindblad.UnphysicalStateError as exc:
            self.violations.append(str(exc))
            raise
        for key in ("trace_error", "hermiticity_error", "residual"):
            self.worst[key] = max(self.worst[key], report[key])
        self.worst["min_eigenvalue"] = min(self.worst["min_eigenvalue"], report["min_eigenvalue"])
        return report


@pytest.fixture(scope="module", autouse=True)
def physicality():
    log = PhysicalityLog()
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(lindblad, "_check_physical", log)
        yield log


def _params(ratio, F=1e-2, mixing=False, gamma1=GAMMA1, **kw):
    return upb_parameters(gamma1=gamma1, gamma2=ratio * gamma1, F=F, input_mixing=mixing, **kw)


# -- shared landscapes -----------------------------------------------------------------


@pytest.fixture(scope="module")
def a1_data():
    data = {}
    for F in (1e-2, 1e-3):
        for ratio in A1_RATIOS:
            p = _params(ratio, F)
            grid = ex.sweep_detunings(p, (-2, 2), (-2, 2), A1_RES, engine="numeric")
            X, Y = np.meshgrid(grid.E1, grid.E2, indexing="ij")
            exact, _ = analytic_observables(p, X, Y, form="exact")
            grouped, _ = analytic_observables(p, X, Y, form="paper")
            data[F, ratio] = dict(numeric=grid.g2, exact=exact, grouped=grouped, failures=grid.failures)
    return data


@pytest.fixture(scope="module")
def a2_grid():
    return ex.sweep_detunings(_params(0.0), (-2, 2), (-2, 2), GRID_RES, engine="numeric")


@pytest.fixture(scope="module")
def a2_minimum(a2_grid):
    """Global minimum refined off the grid; the zero is narrower than one cell."""
    best = min(ex.find_local_minima(a2_grid), key=lambda m: m.g2)
    return best.E1, best.E2, best.g2


@pytest.fixture(scope="module")
def a5_tracks():
    return {
        mixing: ex.track_minimum(_params(0.0, mixing=mixing), SCHEDULE, "numeric", TARGET)
        for mixing in (False, True)
    }


A6_GAMMA1 = (0.2, 0.3, 0.4)
A6_RATIO = 0.1
A6_DELTAS_MIXED = np.round(np.arange(-0.5, 3.5 + 1e-9, 0.1), 10)
A6_DELTAS_CLEAN = np.round(np.arange(-0.5, 1.5 + 1e-9, 0.05), 10)


@pytest.fixture(scope="module")
def a6_scans():
    scans = {}
    for g1 in A6_GAMMA1:
        p = _params(A6_RATIO, mixing=True, gamma1=g1)
        scans[g1] = ex.scan_fixed_detuning(p, A6_DELTAS_MIXED, target_n_out=TARGET)
    scans["clean"] = ex.scan_fixed_detuning(_params(0.0), A6_DELTAS_CLEAN, target_n_out=TARGET)
    return scans


@pytest.fixture(scope="module")
def a7_scan():
    p = _params(0.0)
    rates = [0.0, 0.01 * p.U, 0.1 * p.U]
    free = ex.scan_dephasing(p, rates, target_n_out=TARGET)
    delta = free[0].E1 - free[0].E2
    line = ex.scan_dephasing(p, rates, target_n_out=TARGET, delta12=delta)
    return dict(free=free, line=line, delta=delta)


# -- criteria ------------------------------------------------------------------------


def _rel(a, b):
    return np.abs(a / b - 1)


def test_a1_weak_pump_equivalence(a1_data, verdict):
    worst_frac, shrink, grouped_frac = 1.0, [], 1.0
    for ratio in A1_RATIOS:
        hi, lo = a1_data[1e-2, ratio], a1_data[1e-3, ratio]
        assert not hi["failures"] and not lo["failures"]
        dev_hi = _rel(hi["exact"], hi["numeric"])
        dev_lo = _rel(lo["exact"], lo["numeric"])
        worst_frac = min(worst_frac, float(np.mean(dev_hi <= 0.05)))
        shrink.append(float(np.median(dev_hi / dev_lo)))
        grouped_frac = min(grouped_frac, float(np.mean(_rel(lo["grouped"], lo["numeric"]) <= 0.05)))
    exact_ok = worst_frac >= 0.99 and all(10**1.5 <= s <= 10**2.5 for s in shrink)
    grouped_converges = grouped_frac >= 0.99
    passed = exact_ok and not grouped_converges
    detail = (
        f"exact form within 5% at >= {100 * worst_frac:.2f}% of points (F=1e-2); "
        f"median deviation shrink F=1e-2 -> 1e-3: {min(shrink):.0f}x..{max(shrink):.0f}x; "
        f"printed grouped form within 5% at only {100 * grouped_frac:.1f}% of points at F=1e-3"
    )
    assert verdict("A1", passed, detail)


def test_a2_global_optimum(a2_grid, a2_minimum, verdict):
    E1, E2, g = a2_minimum
    c1, c2, gc = a2_grid.global_minimum()
    d = (E1 - E_LITERAL[0], E2 - E_LITERAL[1])
    passed = abs(d[0]) <= CELL and abs(d[1]) <= CELL
    detail = (
        f"numeric global minimum g2={g:.3g} at ({E1:.3f}, {E2:.3f}) (lowest cell g2={gc:.3g} at ({c1:.2f}, {c2:.2f})); "
        f"required within {CELL:.2f} of ({E_LITERAL[0]:.4f}, {E_LITERAL[1]:.4f}); "
        f"g2 there = {ex.numeric_observables(_params(0.0, E1=E_LITERAL[0], E2=E_LITERAL[1]))[0]:.3g}"
    )
    assert verdict("A2", passed, detail)


def test_a2_companion_equal_detunings(a2_minimum, verdict):
    E1, E2, g = a2_minimum
    passed = abs(E1 - E_OPT[0]) <= CELL and abs(E2 - E_OPT[1]) <= CELL
    p = _params(0.0)
    g_opt = ex.numeric_observables(p.replace(E1=E_OPT[0], E2=E_OPT[1]))[0]
    wp = ex.refine_minimum(ex.g2_objective(p, "analytic"), E_OPT)
    detail = (
        f"numeric global minimum g2={g:.3g} at ({E1:.3f}, {E2:.3f}) vs ({E_OPT[0]:.4f}, {E_OPT[1]:.4f}), "
        f"one cell = {CELL:.2f}; numeric g2 there {g_opt:.3g}; weak-pump optimum ({wp[0]:.3f}, {wp[1]:.3f})"
    )
    assert verdict("A2 companion", passed, detail)


def test_a3_minimum_splitting(a2_minimum, verdict):
    p = _params(0.025)
    grid = ex.sweep_detunings(p, (-2, 2), (-2, 2), GRID_RES, engine="analytic")
    minima = ex.find_local_minima(grid)
    E0 = a2_minimum[:2]
    shifts = [math.hypot(m.E1 - E0[0], m.E2 - E0[1]) for m in minima]
    numeric = [ex.numeric_observables(p.replace(E1=m.E1, E2=m.E2))[0] for m in minima]
    passed = len(minima) == 2 and all(s > CELL for s in shifts)
    detail = f"{len(minima)} minima: " + "; ".join(
        f"{m.label} ({m.E1:.3f}, {m.E2:.3f}) shift {s:.2f}, numeric g2 {gn:.3g}"
        for m, s, gn in zip(minima, shifts, numeric)
    )
    assert verdict("A3", passed, detail)


def test_a4_mixing_degradation(verdict):
    ratios = {}
    for mixing in (False, True):
        g = []
        for r in (0.0, 0.1):
            p = _params(r, mixing=mixing)
            F = ex.calibrate_pump(p, TARGET)
            g.append(ex.numeric_observables(p.replace(F=F))[0])
        ratios[mixing] = g[1] / g[0]
    passed = all(v >= 10 for v in ratios.values())
    detail = (
        f"g2(0.1)/g2(0) at fixed optimal detunings, N_out=1e-3: output-only {ratios[False]:.1f}x, "
        f"input+output {ratios[True]:.1f}x"
    )
    assert verdict("A4", passed, detail)


def test_a5_recovery_by_retuning(a5_tracks, verdict):
    parts, passed = [], True
    for mixing, recs in a5_tracks.items():
        g0 = recs[0].g2
        worst = max(max(r.g2 / g0, g0 / r.g2) for r in recs)
        calibrated = all(abs(r.n_out / TARGET - 1) <= 0.01 for r in recs)
        passed &= worst <= 3 and calibrated and len(recs) == len(SCHEDULE)
        parts.append(
            f"{'input+output' if mixing else 'output-only'}: g2 {g0:.4f} -> {recs[-1].g2:.4f}, "
            f"max factor {worst:.2f}, N_out calibrated {calibrated}"
        )
    assert verdict("A5", passed, "; ".join(parts))


def _best(points):
    g = np.array([q.g2 for q in points])
    return points[int(np.nanargmin(g))]


def test_a6_positive_optimal_detuning(a6_scans, verdict):
    best = {g1: _best(a6_scans[g1]) for g1 in A6_GAMMA1}
    clean = _best(a6_scans["clean"])
    step = A6_DELTAS_CLEAN[1] - A6_DELTAS_CLEAN[0]
    positive = all(b.delta12 > 0 for b in best.values())
    near = abs(clean.delta12 - 1 / math.sqrt(3)) <= step + 1e-12
    detail = (
        "optimal delta12 with gamma2=0.1 gamma1 (input+output): "
        + ", ".join(f"gamma1={g1}: {b.delta12:.2f}" for g1, b in best.items())
        + f"; gamma2=0: {clean.delta12:.2f} (required {1 / math.sqrt(3):.3f} +- {step:.2f})"
    )
    assert verdict("A6", positive and near, detail)


def test_a7_dephasing_sensitivity(a7_scan, verdict):
    base, _, strong = a7_scan["line"]
    fbase, _, fstrong = a7_scan["free"]
    shift = math.hypot(strong.E1 - base.E1, strong.E2 - base.E2)
    free_shift = math.hypot(fstrong.E1 - fbase.E1, fstrong.E2 - fbase.E2)
    passed = strong.g2 > base.g2 and shift < 0.1
    detail = (
        f"at delta12={a7_scan['delta']:.3f}: min g2 {base.g2:.4f} -> {strong.g2:.4f} "
        f"(factor {strong.g2 / base.g2:.2f}) at Gpd=0.1U, optimum moved {shift:.4f}; "
        f"unconstrained (E1,E2) search: {fbase.g2:.4f} -> {fstrong.g2:.4f}, moved {free_shift:.3f}"
    )
    assert verdict("A7", passed, detail)


def _random_draws(n, rng):
    g1 = rng.uniform(0.01, 0.5, n)
    return dict(
        E1=rng.uniform(-4, 4, n), E2=rng.uniform(-4, 4, n), gamma1=g1, gamma2=g1 * rng.uniform(1e-3, 1, n),
        J=rng.uniform(0.2, 5, n), U=rng.uniform(1e-3, 1, n), F=10 ** rng.uniform(-4, -1, n),
        mixing=rng.random(n) < 0.5,
    )


def _numerators(d, k):
    p = SystemParams(E1=d["E1"][k], E2=d["E2"][k], U=d["U"][k], J=d["J"][k], F=d["F"][k],
                     gamma1=d["gamma1"][k], gamma2=d["gamma2"][k], input_mixing=bool(d["mixing"][k]))
    amps, out = weak_pump_amplitudes(p), OutputMode(p.gamma1, p.gamma2)
    return two_photon_numerator(amps, out, "exact"), two_photon_numerator(amps, out, "paper")


def test_a8_no_perfect_output_antibunching(verdict):
    rng = np.random.default_rng(20240101)
    n = 20000
    d = _random_draws(n, rng)
    vals = np.array([_numerators(d, k) for k in range(n)])
    passed = bool(np.all(vals > 0))
    detail = (
        f"{n} random draws with gamma2>0, F>0: min exact numerator {vals[:, 0].min():.3g}, "
        f"min grouped numerator {vals[:, 1].min():.3g}"
    )
    assert verdict("A8", passed, detail)


@settings(max_examples=2000, deadline=None)
@given(
    st.floats(-4, 4), st.floats(-4, 4), st.floats(0.01, 0.5), st.floats(1e-3, 1), st.floats(0.2, 5),
    st.floats(1e-3, 1), st.floats(1e-4, 1e-1), st.booleans(),
)
def test_a8_property(E1, E2, g1, r, J, U, F, mixing):
    d = dict(E1=[E1], E2=[E2], gamma1=[g1], gamma2=[g1 * r], J=[J], U=[U], F=[F], mixing=[mixing])
    exact, grouped = _numerators(d, 0)
    assert exact > 0 and grouped > 0


def test_a9_physicality(physicality, a1_data, a2_grid, a2_minimum, a5_tracks, a6_scans, a7_scan, verdict):
    controls = []
    for mixing in (False, True):
        p = _params(0.1, F=0.3, mixing=mixing, U=0.0)
        controls.append(abs(g2_out(lindblad.solve(p), OutputMode(p.gamma1, p.gamma2)) - 1))
    w = physicality.worst
    passed = physicality.count > 0 and not physicality.violations and max(controls) < 1e-6
    detail = (
        f"{physicality.count} steady states checked, {len(physicality.violations)} violations; "
        f"worst trace {w['trace_error']:.1e}, hermiticity {w['hermiticity_error']:.1e}, "
        f"min eigenvalue {w['min_eigenvalue']:.1e}, residual {w['residual']:.1e}; "
        f"U=0 control |g2-1| <= {max(controls):.1e}"
    )
    assert verdict("A9", passed, detail)


def test_a10_truncation(a1_data, verdict):
    chosen = []
    E = np.linspace(-2, 2, A1_RES)
    for ratio in A1_RATIOS:
        p = _params(ratio)
        chosen += [lindblad.convergence_check(p.replace(E1=e1, E2=e2), 1e-3) for e1 in E for e2 in E]
    worst = 0.0
    sub = range(0, A1_RES, 4)
    for ratio in A1_RATIOS:
        g5 = a1_data[1e-2, ratio]["numeric"]
        p = _params(ratio)
        for i in sub:
            for j in sub:
                g6, _ = ex.numeric_observables(p.replace(E1=E[i], E2=E[j]), n_max=6)
                worst = max(worst, abs(g5[i, j] / g6 - 1))
    passed = max(chosen) <= 5 and worst < 1e-3
    detail = (
        f"convergence_check over {len(chosen)} points selects n_max {min(chosen)}..{max(chosen)}; "
        f"max |g2(5)/g2(6) - 1| = {worst:.1e} over {len(sub) ** 2 * len(A1_RATIOS)} points"
    )
    assert verdict("A10", passed, detail)
