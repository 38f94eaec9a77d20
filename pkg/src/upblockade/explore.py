"""Parameter-landscape exploration: detuning sweeps, minima, tracking and scans.

Two engines evaluate ``g2_out(0)``:

* ``"analytic"`` -- the weak-pump closed form (independent of the drive
  strength, vectorized, very cheap);
* ``"numeric"`` -- the stationary master-equation solution at the actual
  drive (one sparse LU per point).

Pump calibration always uses the numeric engine.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
import logging
import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import lindblad
from .analytic import SingularAmplitudeError, analytic_observables
from .fock import FockSpace
from .inout import OutputMode, ZeroOutputError, g2_out, n_out
from .model import SystemParams, optimal_detunings

__all__ = [
    "SweepGrid",
    "MinimumRecord",
    "DetuningScanPoint",
    "DephasingScanPoint",
    "CalibrationError",
    "TrackLostError",
    "ENGINES",
    "numeric_observables",
    "g2_objective",
    "sweep_detunings",
    "find_local_minima",
    "calibrate_pump",
    "refine_minimum",
    "pump_estimate",
    "occupation_objective",
    "occupation_minimum",
    "track_minimum",
    "scan_fixed_detuning",
    "profile_minima",
    "scan_dephasing",
]

log = logging.getLogger(__name__)

ENGINES = ("analytic", "numeric")
MIN_RESOLUTION = 8
_LOG_FLOOR = 1e-300


class CalibrationError(RuntimeError):
    """Pump calibration did not reach the target occupation."""


class TrackLostError(RuntimeError):
    """The tracked minimum vanished; ``records`` holds the steps tracked so far."""

    def __init__(self, message, records, step):
        super().__init__(message)
        self.records = records
        self.step = step


@dataclass
class SweepGrid:
    """``g2_out`` and ``n_out`` on a rectangular (E1, E2) grid, indexed ``[i1, i2]``."""

    E1: np.ndarray
    E2: np.ndarray
    g2: np.ndarray
    n_out: np.ndarray
    engine: str
    params: SystemParams
    n_max: int = 5
    failures: list = field(default_factory=list)

    def __post_init__(self):
        for axis in (self.E1, self.E2):
            if axis.ndim != 1 or axis.size == 0 or np.any(np.diff(axis) <= 0):
                raise ValueError("grid axes must be non-empty and strictly increasing")
        shape = (self.E1.size, self.E2.size)
        if self.g2.shape != shape or self.n_out.shape != shape:
            raise ValueError(f"value arrays must have shape {shape}")

    @property
    def spacing(self) -> tuple[float, float]:
        def step(a):
            return float(a[1] - a[0]) if a.size > 1 else 0.0

        return step(self.E1), step(self.E2)

    def argmin(self) -> tuple[int, int]:
        return np.unravel_index(np.nanargmin(self.g2), self.g2.shape)

    def global_minimum(self) -> tuple[float, float, float]:
        i, j = self.argmin()
        return float(self.E1[i]), float(self.E2[j]), float(self.g2[i, j])


@dataclass(frozen=True)
class MinimumRecord:
    """A located minimum of ``g2_out`` in the (E1, E2) plane."""

    E1: float
    E2: float
    g2: float
    status: str
    label: str = ""
    grid_value: float | None = None
    F: float | None = None
    n_out: float | None = None
    ratio: float | None = None

    @property
    def delta12(self) -> float:
        return self.E1 - self.E2


@dataclass(frozen=True)
class DetuningScanPoint:
    delta12: float
    E1: float
    E2: float
    g2: float
    F: float | None
    n_out: float | None
    status: str = "ok"


@dataclass(frozen=True)
class DephasingScanPoint:
    Gpd: float
    E1: float
    E2: float
    g2: float
    F: float | None
    n_out: float | None


# -- evaluation -------------------------------------------------------------


def numeric_observables(params: SystemParams, n_max: int = 5) -> tuple[float, float]:
    """``(g2_out, n_out)`` from the stationary master equation."""
    space = FockSpace.uniform(n_max)
    rho = lindblad.solve(params, space)
    out = OutputMode(params.gamma1, params.gamma2)
    n = n_out(rho, out, space)
    g = g2_out(rho, out, space) if n > 0 else math.nan
    return g, n


def _check_engine(engine):
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")


def g2_objective(params: SystemParams, engine: str = "analytic", n_max: int = 5):
    """Callable ``(E1, E2) -> g2_out`` (NaN where the evaluation fails)."""
    _check_engine(engine)

    def f(E1, E2):
        try:
            if engine == "analytic":
                g, _ = analytic_observables(params, E1, E2)
                return float(g)
            g, _ = numeric_observables(params.replace(E1=float(E1), E2=float(E2)), n_max)
            return g
        except (lindblad.SteadyStateError, SingularAmplitudeError, ZeroOutputError) as exc:
            log.debug("objective failed at (%g, %g): %s", E1, E2, exc)
            return math.nan

    return f


def _log_objective(f):
    def g(x):
        v = f(x[0], x[1])
        if not np.isfinite(v):
            return math.inf
        return math.log10(max(v, _LOG_FLOOR))

    return g


def _map(fn, items, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- sweeps -----------------------------------------------------------------


def _axis(bounds, resolution) -> np.ndarray:
    lo, hi = (float(b) for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise ValueError(f"invalid range {bounds!r}")
    if hi == lo:
        return np.array([lo])
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION} per axis")
    return np.linspace(lo, hi, int(resolution))


def _numeric_row(E1, E2_axis, params, n_max):
    g = np.full(E2_axis.size, math.nan)
    n = np.full(E2_axis.size, math.nan)
    failures = []
    for j, E2 in enumerate(E2_axis):
        try:
            g[j], n[j] = numeric_observables(params.replace(E1=float(E1), E2=float(E2)), n_max)
        except lindblad.SteadyStateError as exc:
            failures.append((j, str(exc)))
    return g, n, failures


def sweep_detunings(
    params: SystemParams,
    e1_range=(-2.0, 2.0),
    e2_range=(-2.0, 2.0),
    resolution=101,
    engine: str = "analytic",
    n_max: int = 5,
    workers: int = 1,
) -> SweepGrid:
    """Evaluate ``g2_out`` and ``n_out`` over a uniform (E1, E2) grid.

    ``resolution`` is an int or an ``(n1, n2)`` pair. A degenerate range
    (``lo == hi``) gives a single-point axis. Failed cells hold NaN and are
    listed in ``failures`` as ``(i1, i2, message)``.
    """
    _check_engine(engine)
    r1, r2 = (resolution, resolution) if np.isscalar(resolution) else resolution
    E1 = _axis(e1_range, r1)
    E2 = _axis(e2_range, r2)
    failures = []
    if engine == "analytic":
        X, Y = np.meshgrid(E1, E2, indexing="ij")
        with np.errstate(divide="ignore", invalid="ignore"):
            try:
                g, n = analytic_observables(params, X, Y)
            except SingularAmplitudeError:
                g, n = np.full(X.shape, math.nan), np.full(X.shape, math.nan)
                for (i, j), _ in np.ndenumerate(X):
                    try:
                        gij, nij = analytic_observables(params, E1[i], E2[j])
                        g[i, j], n[i, j] = gij, nij
                    except SingularAmplitudeError as exc:
                        failures.append((i, j, str(exc)))
            except ZeroOutputError:
                n = analytic_observables(params.replace(F=1.0), X, Y)[1] * abs(params.F) ** 2
                g = np.full(X.shape, math.nan)
        g = np.where(n > 0, g, math.nan)
    else:
        rows = _map(partial(_numeric_row, E2_axis=E2, params=params, n_max=n_max), list(E1), workers)
        g = np.vstack([r[0] for r in rows])
        n = np.vstack([r[1] for r in rows])
        failures = [(i, j, msg) for i, r in enumerate(rows) for j, msg in r[2]]
    return SweepGrid(E1, E2, np.asarray(g, float), np.asarray(n, float), engine, params, n_max, failures)


def _strict_grid_minima(values: np.ndarray) -> list[tuple[int, int]]:
    n1, n2 = values.shape
    if n1 < 3 or n2 < 3:
        return []
    c = values[1:-1, 1:-1]
    mask = np.isfinite(c)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                mask &= c < values[1 + di : n1 - 1 + di, 1 + dj : n2 - 1 + dj]
    return [(i + 1, j + 1) for i, j in np.argwhere(mask)]


def refine_minimum(objective, x0, step=(0.04, 0.04), bounds=None, xatol=1e-4):
    """Nelder-Mead descent of ``log10(objective)`` from ``x0``.

    Stops when the simplex vertices agree to ``xatol`` in each coordinate.
    Returns ``(E1, E2, value)``.
    """
    x0 = np.asarray(x0, float)
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])
    if bounds is not None:
        lo = np.array([b[0] for b in bounds])
        hi = np.array([b[1] for b in bounds])
        # keep the initial simplex inside the box
        for k in (1, 2):
            out = (simplex[k] > hi) | (simplex[k] < lo)
            simplex[k][out] = 2 * x0[out] - simplex[k][out]
    res = minimize(
        _log_objective(objective),
        x0,
        method="Nelder-Mead",
        bounds=bounds,
        options=dict(initial_simplex=simplex, xatol=xatol, fatol=1e-8, maxiter=2000, maxfev=4000),
    )
    value = objective(*res.x)
    return float(res.x[0]), float(res.x[1]), float(value)


def find_local_minima(
    grid: SweepGrid,
    refine: bool = True,
    merge_cells: float = 2.0,
    xatol: float = 1e-4,
    objective=None,
) -> list[MinimumRecord]:
    """Local minima of a sweep, sorted by value and labelled ``m1, m2, ...``.

    Seeds are interior cells strictly below all eight neighbours. With
    ``refine`` each seed is polished by Nelder-Mead on the continuous
    objective of the grid's engine (confined to the grid box), and seeds that
    converge within ``merge_cells`` grid spacings of a better one are dropped:
    a narrow curved valley aliases into several grid seeds that share one
    continuous minimum. ``objective(E1, E2)`` overrides the engine objective.
    """
    seeds = _strict_grid_minima(grid.g2)
    if not seeds:
        return []
    records = []
    d1, d2 = grid.spacing
    if refine:
        if objective is None:
            objective = g2_objective(grid.params, grid.engine, grid.n_max)
        bounds = [(grid.E1[0], grid.E1[-1]), (grid.E2[0], grid.E2[-1])]
        for i, j in seeds:
            E1, E2, value = refine_minimum(
                objective, (grid.E1[i], grid.E2[j]), step=(d1, d2), bounds=bounds, xatol=xatol
            )
            if not value <= grid.g2[i, j]:
                E1, E2, value = float(grid.E1[i]), float(grid.E2[j]), float(grid.g2[i, j])
            records.append(MinimumRecord(E1, E2, value, "refined", grid_value=float(grid.g2[i, j])))
        records.sort(key=lambda r: r.g2)
        radius = merge_cells * math.hypot(d1, d2)
        kept = []
        for r in records:
            if all(math.hypot(r.E1 - k.E1, r.E2 - k.E2) > radius for k in kept):
                kept.append(r)
        records = kept
    else:
        for i, j in seeds:
            v = float(grid.g2[i, j])
            records.append(MinimumRecord(float(grid.E1[i]), float(grid.E2[j]), v, "grid", grid_value=v))
        records.sort(key=lambda r: r.g2)
    return [
        MinimumRecord(r.E1, r.E2, r.g2, r.status, f"m{k + 1}", r.grid_value)
        for k, r in enumerate(records)
    ]


# -- pump calibration and constant-occupation optimization -----------------------


def calibrate_pump(
    params: SystemParams,
    target: float = 1e-3,
    n_max: int = 5,
    rtol: float = 1e-3,
    max_iter: int = 10,
    F0: float | None = None,
) -> float:
    """Drive amplitude giving numeric ``n_out = target``.

    Uses ``n_out ~ F^2``: each step rescales ``F <- F sqrt(target / n_out)``
    until the relative error is below ``rtol``.
    """
    if not target > 0:
        raise ValueError("target occupation must be positive")
    F = abs(F0 if F0 is not None else params.F) or 1e-2
    for _ in range(max_iter):
        _, n = numeric_observables(params.replace(F=F), n_max)
        if not n > 0:
            raise CalibrationError("output occupation vanishes at this operating point")
        if abs(n / target - 1) < rtol:
            return F
        F *= math.sqrt(target / n)
    raise CalibrationError(f"no convergence to n_out={target:g} in {max_iter} iterations")


def pump_estimate(params: SystemParams, target: float) -> float:
    """Drive amplitude giving ``target`` weak-pump output occupation (exactly ``~F^2``)."""
    try:
        _, n1 = analytic_observables(params.replace(F=1.0))
    except (SingularAmplitudeError, ZeroOutputError):
        n1 = 0.0
    n1 = float(n1)
    return math.sqrt(target / n1) if n1 > 0 else abs(params.F) or 1e-2


def occupation_objective(params: SystemParams, target: float, n_max: int = 5):
    """Callable ``(E1, E2) -> (g2_out, n_out, F)`` along the constant-occupation surface.

    The pump comes from :func:`pump_estimate` and one numeric rescale
    ``F <- F sqrt(target / n_out)``. Being a fixed sequence of solves, the
    result is a smooth deterministic function of the detunings, with
    ``n_out`` typically within 1e-3 of ``target``.
    """

    def f(E1, E2):
        p = params.replace(E1=float(E1), E2=float(E2))
        F = pump_estimate(p, target)
        try:
            _, n = numeric_observables(p.replace(F=F), n_max)
            if n > 0:
                F *= math.sqrt(target / n)
            g, n = numeric_observables(p.replace(F=F), n_max)
        except lindblad.SteadyStateError as exc:
            log.debug("objective failed at (%g, %g): %s", E1, E2, exc)
            return math.nan, math.nan, F
        return g, n, F

    return f


def _finish(params, E1, E2, target, n_max, F0):
    p = params.replace(E1=E1, E2=E2)
    F = calibrate_pump(p, target, n_max, F0=F0)
    g, n = numeric_observables(p.replace(F=F), n_max)
    return g, F, n


def _optimize_numeric(params, x0, target, n_max, step=0.05, xatol=1e-4):
    """Minimize numeric g2 around ``x0``.

    With a ``target`` the search runs on the constant-occupation surface
    (:func:`occupation_objective`) and the pump is calibrated at the optimum;
    without one the pump stays at ``params.F``.
    """
    if not target:
        E1, E2, g = refine_minimum(g2_objective(params, "numeric", n_max), x0, (step, step), xatol=xatol)
        _, n = numeric_observables(params.replace(E1=E1, E2=E2), n_max)
        return E1, E2, g, abs(params.F), n
    h = occupation_objective(params, target, n_max)
    E1, E2, _ = refine_minimum(lambda a, b: h(a, b)[0], x0, (step, step), xatol=xatol)
    g, F, n = _finish(params, E1, E2, target, n_max, h(E1, E2)[2])
    return E1, E2, g, F, n


def occupation_minimum(
    params: SystemParams,
    target: float = 1e-3,
    n_max: int = 5,
    bounds=(-2.0, 2.0),
    resolution: int = 21,
    workers: int = 1,
) -> tuple[float, float, float, float, float]:
    """Global numeric minimum of g2 on the constant-occupation surface.

    The constant-occupation landscape has several shallow basins, so a coarse
    grid of :func:`occupation_objective` picks the basin and a local search
    refines it. Returns ``(E1, E2, g2, F, n_out)``.
    """
    axis = _axis(bounds, resolution)
    rows = _map(partial(_occupation_row, axis=axis, params=params, target=target, n_max=n_max), axis, workers)
    g = np.array(rows)
    g = np.where(np.isfinite(g), g, np.inf)
    i1, i2 = np.unravel_index(np.argmin(g), g.shape)
    step = float(axis[1] - axis[0]) / 2
    return _optimize_numeric(params, (axis[i1], axis[i2]), target, n_max, step=step)


def _occupation_row(E1, axis, params, target, n_max):
    h = occupation_objective(params, target, n_max)
    return [h(E1, E2)[0] for E2 in axis]


def _default_seed(params, seed, target, n_max, numeric=True):
    if seed is not None:
        return np.asarray(seed, float)
    if numeric and target:
        return np.array(occupation_minimum(params, target, n_max)[:2])
    return np.asarray(optimal_detunings(params.Gamma1), float)


# -- tracking ----------------------------------------------------------------------


def track_minimum(
    params: SystemParams,
    schedule,
    engine: str = "numeric",
    target_n_out: float | None = 1e-3,
    seed=None,
    n_max: int = 5,
    step: float = 0.05,
) -> list[MinimumRecord]:
    """Follow one minimum of ``g2_out`` as ``gamma2/gamma1`` runs through ``schedule``.

    Each step is warm-started at the previous optimum. The first starts at
    ``seed``; by default the global constant-occupation minimum for the
    numeric engine with a target, otherwise the optimal detunings. With the numeric engine and a
    ``target_n_out`` the pump is recalibrated at every step; the analytic
    engine optimizes the weak-pump g2 and, with a target, reports the
    numeric g2 at the calibrated pump at the located point.
    """
    _check_engine(engine)
    schedule = [float(r) for r in schedule]
    if not schedule or schedule[0] != 0 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must start at 0 and increase strictly")
    x = _default_seed(params.replace(gamma2=schedule[0] * params.gamma1), seed, target_n_out, n_max,
                      engine == "numeric")
    records = []
    for ratio in schedule:
        p = params.replace(gamma2=ratio * params.gamma1)
        try:
            if engine == "numeric":
                E1, E2, g, F, n = _optimize_numeric(p, x, target_n_out, n_max, step=step)
            else:
                E1, E2, g = refine_minimum(g2_objective(p, "analytic"), x, step=(step, step))
                F, n = None, None
                if target_n_out:
                    F = calibrate_pump(p.replace(E1=E1, E2=E2), target_n_out, n_max)
                    g, n = numeric_observables(p.replace(E1=E1, E2=E2, F=F), n_max)
        except (lindblad.SteadyStateError, CalibrationError) as exc:
            raise TrackLostError(f"track lost at gamma2/gamma1={ratio:g}: {exc}", records, ratio) from exc
        if not np.isfinite(g):
            raise TrackLostError(f"minimum vanished at gamma2/gamma1={ratio:g}", records, ratio)
        records.append(MinimumRecord(E1, E2, g, "tracked", "m1", F=F, n_out=n, ratio=ratio))
        x = np.array([E1, E2])
    return records


# -- scans ---------------------------------------------------------------------------


def profile_minima(values) -> list[int]:
    """Indices of strict interior local minima of a 1-D profile."""
    v = np.asarray(values, float)
    if v.size < 3:
        return []
    mid = v[1:-1]
    mask = np.isfinite(mid) & (mid < v[:-2]) & (mid < v[2:])
    return [int(i) + 1 for i in np.flatnonzero(mask)]


def _line_refine(fun, lo, hi, xatol):
    def h(e):
        v = fun(e)
        return math.log10(max(v, _LOG_FLOOR)) if np.isfinite(v) else math.inf

    res = minimize_scalar(h, bounds=(lo, hi), method="bounded", options=dict(xatol=xatol))
    return float(res.x)


def _scan_point(delta, params, e1_bounds, engine, target, n_max, n_candidates, coarse_step):
    """Best E1 on the line ``E2 = E1 - delta``.

    Candidates are the lowest local minima of a coarse profile along the
    line (weak-pump g2 for the analytic engine; numeric g2 at the estimated
    constant-occupation pump otherwise), each refined by bounded Brent within
    one coarse step.
    """
    n_pts = int(round((e1_bounds[1] - e1_bounds[0]) / coarse_step)) + 1
    E1_axis = np.linspace(e1_bounds[0], e1_bounds[1], max(n_pts, 3))
    if engine == "analytic":
        with np.errstate(divide="ignore", invalid="ignore"):
            profile, _ = analytic_observables(params, E1_axis, E1_axis - delta)
        fine = g2_objective(params, "analytic")
        line = lambda e: fine(e, e - delta)  # noqa: E731
    else:
        profile = np.full(E1_axis.size, math.nan)
        for k, e in enumerate(E1_axis):
            p = params.replace(E1=float(e), E2=float(e - delta))
            F = pump_estimate(p, target) if target else abs(params.F)
            try:
                profile[k] = numeric_observables(p.replace(F=F), n_max)[0]
            except lindblad.SteadyStateError:
                pass
        if target:
            h = occupation_objective(params, target, n_max)
            line = lambda e: h(e, e - delta)[0]  # noqa: E731
        else:
            fine = g2_objective(params, "numeric", n_max)
            line = lambda e: fine(e, e - delta)  # noqa: E731
    profile = np.where(np.isfinite(profile), profile, np.inf)
    idx = profile_minima(profile) or [int(np.argmin(profile))]
    idx = sorted(idx, key=lambda i: profile[i])[:n_candidates]
    d = E1_axis[1] - E1_axis[0]

    best = None
    for i in idx:
        lo, hi = max(e1_bounds[0], E1_axis[i] - d), min(e1_bounds[1], E1_axis[i] + d)
        try:
            e1 = _line_refine(line, lo, hi, 1e-6 if engine == "analytic" else 1e-4)
            if target:
                F0 = pump_estimate(params.replace(E1=e1, E2=e1 - delta), target)
                g, F, n = _finish(params, e1, e1 - delta, target, n_max, F0)
            else:
                F = abs(params.F)
                g, n = (line(e1), None) if engine == "analytic" else numeric_observables(
                    params.replace(E1=e1, E2=e1 - delta), n_max)
        except (lindblad.SteadyStateError, CalibrationError) as exc:
            log.warning("delta12=%g candidate %g failed: %s", delta, E1_axis[i], exc)
            continue
        if np.isfinite(g) and (best is None or g < best.g2):
            best = DetuningScanPoint(float(delta), e1, e1 - delta, float(g), F, n)
    if best is None:
        return DetuningScanPoint(float(delta), math.nan, math.nan, math.nan, None, None, "failed")
    return best


def scan_fixed_detuning(
    params: SystemParams,
    deltas,
    e1_bounds=(-4.0, 4.0),
    engine: str = "numeric",
    target_n_out: float | None = 1e-3,
    n_max: int = 5,
    n_candidates: int = 2,
    coarse_step: float = 0.1,
    workers: int = 1,
) -> list[DetuningScanPoint]:
    """Optimal E1 and minimum g2 for each fixed inter-cavity detuning ``E1 - E2``.

    For each value a coarse E1 profile (spacing ``coarse_step``) seeds up to
    ``n_candidates`` bounded line searches; with ``target_n_out`` the search
    runs at constant output occupation and the pump is calibrated at the
    optimum. Failed points are returned with status ``"failed"``.
    """
    _check_engine(engine)
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValueError("empty detuning range")
    fn = partial(
        _scan_point, params=params, e1_bounds=e1_bounds, engine=engine, target=target_n_out,
        n_max=n_max, n_candidates=n_candidates, coarse_step=coarse_step,
    )
    return _map(fn, deltas, workers)


def scan_dephasing(
    params: SystemParams,
    gpd_values,
    seed=None,
    target_n_out: float | None = 1e-3,
    n_max: int = 5,
    step: float = 0.05,
    delta12: float | None = None,
    e1_bounds=(-2.0, 2.0),
) -> list[DephasingScanPoint]:
    """Re-optimized numeric minimum of g2 for each symmetric pure-dephasing rate.

    Without ``delta12`` the optimum is searched in the (E1, E2) plane. Values
    are processed in the given order, each warm-started from the previous
    optimum, so the minimum is followed within its basin. The first starts at
    ``seed``; by default the global constant-occupation minimum (with a
    target) or the optimal detunings.

    With ``delta12`` each value is optimized along the line ``E1 - E2 =
    delta12`` as in :func:`scan_fixed_detuning` (``e1_bounds``, coarse step 0.1).
    """
    gpd_values = [float(g) for g in gpd_values]
    if any(g < 0 for g in gpd_values):
        raise ValueError("dephasing rates must be non-negative")
    if not gpd_values:
        return []
    points = []
    if delta12 is not None:
        for gpd in gpd_values:
            p = params.replace(Gpd1=gpd, Gpd2=gpd)
            r = _scan_point(float(delta12), p, e1_bounds, "numeric", target_n_out, n_max, 2, 0.1)
            points.append(DephasingScanPoint(gpd, r.E1, r.E2, r.g2, r.F, r.n_out))
        return points
    p0 = params.replace(Gpd1=gpd_values[0], Gpd2=gpd_values[0])
    x = _default_seed(p0, seed, target_n_out, n_max)
    for gpd in gpd_values:
        p = params.replace(Gpd1=gpd, Gpd2=gpd)
        E1, E2, g, F, n = _optimize_numeric(p, x, target_n_out, n_max, step=step)
        points.append(DephasingScanPoint(gpd, E1, E2, g, F, n))
        x = np.array([E1, E2])
    return points
