"""Command-line front end.

Each subcommand reads a YAML run configuration, computes one data product
and writes comma-separated tables (``#``-prefixed metadata header, then a
column header with units) plus ``manifest.json`` echoing the resolved config.
All energies and rates are in units of Gamma.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
from dataclasses import dataclass, field
import datetime as _dt
import json
import logging
import math
from pathlib import Path
import sys

import numpy as np
import yaml

from . import __version__, explore
from .analytic import SingularAmplitudeError, analytic_observables
from .inout import OutputMode
from .lindblad import ConvergenceError, SteadyStateError
from .model import SystemParams, optimal_detunings, optimal_nonlinearity

log = logging.getLogger(__name__)

EXPERIMENTS = ("sweep", "track", "delta-scan", "dephasing-scan", "validate", "design")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


def _build(cls, data, where):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"[{where}] must be a mapping")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"[{where}] unknown key(s): {', '.join(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{where}] {exc}") from exc


def _range(spec, where):
    """``[lo, hi]`` pair check."""
    if not (isinstance(spec, (list, tuple)) and len(spec) == 2):
        raise ConfigError(f"[{where}] expected [lo, hi]")
    lo, hi = float(spec[0]), float(spec[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ConfigError(f"[{where}] empty or invalid range [{lo}, {hi}]")
    return [lo, hi]


def _values(spec, where) -> list[float]:
    """Explicit list or ``{start, stop, step}`` (inclusive stop)."""
    if isinstance(spec, dict):
        extra = set(spec) - {"start", "stop", "step"}
        if extra or set(spec) != {"start", "stop", "step"}:
            raise ConfigError(f"[{where}] expected keys start, stop, step")
        start, stop, step = (float(spec[k]) for k in ("start", "stop", "step"))
        if step <= 0 or stop < start:
            raise ConfigError(f"[{where}] empty range")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    if isinstance(spec, (list, tuple)) and spec:
        return [float(v) for v in spec]
    raise ConfigError(f"[{where}] expected a non-empty list or a start/stop/step mapping")


@dataclass
class GridConfig:
    e1_range: list = field(default_factory=lambda: [-2.0, 2.0])
    e2_range: list = field(default_factory=lambda: [-2.0, 2.0])
    resolution: list = field(default_factory=lambda: [101, 101])

    def __post_init__(self):
        self.e1_range = _range(self.e1_range, "grid.e1_range")
        self.e2_range = _range(self.e2_range, "grid.e2_range")
        res = self.resolution
        res = [res, res] if isinstance(res, int) else list(res)
        if len(res) != 2 or any(int(r) != r or r < 1 for r in res):
            raise ConfigError("[grid.resolution] expected one or two positive integers")
        for bounds, r in zip((self.e1_range, self.e2_range), res):
            if bounds[0] != bounds[1] and r < explore.MIN_RESOLUTION:
                raise ConfigError(f"[grid.resolution] at least {explore.MIN_RESOLUTION} points per axis")
        self.resolution = [int(r) for r in res]


@dataclass
class TrackConfig:
    ratios: object = field(default_factory=lambda: {"start": 0.0, "stop": 0.5, "step": 0.0125})
    target_n_out: float = 1e-3
    seed: list | None = None

    def __post_init__(self):
        self._values = _values(self.ratios, "track.ratios")
        if self._values[0] != 0 or any(b <= a for a, b in zip(self._values, self._values[1:])):
            raise ConfigError("[track.ratios] must start at 0 and increase")

    def values(self):
        return self._values


@dataclass
class DeltaScanConfig:
    deltas: object = field(default_factory=lambda: {"start": -1.0, "stop": 4.0, "step": 0.05})
    e1_bounds: list = field(default_factory=lambda: [-4.0, 4.0])
    target_n_out: float = 1e-3

    def __post_init__(self):
        self._values = _values(self.deltas, "delta_scan.deltas")
        self.e1_bounds = _range(self.e1_bounds, "delta_scan.e1_bounds")

    def values(self):
        return self._values


@dataclass
class DephasingConfig:
    values: list = field(default_factory=lambda: [0.0, 0.01, 0.1])
    in_units_of_U: bool = True
    target_n_out: float = 1e-3
    seed: list | None = None
    delta12: float | None = None

    def __post_init__(self):
        self.values = _values(self.values, "dephasing.values")
        if any(v < 0 for v in self.values):
            raise ConfigError("[dephasing.values] rates must be non-negative")


@dataclass
class ValidateConfig:
    ratios: list = field(default_factory=lambda: [0.0, 0.02, 0.04, 0.06, 0.08, 0.1])
    F_values: list = field(default_factory=lambda: [1e-2])
    resolution: int = 41
    rel_tol: float = 0.05

    def __post_init__(self):
        self.ratios = _values(self.ratios, "validate.ratios")
        self.F_values = _values(self.F_values, "validate.F_values")
        if int(self.resolution) != self.resolution or self.resolution < explore.MIN_RESOLUTION:
            raise ConfigError(f"[validate.resolution] at least {explore.MIN_RESOLUTION}")


@dataclass
class DesignConfig:
    Gamma: float = 1.0
    J: float = 2.5
    ratio: float = 0.0

    def __post_init__(self):
        if self.Gamma <= 0 or self.J == 0 or self.ratio < 0:
            raise ConfigError("[design] need Gamma > 0, J != 0, ratio >= 0")


_SECTION_TYPES = {
    "grid": GridConfig,
    "track": TrackConfig,
    "delta_scan": DeltaScanConfig,
    "dephasing": DephasingConfig,
    "validate": ValidateConfig,
    "design": DesignConfig,
}


def _section_dict(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}


@dataclass
class RunConfig:
    """Resolved run configuration. ``params`` entries left out default to the
    optimal-detuning / optimal-nonlinearity point for the given ``J``."""

    experiment: str = "sweep"
    engine: str = "analytic"
    workers: int = 1
    n_max: int = 5
    out: str = "out"
    params: SystemParams = field(default_factory=lambda: _resolve_params({}))
    grid: GridConfig = field(default_factory=GridConfig)
    track: TrackConfig = field(default_factory=TrackConfig)
    delta_scan: DeltaScanConfig = field(default_factory=DeltaScanConfig)
    dephasing: DephasingConfig = field(default_factory=DephasingConfig)
    validate: ValidateConfig = field(default_factory=ValidateConfig)
    design: DesignConfig = field(default_factory=DesignConfig)

    @classmethod
    def from_dict(cls, data: dict | None) -> "RunConfig":
        data = dict(data or {})
        top = {"experiment", "engine", "workers", "n_max", "out", "params", *_SECTION_TYPES}
        unknown = sorted(set(data) - top)
        if unknown:
            raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")
        kw = {}
        for name in ("experiment", "engine", "workers", "n_max", "out"):
            if name in data:
                kw[name] = data[name]
        kw["params"] = _resolve_params(data.get("params") or {})
        for name, typ in _SECTION_TYPES.items():
            kw[name] = _build(typ, data.get(name), name)
        cfg = cls(**kw)
        cfg.check()
        return cfg

    def check(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}")
        if self.engine not in explore.ENGINES:
            raise ConfigError(f"engine must be one of {explore.ENGINES}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ConfigError("n_max must be a positive integer")

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "engine": self.engine,
            "workers": self.workers,
            "n_max": self.n_max,
            "out": self.out,
            "params": self.params.to_dict(),
        }
        for name in _SECTION_TYPES:
            d[name] = _section_dict(getattr(self, name))
        return d

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _resolve_params(data: dict) -> SystemParams:
    if not isinstance(data, dict):
        raise ConfigError("[params] must be a mapping")
    data = dict(data)
    J = float(data.get("J", 2.5))
    Gamma = float(data.get("Gamma1", 1.0))
    E1, E2 = optimal_detunings(Gamma)
    data.setdefault("J", J)
    data.setdefault("E1", E1)
    data.setdefault("E2", E2)
    data.setdefault("F", 1e-2)
    if "U" not in data:
        try:
            data["U"] = optimal_nonlinearity(Gamma, J)
        except ValueError as exc:
            raise ConfigError(f"[params] {exc}") from exc
    try:
        return SystemParams.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[params] {exc}") from exc


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    return RunConfig.from_dict(data)


# -- output ----------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    return format(float(v), ".12g")


def write_table(path: Path, columns, rows, meta: dict | None = None):
    """CSV with ``# key: value`` metadata lines, then the column header."""
    lines = []
    for k, v in (meta or {}).items():
        lines.append(f"# {k}: {v}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return math.nan


def read_table(path) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of :func:`write_table`; text cells read back as NaN."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].partition(":")
            meta[k.strip()] = v.strip()
        elif header is None:
            header = line.split(",")
        else:
            rows.append([_num(x) for x in line.split(",")])
    return meta, header, np.array(rows, dtype=float)


def _param_meta(cfg: RunConfig) -> dict:
    meta = {"units": "energies and rates in units of Gamma", "engine": cfg.engine, "n_max": cfg.n_max}
    meta["params"] = json.dumps(cfg.params.to_dict(), sort_keys=True)
    return meta


# -- experiments ---------------------------------------------------------------------


def run_sweep(cfg: RunConfig, out: Path):
    g = cfg.grid
    grid = explore.sweep_detunings(
        cfg.params, g.e1_range, g.e2_range, tuple(g.resolution), cfg.engine, cfg.n_max, cfg.workers
    )
    meta = _param_meta(cfg)
    meta["E1_axis"] = f"{g.e1_range[0]}..{g.e1_range[1]} ({grid.E1.size} points)"
    meta["E2_axis"] = f"{g.e2_range[0]}..{g.e2_range[1]} ({grid.E2.size} points)"
    rows = [
        (grid.E1[i], grid.E2[j], grid.g2[i, j], grid.n_out[i, j])
        for i in range(grid.E1.size)
        for j in range(grid.E2.size)
    ]
    write_table(out / "sweep.csv", ["E1[Gamma]", "E2[Gamma]", "g2_out", "n_out"], rows, meta)
    minima = explore.find_local_minima(grid)
    mrows = []
    for m in minima:
        g_num, n_num = explore.numeric_observables(cfg.params.replace(E1=m.E1, E2=m.E2), cfg.n_max)
        mrows.append((m.label, m.E1, m.E2, m.g2, m.grid_value, g_num, n_num))
    write_table(
        out / "minima.csv",
        ["label", "E1[Gamma]", "E2[Gamma]", "g2_out", "g2_grid_cell", "g2_out_numeric", "n_out_numeric"],
        mrows,
        meta,
    )
    failures = [f"cell ({i},{j}): {msg}" for i, j, msg in grid.failures]
    return ["sweep.csv", "minima.csv"], failures


def run_track(cfg: RunConfig, out: Path):
    t = cfg.track
    records = explore.track_minimum(
        cfg.params, t.values(), cfg.engine, t.target_n_out, seed=t.seed, n_max=cfg.n_max
    )
    E_fix = (cfg.params.E1, cfg.params.E2)
    rows = []
    for r in records:
        p = cfg.params.replace(gamma2=r.ratio * cfg.params.gamma1, E1=E_fix[0], E2=E_fix[1])
        F_fix = explore.calibrate_pump(p, t.target_n_out, cfg.n_max)
        g_fix, _ = explore.numeric_observables(p.replace(F=F_fix), cfg.n_max)
        rows.append((r.ratio, r.E1, r.E2, r.g2, r.F, r.n_out, g_fix, F_fix))
    meta = _param_meta(cfg)
    meta["fixed_detunings"] = f"E1={E_fix[0]:.12g}, E2={E_fix[1]:.12g}"
    write_table(
        out / "track.csv",
        ["gamma2_over_gamma1", "E1[Gamma]", "E2[Gamma]", "g2_out_min", "F[Gamma]", "n_out",
         "g2_out_fixed_detuning", "F_fixed_detuning[Gamma]"],
        rows,
        meta,
    )
    return ["track.csv"], []


def run_delta_scan(cfg: RunConfig, out: Path):
    s = cfg.delta_scan
    points = explore.scan_fixed_detuning(
        cfg.params, s.values(), s.e1_bounds, cfg.engine, s.target_n_out, cfg.n_max, workers=cfg.workers
    )
    rows = [(p.delta12, p.E1, p.E2, p.g2, p.F, p.n_out, p.status) for p in points]
    write_table(
        out / "delta_scan.csv",
        ["delta12[Gamma]", "E1[Gamma]", "E2[Gamma]", "g2_out_min", "F[Gamma]", "n_out", "status"],
        rows,
        _param_meta(cfg),
    )
    failures = [f"delta12={p.delta12:g}" for p in points if p.status != "ok"]
    return ["delta_scan.csv"], failures


def run_dephasing_scan(cfg: RunConfig, out: Path):
    d = cfg.dephasing
    scale = cfg.params.U if d.in_units_of_U else 1.0
    points = explore.scan_dephasing(
        cfg.params, [v * scale for v in d.values], d.seed, d.target_n_out, cfg.n_max, delta12=d.delta12
    )
    rows = [(p.Gpd, p.E1, p.E2, p.g2, p.F, p.n_out) for p in points]
    write_table(
        out / "dephasing_scan.csv",
        ["Gpd[Gamma]", "E1[Gamma]", "E2[Gamma]", "g2_out_min", "F[Gamma]", "n_out"],
        rows,
        _param_meta(cfg),
    )
    return ["dephasing_scan.csv"], []


def compare_engines(params: SystemParams, resolution=41, e_range=(-2.0, 2.0), n_max=5, workers=1):
    """Numeric vs weak-pump g2 on a grid: returns ``(grid, exact, grouped)`` arrays."""
    grid = explore.sweep_detunings(params, e_range, e_range, resolution, "numeric", n_max, workers)
    X, Y = np.meshgrid(grid.E1, grid.E2, indexing="ij")
    exact, _ = analytic_observables(params, X, Y, form="exact")
    grouped, _ = analytic_observables(params, X, Y, form="paper")
    return grid, exact, grouped


def run_validate(cfg: RunConfig, out: Path):
    v = cfg.validate
    summary, points = [], []
    for F in v.F_values:
        for ratio in v.ratios:
            p = cfg.params.replace(F=F, gamma2=ratio * cfg.params.gamma1)
            grid, exact, grouped = compare_engines(p, v.resolution, n_max=cfg.n_max, workers=cfg.workers)
            rel = np.abs(exact / grid.g2 - 1)
            rel_grouped = np.abs(grouped / grid.g2 - 1)
            summary.append((ratio, F, np.nanmax(rel), np.nanmedian(rel), np.mean(rel <= v.rel_tol),
                            np.nanmedian(rel_grouped), np.mean(rel_grouped <= v.rel_tol)))
            for i in range(grid.E1.size):
                for j in range(grid.E2.size):
                    points.append((ratio, F, grid.E1[i], grid.E2[j], grid.g2[i, j], exact[i, j], grouped[i, j]))
    columns = ["gamma2_over_gamma1", "F[Gamma]", "max_rel_dev", "median_rel_dev", "frac_within_tol",
               "grouped_median_rel_dev", "grouped_frac_within_tol"]
    overall = ("all", "all", max(s[2] for s in summary), max(s[3] for s in summary),
               min(s[4] for s in summary), max(s[5] for s in summary), min(s[6] for s in summary))
    meta = _param_meta(cfg)
    meta["rel_tol"] = v.rel_tol
    write_table(out / "validate.csv", columns, summary + [overall], meta)
    write_table(
        out / "validate_points.csv",
        ["gamma2_over_gamma1", "F[Gamma]", "E1[Gamma]", "E2[Gamma]", "g2_numeric", "g2_analytic_exact",
         "g2_analytic_grouped"],
        points,
        meta,
    )
    print(f"max relative g2 deviation (exact form): {overall[2]:.3g}; "
          f"worst fraction within {v.rel_tol:g}: {overall[4]:.4f}")
    return ["validate.csv", "validate_points.csv"], []


def design_point(Gamma=1.0, J=2.5, ratio=0.0, gamma1=0.4, input_mixing=False):
    """Optimal (E1, E2, U) for a given output mixing.

    Without mixing these are the closed-form optima; with mixing the
    weak-pump g2 is minimized over (E1, E2) at the same ``U`` and all distinct
    minima in ``[-4, 4]^2`` are returned.
    """
    U = optimal_nonlinearity(Gamma, J)
    E1, E2 = optimal_detunings(Gamma)
    if ratio == 0:
        return U, [(E1, E2, 0.0)]
    p = SystemParams(E1=E1, E2=E2, U=U, J=J, F=1e-2, gamma1=gamma1 * Gamma, gamma2=ratio * gamma1 * Gamma,
                     Gamma1=Gamma, Gamma2=Gamma, input_mixing=input_mixing)
    grid = explore.sweep_detunings(p, (-4 * Gamma, 4 * Gamma), (-4 * Gamma, 4 * Gamma), 161, "analytic")
    return U, [(m.E1, m.E2, m.g2) for m in explore.find_local_minima(grid)]


def run_design(cfg: RunConfig, out: Path):
    d = cfg.design
    U, points = design_point(d.Gamma, d.J, d.ratio, cfg.params.gamma1, cfg.params.input_mixing)
    rows = []
    for k, (E1, E2, g) in enumerate(points, 1):
        print(f"E1={E1:.6f} E2={E2:.6f} U={U:.6f}" + (f"  (minimum m{k}, weak-pump g2={g:.3g})" if d.ratio else ""))
        rows.append((f"m{k}", E1, E2, U, E1 - E2, g))
    meta = {"units": "energies and rates in units of Gamma", "Gamma": d.Gamma, "J": d.J,
            "gamma2_over_gamma1": d.ratio}
    write_table(out / "design.csv", ["label", "E1[Gamma]", "E2[Gamma]", "U[Gamma]", "delta12[Gamma]",
                                     "g2_weak_pump"], rows, meta)
    return ["design.csv"], []


RUNNERS = {
    "sweep": run_sweep,
    "track": run_track,
    "delta-scan": run_delta_scan,
    "dephasing-scan": run_dephasing_scan,
    "validate": run_validate,
    "design": run_design,
}


def run(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    status, files, failures, error = "ok", [], [], None
    try:
        files, failures = RUNNERS[cfg.experiment](cfg, out)
    except (SteadyStateError, ConvergenceError, explore.CalibrationError, explore.TrackLostError,
            SingularAmplitudeError) as exc:
        status, error = "numerical_failure", str(exc)
        log.error("numerical failure: %s", exc)
    manifest = {
        "package": "upblockade",
        "version": __version__,
        "started_utc": started,
        "finished_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "status": status,
        "error": error,
        "files": files,
        "failures": failures,
        "config": cfg.to_dict(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return EXIT_OK if status == "ok" else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="upblockade", description=__doc__.splitlines()[0])
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="YAML run configuration")
    parser.add_argument("--engine", choices=explore.ENGINES)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        data = {}
        if args.config:
            cfg_file = load_config(args.config)
            data = cfg_file.to_dict()
        data["experiment"] = args.experiment
        if args.engine:
            data["engine"] = args.engine
        if args.workers is not None:
            data["workers"] = args.workers
        if args.out:
            data["out"] = args.out
        cfg = RunConfig.from_dict(data)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
