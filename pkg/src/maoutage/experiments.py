"""Experiment orchestration: specs, runners, CSV writers and manifests.

Every runner returns plain tables (header plus rows) and the writer renders
floats with 17 significant digits, so a fixed ``(config, seed)`` always yields
byte-identical CSV files.  Wall-clock timings go to a separate
``timings.csv`` that is excluded from that guarantee.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import platform
import shutil
import tempfile
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import scipy

from . import __version__
from .benchmarks import SCHEMES, BenchmarkScheme, run_benchmark
from .config import SystemConfig, config_from_dict, grid_regions, initial_layout, validate_config
from .errors import ConfigError, MaOutageError, RateClampWarning
from .optimizer import PgaConfig, multi_start
from .oracle import cdf_distance, empirical_cdf, empirical_outage_rate, sample_sinr
from .rate import exact_rates, linearization, user_rates
from .scenarios import with_first_power
from .statistics import gamma_cdf, moment_set

AXES = ("L", "K", "N", "delta", "P1")
QUALITY_TRIALS = 10_000


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to rerun one experiment.

    ``config`` is the JSON-style scenario document.  ``axis`` is ``None`` for
    single-point runs; otherwise ``grid`` lists its sorted values.
    """

    command: str
    config: dict
    axis: str | None = None
    grid: tuple = ()
    schemes: tuple = ("MA",)
    seeds: tuple = (0,)
    trials: int = 100_000
    starts: int = 5
    line_search: bool = False
    user: int = 1
    rap_realizations: int = 100
    rula_angles: int = 100
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.command not in ("optimize", "validate", "sweep", "benchmark"):
            raise ConfigError(f"unknown command {self.command!r}")
        if self.axis is not None:
            if self.axis not in AXES:
                raise ConfigError(f"sweep axis must be one of {AXES}, got {self.axis!r}")
            if not self.grid or list(self.grid) != sorted(self.grid):
                raise ConfigError("sweep grid must be nonempty and sorted")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if not self.schemes or bad:
            raise ConfigError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.trials < 1 or self.starts < 1 or self.workers < 1:
            raise ConfigError("trials, starts and workers must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["grid"] = list(self.grid)
        d["schemes"] = list(self.schemes)
        d["seeds"] = list(self.seeds)
        return d

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ExperimentSpec":
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(f"malformed experiment spec: {exc}") from exc


@dataclass
class Table:
    header: list[str]
    rows: list[list] = field(default_factory=list)


@dataclass
class RunOutput:
    tables: dict[str, Table]
    timings: Table
    caveats: list[str] = field(default_factory=list)
    partial: bool = False


def config_hash(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode("utf-8")).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def render_csv(table: Table) -> str:
    lines = [",".join(table.header)]
    lines += [",".join(_fmt(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _rates_field(rates) -> str:
    return ";".join(format(float(r), ".17g") for r in rates)


def apply_axis(cfg: SystemConfig, axis: str | None, value: float) -> SystemConfig:
    """Scenario ``cfg`` with the sweep variable set to ``value``."""
    if axis is None:
        return cfg
    side = cfg.regions[0].x_max - cfg.regions[0].x_min
    if axis == "L":
        new = cfg.with_(regions=grid_regions(cfg.num_antennas, value))
    elif axis == "N":
        n = int(round(value))
        new = cfg.with_(num_antennas=n, regions=grid_regions(n, side))
    elif axis == "K":
        new = cfg.with_(rician_k=value)
    elif axis == "delta":
        new = cfg.with_(outage_target=value)
    else:
        new = with_first_power(cfg, value)
    extras = {k: v for k, v in new.extras.items() if k != "layout"}
    return new.with_(extras=extras) if axis in ("L", "N") else new


def _evaluate(args):
    """One (sweep value, scheme, seed) cell; never raises for model errors."""
    cfg, axis, value, scheme, seed, spec = args
    start = time.perf_counter()
    row = {"scheme": scheme, "value": value, "seed": seed, "sum_rate": math.nan,
           "user_rates": "", "iterations": 0, "error": ""}
    try:
        point = apply_axis(cfg, axis, value)
        validate_config(point)
        lin = linearization(point.outage_target)
        if scheme == "MA":
            pga = PgaConfig(num_starts=spec.starts, line_search=spec.line_search)
            res = multi_start(point, pga, seed=seed, lin=lin)
            layout, row["iterations"] = res.layout, res.best.iterations
        else:
            kind = BenchmarkScheme(scheme, spec.rap_realizations, spec.rula_angles)
            layout = run_benchmark(kind, point, seed, lin).layout
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RateClampWarning)
            rates = user_rates(layout, point, lin)
        row["sum_rate"] = float(np.sum(rates))
        row["user_rates"] = _rates_field(rates)
    except MaOutageError as exc:
        row["error"] = getattr(exc, "category", "error")
    row["wall_time"] = time.perf_counter() - start
    return row


def run_sweep(spec: ExperimentSpec) -> RunOutput:
    """Rows for every (value, scheme, seed); failed cells become error rows."""
    cfg = config_from_dict(spec.config)
    grid = spec.grid if spec.axis is not None else (math.nan,)
    jobs = [(cfg, spec.axis, v, s, seed, spec)
            for v in grid for s in spec.schemes for seed in spec.seeds]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_evaluate, jobs))
    else:
        results = [_evaluate(j) for j in jobs]
    order = {s: i for i, s in enumerate(spec.schemes)}
    results.sort(key=lambda r: (0.0 if math.isnan(r["value"]) else r["value"], order[r["scheme"]], r["seed"]))
    axis = spec.axis or ""
    table = Table(["scheme", "axis", "sweep_value", "seed", "sum_rate", "user_rates", "iterations", "error"])
    timings = Table(["scheme", "sweep_value", "seed", "wall_time"])
    for r in results:
        value = None if math.isnan(r["value"]) else r["value"]
        table.rows.append([r["scheme"], axis, value, r["seed"], r["sum_rate"], r["user_rates"],
                           r["iterations"], r["error"]])
        timings.rows.append([r["scheme"], value, r["seed"], r["wall_time"]])
    partial = any(r["error"] for r in results)
    return RunOutput({"results.csv": table}, timings, partial=partial)


def run_optimize(spec: ExperimentSpec) -> RunOutput:
    """Multi-start ascent on one scenario; raises on any model error."""
    cfg = config_from_dict(spec.config)
    lin = linearization(cfg.outage_target)
    start = time.perf_counter()
    pga = PgaConfig(num_starts=spec.starts, line_search=spec.line_search)
    res = multi_start(cfg, pga, seed=spec.seeds[0], lin=lin)
    elapsed = time.perf_counter() - start
    layout = Table(["antenna", "x", "y"],
                   [[n + 1, res.layout[0, n], res.layout[1, n]] for n in range(cfg.num_antennas)])
    traces = Table(["start", "iteration", "objective"])
    for tr in res.traces:
        traces.rows += [[tr.start_index, k, v] for k, v in enumerate(tr.objective)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RateClampWarning)
        rates = user_rates(res.layout, cfg, lin)
    summary = Table(["scheme", "seed", "sum_rate", "user_rates", "iterations", "converged", "best_start"],
                    [["MA", spec.seeds[0], float(np.sum(rates)), _rates_field(rates),
                      res.best.iterations, res.best.converged, res.best.start_index]])
    timings = Table(["scheme", "seed", "wall_time"], [["MA", spec.seeds[0], elapsed]])
    return RunOutput({"layout.csv": layout, "traces.csv": traces, "summary.csv": summary}, timings)


def run_benchmark_point(spec: ExperimentSpec) -> RunOutput:
    """Every requested scheme at the configured scenario (a one-point sweep)."""
    out = run_sweep(ExperimentSpec.from_dict({**spec.to_dict(), "axis": None, "grid": ()}))
    out.tables = {"benchmark.csv": out.tables["results.csv"]}
    return out


def run_validate(spec: ExperimentSpec) -> RunOutput:
    """Analytic SINR distribution and rate against Monte Carlo for one user.

    Produces the CDF comparison on ``[0, 99th percentile]``, the rate
    comparison over a 0..20 dBm sweep of user 1's power, and a summary row.
    """
    cfg = config_from_dict(spec.config)
    m = spec.user - 1
    if not 0 <= m < cfg.num_users:
        raise ConfigError(f"user must lie in 1..{cfg.num_users}")
    t = initial_layout(cfg)
    seed = spec.seeds[0]
    start = time.perf_counter()
    dist = sample_sinr(t, cfg, m, spec.trials, seed)
    ms = moment_set(t, cfg)
    second, first = ms.fit(m), ms.fit_first_order(m)
    top = float(np.quantile(dist.samples, 0.99))
    grid = np.linspace(0.0, top, 201)
    cdf = Table(["sinr", "empirical", "second_order", "first_order"])
    emp = empirical_cdf(dist, grid)
    g2, g1 = np.asarray(gamma_cdf(second, grid)), np.asarray(gamma_cdf(first, grid))
    cdf.rows = [[v, a, b, c] for v, a, b, c in zip(grid, emp, g2, g1)]

    rate = Table(["p1_dbm", "empirical", "approx", "exact", "relative_error"])
    worst = 0.0
    for p1 in np.arange(0.0, 20.0 + 1e-9, 2.0):
        point = with_first_power(cfg, float(p1))
        d = sample_sinr(t, point, m, spec.trials, seed)
        r_emp = float(empirical_outage_rate(d, point.outage_target))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RateClampWarning)
            r_apx = float(user_rates(t, point)[m])
        r_ex = float(exact_rates(t, point)[m])
        err = abs(r_apx - r_emp) / r_emp if r_emp > 0 else math.inf
        worst = max(worst, err)
        rate.rows.append([float(p1), r_emp, r_apx, r_ex, err])

    ks2, ks1 = cdf_distance(dist, second), cdf_distance(dist, first)
    summary = Table(["user", "trials", "ks_second_order", "ks_first_order", "max_rate_relative_error"],
                    [[spec.user, spec.trials, ks2, ks1, worst]])
    timings = Table(["stage", "wall_time"], [["validate", time.perf_counter() - start]])
    caveats = []
    if spec.trials < QUALITY_TRIALS:
        caveats.append(f"only {spec.trials} Monte Carlo trials; distances and rates are noisy")
    return RunOutput({"cdf.csv": cdf, "rate.csv": rate, "summary.csv": summary}, timings, caveats)


RUNNERS = {
    "optimize": run_optimize,
    "validate": run_validate,
    "sweep": run_sweep,
    "benchmark": run_benchmark_point,
}


def manifest(spec: ExperimentSpec, out: RunOutput) -> dict[str, Any]:
    return {
        "spec": spec.to_dict(),
        "config_sha256": config_hash(spec.config),
        "seeds": list(spec.seeds),
        "files": sorted(out.tables),
        "caveats": out.caveats,
        "partial": out.partial,
        "versions": {
            "maoutage": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }


def write_output(out_dir, spec: ExperimentSpec, out: RunOutput) -> Path:
    """Write every table plus manifest into ``out_dir`` atomically.

    Files are staged in a sibling temporary directory that replaces
    ``out_dir`` only once everything has been written.
    """
    target = Path(out_dir).resolve()
    target.parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=f".{target.name}.", dir=target.parent))
    try:
        for name, table in out.tables.items():
            (stage / name).write_text(render_csv(table), encoding="utf-8")
        (stage / "timings.csv").write_text(render_csv(out.timings), encoding="utf-8")
        (stage / "manifest.json").write_text(json.dumps(manifest(spec, out), indent=2, sort_keys=True) + "\n",
                                             encoding="utf-8")
        if target.exists():
            shutil.rmtree(target)
        os.replace(stage, target)
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    return target


def run(spec: ExperimentSpec, out_dir=None) -> RunOutput:
    out = RUNNERS[spec.command](spec)
    if out_dir is not None:
        write_output(out_dir, spec, out)
    return out


def load_manifest_spec(path) -> ExperimentSpec:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExperimentSpec.from_dict(doc["spec"])
