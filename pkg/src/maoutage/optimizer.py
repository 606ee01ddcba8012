"""Multi-start projected gradient ascent over antenna positions."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig
from .gradients import objective_gradient
from .rate import InverseGammaLinearization, linearization, sum_rate


@dataclass(frozen=True)
class PgaConfig:
    step_size: float = 0.015
    max_iters: int = 10_000
    conv_window: int = 50
    conv_tol: float = 1e-6
    num_starts: int = 5
    line_search: bool = False
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    min_step: float = 1e-12

    def __post_init__(self):
        if self.step_size <= 0 or self.max_iters < 1 or self.conv_window < 1:
            raise ValueError("step_size, max_iters and conv_window must be positive")
        if self.conv_tol <= 0 or self.num_starts < 1:
            raise ValueError("conv_tol and num_starts must be positive")
        if not 0.0 < self.armijo_c < 1.0 or not 0.0 < self.backtrack < 1.0:
            raise ValueError("Armijo constant and backtracking factor must lie in (0, 1)")


@dataclass
class PgaTrace:
    objective: np.ndarray
    layout: np.ndarray
    start: np.ndarray
    start_index: int
    converged: bool
    layouts: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.objective) - 1

    @property
    def final_objective(self) -> float:
        return float(self.objective[-1])


def project(t, regions) -> np.ndarray:
    """Clamp every coordinate into its antenna's rectangle.

    ``regions`` is a sequence of :class:`Region` or a ``(lower, upper)`` pair of
    2 x N bound matrices.
    """
    lo, hi = _bounds(regions)
    return np.minimum(np.maximum(np.asarray(t, dtype=float), lo), hi)


def _bounds(regions):
    if isinstance(regions, tuple) and len(regions) == 2 and isinstance(regions[0], np.ndarray):
        return regions
    regions = list(regions)
    lo = np.array([[r.x_min for r in regions], [r.y_min for r in regions]])
    hi = np.array([[r.x_max for r in regions], [r.y_max for r in regions]])
    return lo, hi


def pga_run(start, cfg: SystemConfig, pga: PgaConfig = PgaConfig(),
            lin: InverseGammaLinearization | None = None, start_index: int = 0,
            keep_layouts: bool = False) -> PgaTrace:
    """Projected gradient ascent from one feasible start.

    Stops when the objective moved less than ``conv_tol`` over the last
    ``conv_window`` iterations, or after ``max_iters``.  With
    ``pga.line_search`` each step backtracks from ``step_size`` until the
    Armijo sufficient-increase test passes (steps that cannot improve end the
    run as converged).
    """
    lin = linearization(cfg.outage_target) if lin is None else lin
    bounds = cfg.bounds
    t = project(start, bounds)
    obj = sum_rate(t, cfg, lin)
    history = [obj]
    layouts = [t.copy()] if keep_layouts else []
    converged = False
    for _ in range(pga.max_iters):
        grad = objective_gradient(t, cfg, lin)
        if pga.line_search:
            step = pga.step_size
            while True:
                cand = project(t + step * grad, bounds)
                cand_obj = sum_rate(cand, cfg, lin)
                if cand_obj >= obj + pga.armijo_c * np.sum(grad * (cand - t)):
                    break
                step *= pga.backtrack
                if step < pga.min_step:
                    cand, cand_obj = t, obj
                    break
        else:
            cand = project(t + pga.step_size * grad, bounds)
            cand_obj = sum_rate(cand, cfg, lin)
        t, obj = cand, cand_obj
        history.append(obj)
        if keep_layouts:
            layouts.append(t.copy())
        k = len(history) - 1
        if k >= pga.conv_window and abs(history[k] - history[k - pga.conv_window]) < pga.conv_tol:
            converged = True
            break
    return PgaTrace(np.asarray(history), t, np.asarray(start, dtype=float), start_index, converged, layouts)


def random_layout(cfg: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """Each antenna uniform in its own region."""
    lo, hi = cfg.bounds
    return lo + (hi - lo) * rng.random(lo.shape)


def _run_one(args):
    start, cfg, pga, lin, index = args
    return pga_run(start, cfg, pga, lin, start_index=index)


@dataclass
class MultiStartResult:
    best: PgaTrace
    traces: list[PgaTrace]

    @property
    def objective(self) -> float:
        return self.best.final_objective

    @property
    def layout(self) -> np.ndarray:
        return self.best.layout


def multi_start(cfg: SystemConfig, pga: PgaConfig = PgaConfig(), seed: int = 0,
                starts=None, lin: InverseGammaLinearization | None = None,
                workers: int = 1) -> MultiStartResult:
    """Run PGA from ``pga.num_starts`` random starts (or the given ``starts``).

    Random start ``i`` is drawn from its own child of ``SeedSequence(seed)`` so
    results do not depend on ``workers``.  The best trace is the one with the
    largest final objective; ties go to the lowest start index.
    """
    lin = linearization(cfg.outage_target) if lin is None else lin
    if starts is None:
        children = np.random.SeedSequence(seed).spawn(pga.num_starts)
        starts = [random_layout(cfg, np.random.default_rng(c)) for c in children]
    jobs = [(np.asarray(s, dtype=float), cfg, pga, lin, i) for i, s in enumerate(starts)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_run_one, jobs))
    else:
        traces = [_run_one(j) for j in jobs]
    traces.sort(key=lambda tr: tr.start_index)
    best = max(traces, key=lambda tr: (tr.final_objective, -tr.start_index))
    return MultiStartResult(best, traces)
