"""Reference array architectures compared against the optimised layout.

* FPA: fixed half-wavelength ULA along x.
* RAP: best of several uniformly random feasible layouts.
* AS: best N-subset of a 2N-element half-wavelength ULA (exhaustive).
* RULA: the N-element ULA rotated rigidly about the origin, best angle on a grid.

The rigid arrays ignore the per-antenna regions; their rates are evaluated
directly.  Layouts whose Gram matrix is singular or whose rate argument is
not positive score ``-inf`` so they never win a comparison.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .errors import CombinatorialLimitError, NumericalError, RateClampWarning
from .optimizer import random_layout
from .rate import InverseGammaLinearization, linearization, sum_rate

AS_CAP = 12
SCHEMES = ("MA", "FPA", "RAP", "AS", "RULA")


@dataclass(frozen=True)
class BenchmarkScheme:
    """One comparison scheme and its parameters.

    ``kind`` is one of ``FPA``, ``RAP``, ``AS`` or ``RULA``; ``realizations``
    applies to RAP and ``angle_count`` to RULA.
    """

    kind: str
    realizations: int = 100
    angle_count: int = 100

    def __post_init__(self):
        if self.kind not in ("FPA", "RAP", "AS", "RULA"):
            raise ValueError(f"unknown benchmark kind {self.kind!r}")
        if self.realizations < 1 or self.angle_count < 1:
            raise ValueError("realizations and angle_count must be >= 1")


@dataclass(frozen=True)
class BenchmarkResult:
    kind: str
    layout: np.ndarray
    sum_rate: float
    detail: object = None


def safe_sum_rate(t, cfg: SystemConfig, lin: InverseGammaLinearization) -> float:
    """Sum rate, or ``-inf`` when the layout cannot be evaluated."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RateClampWarning)
            return sum_rate(t, cfg, lin)
    except NumericalError:
        return -math.inf


def ula(num_elements: int, spacing: float = 0.5) -> np.ndarray:
    return np.vstack([spacing * np.arange(num_elements), np.zeros(num_elements)])


def fpa_layout(cfg: SystemConfig) -> np.ndarray:
    """Half-wavelength ULA on the x axis starting at the origin."""
    return ula(cfg.num_antennas, 0.5 * cfg.wavelength)


def fpa(cfg: SystemConfig, lin: InverseGammaLinearization | None = None) -> BenchmarkResult:
    lin = linearization(cfg.outage_target) if lin is None else lin
    t = fpa_layout(cfg)
    return BenchmarkResult("FPA", t, safe_sum_rate(t, cfg, lin))


def rap_best(cfg: SystemConfig, realizations: int = 100, seed: int = 0,
             lin: InverseGammaLinearization | None = None) -> BenchmarkResult:
    """Best of ``realizations`` uniform random feasible layouts; ``detail`` holds all rates."""
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    lin = linearization(cfg.outage_target) if lin is None else lin
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x524150]))
    layouts = [random_layout(cfg, rng) for _ in range(realizations)]
    rates = np.array([safe_sum_rate(t, cfg, lin) for t in layouts])
    k = int(np.argmax(rates))
    return BenchmarkResult("RAP", layouts[k], float(rates[k]), rates)


def as_best(cfg: SystemConfig, lin: InverseGammaLinearization | None = None,
            cap: int = AS_CAP) -> BenchmarkResult:
    """Exhaustive best N-subset of a 2N-element ULA; ``detail`` is the index tuple.

    Ties keep the lexicographically smallest subset (the enumeration order).
    """
    n = cfg.num_antennas
    if n > cap:
        raise CombinatorialLimitError(f"C({2 * n}, {n}) subsets exceeds the enumeration cap N <= {cap}")
    lin = linearization(cfg.outage_target) if lin is None else lin
    full = ula(2 * n, 0.5 * cfg.wavelength)
    best, best_rate = None, -math.inf
    for subset in itertools.combinations(range(2 * n), n):
        r = safe_sum_rate(full[:, subset], cfg, lin)
        if best is None or r > best_rate:
            best, best_rate = subset, r
    return BenchmarkResult("AS", full[:, best], float(best_rate), best)


def rotate(t, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]]) @ np.asarray(t, dtype=float)


def rula_angles(angle_count: int) -> np.ndarray:
    if angle_count < 1:
        raise ValueError("angle_count must be >= 1")
    if angle_count == 1:
        return np.array([-math.pi])
    return np.linspace(-math.pi, math.pi, angle_count)


def rula_best(cfg: SystemConfig, angle_count: int = 100,
              lin: InverseGammaLinearization | None = None) -> BenchmarkResult:
    """Best rotation of the FPA array about the origin; ``detail`` is the angle."""
    lin = linearization(cfg.outage_target) if lin is None else lin
    base = fpa_layout(cfg)
    angles = rula_angles(angle_count)
    rates = np.array([safe_sum_rate(rotate(base, a), cfg, lin) for a in angles])
    k = int(np.argmax(rates))
    return BenchmarkResult("RULA", rotate(base, angles[k]), float(rates[k]), float(angles[k]))


def run_benchmark(scheme: BenchmarkScheme, cfg: SystemConfig, seed: int = 0,
                  lin: InverseGammaLinearization | None = None) -> BenchmarkResult:
    if scheme.kind == "FPA":
        return fpa(cfg, lin)
    if scheme.kind == "RAP":
        return rap_best(cfg, scheme.realizations, seed, lin)
    if scheme.kind == "AS":
        return as_best(cfg, lin)
    return rula_best(cfg, scheme.angle_count, lin)
