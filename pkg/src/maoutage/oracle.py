"""Seeded Monte Carlo ground truth for the SINR pipeline.

Beamformers are the explicit projector-form ZF vectors of the LoS channel
(fixed across trials); each trial draws fresh NLoS components.  Trials are
generated in chunks from the counter-based streams of :mod:`maoutage.channel`,
so the sample set for trials ``0..T-1`` is the same however it is chunked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import beamforming, channel
from .config import SystemConfig
from .statistics import GammaFit, gamma_cdf

CHUNK = 50_000


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray
    seed: int

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float))
        if s.size < 1:
            raise ValueError("need at least one sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def count(self) -> int:
        return int(self.samples.size)


def _signal_and_interference(t, cfg: SystemConfig, m: int, num_trials: int, seed: int,
                             start: int = 0, chunk: int = CHUNK):
    """Per-trial ``X_m`` and ``Y_m`` (SINR numerator gain and denominator)."""
    W = beamforming.zf_beamformers(channel.los_matrix(t, cfg))
    los = channel.steering_matrix(t, cfg)[m]
    k, beta = cfg.rician_k[m], cfg.large_scale_gain[m]
    a, b = np.sqrt(k * beta / (k + 1)), np.sqrt(beta / (k + 1))
    p = cfg.tx_power.copy()
    p[m] = 0.0
    xs, ys = [], []
    for lo in range(start, start + num_trials, chunk):
        count = min(chunk, start + num_trials - lo)
        h = a * los + b * channel.nlos_block(cfg.num_antennas, seed, m, lo, count)
        g = np.abs(h @ W) ** 2
        xs.append(g[:, m])
        ys.append(g @ p + cfg.noise_power)
    return np.concatenate(xs), np.concatenate(ys)


def sample_xy(t, cfg: SystemConfig, m: int, num_trials: int, seed: int):
    return _signal_and_interference(t, cfg, m, num_trials, seed)


def sample_sinr(t, cfg: SystemConfig, m: int, num_trials: int, seed: int) -> EmpiricalDistribution:
    """``num_trials`` independent SINR draws of user ``m`` under LoS zero forcing."""
    x, y = _signal_and_interference(t, cfg, m, num_trials, seed)
    return EmpiricalDistribution(cfg.tx_power[m] * x / y, int(seed))


def empirical_cdf(dist: EmpiricalDistribution, v):
    """Fraction of samples ``<= v``."""
    return np.searchsorted(dist.samples, v, side="right") / dist.count


def empirical_quantile(dist: EmpiricalDistribution, delta):
    """Linear interpolation between order statistics (the common type-7 rule)."""
    return np.quantile(dist.samples, delta, method="linear")


def empirical_outage_rate(dist: EmpiricalDistribution, delta):
    """Largest fixed rate whose empirical outage probability is ``delta``."""
    return np.log2(1.0 + empirical_quantile(dist, delta))


def cdf_distance(dist: EmpiricalDistribution, fit: GammaFit) -> float:
    """Kolmogorov-Smirnov statistic between the sample and the Gamma CDF."""
    f = np.asarray(gamma_cdf(fit, dist.samples))
    n = dist.count
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))
