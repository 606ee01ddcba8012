"""Outage-aware rate: exact Gamma-quantile form and the closed-form surrogate.

For a Gamma(shape, scale) SINR the rate with outage probability ``delta`` is
``log2(1 + scale * Pinv(delta, shape))``.  Replacing the inverse incomplete
gamma by the line ``kappa * shape + rho`` turns the rate into an explicit
function of the three Gram-inverse functionals, which is what the optimiser
maximises.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import beamforming, channel
from .config import SystemConfig
from .errors import NonPositiveRateArgumentError, RateClampWarning
from .special import gammainc_lower_inv
from .statistics import GammaFit, covariance_xy, moment_set, moments_x, moments_y, z_moments

# delta -> (kappa, rho), tabulated for delta = 0.10, 0.11, ..., 0.20
TABLE_I = {
    0.10: (0.7655, -1.188),
    0.11: (0.7752, -1.167),
    0.12: (0.7842, -1.145),
    0.13: (0.7928, -1.124),
    0.14: (0.8010, -1.103),
    0.15: (0.8088, -1.082),
    0.16: (0.8163, -1.061),
    0.17: (0.8235, -1.041),
    0.18: (0.8304, -1.020),
    0.19: (0.8371, -0.9993),
    0.20: (0.8437, -0.9787),
}

# Shape range over which a least-squares line reproduces TABLE_I to ~1e-3.
DEFAULT_SHAPE_GRID = np.round(np.arange(0.01, 20.0 + 1e-9, 0.01), 10)


@dataclass(frozen=True)
class InverseGammaLinearization:
    kappa: float
    rho: float
    delta: float

    def threshold(self, shape):
        return self.kappa * np.asarray(shape, dtype=float) + self.rho


def inverse_gamma_exact(delta: float, shape: float) -> float:
    """``x`` with ``P(shape, x) = delta``."""
    return gammainc_lower_inv(delta, shape)


def inverse_gamma_linear(lin: InverseGammaLinearization, shape):
    return lin.threshold(shape)


def fit_linearization(delta: float, shape_grid=None) -> InverseGammaLinearization:
    """Least-squares line through ``(shape, Pinv(delta, shape))`` over the grid."""
    grid = DEFAULT_SHAPE_GRID if shape_grid is None else np.asarray(shape_grid, dtype=float)
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    y = gammainc_lower_inv(np.full(grid.shape, delta), grid)
    kappa, rho = np.polyfit(grid, y, 1)
    return InverseGammaLinearization(float(kappa), float(rho), float(delta))


@lru_cache(maxsize=64)
def _fitted(delta: float) -> InverseGammaLinearization:
    return fit_linearization(delta)


def linearization(delta: float) -> InverseGammaLinearization:
    """Tabulated pair for delta on the 0.10..0.20 grid, a fresh fit otherwise."""
    key = round(float(delta), 2)
    if key in TABLE_I and abs(key - delta) < 1e-9:
        kappa, rho = TABLE_I[key]
        return InverseGammaLinearization(kappa, rho, float(delta))
    return _fitted(float(delta))


def outage_rate_exact(fit: GammaFit, delta: float) -> float:
    """``log2(1 + scale * Pinv(delta, shape))`` in bits/s/Hz."""
    return float(np.log2(1.0 + fit.scale * inverse_gamma_exact(delta, fit.shape)))


@dataclass(frozen=True)
class RateTerms:
    """Constants and functionals of the closed-form rate, for all users at once.

    The per-user rate is ``log2(f4 + f5 / f6)`` with

    * ``f4 = c1 + c2 f1 + f2 (c3 + c4 f1) + sum_j c5[m, j] f3[m, j]``
    * ``f5 = c6 + f2 (c7 + c8 f1) + sum_j c9[m, j] f3[m, j]``
    * ``f6 = c10 + c11 f2 + (sum_j c12[m, j] f3[m, j]) / (c13 f1 + c14)``

    ``c1..c14`` depend only on powers, fading and noise (not on positions);
    the pairwise constants ``c5, c9, c12`` are M x M with zero diagonal.
    """

    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray
    c5: np.ndarray
    c6: np.ndarray
    c7: np.ndarray
    c8: np.ndarray
    c9: np.ndarray
    c10: np.ndarray
    c11: np.ndarray
    c12: np.ndarray
    c13: np.ndarray
    c14: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    xi: np.ndarray

    @property
    def f4(self) -> np.ndarray:
        return (self.c1 + self.c2 * self.f1 + self.f2 * (self.c3 + self.c4 * self.f1)
                + np.sum(self.c5 * self.f3, axis=1))

    @property
    def f5(self) -> np.ndarray:
        return self.c6 + self.f2 * (self.c7 + self.c8 * self.f1) + np.sum(self.c9 * self.f3, axis=1)

    @property
    def f6(self) -> np.ndarray:
        return (self.c10 + self.c11 * self.f2
                + np.sum(self.c12 * self.f3, axis=1) / (self.c13 * self.f1 + self.c14))

    @property
    def argument(self) -> np.ndarray:
        return self.f4 + self.f5 / self.f6


def rate_constants(cfg: SystemConfig, lin: InverseGammaLinearization) -> dict[str, np.ndarray]:
    """The position-independent constants ``c1 .. c14`` (see :class:`RateTerms`)."""
    p = cfg.tx_power
    beta = cfg.large_scale_gain
    k1 = cfg.rician_k + 1.0
    kappa, rho = lin.kappa, lin.rho
    ey, _ = moments_y(np.zeros(cfg.num_users), cfg)
    off = 1.0 - np.eye(cfg.num_users)
    pair = off * p[None, :]  # pair[m, j] = P_j for j != m
    c = {
        "c1": 1.0 + kappa * p * beta / (ey * k1),
        "c2": kappa * p * beta * cfg.rician_k / (ey * k1),
        "c3": kappa * p * beta**3 / (ey**3 * k1**3),
        "c4": kappa * p * cfg.rician_k * beta**3 / (ey**3 * k1**3),
        "c5": (-kappa * p * beta**2 / (ey**2 * k1**2))[:, None] * pair,
        "c6": 2.0 * rho * p * beta / k1,
        "c7": rho * p * beta**3 / (ey**2 * k1**3),
        "c8": rho * p * cfg.rician_k * beta**3 / (ey**2 * k1**3),
        "c9": (-2.0 * rho * p * beta**2 / (ey * k1**2))[:, None] * pair,
        "c10": ey,
        "c11": beta**2 / (ey * k1**2),
        # coefficient 1 (not 2) keeps the ratio-mean term consistent with z_moments
        "c12": (-beta**2 / k1**2)[:, None] * pair,
        "c13": cfg.rician_k * beta / k1,
        "c14": beta / k1,
    }
    return c


def rate_terms(f1, f2, f3, cfg: SystemConfig, lin: InverseGammaLinearization) -> RateTerms:
    """Assemble the closed-form rate pieces from the three functionals.

    ``f1`` and ``f2`` are length-M arrays, ``f3`` the M x M beam-correlation
    matrix (diagonal ignored).
    """
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    f3 = np.array(f3, dtype=float)
    np.fill_diagonal(f3, 0.0)
    c = rate_constants(cfg, lin)
    ex, _ = moments_x(f1, cfg)
    ey, vy = moments_y(f2, cfg)
    cov = covariance_xy(f1, f3, cfg)
    k1 = cfg.rician_k + 1.0
    xi = ((2.0 * cfg.large_scale_gain / k1 + ex * vy / ey**2 - 2.0 * cov / ey)
          / (1.0 + vy / ey**2 - cov / (ex * ey)))
    return RateTerms(f1=f1, f2=f2, f3=f3, xi=xi, **c)


def approx_rate(terms: RateTerms) -> np.ndarray:
    """Per-user closed-form rate ``log2(f4 + f5 / f6)``.

    A negative linearised threshold (argument below 1) is clamped to rate 0
    with a :class:`RateClampWarning`; a non-positive argument raises
    :class:`NonPositiveRateArgumentError`.
    """
    arg = terms.argument
    if np.any(~np.isfinite(arg)) or np.any(arg <= 0):
        raise NonPositiveRateArgumentError(f"rate argument {arg} is not positive")
    low = arg < 1.0
    if np.any(low):
        warnings.warn(f"{int(low.sum())} user rate(s) clamped to zero", RateClampWarning, stacklevel=2)
        arg = np.maximum(arg, 1.0)
    return np.log2(arg)


def terms_for_layout(t, cfg: SystemConfig, lin: InverseGammaLinearization) -> RateTerms:
    A = beamforming.gram_inverse(channel.los_matrix(t, cfg))
    return rate_terms(beamforming.f1_all(A), beamforming.f2_all(A, cfg.tx_power),
                      beamforming.f3_all(A), cfg, lin)


def user_rates(t, cfg: SystemConfig, lin: InverseGammaLinearization | None = None) -> np.ndarray:
    lin = linearization(cfg.outage_target) if lin is None else lin
    return approx_rate(terms_for_layout(t, cfg, lin))


def sum_rate(t, cfg: SystemConfig, lin: InverseGammaLinearization | None = None) -> float:
    """Outage-aware sum rate of layout ``t``: the optimisation objective."""
    return float(np.sum(user_rates(t, cfg, lin)))


def linearized_rate_from_moments(ez, vz, lin: InverseGammaLinearization) -> np.ndarray:
    """``log2(1 + kappa E[Z] + rho V[Z] / E[Z])``, i.e. the Gamma rate with a linear quantile."""
    arg = 1.0 + lin.kappa * np.asarray(ez) + lin.rho * np.asarray(vz) / ez
    if np.any(arg <= 0):
        raise NonPositiveRateArgumentError(f"rate argument {arg} is not positive")
    return np.log2(np.maximum(arg, 1.0))


def linearized_rates(t, cfg: SystemConfig, lin: InverseGammaLinearization | None = None,
                     signal_variance: str = "tight") -> np.ndarray:
    """Per-user rate evaluated through the moment route rather than ``RateTerms``.

    ``signal_variance="tight"`` replaces ``V[X]`` by ``2 beta/(K+1) E[X]``, the
    large-LoS approximation built into the closed form, so the two routes agree
    to rounding.  ``"exact"`` keeps the exact ``V[X]``.
    """
    lin = linearization(cfg.outage_target) if lin is None else lin
    A = beamforming.gram_inverse(channel.los_matrix(t, cfg))
    f1, f2, f3 = beamforming.f1_all(A), beamforming.f2_all(A, cfg.tx_power), beamforming.f3_all(A)
    ex, vx = moments_x(f1, cfg)
    if signal_variance == "tight":
        vx = 2.0 * cfg.large_scale_gain / (cfg.rician_k + 1.0) * ex
    elif signal_variance != "exact":
        raise ValueError("signal_variance must be 'tight' or 'exact'")
    ey, vy = moments_y(f2, cfg)
    cov = covariance_xy(f1, f3, cfg)
    ez, vz = z_moments(ex, vx, ey, vy, cov, cfg.tx_power)
    return linearized_rate_from_moments(ez, vz, lin)


def exact_rates(t, cfg: SystemConfig, delta: float | None = None) -> np.ndarray:
    """Per-user rate with the Gamma fit and the exact inverse incomplete gamma."""
    delta = cfg.outage_target if delta is None else delta
    ms = moment_set(t, cfg)
    return np.array([outage_rate_exact(ms.fit(m), delta) for m in range(cfg.num_users)])
