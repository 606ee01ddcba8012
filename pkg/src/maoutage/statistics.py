"""Closed-form SINR moments and the moment-matched Gamma approximation.

Under statistical-CSI zero forcing the SINR of user m is ``Z = P_m X / Y``:
``X`` is the received signal power gain and ``Y`` the NLoS interference plus
noise.  Their first two moments and covariance are exact; the moments of
the ratio use a second-order Taylor expansion for the mean and a
first-order one for the variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import beamforming, channel
from .config import SystemConfig
from .errors import DegenerateDistributionError, NonPositiveVarianceError
from .special import gammainc_lower


def ratio_moments(ex, vx, ey, vy, cov):
    """Approximate mean and variance of ``X / Y``.

    Parameters
    ----------
    ex, vx : mean and variance of the numerator.
    ey, vy : mean and variance of the (positive) denominator.
    cov : covariance of numerator and denominator.

    Returns
    -------
    (mean, variance)
        ``mean = ex/ey + ex vy/ey^3 - cov/ey^2`` and
        ``variance = vx/ey^2 + ex^2 vy/ey^4 - 2 ex cov/ey^3``.

    Raises
    ------
    NonPositiveVarianceError
        If the variance comes out negative, or zero while the inputs are not
        deterministic.  Either means the expansion is outside its useful range.
    """
    ex, vx, ey, vy, cov = (np.asarray(v, dtype=float) for v in (ex, vx, ey, vy, cov))
    if np.any(ey <= 0):
        raise ValueError("denominator mean must be positive")
    mean = ex / ey + ex * vy / ey**3 - cov / ey**2
    var = vx / ey**2 + ex**2 * vy / ey**4 - 2.0 * ex * cov / ey**3
    bad = (var < 0) | ((var == 0) & ((vx > 0) | (vy > 0)))
    if np.any(bad):
        raise NonPositiveVarianceError(f"ratio variance {var} is not positive")
    if mean.ndim == 0:
        return float(mean), float(var)
    return mean, var


def moments_x(f1_value, cfg: SystemConfig, m=None):
    """Mean and variance of the signal term ``X_m`` given ``f1 = |h_m w_m|^2``.

    With ``m=None`` the per-user arrays of ``cfg`` are used and ``f1_value``
    must hold one entry per user.
    """
    k, beta = _user_params(cfg, m)
    f1 = np.asarray(f1_value, dtype=float)
    ex = k * beta / (k + 1) * f1 + beta / (k + 1)
    vx = beta**2 / (k + 1) ** 2 * (1.0 + 2.0 * k * f1)
    return _maybe_scalar(ex), _maybe_scalar(vx)


def moments_y(f2_value, cfg: SystemConfig, m=None):
    """Mean and variance of the interference-plus-noise term ``Y_m``."""
    k, beta = _user_params(cfg, m)
    p = cfg.tx_power
    others = p.sum() - (p if m is None else p[m])
    scale = beta / (k + 1)
    ey = scale * others + cfg.noise_power
    vy = scale**2 * np.asarray(f2_value, dtype=float)
    return _maybe_scalar(ey), _maybe_scalar(vy)


def covariance_xy(f1_value, f3_values, cfg: SystemConfig, m=None):
    """``Cov(X_m, Y_m) = sum_{j != m} P_j beta_m^2 / (K_m + 1)^2 f3[m, j]``.

    ``f1_value`` does not enter the final expression (its contributions cancel)
    and is accepted for signature symmetry with the other moment functions.
    ``f3_values`` is a length-M row for one user (entry m ignored) or the
    full M x M matrix when ``m`` is None.
    """
    k, beta = _user_params(cfg, m)
    f3 = np.array(f3_values, dtype=float)
    p = cfg.tx_power
    if m is None:
        f3 = f3.copy()
        np.fill_diagonal(f3, 0.0)
        weighted = f3 @ p
    else:
        f3[m] = 0.0
        weighted = f3 @ p
    return _maybe_scalar(beta**2 / (k + 1) ** 2 * weighted)


def z_moments(ex, vx, ey, vy, cov, power):
    """Approximate mean and variance of the SINR ``P X / Y``."""
    mean, var = ratio_moments(ex, vx, ey, vy, cov)
    p = np.asarray(power, dtype=float)
    return _maybe_scalar(p * mean), _maybe_scalar(p**2 * var)


def z_mean_first_order(ex, ey, power):
    """The cruder mean estimate ``P E[X] / E[Y]`` (no curvature correction)."""
    return power * np.asarray(ex, dtype=float) / ey


@dataclass(frozen=True)
class GammaFit:
    shape: float
    scale: float

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale**2


def gamma_fit(ez: float, vz: float) -> GammaFit:
    """Gamma distribution with the given mean and variance."""
    if not (ez > 0 and vz > 0) or not (np.isfinite(ez) and np.isfinite(vz)):
        raise DegenerateDistributionError(f"cannot fit a Gamma law to mean={ez}, var={vz}")
    return GammaFit(shape=ez**2 / vz, scale=vz / ez)


def gamma_fit_first_order(ez_first_order: float, vz: float) -> GammaFit:
    """Same moment match, fed with the first-order mean ``P E[X]/E[Y]``."""
    return gamma_fit(ez_first_order, vz)


def gamma_cdf(fit: GammaFit, v):
    """``P(shape, v / scale)``; zero for ``v <= 0``."""
    v = np.asarray(v, dtype=float)
    out = gammainc_lower(fit.shape, np.maximum(v, 0.0) / fit.scale)
    return out


@dataclass(frozen=True)
class MomentSet:
    """Per-user moment arrays (length M) for one antenna layout."""

    ex: np.ndarray
    vx: np.ndarray
    ey: np.ndarray
    vy: np.ndarray
    cov: np.ndarray
    ez: np.ndarray
    vz: np.ndarray
    ez_first_order: np.ndarray

    def fit(self, m: int) -> GammaFit:
        return gamma_fit(float(self.ez[m]), float(self.vz[m]))

    def fit_first_order(self, m: int) -> GammaFit:
        return gamma_fit_first_order(float(self.ez_first_order[m]), float(self.vz[m]))


def moment_set(t, cfg: SystemConfig, gram_inv: np.ndarray | None = None) -> MomentSet:
    """All SINR moments for layout ``t`` (one Gram inversion)."""
    A = beamforming.gram_inverse(channel.los_matrix(t, cfg)) if gram_inv is None else gram_inv
    f1 = beamforming.f1_all(A)
    f2 = beamforming.f2_all(A, cfg.tx_power)
    f3 = beamforming.f3_all(A)
    ex, vx = moments_x(f1, cfg)
    ey, vy = moments_y(f2, cfg)
    cov = covariance_xy(f1, f3, cfg)
    ez, vz = z_moments(ex, vx, ey, vy, cov, cfg.tx_power)
    return MomentSet(ex, vx, ey, vy, cov, ez, vz, z_mean_first_order(ex, ey, cfg.tx_power))


def _user_params(cfg: SystemConfig, m):
    if m is None:
        return cfg.rician_k, cfg.large_scale_gain
    return float(cfg.rician_k[m]), float(cfg.large_scale_gain[m])


def _maybe_scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x
