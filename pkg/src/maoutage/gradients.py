"""Closed-form gradient of the outage-aware sum rate w.r.t. antenna positions.

Chain: antenna coordinate -> steering derivative -> Gram derivative ->
inverse-Gram derivative ``dA = -A dG A`` -> derivatives of f1, f2, f3 ->
derivatives of f4, f5, f6 -> ``d log2(f4 + f5/f6)``.

Derivative arrays carry a leading ``(axis, antenna)`` pair of dimensions,
``axis`` 0 for x and 1 for y.
"""

from __future__ import annotations

import numpy as np

from . import beamforming, channel
from .config import SystemConfig
from .rate import InverseGammaLinearization, linearization, rate_terms

AXES = {"x": 0, "y": 1}


def _axis(axis) -> int:
    return AXES[axis] if isinstance(axis, str) else int(axis)


def steering_derivative(t, cfg: SystemConfig, n: int, axis) -> np.ndarray:
    """Derivative of column n of the M x N steering matrix w.r.t. ``x_n`` or ``y_n``.

    Entry m is ``j (2 pi / lambda) a_m[axis] exp(j 2 pi / lambda t_n . a_m)``.
    """
    k = 2.0 * np.pi / cfg.wavelength
    a = cfg.direction_cosines
    col = channel.steering_matrix(t, cfg)[:, n]
    return 1j * k * a[_axis(axis)] * col


def gram_derivatives(t, cfg: SystemConfig) -> np.ndarray:
    """``d(H^H H)`` for every coordinate, shape (2, N, M, M)."""
    k = 2.0 * np.pi / cfg.wavelength
    S = channel.steering_matrix(t, cfg)  # M x N; column n is s_n
    a = cfg.direction_cosines  # 2 x M
    # b[axis, n, m] = dS[m, n] / d t_n[axis]
    b = 1j * k * a[:, None, :] * S.T[None, :, :]
    outer = b[..., :, None] * S.T.conj()[None, :, None, :]
    return outer + np.conj(np.swapaxes(outer, -1, -2))


def gram_inverse_derivative(t, cfg: SystemConfig, A: np.ndarray, n: int, axis) -> np.ndarray:
    """``dA / dt_n[axis] = -A (dG / dt_n[axis]) A`` (Hermitian, M x M)."""
    dG = gram_derivatives(t, cfg)[_axis(axis), n]
    return -A @ dG @ A


def gram_inverse_derivatives(t, cfg: SystemConfig, A: np.ndarray) -> np.ndarray:
    return -A @ gram_derivatives(t, cfg) @ A


def functional_derivatives(A: np.ndarray, dA: np.ndarray, powers):
    """Derivatives of f1 (…, M), f2 (…, M) and the correlation matrix C (…, M, M).

    ``dA`` may carry any number of leading dimensions.  ``C[m, j]`` is the
    beam correlation ``|A_mj|^2 / (A_mm A_jj)``; f3 is C with zero diagonal.
    """
    p = np.asarray(powers, dtype=float)
    d = np.real(np.diag(A))
    dd = np.real(np.diagonal(dA, axis1=-2, axis2=-1))
    df1 = -dd / d**2
    mag2 = np.abs(A) ** 2
    dmag2 = 2.0 * np.real(np.conj(A) * dA)
    denom = np.outer(d, d)
    ddenom = dd[..., :, None] * d[None, :] + d[:, None] * dd[..., None, :]
    dC = dmag2 / denom - mag2 * ddenom / denom**2
    dCp = dC @ p
    # C has a constant unit diagonal so dC[m, m] = 0 and only cross terms remain
    df2 = (dCp @ p)[..., None] - 2.0 * p * dCp
    return df1, df2, dC


def f_derivatives(t, cfg: SystemConfig, A: np.ndarray, dA: np.ndarray, m: int, j: int):
    """Scalar ``(df1_m, df2_m, df3_mj)`` for one coordinate's ``dA``."""
    df1, df2, dC = functional_derivatives(A, dA, cfg.tx_power)
    return float(df1[m]), float(df2[m]), float(dC[m, j])


def objective_gradient(t, cfg: SystemConfig, lin: InverseGammaLinearization | None = None) -> np.ndarray:
    """2 x N gradient of the closed-form sum rate (bits/s/Hz per wavelength)."""
    lin = linearization(cfg.outage_target) if lin is None else lin
    A = beamforming.gram_inverse(channel.los_matrix(t, cfg))
    f1 = beamforming.f1_all(A)
    f2 = beamforming.f2_all(A, cfg.tx_power)
    f3 = beamforming.f3_all(A)
    terms = rate_terms(f1, f2, f3, cfg, lin)
    dA = gram_inverse_derivatives(t, cfg, A)
    df1, df2, dC = functional_derivatives(A, dA, cfg.tx_power)

    c = terms
    df4 = (c.c2 * df1 + df2 * (c.c3 + c.c4 * f1) + c.c4 * f2 * df1
           + np.sum(c.c5 * dC, axis=-1))
    df5 = df2 * (c.c7 + c.c8 * f1) + c.c8 * f2 * df1 + np.sum(c.c9 * dC, axis=-1)
    s = np.sum(c.c12 * f3, axis=1)
    ds = np.sum(c.c12 * dC, axis=-1)
    den = c.c13 * f1 + c.c14
    df6 = c.c11 * df2 + (ds * den - s * c.c13 * df1) / den**2

    f4, f5, f6 = terms.f4, terms.f5, terms.f6
    arg = f4 + f5 / f6
    darg = df4 + (df5 * f6 - f5 * df6) / f6**2
    active = arg >= 1.0  # clamped users contribute a flat zero rate
    return np.sum(np.where(active, darg / arg, 0.0), axis=-1) / np.log(2.0)
