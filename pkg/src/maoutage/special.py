"""Regularized lower incomplete gamma function and its inverse.

Thin validated wrappers over :mod:`scipy.special`; shape and probability
arguments are checked here so that callers see ``ValueError`` rather than a
silent ``nan``.
"""

from __future__ import annotations

import numpy as np
import scipy.special


def _as_out(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def gammainc_lower(a, x):
    """Regularized lower incomplete gamma ``P(a, x)`` for ``a > 0``, ``x >= 0``."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(a > 0)):
        raise ValueError("shape must be positive")
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("argument must be nonnegative")
    return _as_out(scipy.special.gammainc(a, x))


def gammainc_lower_inv(p, a):
    """``x`` with ``P(a, x) = p`` for ``p`` in (0, 1) and ``a > 0``."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("probability must lie in (0, 1)")
    if np.any(~(a > 0)):
        raise ValueError("shape must be positive")
    return _as_out(scipy.special.gammaincinv(a, p))
