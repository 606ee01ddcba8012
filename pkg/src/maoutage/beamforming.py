"""Statistical-CSI zero forcing and the Gram-inverse channel functionals.

The rate and gradient code only ever needs the inverse Gram matrix
``A = (H^H H)^{-1}`` of the LoS channel ``H`` (N x M).  From it:

* beamforming gain   ``f1[m]    = 1 / A[m, m]``
* interference trace ``f2[m]    = sum_{i,j != m} P_i P_j |A_ij|^2 / (A_ii A_jj)``
* beam correlation   ``f3[m, j] = |A_jm|^2 / (A_jj A_mm)``

:func:`zf_beamformers` builds the beamformers explicitly from the projector
form and is used as the independent cross-check of those closed forms.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import IllConditionedError

COND_LIMIT = 1e12


def gram_inverse(H: np.ndarray, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Hermitian inverse of ``H^H H`` via a Cholesky solve.

    Raises :class:`IllConditionedError` when the Gram matrix has condition
    number above ``cond_limit`` (e.g. two users sharing an AoD).
    """
    gram = H.conj().T @ H
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(f"Gram matrix condition number {cond:.3g} exceeds {cond_limit:.0e}")
    factor = scipy.linalg.cho_factor(gram, lower=True)
    inv = scipy.linalg.cho_solve(factor, np.eye(gram.shape[0], dtype=complex))
    return 0.5 * (inv + inv.conj().T)


def _projector_beam(H: np.ndarray, m: int) -> np.ndarray:
    n, num_users = H.shape
    others = np.delete(H, m, axis=1)
    h = H[:, m]
    if num_users == 1:
        w = h.copy()
    else:
        gram = others.conj().T @ others
        if np.linalg.cond(gram) > COND_LIMIT:
            raise IllConditionedError("interfering users' Gram matrix is ill conditioned")
        w = h - others @ np.linalg.solve(gram, others.conj().T @ h)
    norm = np.linalg.norm(w)
    if norm < 1e-12 * np.sqrt(n):
        raise IllConditionedError(f"user {m} lies in the span of the other users")
    return w / norm


def zf_beamformers(H: np.ndarray) -> np.ndarray:
    """N x M matrix of unit-norm zero-forcing beamformers (projector form)."""
    return np.column_stack([_projector_beam(H, m) for m in range(H.shape[1])])


def beam_correlation(A: np.ndarray) -> np.ndarray:
    """Matrix ``C[i, j] = |A_ij|^2 / (A_ii A_jj)``; unit diagonal, symmetric."""
    d = np.real(np.diag(A))
    return np.abs(A) ** 2 / np.outer(d, d)


def f1_all(A: np.ndarray) -> np.ndarray:
    return 1.0 / np.real(np.diag(A))


def f2_all(A: np.ndarray, powers) -> np.ndarray:
    p = np.asarray(powers, dtype=float)
    c = beam_correlation(A)
    cp = c @ p
    # sum over i, j != m == full quadratic form minus row/column m
    return p @ cp - 2.0 * p * cp + p * p * np.diag(c)


def f3_all(A: np.ndarray) -> np.ndarray:
    c = beam_correlation(A)
    np.fill_diagonal(c, 0.0)
    return c


def f1(A: np.ndarray, m: int) -> float:
    return float(1.0 / np.real(A[m, m]))


def f2(A: np.ndarray, powers, m: int) -> float:
    return float(f2_all(A, powers)[m])


def f3(A: np.ndarray, m: int, j: int) -> float:
    if m == j:
        raise ValueError("f3 is defined for distinct users only")
    return float(abs(A[j, m]) ** 2 / (np.real(A[j, j]) * np.real(A[m, m])))


def interference_matrix(W: np.ndarray, powers, m: int) -> np.ndarray:
    """``Psi_m = sum_{j != m} P_j w_j w_j^H`` built from explicit beamformers."""
    p = np.asarray(powers, dtype=float).copy()
    p[m] = 0.0
    return (W * p) @ W.conj().T
