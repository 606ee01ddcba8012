"""LoS steering vectors and seeded Rician channel draws.

NLoS samples come from a counter based generator: user ``m`` of trial ``i``
owns Philox key ``(seed, m)`` and the counter block starting at
``i * blocks_per_trial``.  A contiguous range of trials is therefore one bulk
draw, and any single trial can be regenerated on its own, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

_WORDS_PER_BLOCK = 4
_U53 = 2.0 ** -53


def steering_matrix(t, cfg: SystemConfig) -> np.ndarray:
    """M x N matrix whose row m is the LoS steering row of user m.

    Entry ``(m, n)`` is ``exp(j 2 pi / lambda * t_n . a_m)``.
    """
    t = np.asarray(t, dtype=float)
    phase = (2.0 * np.pi / cfg.wavelength) * (cfg.direction_cosines.T @ t)
    return np.exp(1j * phase)


def steering_row(t, cfg: SystemConfig, m: int) -> np.ndarray:
    return steering_matrix(t, cfg)[m]


def los_matrix(t, cfg: SystemConfig) -> np.ndarray:
    """N x M statistical channel matrix (column m is the conjugated steering row)."""
    return steering_matrix(t, cfg).conj().T


def _blocks_per_trial(num_antennas: int) -> int:
    # one complex normal consumes two 64-bit words
    return -(-2 * num_antennas // _WORDS_PER_BLOCK)


def _box_muller(raw: np.ndarray) -> np.ndarray:
    u1 = ((raw[..., 0::2] >> np.uint64(11)).astype(float) + 0.5) * _U53
    u2 = (raw[..., 1::2] >> np.uint64(11)).astype(float) * _U53
    radius = np.sqrt(-np.log(u1))  # sqrt(-2 ln u1) / sqrt(2): unit total variance
    return radius * np.exp(2j * np.pi * u2)


def nlos_block(num_antennas: int, seed: int, user: int, start: int, count: int) -> np.ndarray:
    """``count x N`` i.i.d. CN(0, 1) draws for trials ``start .. start+count-1``."""
    blocks = _blocks_per_trial(num_antennas)
    words = blocks * _WORDS_PER_BLOCK
    gen = np.random.Philox(key=[int(seed) & (2**64 - 1), int(user)],
                           counter=[int(start) * blocks, 0, 0, 0])
    raw = gen.random_raw(count * words).reshape(count, words)
    return _box_muller(raw[:, : 2 * num_antennas])


@dataclass(frozen=True)
class ChannelRealization:
    rows: np.ndarray
    nlos: np.ndarray
    seed: int
    trial: int


def rician_rows(t, cfg: SystemConfig, nlos: np.ndarray) -> np.ndarray:
    """Combine LoS rows with NLoS draws; ``nlos`` has a leading user axis."""
    k = cfg.rician_k[:, None]
    beta = cfg.large_scale_gain[:, None]
    los = steering_matrix(t, cfg)
    if nlos.ndim == 3:
        k, beta, los = k[:, None], beta[:, None], los[:, None, :]
    return np.sqrt(k * beta / (k + 1)) * los + np.sqrt(beta / (k + 1)) * nlos


def draw_channel(t, cfg: SystemConfig, seed: int, trial: int) -> ChannelRealization:
    """One Rician realisation of every user's channel row for the given trial."""
    n = cfg.num_antennas
    nlos = np.vstack([nlos_block(n, seed, m, trial, 1) for m in range(cfg.num_users)])
    return ChannelRealization(rician_rows(t, cfg, nlos), nlos, int(seed), int(trial))
