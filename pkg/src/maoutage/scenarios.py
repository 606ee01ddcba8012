"""Named scenarios used by the experiments, tests and notebooks.

All coordinates are in wavelengths and powers in milliwatts.
"""

from __future__ import annotations

import numpy as np

from .config import Region, SystemConfig, dbm_to_mw, grid_regions, validate_config

# Four-user downlink: elevation and azimuth angles of departure (radians).
ELEVATION = (0.8676, 0.9879, 1.2720, 0.4021)
AZIMUTH = (0.2852, 1.1165, 1.0048, 1.2045)

# beta0 = -30 dB at 1 m, users 1000 m away, exponent 2
PATH_GAIN = 1e-3 * 1000.0 ** -2

# Starts used for the convergence study (x row, then y row).
CONVERGENCE_STARTS = (
    np.array([[0.4, 2.3, 4.7, 5.5, 7.4], [0.4, 0.3, 0.6, 0.8, 0.8]]),
    np.array([[0.8, 2.5, 4.2, 5.8, 7.1], [0.4, 0.3, 0.6, 0.5, 0.5]]),
    np.array([[0.7, 2.1, 3.8, 5.5, 7.15], [0.6, 0.3, 0.4, 0.5, 0.9]]),
    np.array([[0.5, 2.5, 4.5, 5.22, 7.13], [0.47, 0.33, 0.69, 0.88, 0.82]]),
)

# Fixed five-antenna layout of the CDF study and its user angles (elevation = azimuth).
CDF_LAYOUT = np.array([[0.0, 0.0, 0.5, 0.5, 1.0], [0.0, 0.5, 0.0, 0.5, 0.0]])
CDF_ANGLES = (0.0, 0.5, 1.0, 1.5)


def downlink_config(num_antennas: int = 5, side: float = 1.0, rician_k: float = 15.0,
                    outage_target: float = 0.2, power_dbm=10.0,
                    noise_dbm: float = -90.0) -> SystemConfig:
    """Four users, ``num_antennas`` square regions of side ``side`` spaced 0.5 apart."""
    return validate_config(SystemConfig(
        num_antennas=num_antennas,
        num_users=4,
        tx_power=dbm_to_mw(power_dbm),
        large_scale_gain=PATH_GAIN,
        rician_k=rician_k,
        noise_power=float(dbm_to_mw(noise_dbm)),
        elevation_aod=ELEVATION,
        azimuth_aod=AZIMUTH,
        outage_target=outage_target,
        regions=grid_regions(num_antennas, side),
        extras={"name": "downlink"},
    ))


def cdf_config(rician_k: float = 15.0, power_dbm=10.0, outage_target: float = 0.2,
               noise_mw: float = 1e-9) -> SystemConfig:
    """Fixed-layout scenario for the SINR distribution study.

    Each antenna is pinned by a point region.  The noise level is read as
    ``1e-9`` in linear milliwatts.
    """
    regions = tuple(Region(x, x, y, y) for x, y in CDF_LAYOUT.T)
    return validate_config(SystemConfig(
        num_antennas=5,
        num_users=4,
        tx_power=dbm_to_mw(power_dbm),
        large_scale_gain=1e-9,
        rician_k=rician_k,
        noise_power=noise_mw,
        elevation_aod=CDF_ANGLES,
        azimuth_aod=CDF_ANGLES,
        outage_target=outage_target,
        regions=regions,
        extras={"name": "cdf", "layout": CDF_LAYOUT.tolist(),
                "noise_interpretation": "1e-9 read as linear mW; the dBm reading would be about 1 mW"},
    ))


def with_first_power(cfg: SystemConfig, p1_dbm: float) -> SystemConfig:
    """Copy of ``cfg`` with user 1 at ``p1_dbm`` and the others unchanged."""
    p = cfg.tx_power.copy()
    p[0] = float(dbm_to_mw(p1_dbm))
    return cfg.with_(tx_power=p)
