"""Scenario configuration: counts, powers, fading parameters, angles and regions.

Everything is stored in linear units (milliwatts) and antenna coordinates are
expressed in wavelengths.  JSON documents may give powers in dBm and positions
in metres; :func:`config_from_dict` converts at ingestion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import (
    ConfigError,
    NonPositivePowerError,
    OutageTargetError,
    OverlappingRegionsError,
    TooFewAntennasError,
)


def dbm_to_mw(value_dbm):
    return 10.0 ** (np.asarray(value_dbm, dtype=float) / 10.0)


def mw_to_dbm(value_mw):
    return 10.0 * np.log10(np.asarray(value_mw, dtype=float))


@dataclass(frozen=True)
class Region:
    """Axis aligned rectangle ``[x_min, x_max] x [y_min, y_max]``.

    Degenerate rectangles (a segment or a single point) are allowed; they pin
    an antenna to a fixed location.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min <= self.x_max and self.y_min <= self.y_max):
            raise ConfigError(f"region bounds out of order: {self}")

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def contains(self, point, tol: float = 1e-12) -> bool:
        x, y = point
        return (self.x_min - tol <= x <= self.x_max + tol
                and self.y_min - tol <= y <= self.y_max + tol)

    def overlaps(self, other: "Region") -> bool:
        # Closed rectangles sharing any point are treated as overlapping.
        return not (self.x_max < other.x_min or other.x_max < self.x_min
                    or self.y_max < other.y_min or other.y_max < self.y_min)

    def scaled(self, factor: float) -> "Region":
        return Region(self.x_min * factor, self.x_max * factor,
                      self.y_min * factor, self.y_max * factor)

    def as_list(self) -> list[float]:
        return [self.x_min, self.x_max, self.y_min, self.y_max]


def _frozen(values, size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = np.full(size, float(arr))
    if arr.shape != (size,):
        raise ConfigError(f"{name} must have {size} entries, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemConfig:
    """All constants of one downlink scenario.

    Per-user quantities are length-``num_users`` read-only arrays; scalars are
    broadcast.  ``regions`` holds one :class:`Region` per antenna, in units of
    ``wavelength``.
    """

    num_antennas: int
    num_users: int
    tx_power: np.ndarray
    large_scale_gain: np.ndarray
    rician_k: np.ndarray
    noise_power: float
    elevation_aod: np.ndarray
    azimuth_aod: np.ndarray
    outage_target: float
    regions: tuple[Region, ...]
    wavelength: float = 1.0
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = int(self.num_users)
        object.__setattr__(self, "num_antennas", int(self.num_antennas))
        object.__setattr__(self, "num_users", m)
        for name in ("tx_power", "large_scale_gain", "rician_k", "elevation_aod", "azimuth_aod"):
            object.__setattr__(self, name, _frozen(getattr(self, name), m, name))
        object.__setattr__(self, "noise_power", float(self.noise_power))
        object.__setattr__(self, "outage_target", float(self.outage_target))
        object.__setattr__(self, "wavelength", float(self.wavelength))
        object.__setattr__(self, "regions", tuple(self.regions))

    def __eq__(self, other):
        if not isinstance(other, SystemConfig):
            return NotImplemented
        return config_to_dict(self) == config_to_dict(other)

    @property
    def direction_cosines(self) -> np.ndarray:
        """2 x M matrix whose column m is ``[cos(el) sin(az), sin(el)]``."""
        el, az = self.elevation_aod, self.azimuth_aod
        return np.vstack([np.cos(el) * np.sin(az), np.sin(el)])

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper 2 x N corner matrices of the antenna regions."""
        lo = np.array([[r.x_min for r in self.regions], [r.y_min for r in self.regions]])
        hi = np.array([[r.x_max for r in self.regions], [r.y_max for r in self.regions]])
        return lo, hi

    def region_centers(self) -> np.ndarray:
        return np.array([r.center for r in self.regions], dtype=float).T

    def with_(self, **changes) -> "SystemConfig":
        """Copy with fields replaced (``dataclasses.replace`` plus array re-freezing)."""
        return replace(self, **changes)


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every scenario invariant holds, else raise."""
    n, m = cfg.num_antennas, cfg.num_users
    if m < 1 or n < 1:
        raise ConfigError("num_antennas and num_users must be positive")
    if n < m:
        raise TooFewAntennasError(f"zero forcing needs N >= M, got N={n}, M={m}")
    if len(cfg.regions) != n:
        raise ConfigError(f"expected {n} regions, got {len(cfg.regions)}")
    for i in range(n):
        for j in range(i + 1, n):
            if cfg.regions[i].overlaps(cfg.regions[j]):
                raise OverlappingRegionsError(f"regions {i} and {j} overlap")
    positive = np.concatenate([cfg.tx_power, cfg.large_scale_gain, [cfg.noise_power]])
    if not np.all(np.isfinite(positive)) or np.any(positive <= 0):
        raise NonPositivePowerError("powers, large-scale gains and noise power must be > 0")
    if not np.all(np.isfinite(cfg.rician_k)) or np.any(cfg.rician_k < 0):
        raise ConfigError("Rician K-factors must be >= 0")
    if not 0.0 < cfg.outage_target < 1.0:
        raise OutageTargetError(f"outage target must lie in (0, 1), got {cfg.outage_target}")
    if cfg.wavelength <= 0:
        raise ConfigError("wavelength must be > 0")
    for name in ("elevation_aod", "azimuth_aod"):
        angles = getattr(cfg, name)
        if np.any(np.abs(angles) > np.pi / 2 + 1e-12):
            raise ConfigError(f"{name} must lie in [-pi/2, pi/2]")
    return cfg


def grid_regions(num_antennas: int, side: float, gap: float = 0.5) -> tuple[Region, ...]:
    """Square moving regions of side ``side`` placed along x, ``gap`` apart.

    Region n spans x in ``[n (side + gap), n (side + gap) + side]`` and y in
    ``[0, side]`` (n counted from zero).
    """
    pitch = side + gap
    return tuple(Region(k * pitch, k * pitch + side, 0.0, side) for k in range(num_antennas))


def in_regions(t, regions: Sequence[Region], tol: float = 1e-12) -> bool:
    t = np.asarray(t, dtype=float)
    return all(r.contains(t[:, n], tol) for n, r in enumerate(regions))


def _pick(doc: dict, *keys, required: bool = True):
    for key in keys:
        if key in doc:
            return key, doc[key]
    if required:
        raise ConfigError(f"missing one of {keys}")
    return None, None


def config_from_dict(doc: dict[str, Any]) -> SystemConfig:
    """Build and validate a :class:`SystemConfig` from a JSON-style mapping.

    Recognised keys mirror the dataclass fields.  Powers may be given as
    ``p_dbm`` or ``p_mw`` (``tx_power`` is an alias for ``p_mw``), noise as
    ``noise_dbm`` or ``noise_mw``.  ``large_scale_gain`` may be replaced by a
    ``path_loss`` block ``{"beta0", "radius_m", "exponent"}``.  Regions are
    either an explicit list of ``[x_min, x_max, y_min, y_max]`` or a
    ``region_side`` (plus optional ``region_gap``) for the evenly spaced square
    layout.  With ``"position_unit": "m"`` every coordinate is divided by
    ``wavelength`` (metres) so the stored geometry is in wavelengths.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        n = int(doc["num_antennas"])
        m = int(doc["num_users"])
        key, p = _pick(doc, "p_dbm", "p_mw", "tx_power")
        power = dbm_to_mw(p) if key == "p_dbm" else np.asarray(p, dtype=float)
        key, s2 = _pick(doc, "noise_dbm", "noise_mw", "noise_power")
        noise = float(dbm_to_mw(s2)) if key == "noise_dbm" else float(s2)
        if "path_loss" in doc:
            pl = doc["path_loss"]
            beta = float(pl["beta0"]) * float(pl["radius_m"]) ** (-float(pl["exponent"]))
        else:
            beta = doc["large_scale_gain"]
        unit = doc.get("position_unit", "wavelength")
        if unit not in ("wavelength", "m"):
            raise ConfigError(f"position_unit must be 'wavelength' or 'm', got {unit!r}")
        wavelength = float(doc.get("wavelength", 1.0))
        scale = 1.0 / wavelength if unit == "m" else 1.0
        if "regions" in doc:
            regions = tuple(Region(*map(float, r)).scaled(scale) for r in doc["regions"])
        elif "region_side" in doc:
            regions = grid_regions(n, float(doc["region_side"]) * scale,
                                   float(doc.get("region_gap", 0.5 * wavelength if unit == "m" else 0.5)) * scale)
        else:
            raise ConfigError("configuration needs 'regions' or 'region_side'")
        extras = {}
        if "layout" in doc:
            extras["layout"] = (np.asarray(doc["layout"], dtype=float) * scale).tolist()
        for k in ("name", "notes", "noise_interpretation"):
            if k in doc:
                extras[k] = doc[k]
        cfg = SystemConfig(
            num_antennas=n,
            num_users=m,
            tx_power=power,
            large_scale_gain=beta,
            rician_k=doc["rician_k"],
            noise_power=noise,
            elevation_aod=doc["elevation_aod"],
            azimuth_aod=doc["azimuth_aod"],
            outage_target=float(doc["outage_target"]),
            regions=regions,
            wavelength=1.0,
            extras=extras,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed configuration: {exc!r}") from exc
    return validate_config(cfg)


def config_to_dict(cfg: SystemConfig) -> dict[str, Any]:
    """Inverse of :func:`config_from_dict` using linear units and wavelengths."""
    doc = {
        "num_antennas": cfg.num_antennas,
        "num_users": cfg.num_users,
        "p_mw": cfg.tx_power.tolist(),
        "large_scale_gain": cfg.large_scale_gain.tolist(),
        "rician_k": cfg.rician_k.tolist(),
        "noise_mw": cfg.noise_power,
        "elevation_aod": cfg.elevation_aod.tolist(),
        "azimuth_aod": cfg.azimuth_aod.tolist(),
        "outage_target": cfg.outage_target,
        "regions": [r.as_list() for r in cfg.regions],
        "wavelength": cfg.wavelength,
    }
    doc.update(cfg.extras)
    return doc


def load_config(path) -> SystemConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    return config_from_dict(doc)


def initial_layout(cfg: SystemConfig) -> np.ndarray:
    """Layout stored in the config (``extras['layout']``) or the region centres."""
    if "layout" in cfg.extras:
        t = np.asarray(cfg.extras["layout"], dtype=float)
        if t.shape != (2, cfg.num_antennas):
            raise ConfigError(f"layout must be 2 x {cfg.num_antennas}")
        return t
    return cfg.region_centers()

