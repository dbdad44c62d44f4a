"""Symmetrical multi-carrier frequency diverse array geometry.

A (2N+1)-element linear array at half-wavelength spacing transmits L
carriers per element. Per element-carrier offsets follow a logarithmic
plan, symmetric about the central element:

    f(n, l) = f0 + delta_f * ln[(|n| + 1) * (l + 1)]

which couples the array response to range as well as angle; with
delta_f = 0 the geometry degenerates to an ordinary phased array whose
response depends on angle only.

Steering vectors stack the per-element carrier sub-vectors in element
order n = -N..N (carriers ordered l = 0..L-1 inside each element) and
are scaled to unit Euclidean norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Speed of light in vacuum, m/s.
SPEED_OF_LIGHT = 2.99792458e8


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry and carrier plan.

    ``n_half`` is the per-side element count N (2N+1 elements total),
    ``n_carriers`` the carriers per element L. ``t_obs_s`` is the time
    instant at which phases are evaluated; precoders and channels built
    from the same config automatically share it.
    """

    n_half: int
    n_carriers: int
    f0_hz: float
    delta_f_hz: float
    c_mps: float = SPEED_OF_LIGHT
    t_obs_s: float = 0.0

    def __post_init__(self) -> None:
        if self.n_half < 1:
            raise ValueError(f"n_half must be >= 1, got {self.n_half}")
        if self.n_carriers < 1:
            raise ValueError(f"n_carriers must be >= 1, got {self.n_carriers}")
        if not (self.f0_hz > 0 and math.isfinite(self.f0_hz)):
            raise ValueError(f"f0_hz must be positive and finite, got {self.f0_hz}")
        if not math.isfinite(self.delta_f_hz):
            raise ValueError("delta_f_hz must be finite")
        if abs(self.delta_f_hz) / self.f0_hz >= 1e-3:
            raise ValueError(
                "frequency offset must be small against the carrier: "
                f"|delta_f|/f0 = {abs(self.delta_f_hz) / self.f0_hz:.3g} >= 1e-3"
            )
        if not (self.c_mps > 0 and math.isfinite(self.c_mps)):
            raise ValueError(f"c_mps must be positive and finite, got {self.c_mps}")
        if not math.isfinite(self.t_obs_s):
            raise ValueError("t_obs_s must be finite")

    @property
    def n_elements(self) -> int:
        """Total element count 2N+1."""
        return 2 * self.n_half + 1

    @property
    def m_total(self) -> int:
        """Steering-vector length (2N+1)L."""
        return self.n_elements * self.n_carriers

    @property
    def wavelength_m(self) -> float:
        return self.c_mps / self.f0_hz

    @property
    def spacing_m(self) -> float:
        """Inter-element spacing, half the central wavelength."""
        return self.c_mps / (2.0 * self.f0_hz)


@dataclass(frozen=True)
class PolarPosition:
    """Range/angle coordinate relative to the central array element."""

    range_m: float
    angle_rad: float

    def __post_init__(self) -> None:
        if not (self.range_m > 0 and math.isfinite(self.range_m)):
            raise ValueError(f"range_m must be positive and finite, got {self.range_m}")
        if not (math.isfinite(self.angle_rad) and abs(self.angle_rad) < math.pi / 2):
            raise ValueError(
                f"angle_rad must lie strictly inside (-pi/2, pi/2), got {self.angle_rad}"
            )

    @classmethod
    def from_km_deg(cls, range_km: float, angle_deg: float) -> "PolarPosition":
        return cls(range_m=range_km * 1e3, angle_rad=math.radians(angle_deg))

    @property
    def range_km(self) -> float:
        return self.range_m / 1e3

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.angle_rad)


def _check_indices(cfg: ArrayConfig, n: int, l: int) -> None:
    if not -cfg.n_half <= n <= cfg.n_half:
        raise IndexError(
            f"element index {n} outside [-{cfg.n_half}, {cfg.n_half}]"
        )
    if not 0 <= l < cfg.n_carriers:
        raise IndexError(
            f"carrier index {l} outside [0, {cfg.n_carriers - 1}]"
        )


def carrier_frequency(cfg: ArrayConfig, n: int, l: int) -> float:
    """Carrier frequency of element n, carrier l (Hz).

    Depends on |n| only, so the offset plan is conjugate-symmetric
    about the central element.
    """
    _check_indices(cfg, n, l)
    return cfg.f0_hz + cfg.delta_f_hz * math.log((abs(n) + 1) * (l + 1))


def element_phase(cfg: ArrayConfig, n: int, l: int, pos: PolarPosition) -> float:
    """Phase (radians) of element n, carrier l observed at ``pos``.

    Sum of the range-coupled term from the per-carrier frequency offset
    (evaluated at t_obs minus the propagation delay r/c) and the usual
    linear-array angle term at the central carrier.
    """
    _check_indices(cfg, n, l)
    offset = cfg.delta_f_hz * math.log((abs(n) + 1) * (l + 1))
    range_term = offset * (cfg.t_obs_s - pos.range_m / cfg.c_mps)
    angle_term = cfg.f0_hz * n * cfg.spacing_m * math.sin(pos.angle_rad) / cfg.c_mps
    return 2.0 * math.pi * (range_term + angle_term)


def steering_vector(cfg: ArrayConfig, pos: PolarPosition) -> np.ndarray:
    """Unit-norm array response at ``pos``; length (2N+1)L.

    Entry ordering is element-major (n = -N..N), carrier-minor
    (l = 0..L-1 inside each element).
    """
    n = np.arange(-cfg.n_half, cfg.n_half + 1, dtype=np.float64)[:, np.newaxis]
    l = np.arange(cfg.n_carriers, dtype=np.float64)[np.newaxis, :]
    offsets = cfg.delta_f_hz * np.log((np.abs(n) + 1.0) * (l + 1.0))
    phases = 2.0 * np.pi * (
        offsets * (cfg.t_obs_s - pos.range_m / cfg.c_mps)
        + cfg.f0_hz * n * cfg.spacing_m * math.sin(pos.angle_rad) / cfg.c_mps
    )
    return np.exp(1j * phases).reshape(cfg.m_total) / math.sqrt(cfg.m_total)


def steering_matrix(cfg: ArrayConfig, positions) -> np.ndarray:
    """Stack steering vectors of ``positions`` as columns; (2N+1)L x K.

    Positions must be pairwise distinct (exact coordinate comparison;
    near-duplicates surface later as an ill-conditioning error during
    precoder synthesis) and fewer than the steering dimension.
    """
    positions = list(positions)
    k = len(positions)
    if k < 1:
        raise ValueError("steering_matrix needs at least one position")
    if k >= cfg.m_total:
        raise ValueError(
            f"over-determined position set: {k} positions for steering "
            f"dimension {cfg.m_total}"
        )
    seen: set[tuple[float, float]] = set()
    for p in positions:
        key = (p.range_m, p.angle_rad)
        if key in seen:
            raise ValueError(
                f"duplicate position (range {p.range_m} m, angle {p.angle_rad} rad)"
            )
        seen.add(key)
    return np.column_stack([steering_vector(cfg, p) for p in positions])
