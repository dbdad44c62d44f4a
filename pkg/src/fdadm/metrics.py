"""Line-of-sight reception, rate metrics, and Monte Carlo BER.

Receivers see the transmitted vector through their steering vector plus
additive white Gaussian noise. At the desired positions the noise
branch cancels and each stream arrives as a clean scaled constellation;
everywhere else the symbol term is distorted and the artificial noise
leaks through, which is what the bit-error-rate sweeps visualize.

Symbols are Gray-coded QPSK on the 45-degree grid: bit pairs map as
00 -> 45, 01 -> 135, 11 -> 225, 10 -> 315 degrees, unit magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fda import ArrayConfig, PolarPosition, steering_vector
from .precoding import Precoder, complex_gaussian

#: Gray-coded constellation, one point per bit pair in _BIT_PAIRS order.
_CONSTELLATION = np.array([
    (1 + 1j), (-1 + 1j), (-1 - 1j), (1 - 1j)
], dtype=np.complex128) / math.sqrt(2.0)
_BIT_PAIRS = np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8)


@dataclass(frozen=True)
class Scenario:
    """Complete simulation setup: geometry, receivers, powers, noise, seed."""

    array: ArrayConfig
    desired: tuple[PolarPosition, ...]
    eavesdroppers: tuple[PolarPosition, ...]
    beta1: float
    ps: float
    sigma_wd2: float
    sigma_we2: float
    sigma_z2: float
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "desired", tuple(self.desired))
        object.__setattr__(self, "eavesdroppers", tuple(self.eavesdroppers))
        if not 0.0 < self.beta1 <= 1.0:
            raise ValueError(f"beta1 must be in (0, 1], got {self.beta1}")
        for name in ("ps", "sigma_wd2", "sigma_we2", "sigma_z2"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if len(self.desired) < 1:
            raise ValueError("at least one desired receiver is required")
        if len(self.desired) >= self.array.m_total:
            raise ValueError(
                f"{len(self.desired)} desired receivers exceed the steering "
                f"dimension {self.array.m_total}"
            )
        coords = [(p.range_m, p.angle_rad) for p in self.desired]
        if len(set(coords)) != len(coords):
            raise ValueError("desired positions must be pairwise distinct")
        desired_set = set(coords)
        for p in self.eavesdroppers:
            if (p.range_m, p.angle_rad) in desired_set:
                raise ValueError(
                    f"eavesdropper at (range {p.range_m} m, angle "
                    f"{p.angle_rad} rad) coincides with a desired receiver"
                )
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit value, got {self.seed}")

    @property
    def beta2(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.beta1 * self.beta1))

    @property
    def n_desired(self) -> int:
        return len(self.desired)


def receive(channel, s, noise):
    """Projected reception channel^H @ s + noise.

    ``channel`` is a steering vector (1-D) or steering matrix (M x K);
    the caller supplies the noise realization.
    """
    channel = np.asarray(channel, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    if channel.shape[0] != s.shape[0]:
        raise ValueError(
            f"channel of shape {channel.shape} does not conform with "
            f"signal of shape {s.shape}"
        )
    return channel.conj().T @ s + noise


def sinr(pos: PolarPosition, pre: Precoder, scn: Scenario, noise_var: float) -> float:
    """Signal-to-interference-plus-noise ratio at ``pos``.

    Useful power comes through the beamforming branch, interference is
    the artificial-noise leakage at this position.
    """
    h = steering_vector(scn.array, pos)
    signal = scn.beta1 ** 2 * scn.ps * float(np.sum(np.abs(pre.p1.conj().T @ h) ** 2))
    leak = (pre.alpha ** 2 * scn.beta2 ** 2 * scn.ps
            * float(np.sum(np.abs(pre.p2.conj().T @ h) ** 2)))
    return signal / (noise_var + leak)


def achievable_rate(sinr_value: float) -> float:
    """Shannon rate log2(1 + SINR), bits/s/Hz."""
    if sinr_value < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr_value}")
    return math.log2(1.0 + sinr_value)


def secrecy_rate(scn: Scenario, pre: Precoder) -> float:
    """Best-case desired rate margin over the worst-case eavesdropper.

    max over desired receivers of the minimum rate difference against
    every eavesdropper, clamped at zero.
    """
    if not scn.eavesdroppers:
        raise ValueError("secrecy rate needs at least one eavesdropper")
    rates_d = [achievable_rate(sinr(p, pre, scn, scn.sigma_wd2)) for p in scn.desired]
    rates_e = [achievable_rate(sinr(p, pre, scn, scn.sigma_we2))
               for p in scn.eavesdroppers]
    margin = max(min(rd - re for re in rates_e) for rd in rates_d)
    return max(0.0, margin)


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    """Bit sequence with its modulated unit-energy symbols."""

    bits: np.ndarray
    symbols: np.ndarray


def qpsk_modulate(bits) -> SymbolFrame:
    """Map a bit sequence (even length) to Gray-coded QPSK symbols."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1:
        raise ValueError(f"bits must be 1-D, got shape {bits.shape}")
    if bits.size % 2 != 0:
        raise ValueError(f"bit count must be even, got {bits.size}")
    first = bits[0::2].astype(np.float64)
    second = bits[1::2].astype(np.float64)
    symbols = ((1.0 - 2.0 * second) + 1j * (1.0 - 2.0 * first)) / math.sqrt(2.0)
    return SymbolFrame(bits=bits, symbols=symbols)


def qpsk_demodulate(received, reference_gain) -> np.ndarray:
    """Coherent minimum-distance demodulation back to bits.

    ``reference_gain`` is the known complex gain of the symbol branch
    (beta1 * sqrt(Ps) for a desired receiver).
    """
    y = np.asarray(received, dtype=np.complex128) / reference_gain
    dist = np.abs(y[:, np.newaxis] - _CONSTELLATION[np.newaxis, :])
    return _BIT_PAIRS[np.argmin(dist, axis=1)].reshape(-1)


def ber_monte_carlo(scn: Scenario, pre: Precoder, eval_pos: PolarPosition,
                    target_index: int, n_symbols: int,
                    rng: np.random.Generator) -> float:
    """Simulated bit error rate of one stream observed at ``eval_pos``.

    Every symbol interval transmits fresh symbols on all streams plus a
    fresh noise vector; the receiver demodulates stream
    ``target_index`` coherently against the nominal desired-link gain.
    Noise variance is the desired receivers' when ``eval_pos`` is one
    of them, the eavesdroppers' otherwise.
    """
    if n_symbols < 1:
        raise ValueError(f"n_symbols must be >= 1, got {n_symbols}")
    k = scn.n_desired
    if not 0 <= target_index < k:
        raise ValueError(f"target_index {target_index} outside [0, {k})")

    bits = rng.integers(0, 2, size=(k, 2 * n_symbols), dtype=np.uint8)
    symbols = np.empty((k, n_symbols), dtype=np.complex128)
    for i in range(k):
        symbols[i] = qpsk_modulate(bits[i]).symbols
    z = complex_gaussian(rng, (pre.an_dim, n_symbols), scn.sigma_z2)
    noise_var = (scn.sigma_wd2 if eval_pos in scn.desired else scn.sigma_we2)
    noise = complex_gaussian(rng, n_symbols, noise_var)

    h = steering_vector(scn.array, eval_pos)
    gain = scn.beta1 * math.sqrt(scn.ps)
    an_gain = pre.alpha * scn.beta2 * math.sqrt(scn.ps)
    # fold the channel into each branch up front; equivalent to forming
    # the full transmit vector but linear instead of quadratic in M
    y = (gain * ((h.conj() @ pre.p1) @ symbols)
         + an_gain * ((h.conj() @ pre.p2) @ z)
         + noise)
    decided = qpsk_demodulate(y, gain)
    return float(np.mean(decided != bits[target_index]))
