"""Memory accounting and wall-clock scaling of the two precoder methods.

The zf projector is a dense M x M matrix driven by an M-dimensional
noise vector; the truncated svd basis stores M x (2N+1-K) plus a
(2N+1-K)-vector. The ratio of elements kept

    [(2N+1)L(2N+1-K) + (2N+1-K)] / [(2N+1)L(2N+1)L + (2N+1)L]

tends to 1/L for large arrays, which is the headline memory saving.

Wall-clock measurements back the construction-cost claims empirically:
median build times over a ladder of steering dimensions, and a log-log
slope fit per method. Absolute times are hardware-bound; the portable
claims are the ordering and the scaling exponents.
"""
from __future__ import annotations

import ctypes
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from threadpoolctl import threadpool_limits

from .fda import ArrayConfig, PolarPosition, steering_matrix
from .precoding import Method, orthogonal_matrix_svd, orthogonal_matrix_zf

#: Bytes per stored element (complex double).
BYTES_PER_ELEMENT = 16

#: Default benchmark ladder: (n_half, n_carriers, k) triples whose
#: steering dimensions are 63, 119, 255, 511, 1023. Factorizations keep
#: 2N+1 small so the truncated basis width stays moderate and the
#: construction cost tracks the steering dimension itself; 119 is the
#: 17-element, 7-carrier reference configuration.
DEFAULT_BENCH_SIZES: tuple[tuple[int, int, int], ...] = (
    (3, 9, 3),
    (8, 7, 3),
    (8, 15, 3),
    (3, 73, 3),
    (15, 33, 3),
)

DEFAULT_BENCH_REPS = 60
_BENCH_PASSES = 3


@dataclass(frozen=True)
class MemoryFootprint:
    """Element counts of the orthogonal matrix and noise vector."""

    p2_elements: int
    z_elements: int

    @property
    def total_elements(self) -> int:
        return self.p2_elements + self.z_elements

    @property
    def bytes(self) -> int:
        return BYTES_PER_ELEMENT * self.total_elements


@dataclass(frozen=True)
class TimingRecord:
    """Median wall time of one method at one problem size."""

    method: Method
    m_dim: int
    k_dim: int
    reps: int
    median_seconds: float


def _check_domain(n_half: int, n_carriers: int, k: int, svd_regime: bool) -> None:
    if n_half < 1 or n_carriers < 1 or k < 1:
        raise ValueError(
            f"counts must be positive, got n_half={n_half}, "
            f"n_carriers={n_carriers}, k={k}"
        )
    m = (2 * n_half + 1) * n_carriers
    if k >= m:
        raise ValueError(f"k={k} must be below the steering dimension {m}")
    if svd_regime and k >= 2 * n_half + 1:
        raise ValueError(
            f"k={k} must be below the element count {2 * n_half + 1} for "
            "the truncated basis to have positive width"
        )


def memory_ratio_exact(n_half: int, n_carriers: int, k: int) -> Fraction:
    """svd-to-zf stored-element ratio as an exact rational.

    Uses the expanded closed form; :func:`footprint` counts elements
    independently, and the two must agree exactly.
    """
    _check_domain(n_half, n_carriers, k, svd_regime=True)
    e = 2 * n_half + 1
    l = n_carriers
    num = e * e * l - e * (l * k - 1) - k
    den = e * e * l * l + e * l
    return Fraction(num, den)


def memory_ratio(n_half: int, n_carriers: int, k: int) -> float:
    """Memory ratio as a float in (0, 1); tends to 1/L for large N."""
    return float(memory_ratio_exact(n_half, n_carriers, k))


def footprint(method: Method, n_half: int, n_carriers: int, k: int) -> MemoryFootprint:
    """Stored elements for one method at one configuration."""
    method = Method(method)
    _check_domain(n_half, n_carriers, k, svd_regime=method is Method.SVD)
    m = (2 * n_half + 1) * n_carriers
    if method is Method.ZF:
        return MemoryFootprint(p2_elements=m * m, z_elements=m)
    width = 2 * n_half + 1 - k
    return MemoryFootprint(p2_elements=m * width, z_elements=width)


def _timing_isolation() -> None:
    """Keep large allocations on the heap for the benchmark's lifetime.

    Repeated alloc/free of multi-megabyte work matrices otherwise cycles
    through mmap/munmap and the measurement drowns in page faults. The
    allocations themselves stay inside the timed region.
    """
    try:
        libc = ctypes.CDLL("libc.so.6", use_errno=True)
        libc.mallopt(-3, 1 << 30)  # M_MMAP_THRESHOLD
        libc.mallopt(-1, 1 << 30)  # M_TRIM_THRESHOLD
    except OSError:  # non-glibc platform; timings will just be noisier
        pass


def _bench_positions(k: int, rng: np.random.Generator) -> list[PolarPosition]:
    # well-separated draws keep the steering matrix comfortably full rank
    angles = rng.permutation(np.linspace(-70.0, 70.0, max(k, 8))[:k])
    ranges = rng.uniform(50e3, 400e3, size=k)
    return [PolarPosition(range_m=float(r), angle_rad=math.radians(float(a)))
            for r, a in zip(ranges, angles)]


def bench_precoder(sizes, reps: int = DEFAULT_BENCH_REPS,
                   rng: np.random.Generator | None = None) -> list[TimingRecord]:
    """Time orthogonal-matrix construction for both methods.

    For each (n_half, n_carriers, k) size a random distinct-position
    steering matrix is built outside the timed region; the timed region
    covers exactly one construction call, allocations included. Reps of
    the two methods are interleaved and repeated over several passes on
    a single thread; the per-size statistic is the fastest pass median,
    which shrugs off machine-load drift.
    """
    if reps < 5:
        raise ValueError(f"reps must be >= 5, got {reps}")
    rng = rng if rng is not None else np.random.default_rng(0)
    _timing_isolation()
    records: list[TimingRecord] = []
    with threadpool_limits(limits=1):
        for n_half, n_carriers, k in sizes:
            cfg = ArrayConfig(n_half=n_half, n_carriers=n_carriers,
                              f0_hz=10e9, delta_f_hz=2e3)
            h = steering_matrix(cfg, _bench_positions(k, rng))
            width = 2 * n_half + 1 - k
            for _ in range(8):  # warm-up, discarded
                orthogonal_matrix_zf(h)
                orthogonal_matrix_svd(h, width)
            best_zf = math.inf
            best_svd = math.inf
            for _ in range(_BENCH_PASSES):
                t_zf = np.empty(reps)
                t_svd = np.empty(reps)
                for i in range(reps):
                    t0 = time.perf_counter_ns()
                    orthogonal_matrix_zf(h)
                    t_zf[i] = time.perf_counter_ns() - t0
                    t0 = time.perf_counter_ns()
                    orthogonal_matrix_svd(h, width)
                    t_svd[i] = time.perf_counter_ns() - t0
                best_zf = min(best_zf, float(np.median(t_zf)))
                best_svd = min(best_svd, float(np.median(t_svd)))
            records.append(TimingRecord(Method.ZF, cfg.m_total, k, reps,
                                        best_zf / 1e9))
            records.append(TimingRecord(Method.SVD, cfg.m_total, k, reps,
                                        best_svd / 1e9))
    return records


def fit_scaling(records, vary: str = "m") -> dict[Method, float]:
    """Least-squares log-log slope of time against one dimension.

    ``vary`` names the swept dimension (``"m"`` or ``"k"``); the other
    dimension must be constant across the records, and the sweep must
    cover at least four sizes spanning a factor of eight.
    """
    if vary not in ("m", "k"):
        raise ValueError(f"vary must be 'm' or 'k', got {vary!r}")
    fixed = "k" if vary == "m" else "m"
    exponents: dict[Method, float] = {}
    for method in Method:
        rows = [r for r in records if Method(r.method) is method]
        if not rows:
            continue
        varied = np.array([getattr(r, f"{vary}_dim") for r in rows], dtype=float)
        held = {getattr(r, f"{fixed}_dim") for r in rows}
        if len(held) != 1:
            raise ValueError(
                f"{fixed} dimension must be fixed while varying {vary}, "
                f"saw values {sorted(held)}"
            )
        if len(set(varied)) < 4:
            raise ValueError(
                f"need at least 4 distinct {vary} sizes, got {len(set(varied))}"
            )
        if varied.max() / varied.min() < 8.0:
            raise ValueError(
                f"{vary} sizes must span at least 8x, got "
                f"{varied.max() / varied.min():.2f}x"
            )
        times = np.array([r.median_seconds for r in rows])
        exponents[method] = float(np.polyfit(np.log(varied), np.log(times), 1)[0])
    return exponents
