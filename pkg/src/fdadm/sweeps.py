"""Seeded experiment drivers.

Each driver turns a loaded scenario into a list of sweep records. All
randomness is derived from the scenario seed and structured stream keys
(see :mod:`fdadm.seeding`), so reruns are bit-identical and, in the
secrecy sweep, both methods face exactly the same eavesdropper draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexity import (
    DEFAULT_BENCH_REPS,
    DEFAULT_BENCH_SIZES,
    bench_precoder,
    fit_scaling,
    footprint,
    memory_ratio,
)
from .fda import PolarPosition, steering_matrix
from .metrics import Scenario, achievable_rate, ber_monte_carlo, sinr
from .precoding import (
    Method,
    Precoder,
    build_precoder,
    complex_gaussian,
    verify_criteria,
)
from .records import SweepRecord
from .scenario_io import LoadedScenario, draw_eavesdroppers
from .seeding import STREAM_BER, STREAM_SECRECY, derived_rng

_METHOD_INDEX = {Method.ZF: 0, Method.SVD: 1}

DEFAULT_ANGLE_STEP_DEG = 0.5
DEFAULT_RANGE_STEP_KM = 1.0
DEFAULT_GRID_ANGLE_STEP_DEG = 3.0
DEFAULT_GRID_RANGE_STEP_KM = 10.0
DEFAULT_SYMBOLS = 10_000
BER_RANGE_KM_MIN = 50.0
BER_RANGE_KM_MAX = 400.0


def _precoders(loaded: LoadedScenario) -> dict[Method, Precoder]:
    # an_dims is resolved at load time; build_precoder ignores it for zf
    scn = loaded.scenario
    return {
        method: build_precoder(scn.array, scn.desired, method,
                               sigma_z2=scn.sigma_z2, an_dims=loaded.an_dims)
        for method in loaded.methods
    }


@dataclass(frozen=True)
class ValidationLine:
    """One residual check of the validation battery."""

    method: Method
    name: str
    value: float
    threshold: float
    passed: bool


def run_validate(loaded: LoadedScenario, tol: float = 1e-9
                 ) -> tuple[bool, list[ValidationLine], list[SweepRecord]]:
    """Synthesis criteria plus structural invariants for both methods.

    Returns overall pass/fail, human-readable lines, and CSV records.
    """
    scn = loaded.scenario
    h = steering_matrix(scn.array, scn.desired)
    m = scn.array.m_total
    k = scn.n_desired
    lines: list[ValidationLine] = []

    precoders = {
        method: build_precoder(scn.array, scn.desired, method,
                               sigma_z2=scn.sigma_z2, an_dims=loaded.an_dims)
        for method in (Method.ZF, Method.SVD)
    }

    def add(method: Method, name: str, value: float, threshold: float,
            passed: bool | None = None) -> None:
        lines.append(ValidationLine(
            method, name, float(value), threshold,
            (value < threshold) if passed is None else passed,
        ))

    for method, pre in precoders.items():
        for check in verify_criteria(h, pre, tol):
            add(method, check.name, check.residual, tol)
        an_power = pre.alpha ** 2 * scn.sigma_z2 * float(np.sum(np.abs(pre.p2) ** 2))
        add(method, "an_power_normalization", abs(an_power - 1.0), tol)
        z = complex_gaussian(derived_rng(scn.seed, 0, _METHOD_INDEX[method]),
                             pre.an_dim, scn.sigma_z2)
        add(method, "an_invisible_at_receivers",
            float(np.linalg.norm(h.conj().T @ (pre.p2 @ z))), tol)

    p2_zf = precoders[Method.ZF].p2
    add(Method.ZF, "projector_hermitian",
        float(np.linalg.norm(p2_zf - p2_zf.conj().T)), tol)
    add(Method.ZF, "projector_idempotent",
        float(np.linalg.norm(p2_zf @ p2_zf - p2_zf)), tol)
    add(Method.ZF, "projector_trace_m_minus_k",
        abs(float(np.trace(p2_zf).real) - (m - k)), 1e-6)

    p2_svd = precoders[Method.SVD].p2
    j = p2_svd.shape[1]
    add(Method.SVD, "basis_orthonormal",
        float(np.linalg.norm(p2_svd.conj().T @ p2_svd - np.eye(j))), tol)
    add(Method.SVD, "basis_inside_zf_nullspace",
        float(np.linalg.norm(p2_zf @ p2_svd - p2_svd)), tol)

    records = [
        SweepRecord("validate", 0.0, str(line.method), line.name,
                    line.value, 1, scn.seed)
        for line in lines
    ]
    return all(line.passed for line in lines), lines, records


def _scenario_at_noise(scn: Scenario, sigma2: float) -> Scenario:
    return Scenario(
        array=scn.array, desired=scn.desired, eavesdroppers=scn.eavesdroppers,
        beta1=scn.beta1, ps=scn.ps, sigma_wd2=sigma2, sigma_we2=sigma2,
        sigma_z2=scn.sigma_z2, seed=scn.seed,
    )


def run_secrecy_sweep(loaded: LoadedScenario, snr_db_min: float = 0.0,
                      snr_db_max: float = 20.0, snr_db_step: float = 1.0,
                      n_eves: int = 2, n_trials: int = 200) -> list[SweepRecord]:
    """Mean secrecy rate against transmit SNR for each method.

    Each trial draws one random eavesdropper placement; the same
    ``n_trials`` placements are reused at every SNR point and for both
    methods, which pairs the comparison and keeps the curves smooth in
    SNR.
    """
    if snr_db_step <= 0:
        raise ValueError(f"snr_db_step must be positive, got {snr_db_step}")
    if n_eves < 1:
        raise ValueError(f"n_eves must be >= 1, got {n_eves}")
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    scn = loaded.scenario
    precoders = _precoders(loaded)
    eve_sets = [
        draw_eavesdroppers(scn.desired, loaded.eve_box, n_eves,
                           derived_rng(scn.seed, STREAM_SECRECY, t))
        for t in range(n_trials)
    ]
    n_points = int(math.floor((snr_db_max - snr_db_min) / snr_db_step + 1e-9)) + 1
    snrs = [snr_db_min + i * snr_db_step for i in range(n_points)]

    records: list[SweepRecord] = []
    for snr_db in snrs:
        sigma2 = scn.ps / (10.0 ** (snr_db / 10.0))
        for method in loaded.methods:
            pre = precoders[method]
            noisy = _scenario_at_noise(scn, sigma2)
            rates_d = [achievable_rate(sinr(p, pre, noisy, sigma2))
                       for p in scn.desired]
            best_d = max(rates_d)
            total = 0.0
            for eves in eve_sets:
                worst_e = max(
                    achievable_rate(sinr(p, pre, noisy, sigma2)) for p in eves
                )
                total += max(0.0, best_d - worst_e)
            records.append(SweepRecord(
                "secrecy_vs_snr", float(snr_db), str(method),
                "secrecy_rate_bits", total / n_trials, n_trials, scn.seed,
            ))
    return records


def _ber_grid(lo: float, hi: float, step: float, insert: float) -> list[float]:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    pts = {round(lo + i * step, 9) for i in range(n)}
    pts.add(round(insert, 9))
    return sorted(pts)


def run_ber_sweep(loaded: LoadedScenario, mode: str = "angle",
                  n_symbols: int = DEFAULT_SYMBOLS,
                  angle_step_deg: float = DEFAULT_ANGLE_STEP_DEG,
                  range_step_km: float = DEFAULT_RANGE_STEP_KM,
                  grid_angle_step_deg: float = DEFAULT_GRID_ANGLE_STEP_DEG,
                  grid_range_step_km: float = DEFAULT_GRID_RANGE_STEP_KM,
                  ) -> list[SweepRecord]:
    """Bit error rate of each desired stream over angle, range, or both.

    Angle mode slices through each desired receiver at its range; range
    mode slices at its angle. Grid mode emits a coarser 2-D map with the
    range baked into the metric name. Each point gets its own derived
    generator, so results do not depend on evaluation order.
    """
    if mode not in ("angle", "range", "grid"):
        raise ValueError(f"mode must be 'angle', 'range' or 'grid', got {mode!r}")
    if n_symbols < 1:
        raise ValueError(f"n_symbols must be >= 1, got {n_symbols}")
    scn = loaded.scenario
    precoders = _precoders(loaded)
    records: list[SweepRecord] = []
    mode_id = {"angle": 0, "range": 1, "grid": 2}[mode]

    def emit(sweep: str, coordinate: float, method: Method, metric: str,
             value: float) -> None:
        records.append(SweepRecord(sweep, coordinate, str(method), metric,
                                   value, n_symbols, scn.seed))

    if mode == "angle":
        for k, rx in enumerate(scn.desired):
            grid = [a for a in _ber_grid(-90.0, 90.0, angle_step_deg, rx.angle_deg)
                    if abs(a) < 90.0]
            for i, angle_deg in enumerate(grid):
                pos = (rx if angle_deg == rx.angle_deg
                       else PolarPosition(rx.range_m, math.radians(angle_deg)))
                for method in loaded.methods:
                    rng = derived_rng(scn.seed, STREAM_BER, mode_id, k, i,
                                      _METHOD_INDEX[method])
                    emit("ber_vs_angle", angle_deg, method, f"ber_rx{k}",
                         ber_monte_carlo(scn, precoders[method], pos, k, n_symbols, rng))
    elif mode == "range":
        for k, rx in enumerate(scn.desired):
            grid = _ber_grid(BER_RANGE_KM_MIN, BER_RANGE_KM_MAX, range_step_km,
                             rx.range_km)
            for i, range_km in enumerate(grid):
                pos = (rx if range_km == rx.range_km
                       else PolarPosition(range_km * 1e3, rx.angle_rad))
                for method in loaded.methods:
                    rng = derived_rng(scn.seed, STREAM_BER, mode_id, k, i,
                                      _METHOD_INDEX[method])
                    emit("ber_vs_range", range_km, method, f"ber_rx{k}",
                         ber_monte_carlo(scn, precoders[method], pos, k, n_symbols, rng))
    else:
        angles = [a for a in _ber_grid(-90.0, 90.0, grid_angle_step_deg, 0.0)
                  if abs(a) < 90.0]
        ranges = _ber_grid(BER_RANGE_KM_MIN, BER_RANGE_KM_MAX, grid_range_step_km,
                           BER_RANGE_KM_MIN)
        for k in range(scn.n_desired):
            for ri, range_km in enumerate(ranges):
                for ai, angle_deg in enumerate(angles):
                    pos = PolarPosition(range_km * 1e3, math.radians(angle_deg))
                    for method in loaded.methods:
                        rng = derived_rng(scn.seed, STREAM_BER, mode_id, k, ri,
                                          ai, _METHOD_INDEX[method])
                        emit("ber_grid", angle_deg, method,
                             f"ber_rx{k}_range_km_{range_km:g}",
                             ber_monte_carlo(scn, precoders[method], pos, k,
                                        n_symbols, rng))
    return records


def run_memratio_sweep(loaded: LoadedScenario, vary: str, lo: int, hi: int
                       ) -> list[SweepRecord]:
    """Element totals of both methods plus their ratio over N, L, or K.

    The two held dimensions come from the scenario. Coordinates where
    the truncated basis is degenerate (K >= 2N+1) are outside the
    ratio's domain and are skipped.
    """
    if vary not in ("n", "l", "k"):
        raise ValueError(f"vary must be 'n', 'l' or 'k', got {vary!r}")
    if lo > hi:
        raise ValueError(f"empty sweep range [{lo}, {hi}]")
    if lo < 1:
        raise ValueError(f"sweep range must start at 1 or above, got {lo}")
    scn = loaded.scenario
    base = {"n": scn.array.n_half, "l": scn.array.n_carriers, "k": scn.n_desired}
    records: list[SweepRecord] = []
    emitted = 0
    for value in range(lo, hi + 1):
        dims = dict(base)
        dims[vary] = value
        n, l, k = dims["n"], dims["l"], dims["k"]
        if k >= 2 * n + 1 or k >= (2 * n + 1) * l:
            continue
        fp_zf = footprint(Method.ZF, n, l, k)
        fp_svd = footprint(Method.SVD, n, l, k)
        zeta = memory_ratio(n, l, k)
        coord = float(value)
        records.append(SweepRecord("memratio", coord, str(Method.ZF),
                                   "p2z_elements_zf", float(fp_zf.total_elements),
                                   1, scn.seed))
        records.append(SweepRecord("memratio", coord, str(Method.SVD),
                                   "p2z_elements_svd", float(fp_svd.total_elements),
                                   1, scn.seed))
        records.append(SweepRecord("memratio", coord, "svd/zf", "zeta_percent",
                                   100.0 * zeta, 1, scn.seed))
        emitted += 1
    if emitted == 0:
        raise ValueError(
            f"no coordinate in [{lo}, {hi}] is inside the ratio's domain "
            f"for {vary!r} with base dimensions {base}"
        )
    return records


def run_bench(sizes=DEFAULT_BENCH_SIZES, reps: int = DEFAULT_BENCH_REPS,
              seed: int = 0) -> list[SweepRecord]:
    """Wall-clock medians per size plus fitted scaling exponents."""
    timings = bench_precoder(sizes, reps, derived_rng(seed, 5))
    exponents = fit_scaling(timings, vary="m")
    records = [
        SweepRecord("bench_time", float(t.m_dim), str(t.method),
                    "p2_build_seconds_median", t.median_seconds, t.reps, seed)
        for t in timings
    ]
    records.extend(
        SweepRecord("bench_exponent", float(timings[0].k_dim), str(method),
                    "time_scaling_exponent", exponent, reps, seed)
        for method, exponent in exponents.items()
    )
    return records
