import math

import numpy as np
import pytest

from fdadm import ArrayConfig, PolarPosition
from fdadm.scenario_io import bundled_scenario_path, load_scenario


@pytest.fixture(scope="session")
def sec4():
    """Bundled reference scenario (17 elements, 7 carriers, 3 receivers)."""
    return load_scenario(bundled_scenario_path())


@pytest.fixture(scope="session")
def bench_records():
    """One wall-clock benchmark over the default ladder, shared session-wide."""
    from fdadm.complexity import (
        DEFAULT_BENCH_REPS,
        DEFAULT_BENCH_SIZES,
        bench_precoder,
    )
    from fdadm.seeding import derived_rng

    return bench_precoder(DEFAULT_BENCH_SIZES, DEFAULT_BENCH_REPS,
                          derived_rng(0, 700))


@pytest.fixture(scope="session")
def sec4_array():
    return ArrayConfig(n_half=8, n_carriers=7, f0_hz=10e9, delta_f_hz=2e3)


@pytest.fixture(scope="session")
def sec4_positions():
    return (
        PolarPosition.from_km_deg(150.0, 50.0),
        PolarPosition.from_km_deg(180.0, -40.0),
        PolarPosition.from_km_deg(260.0, 0.0),
    )


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_positions(rng: np.random.Generator, k: int,
                     min_angle_sep_deg: float = 2.0,
                     min_range_sep_km: float = 5.0) -> list[PolarPosition]:
    """Distinct, well-separated positions (keeps steering matrices full rank)."""
    out: list[PolarPosition] = []
    while len(out) < k:
        cand = PolarPosition(
            range_m=float(rng.uniform(50e3, 400e3)),
            angle_rad=math.radians(float(rng.uniform(-80.0, 80.0))),
        )
        if all(abs(cand.angle_deg - p.angle_deg) > min_angle_sep_deg
               or abs(cand.range_km - p.range_km) > min_range_sep_km
               for p in out):
            out.append(cand)
    return out
