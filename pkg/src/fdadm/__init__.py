"""Range-angle directional modulation over a multi-carrier frequency
diverse array: precoder synthesis (zero-forcing projector and truncated
SVD null-space basis), line-of-sight link metrics, and seeded
experiment drivers."""

from .fda import ArrayConfig, PolarPosition, steering_matrix, steering_vector
from .linalg import SvdFactorization, nullspace_basis, pseudoinverse, svd
from .metrics import (
    Scenario,
    achievable_rate,
    ber_monte_carlo,
    qpsk_demodulate,
    qpsk_modulate,
    receive,
    secrecy_rate,
    sinr,
)
from .precoding import (
    Method,
    Precoder,
    an_normalization,
    build_precoder,
    draw_an,
    normalization_matrix,
    orthogonal_matrix_svd,
    orthogonal_matrix_zf,
    transmit_signal,
    verify_criteria,
)
from .complexity import MemoryFootprint, TimingRecord, footprint, memory_ratio
from .records import SweepRecord, read_records, write_records
from .scenario_io import LoadedScenario, ScenarioError, bundled_scenario_path, load_scenario

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "PolarPosition",
    "steering_vector",
    "steering_matrix",
    "SvdFactorization",
    "svd",
    "pseudoinverse",
    "nullspace_basis",
    "Scenario",
    "receive",
    "sinr",
    "achievable_rate",
    "secrecy_rate",
    "qpsk_modulate",
    "qpsk_demodulate",
    "ber_monte_carlo",
    "Method",
    "Precoder",
    "build_precoder",
    "normalization_matrix",
    "orthogonal_matrix_zf",
    "orthogonal_matrix_svd",
    "an_normalization",
    "transmit_signal",
    "draw_an",
    "verify_criteria",
    "MemoryFootprint",
    "TimingRecord",
    "memory_ratio",
    "footprint",
    "SweepRecord",
    "read_records",
    "write_records",
    "LoadedScenario",
    "ScenarioError",
    "load_scenario",
    "bundled_scenario_path",
    "__version__",
]
