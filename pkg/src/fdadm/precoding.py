"""Multi-beam precoder synthesis with artificial-noise injection.

The transmitted vector splits the power budget between a beamforming
branch that delivers one clean symbol stream to each desired receiver
and an artificial-noise branch confined to the orthogonal complement of
the desired steering matrix:

    s = beta1 * sqrt(Ps) * P1 @ x  +  alpha * beta2 * sqrt(Ps) * P2 @ z

P1 is the pseudoinverse-based normalization matrix (H^H @ P1 = I), and
P2 is an orthogonal matrix with H^H @ P2 = 0, built by either of two
methods:

* ``zf``  - the square projector I - pinv(H^H) @ H^H, dimension M x M;
* ``svd`` - an explicit orthonormal null-space basis of H^H, truncated
  by default to 2N+1-K columns, which cuts both the memory held by the
  orthogonal matrix / noise vector and the cost of constructing it.

``alpha`` normalizes the noise branch so its expected radiated power is
exactly beta2^2 * Ps for either method, making the power split
comparable across methods.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .fda import ArrayConfig, steering_matrix
from .linalg import (
    DEFAULT_RANK_TOL,
    _normalize_column_phases,
    _nullspace_from_thin,
    _thin_svd,
    as_complex_matrix,
)


class IllConditionedPositionsError(ValueError):
    """Desired positions are (numerically) colinear in steering space."""


class Method(str, enum.Enum):
    """Orthogonal-matrix construction method."""

    ZF = "zf"
    SVD = "svd"

    def __str__(self) -> str:  # CSV / CLI friendly
        return self.value


#: Condition-number threshold beyond which a position set is rejected.
CONDITION_LIMIT = 1e10

#: Sentinel for the full null-space basis (M - K columns).
FULL_NULLSPACE = "full"
#: Sentinel for the truncated default basis (2N+1-K columns).
DEFAULT_NULLSPACE = "paper_default"


@dataclass(frozen=True, eq=False)
class Precoder:
    """Immutable precoder pair plus noise normalization.

    ``p1`` is M x K, ``p2`` is M x J with J = ``an_dim`` (J = M for the
    zf projector), and ``alpha`` satisfies
    alpha^2 * sigma_z^2 * trace(p2 @ p2^H) = 1.
    """

    method: Method
    p1: np.ndarray
    p2: np.ndarray
    alpha: float
    an_dim: int


def _conditioned_thin_svd(h: np.ndarray):
    """Thin SVD of H^H with the full-column-rank gate applied once."""
    hh = h.conj().T
    u, s, vt = _thin_svd(hh)
    if s[0] == 0.0 or s[-1] / s[0] <= 1.0 / CONDITION_LIMIT:
        cond = math.inf if s[-1] == 0.0 else s[0] / s[-1]
        raise IllConditionedPositionsError(
            "steering matrix is rank deficient (condition number "
            f"{cond:.3g}); desired positions are too close or duplicated"
        )
    return hh, u, s, vt


def normalization_matrix(h_mat) -> np.ndarray:
    """Beamforming matrix P1 = H @ (H^H @ H)^-1 for full-rank H.

    Computed as the pseudoinverse of H^H, which coincides with the
    normal-equations form on full-column-rank inputs and inherits the
    SVD's numerical robustness.
    """
    h = as_complex_matrix(h_mat, "steering matrix")
    _, u, s, vt = _conditioned_thin_svd(h)
    return (vt.conj().T / s) @ u.conj().T


def orthogonal_matrix_zf(h_mat) -> np.ndarray:
    """Square projector onto the orthogonal complement of the columns of H.

    Hermitian and idempotent; annihilated by H^H from the left.
    """
    h = as_complex_matrix(h_mat, "steering matrix")
    hh, u, s, vt = _conditioned_thin_svd(h)
    pinv = (vt.conj().T / s) @ u.conj().T
    return np.eye(h.shape[0], dtype=np.complex128) - pinv @ hh


def orthogonal_matrix_svd(h_mat, an_dims: int | None = None) -> np.ndarray:
    """Orthonormal null-space basis of H^H, M x an_dims.

    Equivalent to :func:`fdadm.linalg.nullspace_basis` on H^H with the
    rank gate applied. ``an_dims=None`` keeps the whole null space
    (M - K columns); callers wanting the truncated default should pass
    2N+1-K (see :func:`build_precoder`, which resolves it from the
    array config).
    """
    h = as_complex_matrix(h_mat, "steering matrix")
    _, _, s, vt = _conditioned_thin_svd(h)
    v = vt.conj().T
    _normalize_column_phases(v)
    return _nullspace_from_thin(v, s, DEFAULT_RANK_TOL, an_dims, h.shape[0])


def resolve_an_dims(cfg: ArrayConfig, k: int, an_dims) -> int:
    """Map an an_dims request onto a concrete column count.

    Accepts an int, ``"paper_default"`` (2N+1-K, the truncated basis the
    svd method is designed around) or ``"full"`` (M-K, the whole null
    space).
    """
    if an_dims is None or an_dims == DEFAULT_NULLSPACE:
        dims = cfg.n_elements - k
        if dims < 1:
            raise ValueError(
                f"default noise dimension 2N+1-K = {dims} is not positive "
                f"(N={cfg.n_half}, K={k}); pass an explicit an_dims"
            )
        return dims
    if an_dims == FULL_NULLSPACE:
        return cfg.m_total - k
    dims = int(an_dims)
    if dims < 1:
        raise ValueError(f"an_dims must be >= 1, got {an_dims}")
    return dims


def an_normalization(p2, sigma_z2: float) -> float:
    """Noise scale alpha = 1 / sqrt(sigma_z^2 * trace(P2 @ P2^H)).

    Makes the expected radiated power of the noise branch equal
    beta2^2 * Ps regardless of the orthogonal matrix's shape.
    """
    p2 = as_complex_matrix(p2, "orthogonal matrix")
    if not (sigma_z2 > 0 and math.isfinite(sigma_z2)):
        raise ValueError(f"sigma_z2 must be positive and finite, got {sigma_z2}")
    power = float(np.sum(np.abs(p2) ** 2))  # trace(P2 @ P2^H)
    if power <= 0.0:
        raise ValueError("degenerate orthogonal matrix: trace(P2 @ P2^H) is zero")
    return 1.0 / math.sqrt(sigma_z2 * power)


def build_precoder(cfg: ArrayConfig, desired, method: Method,
                   sigma_z2: float = 1.0, an_dims=DEFAULT_NULLSPACE) -> Precoder:
    """Synthesize a precoder for the desired positions.

    ``an_dims`` only affects the svd method; the zf projector is always
    square.
    """
    method = Method(method)
    desired = list(desired)
    h = steering_matrix(cfg, desired)
    p1 = normalization_matrix(h)
    if method is Method.ZF:
        p2 = orthogonal_matrix_zf(h)
    else:
        p2 = orthogonal_matrix_svd(h, resolve_an_dims(cfg, len(desired), an_dims))
    alpha = an_normalization(p2, sigma_z2)
    return Precoder(method=method, p1=p1, p2=p2, alpha=alpha, an_dim=p2.shape[1])


def complex_gaussian(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """Circularly-symmetric complex normal draws with per-entry variance."""
    scale = math.sqrt(variance / 2.0)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * scale


def draw_an(rng: np.random.Generator, dim: int, sigma_z2: float) -> np.ndarray:
    """Artificial-noise vector: dim i.i.d. complex normals of variance sigma_z2."""
    if dim < 1:
        raise ValueError(f"noise dimension must be >= 1, got {dim}")
    return complex_gaussian(rng, dim, sigma_z2)


def transmit_signal(pre: Precoder, x_d: np.ndarray, z: np.ndarray,
                    beta1: float, ps: float) -> np.ndarray:
    """Assemble the transmitted vector from symbols and artificial noise.

    ``x_d`` is the K-stream symbol vector (or K x n batch) and ``z`` the
    noise vector (or J x n batch); beta2 = sqrt(1 - beta1^2) is derived.
    """
    if not 0.0 < beta1 <= 1.0:
        raise ValueError(f"beta1 must be in (0, 1], got {beta1}")
    if not ps > 0.0:
        raise ValueError(f"ps must be positive, got {ps}")
    x_d = np.asarray(x_d, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    if x_d.shape[0] != pre.p1.shape[1]:
        raise ValueError(
            f"symbol vector of length {x_d.shape[0]} does not conform with "
            f"p1 of shape {pre.p1.shape}"
        )
    if z.shape[0] != pre.p2.shape[1]:
        raise ValueError(
            f"noise vector of length {z.shape[0]} does not conform with "
            f"p2 of shape {pre.p2.shape}"
        )
    beta2 = math.sqrt(max(0.0, 1.0 - beta1 * beta1))
    root_ps = math.sqrt(ps)
    return (beta1 * root_ps) * (pre.p1 @ x_d) \
        + (pre.alpha * beta2 * root_ps) * (pre.p2 @ z)


@dataclass(frozen=True)
class CriterionCheck:
    """One verification row: residual of a synthesis criterion."""

    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold


def verify_criteria(h_mat, pre: Precoder, tol: float = 1e-9) -> list[CriterionCheck]:
    """Residuals of the two synthesis criteria against ``tol``.

    Failures are reported, not raised.
    """
    h = as_complex_matrix(h_mat, "steering matrix")
    hh = h.conj().T
    k = h.shape[1]
    res_gain = float(np.linalg.norm(hh @ pre.p1 - np.eye(k)))
    res_leak = float(np.linalg.norm(hh @ pre.p2))
    return [
        CriterionCheck("beam_gain_identity", res_gain, tol),
        CriterionCheck("an_orthogonality", res_leak, tol),
    ]
