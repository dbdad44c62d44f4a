"""Dense complex linear-algebra kernel.

Provides the decompositions the precoding layer is built on: singular
value decomposition with a reproducible sign convention, the
Moore-Penrose pseudoinverse, and orthonormal null-space extraction for
wide matrices. Everything is double-precision complex and backed by
LAPACK (zgesdd / zgeqrf / zungqr); the null-space routine materializes
only the columns it is asked for, so extracting a thin basis of a
K x M matrix stays O(M) work instead of O(M^2).

All functions are pure and deterministic: identical inputs produce
bit-identical outputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack


class DecompositionError(ValueError):
    """SVD failed to converge within LAPACK's iteration cap."""


class NullSpaceError(ValueError):
    """Requested more null-space columns than the matrix rank allows."""


#: Relative singular-value cutoff for numerical rank decisions.
DEFAULT_RANK_TOL = 1e-12


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and coerce input to a non-empty 2-D complex128 array.

    Rejects NaN/Inf entries; they would silently poison every
    decomposition downstream.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size == 0:
        raise ValueError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True, eq=False)
class SvdFactorization:
    """Full SVD a = left @ diag(singular_values, padded) @ right^H.

    ``left`` is square (rows x rows), ``right`` is square (cols x cols),
    and ``singular_values`` holds the min(rows, cols) values in
    descending order. The trailing columns of ``right`` (those whose
    singular values are zero or absent) span the null space of the
    input.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray


def _thin_svd(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy-size LAPACK SVD; returns (u, s, vt)."""
    u, s, vt, info = lapack.zgesdd(m, compute_uv=1, full_matrices=0)
    if info != 0:
        raise DecompositionError(
            f"SVD did not converge for {m.shape[0]}x{m.shape[1]} matrix "
            f"(LAPACK info={info})"
        )
    return u, s, vt


def _normalize_column_phases(v: np.ndarray, partner: np.ndarray | None = None) -> None:
    """Rotate each column so its largest-magnitude entry is real positive.

    Applied to the right-singular block (with the matching left column
    rotated oppositely, keeping the reconstruction unchanged) and to
    completion columns. This pins down the otherwise arbitrary per-column
    phase so repeated runs select identical null-space bases.

    Mutates ``v`` (and ``partner`` when given) in place.
    """
    n = v.shape[1]
    if n == 0:
        return
    mags = np.abs(v)
    idx = mags.argmax(axis=0)
    cols = np.arange(n)
    pivots = v[idx, cols]
    pivot_mags = mags[idx, cols]
    if not pivot_mags.all():  # zero column: nothing to rotate
        pivot_mags = np.where(pivot_mags > 0, pivot_mags, 1.0)
        pivots = np.where(pivots != 0, pivots, 1.0)
    rot = pivot_mags / pivots  # conj(pivot) / |pivot|, unit magnitude
    v *= rot
    if partner is not None:
        partner *= rot


def _complete_basis(q_thin: np.ndarray, n_extra: int,
                    may_overwrite: bool = False) -> np.ndarray:
    """Orthonormal completion of a thin orthonormal block.

    Returns ``n_extra`` columns orthogonal to the span of ``q_thin``,
    computed from the Householder QR factorization of ``q_thin`` and
    generated column-by-column, so the cost is O(rows * k * n_extra)
    rather than the O(rows^2 * k) of forming the full unitary factor.
    The completion is deterministic and phase-normalized.
    ``may_overwrite`` permits clobbering ``q_thin`` when the caller is
    done with it.
    """
    rows, k = q_thin.shape
    if n_extra == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    if may_overwrite and q_thin.flags.f_contiguous:
        a = q_thin
    else:
        a = np.array(q_thin, dtype=np.complex128, order="F")
    qr_fact, tau, _, info = lapack.zgeqrf(a, overwrite_a=1)
    if info != 0:
        raise DecompositionError(f"QR completion failed (LAPACK info={info})")
    wide = np.zeros((rows, k + n_extra), dtype=np.complex128, order="F")
    wide[:, :k] = qr_fact
    q, _, info = lapack.zungqr(wide, tau, overwrite_a=1)
    if info != 0:
        raise DecompositionError(f"QR completion failed (LAPACK info={info})")
    extra = np.ascontiguousarray(q[:, k:])
    _normalize_column_phases(extra)
    return extra


def svd(a) -> SvdFactorization:
    """Full, sign-fixed singular value decomposition.

    The right-singular columns beyond min(rows, cols) are produced by a
    deterministic Householder completion (likewise for the left factor
    of tall inputs), so the trailing null-space block is reproducible
    rather than whatever the backend happens to emit.
    """
    m = as_complex_matrix(a)
    rows, cols = m.shape
    u, s, vt = _thin_svd(m)
    v = np.ascontiguousarray(vt.conj().T)
    u = np.ascontiguousarray(u)
    _normalize_column_phases(v, partner=u)
    if cols > v.shape[1]:
        v = np.hstack([v, _complete_basis(v, cols - v.shape[1])])
    if rows > u.shape[1]:
        u = np.hstack([u, _complete_basis(u, rows - u.shape[1])])
    return SvdFactorization(left=u, singular_values=s, right=v)


def pseudoinverse(a, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values above ``rank_tol`` times the largest are inverted,
    the rest are treated as zero.
    """
    m = as_complex_matrix(a)
    if not 0.0 < rank_tol < 1.0:
        raise ValueError(f"rank_tol must be in (0, 1), got {rank_tol}")
    u, s, vt = _thin_svd(m)
    if s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    keep = s > rank_tol * s[0]
    return (vt[keep].conj().T / s[keep]) @ u[:, keep].conj().T


def _nullspace_from_thin(v: np.ndarray, s: np.ndarray, rank_tol: float,
                         max_cols: int | None, cols: int) -> np.ndarray:
    """Null-space columns from phase-normalized thin right factors."""
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s[0] > 0.0 else 0
    available = cols - rank
    if max_cols is None:
        max_cols = available
    if max_cols < 0:
        raise ValueError(f"max_cols must be non-negative, got {max_cols}")
    if max_cols > available:
        raise NullSpaceError(
            f"requested {max_cols} null-space columns, but a rank-{rank} "
            f"matrix with {cols} columns has only {available}"
        )
    # sub-tolerance right-singular vectors come first, then the
    # Householder completion of the full thin block
    n_from_thin = min(max_cols, v.shape[1] - rank)
    n_completed = max_cols - n_from_thin
    if n_from_thin == 0:
        # v is not referenced afterwards, so the completion may reuse it
        return _complete_basis(v, n_completed, may_overwrite=True)
    basis = v[:, rank:rank + n_from_thin]
    if n_completed > 0:
        basis = np.hstack([basis, _complete_basis(v, n_completed)])
    return np.ascontiguousarray(basis)


def nullspace_basis(a, rank_tol: float = DEFAULT_RANK_TOL,
                    max_cols: int | None = None) -> np.ndarray:
    """Leading orthonormal null-space columns of a wide matrix.

    For a K x M input with K < M, returns the first ``max_cols`` columns
    of the null-space block of :func:`svd` (all M - rank of them when
    ``max_cols`` is None), without materializing the full M x M right
    factor. Columns are orthonormal, annihilated by ``a``, and
    deterministic across calls.
    """
    m = as_complex_matrix(a)
    rows, cols = m.shape
    if rows >= cols:
        raise ValueError(
            f"null-space extraction expects a wide matrix, got {rows}x{cols}"
        )
    if not 0.0 < rank_tol < 1.0:
        raise ValueError(f"rank_tol must be in (0, 1), got {rank_tol}")
    u, s, vt = _thin_svd(m)
    v = vt.conj().T  # fresh F-ordered block, free for reuse downstream
    _normalize_column_phases(v)
    return _nullspace_from_thin(v, s, rank_tol, max_cols, cols)


def matmul(a, b) -> np.ndarray:
    """Complex matrix product with an explicit conformance check."""
    ma = np.asarray(a, dtype=np.complex128)
    mb = np.asarray(b, dtype=np.complex128)
    if ma.ndim != 2 or mb.ndim != 2:
        raise ValueError(f"matmul expects 2-D operands, got {ma.shape} and {mb.shape}")
    if ma.shape[1] != mb.shape[0]:
        raise ValueError(f"cannot multiply {ma.shape} by {mb.shape}")
    return ma @ mb


def hermitian_transpose(a) -> np.ndarray:
    """Conjugate transpose."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"hermitian_transpose expects a 2-D operand, got {m.shape}")
    return np.ascontiguousarray(m.conj().T)
