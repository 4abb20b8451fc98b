"""
Dense complex linear algebra shared by every service.

Matrices are plain ``numpy`` arrays of dtype complex128. Hermiticity, PSD and residual checks
are all relative to the operator norm so they behave the same at every scale.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Literal, TypeAlias

import numpy as np
import numpy.typing as npt

from utils.errors import DimensionMismatch, NonFiniteEntries, NotHermitian, NotPsd, NotSquare

LOGGER = logging.getLogger(__name__)

ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
ComplexVector: TypeAlias = npt.NDArray[np.complex128]
RealVector: TypeAlias = npt.NDArray[np.float64]
Subsystem: TypeAlias = Literal["first", "second"]


@dataclass(frozen=True)
class Tolerances:
    eps_psd: float = 1e-9
    eps_eig: float = 1e-10
    eps_match: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("eps_psd", "eps_eig", "eps_match"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive.")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    witness_vector: ComplexVector
    threshold: float


@dataclass(frozen=True)
class SqrtPair:
    sqrt: ComplexMatrix
    inv_sqrt: ComplexMatrix
    singular: bool


def as_matrix(values: Any) -> ComplexMatrix:
    matrix = np.asarray(values, dtype=np.complex128)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise DimensionMismatch(f"Expected a non-empty 2-D matrix, got shape {matrix.shape}.")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteEntries("Matrix entries must be finite.")
    return matrix


def matrix_unit(n: int, i: int, j: int) -> ComplexMatrix:
    unit = np.zeros((n, n), dtype=np.complex128)
    unit[i, j] = 1.0
    return unit


def operator_norm(m: Any) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(m), 2))


def _require_square(m: ComplexMatrix) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"Expected a square matrix, got shape {m.shape}.")


def _require_hermitian(m: ComplexMatrix, tol: Tolerances) -> float:
    scale = operator_norm(m)
    asymmetry = operator_norm(m - m.conj().T)
    if asymmetry > tol.eps_eig * scale:
        raise NotHermitian(f"Matrix is not Hermitian (|M - M^H| = {asymmetry:.3e}).")
    return scale


def herm_eigs(
    m: Any, *, tol: Tolerances | None = None
) -> tuple[RealVector, ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending with orthonormal eigenvector columns. The residual of every
    pair is checked against eps_eig * |M|; a violation raises ``numpy.linalg.LinAlgError``.
    """
    tol = tol or DEFAULT_TOLERANCES
    matrix = as_matrix(m)
    _require_square(matrix)
    scale = _require_hermitian(matrix, tol)
    herm = (matrix + matrix.conj().T) / 2
    eigenvalues, eigenvectors = np.linalg.eigh(herm)
    residual = np.linalg.norm(herm @ eigenvectors - eigenvectors * eigenvalues, axis=0)
    worst = float(residual.max())
    if worst > tol.eps_eig * scale:
        raise np.linalg.LinAlgError(f"Eigen residual {worst:.3e} exceeds tolerance.")
    return eigenvalues.astype(np.float64), eigenvectors


def is_psd(m: Any, *, tol: Tolerances | None = None) -> PsdVerdict:
    tol = tol or DEFAULT_TOLERANCES
    eigenvalues, eigenvectors = herm_eigs(m, tol=tol)
    threshold = -tol.eps_psd * operator_norm(m)
    min_eigenvalue = float(eigenvalues[0])
    return PsdVerdict(
        is_psd=min_eigenvalue >= threshold,
        min_eigenvalue=min_eigenvalue,
        witness_vector=eigenvectors[:, 0],
        threshold=threshold,
    )


def quadratic_form(m: Any, vector: Any) -> float:
    """Real part of v^H M v (M Hermitian)."""
    v = np.asarray(vector, dtype=np.complex128)
    return float(np.real(np.vdot(v, as_matrix(m) @ v)))


def kron(a: Any, b: Any) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose(
    m: Any, d1: int, d2: int, subsystem: Subsystem = "first"
) -> ComplexMatrix:
    matrix = as_matrix(m)
    _require_square(matrix)
    if d1 < 1 or d2 < 1 or matrix.shape[0] != d1 * d2:
        raise DimensionMismatch(
            f"Matrix of size {matrix.shape[0]} does not split as {d1} x {d2}."
        )
    blocks = matrix.reshape(d1, d2, d1, d2)
    if subsystem == "first":
        blocks = blocks.transpose(2, 1, 0, 3)
    elif subsystem == "second":
        blocks = blocks.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"Unknown subsystem {subsystem!r}.")
    return np.ascontiguousarray(blocks.reshape(d1 * d2, d1 * d2))


def psd_sqrt_inv(m: Any, *, tol: Tolerances | None = None) -> SqrtPair:
    """
    Square root and support-restricted inverse square root of a PSD matrix.

    Eigenvalues at or below eps_psd * |M| are treated as zero (pseudo-inverse convention);
    ``singular`` reports whether any were dropped.
    """
    tol = tol or DEFAULT_TOLERANCES
    eigenvalues, eigenvectors = herm_eigs(m, tol=tol)
    cutoff = tol.eps_psd * operator_norm(m)
    if eigenvalues[0] < -cutoff:
        raise NotPsd(f"Matrix has eigenvalue {eigenvalues[0]:.3e} below -{cutoff:.3e}.")
    root = np.sqrt(np.clip(eigenvalues, 0.0, None))
    support = eigenvalues > cutoff
    inv_root = np.zeros_like(root)
    inv_root[support] = 1.0 / root[support]
    adjoint = eigenvectors.conj().T
    return SqrtPair(
        sqrt=(eigenvectors * root) @ adjoint,
        inv_sqrt=(eigenvectors * inv_root) @ adjoint,
        singular=not bool(np.all(support)),
    )


def realign(m: Any, d1: int, d2: int) -> ComplexMatrix:
    """R(M)[(i,k),(j,l)] = M[(i,j),(k,l)], a d1^2 x d2^2 matrix."""
    matrix = as_matrix(m)
    _require_square(matrix)
    if d1 < 1 or d2 < 1 or matrix.shape[0] != d1 * d2:
        raise DimensionMismatch(
            f"Matrix of size {matrix.shape[0]} does not split as {d1} x {d2}."
        )
    blocks = matrix.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3)
    return np.ascontiguousarray(blocks.reshape(d1 * d1, d2 * d2))


def realign_trace_norm(m: Any, d1: int, d2: int) -> float:
    return float(np.sum(np.linalg.svd(realign(m, d1, d2), compute_uv=False)))
