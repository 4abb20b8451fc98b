"""
Choi matrices of the map family, complete-positivity checks and the P/Q/R block analysis.

Index convention: the first tensor factor is the 2-dim input index, the second is the 4-dim
output space, so row r of the 8x8 matrix is 4*i + 2*p + q.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
import sympy

from services.map_service import MapParams, apply_map
from utils.errors import CallableDimensionMismatch
from utils.linalg import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    ComplexVector,
    RealVector,
    Tolerances,
    as_matrix,
    herm_eigs,
    is_psd,
    matrix_unit,
    operator_norm,
    quadratic_form,
)

LOGGER = logging.getLogger(__name__)

CHOI_DIMS = (2, 4)

LinearMap = Callable[[ComplexMatrix], object]


@dataclass(frozen=True)
class ChoiOperator:
    matrix: ComplexMatrix
    params: MapParams | None = None
    dims: tuple[int, int] = CHOI_DIMS


@dataclass(frozen=True)
class ChoiBlocks:
    p: ComplexMatrix
    q: ComplexMatrix
    r: ComplexMatrix

    def reassemble(self) -> ComplexMatrix:
        return np.block([[self.p, self.q], [self.q.conj().T, self.r]])


@dataclass(frozen=True)
class SchurEvaluation:
    r_psd: bool
    range_condition: bool
    complement_psd: bool
    strict_complement_psd: bool | None
    range_residual: float
    complement_min_eigenvalue: float

    @property
    def is_psd(self) -> bool:
        return self.r_psd and self.range_condition and self.complement_psd

    @property
    def failed_clauses(self) -> list[str]:
        failed = []
        if not self.r_psd:
            failed.append("R_psd")
        if not self.range_condition:
            failed.append("range")
        if not self.complement_psd:
            failed.append("schur_complement")
        return failed


@dataclass(frozen=True)
class MinorCertificate:
    indices: tuple[int, int]
    submatrix: ComplexMatrix
    determinant: float

    @property
    def one_based(self) -> tuple[int, int]:
        return (self.indices[0] + 1, self.indices[1] + 1)


@dataclass(frozen=True)
class CpCertificate:
    vector: ComplexVector
    quadratic_value: float
    minor: MinorCertificate | None = None


@dataclass(frozen=True)
class CpVerdict:
    completely_positive: bool
    min_eigenvalue: float
    certificate: CpCertificate | None = None


@dataclass(frozen=True)
class PaperCpConditions:
    p_psd: bool
    r_psd: bool
    schur_clause: bool

    @property
    def all_hold(self) -> bool:
        return self.p_psd and self.r_psd and self.schur_clause


@dataclass(frozen=True)
class AnalyticSpectrum:
    alpha: float
    gamma: float
    printed: tuple[float | None, ...]
    alternate_tail: tuple[float | None, ...]
    numeric: RealVector
    deviations: tuple[float | None, ...] = field(default=())
    alternate_deviations: tuple[float | None, ...] = field(default=())

    @property
    def leading_residual(self) -> float:
        """Largest deviation among the first four printed eigenvalues."""
        return max(value for value in self.deviations[:4] if value is not None)


def choi_from_map(linear_map: LinearMap, n: int) -> ComplexMatrix:
    """Block matrix whose (i, j) block is linear_map(|i><j|)."""
    blocks: list[list[ComplexMatrix]] = []
    size: int | None = None
    for i in range(n):
        row = []
        for j in range(n):
            try:
                out = as_matrix(linear_map(matrix_unit(n, i, j)))
            except Exception as exc:
                raise CallableDimensionMismatch(f"Map failed on |{i}><{j}|: {exc}") from exc
            if out.shape[0] != out.shape[1]:
                raise CallableDimensionMismatch(f"Map output {out.shape} is not square.")
            if size is None:
                size = out.shape[0]
            elif out.shape[0] != size:
                raise CallableDimensionMismatch(
                    f"Map output size changed from {size} to {out.shape[0]}."
                )
            row.append(out)
        blocks.append(row)
    return np.block(blocks)


def _closed_form_rows(alpha: Any, beta: Any) -> list[list[Any]]:
    h = beta / 2
    top = 2 * alpha + h
    m = 2 * alpha
    z = 0 * alpha
    return [
        [top, z, z, z, h, z, alpha, z],
        [z, m, h, z, z, z, h, alpha],
        [z, h, z, z, alpha, h, z, z],
        [z, z, z, h, z, alpha, z, h],
        [h, z, alpha, z, h, z, z, z],
        [z, z, h, alpha, z, z, h, z],
        [alpha, h, z, z, z, h, m, z],
        [z, alpha, z, h, z, z, z, top],
    ]


def choi_closed_form(alpha: float, beta: float) -> ChoiOperator:
    matrix = as_matrix(_closed_form_rows(float(alpha), float(beta)))
    return ChoiOperator(matrix=matrix, params=MapParams(2, float(alpha), float(beta)))


def choi_closed_form_exact(alpha: Any, beta: Any) -> sympy.Matrix:
    """Exact rational version; alpha and beta accept ints, floats or strings such as "3/4"."""
    return sympy.Matrix(_closed_form_rows(sympy.Rational(alpha), sympy.Rational(beta)))


def choi_of_params(params: MapParams) -> ChoiOperator:
    return ChoiOperator(
        matrix=choi_from_map(lambda unit: apply_map(params, unit), params.n),
        params=params,
        dims=(params.n, params.n * params.n),
    )


def most_negative_minor(
    m: ComplexMatrix, *, tol: Tolerances | None = None
) -> MinorCertificate | None:
    """2x2 principal minor with the most negative determinant; ties keep the first in order."""
    tol = tol or DEFAULT_TOLERANCES
    cutoff = -tol.eps_psd * operator_norm(m) ** 2
    best: MinorCertificate | None = None
    for i, j in itertools.combinations(range(m.shape[0]), 2):
        sub = m[np.ix_([i, j], [i, j])]
        det = float(np.real(sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]))
        if det < cutoff and (best is None or det < best.determinant):
            best = MinorCertificate((i, j), sub.copy(), det)
    return best


def is_completely_positive(
    params: MapParams, *, tol: Tolerances | None = None
) -> CpVerdict:
    tol = tol or DEFAULT_TOLERANCES
    if params.n == 2:
        choi = choi_closed_form(params.alpha, params.beta).matrix
    else:
        choi = choi_of_params(params).matrix
    verdict = is_psd(choi, tol=tol)
    if verdict.is_psd:
        return CpVerdict(True, verdict.min_eigenvalue)
    vector = verdict.witness_vector
    certificate = CpCertificate(
        vector=vector,
        quadratic_value=quadratic_form(choi, vector),
        minor=most_negative_minor(choi, tol=tol),
    )
    return CpVerdict(False, verdict.min_eigenvalue, certificate)


def choi_blocks(choi: ChoiOperator) -> ChoiBlocks:
    m = choi.matrix
    half = m.shape[0] // 2
    return ChoiBlocks(
        p=m[:half, :half].copy(), q=m[:half, half:].copy(), r=m[half:, half:].copy()
    )


def _hermitian_pinv(
    m: ComplexMatrix, tol: Tolerances
) -> tuple[ComplexMatrix, bool]:
    eigenvalues, eigenvectors = herm_eigs(m, tol=tol)
    cutoff = tol.eps_psd * max(operator_norm(m), 1.0)
    support = np.abs(eigenvalues) > cutoff
    inverted = np.zeros_like(eigenvalues)
    inverted[support] = 1.0 / eigenvalues[support]
    return (eigenvectors * inverted) @ eigenvectors.conj().T, bool(np.all(support))


def evaluate_schur(blocks: ChoiBlocks, *, tol: Tolerances | None = None) -> SchurEvaluation:
    """
    Generalized Schur complement test: R PSD, (I - R R^+) Q^H = 0 and P - Q R^+ Q^H PSD.
    When R is invertible R^+ = R^{-1}, which is the strict form, reported separately.
    """
    tol = tol or DEFAULT_TOLERANCES
    scale = max(operator_norm(blocks.reassemble()), 1.0)
    r_verdict = is_psd(blocks.r, tol=tol)
    r_pinv, invertible = _hermitian_pinv(blocks.r, tol)
    q_h = blocks.q.conj().T
    projector = np.eye(blocks.r.shape[0]) - blocks.r @ r_pinv
    range_residual = float(np.linalg.norm(projector @ q_h, 2))
    complement = blocks.p - blocks.q @ r_pinv @ q_h
    complement_verdict = is_psd((complement + complement.conj().T) / 2, tol=tol)
    return SchurEvaluation(
        r_psd=r_verdict.is_psd,
        range_condition=range_residual <= tol.eps_psd * scale,
        complement_psd=complement_verdict.is_psd,
        strict_complement_psd=complement_verdict.is_psd if invertible else None,
        range_residual=range_residual,
        complement_min_eigenvalue=complement_verdict.min_eigenvalue,
    )


def paper_cp_conditions(alpha: float, beta: float) -> PaperCpConditions:
    """The printed regions where P >= 0, R >= 0 and the Schur clause are claimed to hold."""
    p_psd = beta == 0 and alpha >= 0
    r_psd = beta == 0 and alpha >= 0
    schur_clause = (
        (alpha == 0 and beta != 0)
        or (alpha > 0 and 4 * alpha + beta < 0)
        or (alpha > 0 and 3 * alpha + 2 * beta >= 0 and beta != 0)
    )
    return PaperCpConditions(p_psd, r_psd, schur_clause)


def _tail(alpha: float, gamma: float, inner: float) -> tuple[float | None, ...]:
    if inner < 0:
        return (None, None, None, None)
    root = math.sqrt(inner)
    values: list[float | None] = []
    for outer_sign, inner_sign in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        radicand = (4 * alpha**2 + gamma**2 + inner_sign * root) / 2
        values.append(None if radicand < 0 else alpha + outer_sign * math.sqrt(radicand))
    return tuple(values)


def _nearest_deviation(value: float | None, numeric: RealVector) -> float | None:
    if value is None:
        return None
    return float(np.min(np.abs(numeric - value)))


def analytic_choi_eigs(
    alpha: float, gamma: float, *, tol: Tolerances | None = None
) -> AnalyticSpectrum:
    """
    The printed eigenvalue formulas for the Choi matrix at beta = -gamma, audited against the
    eigensolver. The last four are evaluated under both readings of the inner radical
    (16 alpha^2 as printed, 16 alpha^4 as the dimensionally consistent alternative).
    """
    tol = tol or DEFAULT_TOLERANCES
    root = math.sqrt(4 * alpha**2 + gamma**2)
    leading = (
        (-gamma + root) / 2,
        (-gamma - root) / 2,
        (4 * alpha - gamma + root) / 2,
        (4 * alpha - gamma - root) / 2,
    )
    mixed = 4 * alpha**2 * gamma**2 + gamma**4
    printed_tail = _tail(alpha, gamma, 16 * alpha**2 + mixed)
    alternate_tail = _tail(alpha, gamma, 16 * alpha**4 + mixed)
    numeric, _ = herm_eigs(choi_closed_form(alpha, -gamma).matrix, tol=tol)
    printed = leading + printed_tail
    spectrum = AnalyticSpectrum(
        alpha=alpha,
        gamma=gamma,
        printed=printed,
        alternate_tail=alternate_tail,
        numeric=numeric,
        deviations=tuple(_nearest_deviation(value, numeric) for value in printed),
        alternate_deviations=tuple(_nearest_deviation(v, numeric) for v in alternate_tail),
    )
    LOGGER.debug(
        "Spectrum audit alpha=%s gamma=%s leading_residual=%.3e",
        alpha,
        gamma,
        spectrum.leading_residual,
    )
    return spectrum
