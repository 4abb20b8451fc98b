"""
Witness evaluation: expectation values, detection verdicts and a see-saw search for product
states on which a candidate witness is negative.

The see-saw alternates between the two factors of a product vector a (x) b. With b fixed the
bilinear form reduces to a 2x2 Hermitian matrix in a, minimised by its lowest eigenvector,
and symmetrically for b. Each half-step can only lower the value.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

import numpy as np

from services.audit_log_service import AuditRecord, Verdict, record_audit_event
from services.choi_service import (
    CHOI_DIMS,
    CpVerdict,
    choi_closed_form,
    choi_of_params,
    is_completely_positive,
)
from services.map_service import MapParams
from services.state_service import BipartiteState, horodecki_state
from utils.errors import DimensionMismatch, NonRealTrace
from utils.linalg import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    ComplexVector,
    RealVector,
    Tolerances,
    as_matrix,
    herm_eigs,
    is_psd,
    operator_norm,
    quadratic_form,
)
from utils.metrics import record_seesaw

LOGGER = logging.getLogger(__name__)

DEFAULT_RESTARTS = 64
DEFAULT_MAX_ITERS = 500
DEFAULT_SEED = 0


@dataclass(frozen=True)
class WitnessCandidate:
    operator: ComplexMatrix
    label: str
    provenance: MapParams | str = "external"
    dims: tuple[int, int] = CHOI_DIMS


class BlockStatus(str, Enum):
    CERTIFIED_NONNEGATIVE = "CERTIFIED_NONNEGATIVE"
    COUNTEREXAMPLE_FOUND = "COUNTEREXAMPLE_FOUND"
    INCONCLUSIVE = "INCONCLUSIVE"


class WitnessStatus(str, Enum):
    VALID_CANDIDATE = "VALID_CANDIDATE"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class BlockPositivityResult:
    min_value: float
    argmin_a: ComplexVector
    argmin_b: ComplexVector
    status: BlockStatus
    threshold: float
    starts: int
    converged: bool
    seed: int
    restarts: int
    max_iters: int


@dataclass(frozen=True)
class DetectionReport:
    witness_label: str
    state_label: str
    param: float | None
    expectation: float
    detected: bool


@dataclass(frozen=True)
class WitnessSpectrum:
    eigenvalues: RealVector
    min_eigenvalue: float
    has_negative: bool


@dataclass(frozen=True)
class WitnessAssessment:
    status: WitnessStatus
    cp: CpVerdict
    block: BlockPositivityResult
    notes: list[str] = field(default_factory=list)


def witness_from_params(params: MapParams) -> WitnessCandidate:
    if params.n == 2:
        choi = choi_closed_form(params.alpha, params.beta)
    else:
        choi = choi_of_params(params)
    label = f"choi[{params.alpha!r},{params.beta!r}]"
    return WitnessCandidate(choi.matrix, label=label, provenance=params, dims=choi.dims)


def witness_from_matrix(
    matrix: Any,
    *,
    label: str = "external",
    dims: tuple[int, int] = CHOI_DIMS,
    tol: Tolerances | None = None,
) -> WitnessCandidate:
    operator = as_matrix(matrix)
    if operator.shape != (dims[0] * dims[1], dims[0] * dims[1]):
        size = dims[0] * dims[1]
        raise DimensionMismatch(f"Witness must be {size}x{size}, got {operator.shape}.")
    herm_eigs(operator, tol=tol)
    return WitnessCandidate(operator, label=label, provenance="external", dims=dims)


def expectation(
    witness: WitnessCandidate, rho: BipartiteState, *, tol: Tolerances | None = None
) -> float:
    tol = tol or DEFAULT_TOLERANCES
    if witness.operator.shape != rho.matrix.shape or witness.dims != (rho.d1, rho.d2):
        raise DimensionMismatch(
            f"Witness dims {witness.dims} do not match state dims {(rho.d1, rho.d2)}."
        )
    value = complex(np.sum(witness.operator * rho.matrix.T))
    if abs(value.imag) > tol.eps_match * max(1.0, operator_norm(witness.operator)):
        raise NonRealTrace(f"Tr(W rho) has imaginary part {value.imag:.3e}.")
    return value.real


def detect(
    witness: WitnessCandidate, rho: BipartiteState, *, tol: Tolerances | None = None
) -> DetectionReport:
    tol = tol or DEFAULT_TOLERANCES
    value = expectation(witness, rho, tol=tol)
    threshold = -tol.eps_psd * operator_norm(witness.operator)
    return DetectionReport(
        witness_label=witness.label,
        state_label=rho.label,
        param=rho.param,
        expectation=value,
        detected=value < threshold,
    )


def detection_curve(
    witness: WitnessCandidate, grid: Iterable[float], *, tol: Tolerances | None = None
) -> list[DetectionReport]:
    """One report per b in input order; every b must lie in [0, 1]."""
    return [detect(witness, horodecki_state(b, tol=tol), tol=tol) for b in grid]


def _hermitian_part(form: ComplexMatrix) -> ComplexMatrix:
    return (form + form.conj().T) / 2


def _contract_second(w4: np.ndarray, b: ComplexVector) -> ComplexMatrix:
    return _hermitian_part(np.einsum("j,ijkl,l->ik", b.conj(), w4, b))


def _contract_first(w4: np.ndarray, a: ComplexVector) -> ComplexMatrix:
    return _hermitian_part(np.einsum("i,ijkl,k->jl", a.conj(), w4, a))


def _lowest(form: ComplexMatrix, tol: Tolerances) -> tuple[float, ComplexVector]:
    eigenvalues, eigenvectors = herm_eigs(form, tol=tol)
    return float(eigenvalues[0]), eigenvectors[:, 0]


def _random_unit(rng: np.random.Generator, size: int) -> ComplexVector:
    vector = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return vector / np.linalg.norm(vector)


def _starts(
    d1: int, d2: int, restarts: int, rng: np.random.Generator
) -> list[tuple[ComplexVector, ComplexVector]]:
    identity_a = np.eye(d1, dtype=np.complex128)
    identity_b = np.eye(d2, dtype=np.complex128)
    starts = [(identity_a[i], identity_b[j]) for i in range(d1) for j in range(d2)]
    starts.extend((_random_unit(rng, d1), _random_unit(rng, d2)) for _ in range(restarts))
    return starts


def _seesaw(
    w4: np.ndarray,
    a: ComplexVector,
    b: ComplexVector,
    max_iters: int,
    tol: Tolerances,
) -> tuple[float, ComplexVector, ComplexVector, bool]:
    value = float(np.real(np.einsum("i,j,ijkl,k,l->", a.conj(), b.conj(), w4, a, b)))
    for _ in range(max_iters):
        _, a = _lowest(_contract_second(w4, b), tol)
        updated, b = _lowest(_contract_first(w4, a), tol)
        if value - updated < tol.eps_match:
            return updated, a, b, True
        value = updated
    return value, a, b, False


def block_positivity_min(
    witness: WitnessCandidate,
    *,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: Tolerances | None = None,
) -> BlockPositivityResult:
    """
    Minimise <a (x) b| W |a (x) b> over unit product vectors.

    Starts are every computational product basis vector followed by ``restarts`` seeded random
    product vectors; the best value over all starts wins, earlier starts winning ties. The
    result is an upper bound on the true minimum, so only a negative value is conclusive.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1.")
    tol = tol or DEFAULT_TOLERANCES
    d1, d2 = witness.dims
    w4 = witness.operator.reshape(d1, d2, d1, d2)
    rng = np.random.default_rng(seed)
    scale = operator_norm(witness.operator)
    threshold = -tol.eps_psd * scale

    best: tuple[float, ComplexVector, ComplexVector] | None = None
    found: list[tuple[ComplexVector, ComplexVector]] = []
    all_converged = True
    starts = _starts(d1, d2, restarts, rng)
    for index, (a0, b0) in enumerate(starts):
        value, a, b, converged = _seesaw(w4, a0, b0, max_iters, tol)
        all_converged = all_converged and converged
        found.append((a, b))
        if best is None or value < best[0]:
            best = (value, a, b)
        LOGGER.debug("See-saw start %s value=%.6g converged=%s", index, value, converged)

    assert best is not None
    _, argmin_a, argmin_b = best
    min_value = quadratic_form(witness.operator, np.kron(argmin_a, argmin_b))

    if min_value < threshold:
        status = BlockStatus.COUNTEREXAMPLE_FOUND
    else:
        forms_psd = all(
            is_psd(_contract_second(w4, b), tol=tol).is_psd
            and is_psd(_contract_first(w4, a), tol=tol).is_psd
            for a, b in found
        )
        certified = all_converged and forms_psd
        status = BlockStatus.CERTIFIED_NONNEGATIVE if certified else BlockStatus.INCONCLUSIVE
    if not all_converged:
        LOGGER.warning("See-saw hit max_iters=%s on at least one start.", max_iters)
    record_seesaw(
        starts=len(starts),
        converged=all_converged,
        counterexample=status is BlockStatus.COUNTEREXAMPLE_FOUND,
    )
    return BlockPositivityResult(
        min_value=min_value,
        argmin_a=argmin_a,
        argmin_b=argmin_b,
        status=status,
        threshold=threshold,
        starts=len(starts),
        converged=all_converged,
        seed=seed,
        restarts=restarts,
        max_iters=max_iters,
    )


def map_positivity_search(
    params: MapParams,
    *,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: Tolerances | None = None,
) -> BlockPositivityResult:
    """Map-level positivity via block positivity of the Choi matrix."""
    return block_positivity_min(
        witness_from_params(params), restarts=restarts, seed=seed, max_iters=max_iters, tol=tol
    )


def witness_spectrum(
    witness: WitnessCandidate, *, tol: Tolerances | None = None
) -> WitnessSpectrum:
    tol = tol or DEFAULT_TOLERANCES
    eigenvalues, _ = herm_eigs(witness.operator, tol=tol)
    minimum = float(eigenvalues[0])
    return WitnessSpectrum(
        eigenvalues=eigenvalues,
        min_eigenvalue=minimum,
        has_negative=minimum < -tol.eps_psd * operator_norm(witness.operator),
    )


def assess_witness(
    params: MapParams,
    *,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: Tolerances | None = None,
) -> WitnessAssessment:
    cp = is_completely_positive(params, tol=tol)
    block = map_positivity_search(
        params, restarts=restarts, seed=seed, max_iters=max_iters, tol=tol
    )
    notes: list[str] = []
    if block.status is BlockStatus.COUNTEREXAMPLE_FOUND:
        status = WitnessStatus.REFUTED
    elif cp.completely_positive:
        status = WitnessStatus.INCONCLUSIVE
        notes.append("operator is PSD, so it detects no state")
    elif block.status is BlockStatus.CERTIFIED_NONNEGATIVE:
        status = WitnessStatus.VALID_CANDIDATE
    else:
        status = WitnessStatus.INCONCLUSIVE
        notes.append("no product counterexample found, but non-negativity is not certified")
    return WitnessAssessment(status=status, cp=cp, block=block, notes=notes)


_AUDIT_VERDICTS = {
    WitnessStatus.VALID_CANDIDATE: Verdict.CONFIRMED,
    WitnessStatus.REFUTED: Verdict.REFUTED,
    WitnessStatus.INCONCLUSIVE: Verdict.INAPPLICABLE,
}


def witness_audit(
    params: MapParams,
    *,
    claim_id: str = "witness-validity",
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: Tolerances | None = None,
) -> AuditRecord:
    """
    Audit the claim that the Choi matrix of ``params`` is an entanglement witness.
    A product counterexample refutes it; a PSD Choi matrix makes it inapplicable.
    """
    assessment = assess_witness(
        params, restarts=restarts, seed=seed, max_iters=max_iters, tol=tol
    )
    block = assessment.block
    certificate: dict[str, Any] = {
        "witness_status": assessment.status.value,
        "block_status": block.status.value,
        "completely_positive": assessment.cp.completely_positive,
        "choi_min_eigenvalue": assessment.cp.min_eigenvalue,
        "product_value": block.min_value,
        "argmin_a": block.argmin_a,
        "argmin_b": block.argmin_b,
        "threshold": block.threshold,
        "seed": block.seed,
        "restarts": block.restarts,
        "max_iters": block.max_iters,
    }
    if assessment.notes:
        certificate["notes"] = assessment.notes
    return record_audit_event(
        claim_id=claim_id,
        paper_location="witness construction: Choi matrix acts as a witness operator",
        paper_value=(
            "Tr(W rho_s) >= 0 for all separable rho_s"
            f" (alpha={params.alpha!r}, beta={params.beta!r})"
        ),
        computed_value=f"min over product states = {block.min_value:.17g}",
        verdict=_AUDIT_VERDICTS[assessment.status],
        certificate=certificate,
    )
