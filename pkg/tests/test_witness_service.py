import numpy as np
import pytest

from services.audit_log_service import Verdict
from services.map_service import MapParams
from services.state_service import horodecki_state, maximally_mixed, npt_state
from services.witness_service import (
    BlockStatus,
    WitnessStatus,
    assess_witness,
    block_positivity_min,
    detect,
    detection_curve,
    expectation,
    map_positivity_search,
    witness_audit,
    witness_from_matrix,
    witness_from_params,
    witness_spectrum,
)
from utils import metrics
from utils.errors import DimensionMismatch
from utils.linalg import quadratic_form

BOUND_WITNESS = MapParams(2, 0.75, -2.0)
NPT_WITNESS = MapParams(2, 0.125, -1.0)


@pytest.mark.parametrize("b", [0.0, 0.1, 0.5, 0.8, 1.0])
def test_bound_entangled_expectation_formula(b: float) -> None:
    value = expectation(witness_from_params(BOUND_WITNESS), horodecki_state(b))
    assert value == pytest.approx((b - 1) / (4 * (1 + 7 * b)), abs=1e-12)


def test_npt_expectations() -> None:
    rho = npt_state()
    assert expectation(witness_from_params(NPT_WITNESS), rho) == pytest.approx(-1 / 6, abs=1e-12)
    assert expectation(witness_from_params(BOUND_WITNESS), rho) == pytest.approx(1 / 3, abs=1e-12)


def test_detection_boundary_at_b_one() -> None:
    witness = witness_from_params(BOUND_WITNESS)
    assert detect(witness, horodecki_state(0.5)).detected
    report = detect(witness, horodecki_state(1.0))
    assert not report.detected
    assert report.state_label == "horodecki"
    assert report.witness_label == "choi[0.75,-2.0]"


def test_detection_curve_keeps_grid_order() -> None:
    grid = [0.0, 0.5, 1.0]
    reports = detection_curve(witness_from_params(BOUND_WITNESS), grid)
    assert [report.param for report in reports] == grid
    assert [report.detected for report in reports] == [True, True, False]


def test_expectation_rejects_mismatched_dims() -> None:
    with pytest.raises(DimensionMismatch):
        expectation(witness_from_params(BOUND_WITNESS), maximally_mixed(4, 2))


def test_witness_from_matrix_checks_shape() -> None:
    with pytest.raises(DimensionMismatch):
        witness_from_matrix(np.eye(4))


def test_bound_witness_has_product_counterexample() -> None:
    witness = witness_from_params(BOUND_WITNESS)
    result = block_positivity_min(witness, restarts=4, seed=0)
    assert result.status is BlockStatus.COUNTEREXAMPLE_FOUND
    assert result.min_value <= -1 + 1e-9
    product = np.kron(result.argmin_a, result.argmin_b)
    assert quadratic_form(witness.operator, product) == pytest.approx(result.min_value)


def test_npt_witness_has_product_counterexample() -> None:
    result = block_positivity_min(witness_from_params(NPT_WITNESS), restarts=4, seed=0)
    assert result.status is BlockStatus.COUNTEREXAMPLE_FOUND
    assert result.min_value <= -0.25 + 1e-9
    counts, _ = metrics.snapshot()
    assert counts["seesaw.runs"] == 1
    assert counts["seesaw.starts"] == result.starts == 8
    assert counts["seesaw.counterexamples"] == 1


def test_block_positivity_is_deterministic_for_a_seed() -> None:
    witness = witness_from_params(MapParams(2, -0.4, 1.3))
    first = block_positivity_min(witness, restarts=6, seed=7)
    second = block_positivity_min(witness, restarts=6, seed=7)
    assert first.min_value == second.min_value
    assert first.starts == second.starts == 8 + 6


def test_identity_operator_is_certified_nonnegative() -> None:
    result = block_positivity_min(witness_from_matrix(np.eye(8)), restarts=3)
    assert result.status is BlockStatus.CERTIFIED_NONNEGATIVE
    assert result.min_value == pytest.approx(1.0)


def test_block_positivity_needs_restarts() -> None:
    with pytest.raises(ValueError):
        block_positivity_min(witness_from_params(BOUND_WITNESS), restarts=0)


def test_assessment_of_zero_map_is_inconclusive() -> None:
    assessment = assess_witness(MapParams(2, 0.0, 0.0), restarts=2)
    assert assessment.status is WitnessStatus.INCONCLUSIVE
    assert assessment.cp.completely_positive


def test_witness_audit_refutes_bound_witness() -> None:
    record = witness_audit(BOUND_WITNESS, claim_id="bound", restarts=4)
    assert record.verdict is Verdict.REFUTED
    assert record.certificate is not None
    assert record.certificate["block_status"] == "COUNTEREXAMPLE_FOUND"
    assert record.certificate["product_value"] <= -1 + 1e-9


def test_witness_spectrum_flags_negative_eigenvalue() -> None:
    spectrum = witness_spectrum(witness_from_params(BOUND_WITNESS))
    assert spectrum.has_negative
    assert spectrum.min_eigenvalue < 0


def test_map_positivity_search_finds_no_counterexample_at_zero_beta() -> None:
    result = map_positivity_search(MapParams(2, 0.5, 0.0), restarts=4, seed=3)
    assert result.status is not BlockStatus.COUNTEREXAMPLE_FOUND
    assert result.min_value >= -1e-9
    assert result.seed == 3


@pytest.mark.parametrize("alpha", [-1.0, 0.0, 0.25, 1.0])
@pytest.mark.parametrize("beta", [-2.0, -0.5, 0.5, 2.0])
def test_witness_audit_status_matches_certificate(alpha: float, beta: float) -> None:
    record = witness_audit(MapParams(2, alpha, beta), restarts=3, max_iters=100)
    certificate = record.certificate
    assert certificate is not None
    has_counterexample = certificate["product_value"] < certificate["threshold"]
    if certificate["witness_status"] == WitnessStatus.VALID_CANDIDATE.value:
        assert not has_counterexample
        assert record.verdict is Verdict.CONFIRMED
    if has_counterexample:
        assert record.verdict is Verdict.REFUTED
        assert certificate["block_status"] == BlockStatus.COUNTEREXAMPLE_FOUND.value
