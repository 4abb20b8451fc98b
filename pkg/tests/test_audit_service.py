import json

import pytest

from config import Settings
from services.audit_log_service import AuditRecord, Verdict
from services import audit_service
from services.audit_service import (
    AuditContext,
    AuditReport,
    claim_contraction_equivalence,
    gamma_grid,
    render_summary,
    report_to_json,
    run_reproduction,
    symmetric_grid,
    unit_grid,
)
from utils import metrics

SMALL = Settings(audit_samples=40, seesaw_restarts=8, seesaw_max_iters=200)


@pytest.fixture(scope="module")
def report() -> AuditReport:
    return run_reproduction(SMALL, grid=5)


def _by_id(report: AuditReport) -> dict[str, AuditRecord]:
    return {record.claim_id: record for record in report.records}


def test_grids_are_exact() -> None:
    values = symmetric_grid(-2, 2, 21)
    assert values[10] == 0.0
    assert values[0] == -2.0 and values[-1] == 2.0
    assert unit_grid()[50] == 0.5
    assert len(unit_grid()) == 101
    assert gamma_grid(21)[-1] == 2.0
    assert len(gamma_grid(21)) == 10
    with pytest.raises(ValueError):
        symmetric_grid(0, 1, 1)


def test_claim_ids_are_unique(report: AuditReport) -> None:
    ids = [record.claim_id for record in report.records]
    assert len(ids) == len(set(ids))


@pytest.mark.parametrize(
    "claim_id",
    [
        "C01-closed-form",
        "C02-choi-template",
        "C03-printed-choi-alpha=3/4,beta=-2",
        "C03-printed-choi-alpha=1/8,beta=-1",
        "C04-not-completely-positive",
        "C05-horodecki-state",
        "C06-npt-state",
        "C07-horodecki-expectation",
        "C08-npt-expectation",
        "C09-contraction-equivalence",
        "C11-positive-at-zero-beta",
        "C12-threshold-identity",
        "C13-choi-spectrum-leading",
        "C14-char-coeffs-a=d=1,b=c=1,alpha=1,beta=0",
        "C15-printed-output-A2",
        "C16-choi-trace",
        "C18-witness-has-negative-eigenvalue",
    ],
)
def test_confirmed_claims(report: AuditReport, claim_id: str) -> None:
    assert _by_id(report)[claim_id].verdict is Verdict.CONFIRMED


@pytest.mark.parametrize(
    "claim_id",
    [
        "C10-witness-validity-alpha,beta=3/4,-2",
        "C10-witness-validity-alpha,beta=1/8,-1",
        "C12-threshold-A1",
        "C12-threshold-A2",
        "C14-char-coeffs-a=1,d=2,b=c=0,alpha=1,beta=0",
        "C15-printed-output-A1",
        "C15-positive-output-A1",
        "C15-positive-output-A2",
        "C17-npt-detected-by-bound-witness",
        "C20-positivity-conditions",
    ],
)
def test_refuted_claims_carry_certificates(report: AuditReport, claim_id: str) -> None:
    record = _by_id(report)[claim_id]
    assert record.verdict is Verdict.REFUTED
    assert record.certificate


def test_inapplicable_records(report: AuditReport) -> None:
    records = _by_id(report)
    assert records["C13-choi-spectrum-tail"].verdict is Verdict.INAPPLICABLE
    assert records["C19-realignment-cross-check"].verdict is Verdict.INAPPLICABLE
    assert len(records["C19-realignment-cross-check"].certificate["horodecki"]) == 101


def test_threshold_certificate_shows_the_gap(report: AuditReport) -> None:
    certificate = _by_id(report)["C12-threshold-A1"].certificate
    assert certificate["bracket_consistent"] is True
    assert certificate["min_eigenvalue_at_claimed_alpha"] < 0
    assert certificate["computed_hi"] > certificate["claimed_alpha"]


def test_printed_output_mismatch_is_on_the_diagonal(report: AuditReport) -> None:
    mismatches = _by_id(report)["C15-printed-output-A1"].certificate["mismatches"]
    positions = {(entry["row"], entry["col"]) for entry in mismatches}
    assert positions == {(1, 1), (4, 4)}


def test_npt_detection_mismatch_value(report: AuditReport) -> None:
    certificate = _by_id(report)["C17-npt-detected-by-bound-witness"].certificate
    assert certificate["expectation"] == pytest.approx(1 / 3, abs=1e-12)


def test_report_json_is_deterministic(report: AuditReport) -> None:
    again = run_reproduction(SMALL, grid=5)
    assert report_to_json(again) == report_to_json(report)


def test_report_json_layout(report: AuditReport) -> None:
    payload = json.loads(report_to_json(report))
    assert payload["tool"] == "ppmap-audit"
    assert payload["grid"] == {"param_points": 5, "b_points": 101}
    assert payload["settings"]["seed"] == 0
    assert sum(payload["counts"].values()) == len(payload["records"])
    assert set(payload["records"][0]) == {
        "claim_id",
        "paper_location",
        "paper_value",
        "computed_value",
        "verdict",
        "certificate",
    }


def test_summary_lists_every_claim(report: AuditReport) -> None:
    summary = render_summary(report)
    assert summary.startswith("# Audit summary")
    assert "| C01-closed-form |" in summary
    assert "## Refuted claims" in summary
    assert "**C20-positivity-conditions**" in summary


def test_grid_must_have_two_points() -> None:
    with pytest.raises(ValueError):
        run_reproduction(SMALL, grid=1)


def test_contraction_claim_is_confirmed_with_printed_v_in_tolerance() -> None:
    ctx = AuditContext(settings=SMALL, grid=3)
    claim_contraction_equivalence(ctx)
    (record,) = ctx.log.records
    assert record.verdict is Verdict.CONFIRMED
    assert record.certificate is not None
    assert record.certificate["max_printed_v_deviation"] <= SMALL.tolerances.eps_match


def test_contraction_claim_refutes_a_drifting_printed_v(monkeypatch) -> None:
    printed = audit_service.paper_contraction_entries

    def drifting(inp, params):
        return printed(inp, params) + 1e-6

    monkeypatch.setattr(audit_service, "paper_contraction_entries", drifting)
    ctx = AuditContext(settings=SMALL, grid=3)
    claim_contraction_equivalence(ctx)
    (record,) = ctx.log.records
    assert record.verdict is Verdict.REFUTED
    assert record.certificate["max_printed_v_deviation"] >= 1e-6


def test_refuted_claims_leave_a_breadcrumb_and_a_count(monkeypatch) -> None:
    printed = audit_service.paper_contraction_entries
    crumbs: list[tuple[str, str]] = []

    def breadcrumb(category: str, message: str, **data) -> None:
        crumbs.append((category, message))

    monkeypatch.setattr(
        audit_service, "paper_contraction_entries", lambda inp, params: printed(inp, params) + 1
    )
    monkeypatch.setattr(audit_service, "add_breadcrumb", breadcrumb)
    ctx = AuditContext(settings=SMALL, grid=3)
    claim_contraction_equivalence(ctx)
    (record,) = ctx.log.records
    assert crumbs == [("audit", f"{record.claim_id} refuted")]
    counts, _ = metrics.snapshot()
    assert counts["claims.total.REFUTED"] == 1
    assert counts[f"claims.{record.claim_id}.REFUTED"] == 1
