from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

LOGGER = logging.getLogger(__name__)


class Verdict(str, Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class AuditRecord:
    claim_id: str
    paper_location: str
    paper_value: str
    computed_value: str
    verdict: Verdict
    certificate: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "paper_location": self.paper_location,
            "paper_value": self.paper_value,
            "computed_value": self.computed_value,
            "verdict": self.verdict.value,
            "certificate": self.certificate,
        }


@dataclass
class AuditLog:
    records: list[AuditRecord] = field(default_factory=list)

    def append(self, record: AuditRecord) -> None:
        self.records.append(record)

    def counts(self) -> dict[str, int]:
        totals = {verdict.value: 0 for verdict in Verdict}
        for record in self.records:
            totals[record.verdict.value] += 1
        return totals


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON types; complex -> [re, im]."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    return value


def record_audit_event(
    *,
    claim_id: str,
    paper_location: str,
    paper_value: str,
    computed_value: str,
    verdict: Verdict,
    certificate: dict[str, Any] | None = None,
    deviation: float | None = None,
    tolerance: float | None = None,
    log: AuditLog | None = None,
) -> AuditRecord:
    """
    Build one audit record and append it to ``log`` when given.
    CONFIRMED with a deviation needs deviation <= tolerance; REFUTED needs a certificate.
    """
    if verdict is Verdict.REFUTED and not certificate:
        raise ValueError(f"{claim_id}: a refuted claim needs a certificate.")
    if verdict is Verdict.CONFIRMED and deviation is not None:
        if tolerance is None or not deviation <= tolerance:
            raise ValueError(
                f"{claim_id}: deviation {deviation!r} exceeds tolerance {tolerance!r}."
            )
    payload = dict(certificate) if certificate else None
    if payload is not None and deviation is not None:
        payload.setdefault("deviation", deviation)
        if tolerance is not None:
            payload.setdefault("tolerance", tolerance)
    record = AuditRecord(
        claim_id=claim_id,
        paper_location=paper_location,
        paper_value=paper_value,
        computed_value=computed_value,
        verdict=verdict,
        certificate=jsonable(payload) if payload is not None else None,
    )
    if log is not None:
        log.append(record)
    level = logging.WARNING if verdict is Verdict.REFUTED else logging.INFO
    LOGGER.log(level, "Claim %s verdict=%s computed=%s", claim_id, verdict.value, computed_value)
    return record
