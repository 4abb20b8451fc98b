from utils import metrics


def test_command_latency_lands_in_hundred_ms_buckets() -> None:
    metrics.record_command("choi", status="ok", duration_ms=250.0)
    metrics.record_command("choi", status="ok")
    counts, timings = metrics.snapshot()
    assert counts["commands.total.ok.choi"] == 2
    assert timings == {"commands.latency.bucket.choi.200ms": 1}


def test_exits_are_counted_by_code_and_error_type() -> None:
    metrics.record_exit("detect", code=3, error_type="StateValidationError")
    metrics.record_exit("map-apply", code=2, error_type="DimensionMismatch")
    metrics.record_exit("map-apply", code=2, error_type="DimensionMismatch")
    counts, _ = metrics.snapshot()
    assert counts["exits.3.detect"] == 1
    assert counts["exits.2.map-apply"] == 2
    assert counts["errors.DimensionMismatch"] == 2


def test_seesaw_effort_accumulates() -> None:
    metrics.record_seesaw(starts=12, converged=True, counterexample=False)
    metrics.record_seesaw(starts=12, converged=False, counterexample=True)
    counts, _ = metrics.snapshot()
    assert counts["seesaw.runs"] == 2
    assert counts["seesaw.starts"] == 24
    assert counts["seesaw.unconverged"] == 1
    assert counts["seesaw.counterexamples"] == 1


def test_reset_clears_everything() -> None:
    metrics.record_claim("C01", verdict="CONFIRMED")
    metrics.reset()
    assert metrics.snapshot() == ({}, {})
