import sys
from contextlib import contextmanager
from types import SimpleNamespace

import pytest

from config import Settings
from services import error_reporting_service


class _FakeScope:
    def __init__(self) -> None:
        self.tags: dict[str, str] = {}

    def set_tag(self, key: str, value: str) -> None:
        self.tags[key] = value


class _FakeSentry:
    def __init__(self) -> None:
        self.init_kwargs: dict = {}
        self.tags: dict[str, str] = {}
        self.breadcrumbs: list[dict] = []
        self.captured: list[tuple[BaseException, dict[str, str]]] = []
        self._scope: _FakeScope | None = None

    def init(self, **kwargs) -> None:
        self.init_kwargs = kwargs

    def set_tag(self, key: str, value: str) -> None:
        self.tags[key] = value

    def add_breadcrumb(self, **kwargs) -> None:
        self.breadcrumbs.append(kwargs)

    @contextmanager
    def new_scope(self):
        self._scope = _FakeScope()
        yield self._scope

    def capture_exception(self, exc: BaseException) -> None:
        tags = self._scope.tags if self._scope else {}
        self.captured.append((exc, dict(tags)))


@pytest.fixture
def fake_sentry(monkeypatch) -> _FakeSentry:
    fake = _FakeSentry()
    logging_module = SimpleNamespace(LoggingIntegration=lambda **kwargs: ("logging", kwargs))
    monkeypatch.setitem(sys.modules, "sentry_sdk", fake)
    monkeypatch.setitem(sys.modules, "sentry_sdk.integrations", SimpleNamespace())
    monkeypatch.setitem(sys.modules, "sentry_sdk.integrations.logging", logging_module)
    monkeypatch.setattr(error_reporting_service, "_INITIALIZED", False)
    for name in ("SENTRY_DSN", "SENTRY_ENVIRONMENT", "SENTRY_RELEASE"):
        monkeypatch.delenv(name, raising=False)
    return fake


def test_without_dsn_nothing_is_reported(fake_sentry: _FakeSentry) -> None:
    error_reporting_service.init_error_reporting(settings=Settings(), service_name="ppmap")
    error_reporting_service.add_breadcrumb("cli", "choi exited 2")
    error_reporting_service.capture_exception(ValueError("boom"), command="choi")
    assert fake_sentry.init_kwargs == {}
    assert fake_sentry.breadcrumbs == []
    assert fake_sentry.captured == []


def test_init_tags_the_run_configuration(fake_sentry: _FakeSentry, monkeypatch) -> None:
    monkeypatch.setenv("SENTRY_DSN", "https://key@example.invalid/1")
    monkeypatch.setenv("SENTRY_RELEASE", "ppmap-audit@test")
    error_reporting_service.init_error_reporting(
        settings=Settings(seed=7, seesaw_restarts=16), service_name="ppmap"
    )
    assert fake_sentry.init_kwargs["release"] == "ppmap-audit@test"
    assert fake_sentry.init_kwargs["send_default_pii"] is False
    assert fake_sentry.tags["seed"] == "7"
    assert fake_sentry.tags["seesaw_restarts"] == "16"
    assert fake_sentry.tags["service"] == "ppmap"


def test_breadcrumb_and_scoped_capture(fake_sentry: _FakeSentry, monkeypatch) -> None:
    monkeypatch.setattr(error_reporting_service, "_INITIALIZED", True)
    error_reporting_service.add_breadcrumb("audit", "C09 refuted", paper_value="V")
    exc = RuntimeError("eigh did not converge")
    error_reporting_service.capture_exception(exc, command="reproduce", tags={"exit_code": 4})
    assert fake_sentry.breadcrumbs == [
        {
            "category": "audit",
            "message": "C09 refuted",
            "level": "info",
            "data": {"paper_value": "V"},
        }
    ]
    assert fake_sentry.captured == [(exc, {"command": "reproduce", "exit_code": "4"})]
