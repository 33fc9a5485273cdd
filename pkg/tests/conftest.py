import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _fixed_seed(monkeypatch):
    # the oracles read TGA_SEED; keep the suite independent of the caller's shell
    monkeypatch.delenv("TGA_SEED", raising=False)


# -- acceptance report ------------------------------------------------------------------
# tests marked @pytest.mark.acceptance(number, title) get one PASS/FAIL line each,
# printed live and repeated in the terminal summary

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    num, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.failed:
        msg = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else ""
        detail = (detail + "; " if detail else "") + msg.splitlines()[0] if msg else detail
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    line = f"[acceptance {num:>2}] {status} {title}" + (f" ({detail})" if detail else "")
    _ACCEPTANCE[num] = line
    tr = item.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line("")
        tr.write_line(line)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[num])
