import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.failed:
        if report.passed:
            _criteria[props["criterion"]] = ("PASS", props.get("detail", ""))
        else:
            message = report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash") else str(report.longrepr)
            _criteria[props["criterion"]] = ("FAIL", message.splitlines()[0])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split(".")[0])):
        status, detail = _criteria[name]
        terminalreporter.write_line(f"{status}  criterion {name}: {detail}")
