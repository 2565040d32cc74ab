import re

_LINES: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n = int(m.group(1))
        detail = dict(report.user_properties).get("measured", "")
        status = "PASS" if report.passed else "SKIP" if report.skipped else "FAIL"
        _LINES[n] = (status, m.group(2).replace("_", " "), detail)


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        status, name, detail = _LINES[n]
        line = f"criterion {n:2d}: {status}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
