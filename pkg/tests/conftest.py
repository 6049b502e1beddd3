import re

CRITERIA = {
    1: "triple moment agreement",
    2: "semicircle recovery",
    3: "two-point recovery",
    4: "combinatorial counts",
    5: "mgf coefficients equal moments",
    6: "stieltjes transforms",
    7: "spectral identities and named values",
    8: "quadrature moment chain",
    9: "total mass",
    10: "operator-level properties",
}

_outcomes: dict[int, list[str]] = {}
_notes: dict[int, list[str]] = {}
_pattern = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _pattern.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if hasattr(report, "wasxfail"):
            outcome = "xfail"
        else:
            outcome = report.outcome
        _outcomes.setdefault(k, []).append(outcome)
        _notes.setdefault(k, []).extend(v for key, v in report.user_properties if key == "note")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, title in CRITERIA.items():
        seen = _outcomes.get(k)
        if not seen:
            status = "NOT RUN"
        elif all(o == "passed" for o in seen):
            status = "PASS"
        else:
            status = "FAIL"
        tr.write_line(f"criterion {k:2d} {status:7s} {title}")
        for note in _notes.get(k, []):
            tr.write_line(f"              {note}")
