import pytest

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _ACCEPTANCE.append((props["criterion"], props.get("title", report.nodeid),
                        report.passed, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number}: {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test: ``criterion(3, "title")`` then ``detail("...")``."""
    def tag(number, title):
        record_property("criterion", number)
        record_property("title", title)
        return lambda text: record_property("detail", text)
    return tag
