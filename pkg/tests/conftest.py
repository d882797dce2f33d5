from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures" / "brugada"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture
def brugada_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def brugada_records():
    from meshcite.medline import filter_by_mesh, parse_medline_text

    records = parse_medline_text(FIXTURES / "medline.txt")
    return filter_by_mesh(records, "Brugada Syndrome", (2010, 2011))


@pytest.fixture
def brugada_tables(brugada_records):
    from meshcite.store import build_tables

    return build_tables(brugada_records)


# -- acceptance summary -------------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = props.get("detail", "")
        if report.failed:
            lines = [x for x in report.longreprtext.splitlines() if x.startswith("E ")]
            detail = lines[0][1:].strip() if lines else "error"
        _ACCEPTANCE[props["criterion"]] = (report.outcome, detail, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        outcome, detail, duration = _ACCEPTANCE[key]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {key}  ({duration:.2f} s)  {detail}")
