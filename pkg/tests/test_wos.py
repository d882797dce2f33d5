import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meshcite.errors import BadTcValue, MissingColumn
from meshcite.store import TableSet, TiRow
from meshcite.wos import (
    WosExportRecord,
    WosParseReport,
    merge_citations,
    parse_wos_export,
)

UT_A = "000298415800028"
UT_B = "000297149900006"
HEADER = "PT\tAU\tTI\tTC\tWC\tUT\tPM\n"


def test_minimal_export():
    text = HEADER + f"J\tBrugada P\tA title\t4\tCardiac Cardiovascular Systems; Physiology\tWOS:{UT_A}\t1392976\n"
    (rec,) = parse_wos_export(text)
    assert rec == WosExportRecord(UT_A, 4, ["Cardiac Cardiovascular Systems", "Physiology"], "1392976")


def test_empty_tc_is_zero_and_pm_optional():
    text = "UT\tTC\tWC\n" + f"{UT_A}\t\tPediatrics\n"
    (rec,) = parse_wos_export(text)
    assert rec.times_cited == 0
    assert rec.pubmed_id is None


def test_header_only():
    assert parse_wos_export(HEADER) == []


def test_missing_columns():
    with pytest.raises(MissingColumn) as err:
        parse_wos_export("PT\tUT\tTI\n")
    assert err.value.columns == ["TC", "WC"]
    with pytest.raises(MissingColumn):
        parse_wos_export("")


def test_bad_tc():
    text = HEADER + f"J\tX\tT\t4\tPhysiology\t{UT_A}\t1\nJ\tX\tT\tmany\tPhysiology\t{UT_B}\t2\n"
    with pytest.raises(BadTcValue) as err:
        parse_wos_export(text)
    assert err.value.row == 3
    assert err.value.value == "many"


def test_utf16_export():
    text = HEADER + f"J\tMüller A\tT\t1\tPhysiology\t{UT_A}\t\n"
    assert parse_wos_export(text.encode("utf-16")) == parse_wos_export(text.encode("utf-8"))


def test_record_without_categories_is_reported():
    report = WosParseReport()
    records = parse_wos_export(HEADER + f"J\tX\tT\t2\t\t{UT_A}\t\n", report)
    assert records[0].categories == []
    assert report.no_categories == [UT_A]
    assert report.n_records == 1


@pytest.mark.parametrize(
    "name, cited, uncited, total",
    [("wos_2012-02.txt", 114, 121, 435), ("wos_2012-06.txt", 126, 109, 608)],
)
def test_fixture_merge(brugada_dir, brugada_tables, name, cited, uncited, total):
    export = parse_wos_export(brugada_dir / name)
    result = merge_citations(brugada_tables, export)
    r = result.report
    assert (r.matched, r.cited, r.uncited, r.total_citations) == (235, cited, uncited, total)
    assert r.unmatched_ti == 51
    assert sum(row.times_cited or 0 for row in result.tables.ti) == total
    assert len(result.categories) == 235


def test_no_paper_loses_citations(brugada_dir, brugada_tables):
    feb = {r.wos_ut: r.times_cited for r in parse_wos_export(brugada_dir / "wos_2012-02.txt")}
    jun = {r.wos_ut: r.times_cited for r in parse_wos_export(brugada_dir / "wos_2012-06.txt")}
    assert feb.keys() == jun.keys()
    assert all(jun[ut] >= feb[ut] for ut in feb)


def test_empty_export():
    tables = TableSet([TiRow(1, "1", UT_A, times_cited=None)])
    result = merge_citations(tables, [])
    assert result.report.matched == 0
    assert result.report.unmatched_ti == 1
    assert result.tables.ti[0].times_cited is None


def test_duplicate_ut_keeps_max(caplog):
    tables = TableSet([TiRow(1, "1", UT_A)])
    export = [WosExportRecord(UT_A, 3, ["A"]), WosExportRecord(UT_A, 7, ["B"]), WosExportRecord(UT_A, 5, ["C"])]
    result = merge_citations(tables, export)
    assert result.tables.ti[0].times_cited == 7
    assert result.categories == {"1": ["B"]}
    assert result.report.unmatched_export == 0
    assert "duplicate" in caplog.text


def test_unmatched_export_rows():
    tables = TableSet([TiRow(1, "1", UT_A), TiRow(2, "2", None)])
    result = merge_citations(tables, [WosExportRecord(UT_B, 9, ["X"])])
    assert (result.report.matched, result.report.unmatched_ti, result.report.unmatched_export) == (0, 2, 1)


@st.composite
def merge_inputs(draw):
    n = draw(st.integers(0, 25))
    ti = []
    for i in range(n):
        ut = f"{i:015d}" if draw(st.booleans()) else None
        ti.append(TiRow(i + 1, str(i + 1), ut))
    export = [
        WosExportRecord(f"{k:015d}", draw(st.integers(0, 50)), ["Cat"])
        for k in draw(st.lists(st.integers(0, 40), max_size=30))
    ]
    return TableSet(ti), export


@settings(max_examples=200, deadline=None)
@given(merge_inputs())
def test_merge_invariants(inputs):
    tables, export = inputs
    result = merge_citations(tables, export)
    r = result.report
    assert r.matched + r.unmatched_ti == len(tables.ti)
    assert r.cited + r.uncited == r.matched
    assert r.total_citations == sum(t.times_cited for t in result.tables.ti if t.times_cited is not None)
    again = merge_citations(result.tables, export)
    assert again.tables == result.tables
    assert again.report == r
