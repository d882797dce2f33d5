import datetime as dt
import struct

import pytest
from dbfread import DBF
from hypothesis import given, settings
from hypothesis import strategies as st

from meshcite.errors import DbfFieldOverflow, DuplicatePmid, SchemaMismatch
from meshcite.medline import MedlineRecord, MeshHeading
from meshcite.store import (
    AuRow,
    MhRow,
    TableSet,
    TiRow,
    build_tables,
    dbf_bytes,
    read_tables,
    write_tables,
)


def _record(pmid="1", authors=("Brugada P", "Brugada J"), mesh=None, ut=None):
    mesh = mesh or [MeshHeading("Brugada Syndrome", True, (("genetics", True), ("pathology", False)))]
    return MedlineRecord(
        pmid=pmid,
        title="Right bundle branch block",
        journal_title="Journal of the American College of Cardiology",
        pub_year=1992,
        volume="20",
        issue="6",
        first_page="1391",
        authors=list(authors),
        mesh_headings=mesh,
        wos_ut=ut,
    )


def test_row_counts_follow_definitions():
    tables = build_tables([_record()])
    assert (len(tables.ti), len(tables.au), len(tables.mh)) == (1, 2, 2)
    assert tables.mh[0] == MhRow(1, 1, "Brugada Syndrome", True, "genetics", True)
    assert tables.mh[1] == MhRow(1, 1, "Brugada Syndrome", True, "pathology", False)
    assert tables.ti[0].times_cited is None


def test_heading_without_qualifier_gives_one_row():
    tables = build_tables([_record(mesh=[MeshHeading("Humans")])])
    assert tables.mh == [MhRow(1, 1, "Humans", False, None, None)]


def test_empty():
    tables = build_tables([])
    assert tables == TableSet()


def test_duplicate_pmid():
    with pytest.raises(DuplicatePmid) as err:
        build_tables([_record("7"), _record("7")])
    assert err.value.pmid == "7"


def test_brugada_fixture_tables(brugada_tables):
    assert len(brugada_tables.ti) == 286
    assert sum(1 for r in brugada_tables.ti if r.wos_ut) == 235
    brugada_tables.check_integrity()


def test_csv_round_trip(tmp_path, brugada_tables):
    paths = write_tables(brugada_tables, "csv", tmp_path)
    assert sorted(p.name for p in paths) == ["au.csv", "mh.csv", "ti.csv"]
    assert read_tables(tmp_path) == brugada_tables


def test_csv_deterministic(tmp_path, brugada_records):
    write_tables(build_tables(brugada_records), "csv", tmp_path / "a")
    write_tables(build_tables(brugada_records), "csv", tmp_path / "b")
    for name in ("ti", "au", "mh"):
        assert (tmp_path / "a" / f"{name}.csv").read_bytes() == (tmp_path / "b" / f"{name}.csv").read_bytes()


def test_absent_vs_zero_times_cited(tmp_path):
    tables = TableSet([TiRow(1, "1", times_cited=None), TiRow(2, "2", wos_ut="000298415800028", times_cited=0)])
    write_tables(tables, "csv", tmp_path)
    lines = (tmp_path / "ti.csv").read_text().splitlines()
    assert lines[1].endswith(",")
    assert lines[2].endswith(",0")
    assert read_tables(tmp_path) == tables


def test_missing_file_is_schema_mismatch(tmp_path, brugada_tables):
    write_tables(brugada_tables, "csv", tmp_path)
    (tmp_path / "mh.csv").unlink()
    with pytest.raises(SchemaMismatch):
        read_tables(tmp_path)


def test_wrong_header_is_schema_mismatch(tmp_path):
    write_tables(TableSet(), "csv", tmp_path)
    (tmp_path / "au.csv").write_text("seq,author\n")
    with pytest.raises(SchemaMismatch):
        read_tables(tmp_path)


def test_hand_written_csv_trio(tmp_path):
    (tmp_path / "ti.csv").write_text(
        "seq,pmid,wos_ut,title,journal_title,pub_year,volume,issue,first_page,times_cited\r\n"
        '1,1392976,,"Right bundle branch block, persistent ST segment elevation",'
        "Journal of the American College of Cardiology,1992,20,6,1391,\r\n"
    )
    (tmp_path / "au.csv").write_text("seq,position,author\r\n1,1,Brugada P\r\n")
    (tmp_path / "mh.csv").write_text(
        "seq,position,descriptor,descriptor_major,qualifier,qualifier_major\r\n"
        "1,1,Brugada Syndrome,true,,\r\n"
    )
    tables = read_tables(tmp_path)
    assert tables.ti == [
        TiRow(1, "1392976", None, "Right bundle branch block, persistent ST segment elevation",
              "Journal of the American College of Cardiology", 1992, "20", "6", "1391", None)
    ]
    assert tables.au == [AuRow(1, 1, "Brugada P")]
    assert tables.mh == [MhRow(1, 1, "Brugada Syndrome", True, None, None)]


# -- DBF --------------------------------------------------------------------------


def test_dbf_empty_tables(tmp_path):
    write_tables(TableSet(), "dbf", tmp_path)
    for name in ("ti", "au", "mh"):
        data = (tmp_path / f"{name}.dbf").read_bytes()
        assert data[0] == 0x03
        assert struct.unpack("<I", data[4:8])[0] == 0
        assert data[-1] == 0x1A
        assert len(DBF(tmp_path / f"{name}.dbf", encoding="utf-8")) == 0


def test_dbf_record_count_286(tmp_path, brugada_tables):
    write_tables(brugada_tables, "dbf", tmp_path)
    data = (tmp_path / "ti.dbf").read_bytes()
    assert data[4:8] == (286).to_bytes(4, "little")
    header_size, record_size = struct.unpack("<HH", data[8:12])
    assert len(data) == header_size + 286 * record_size + 1

    table = DBF(tmp_path / "ti.dbf", encoding="utf-8")
    rows = list(table)
    assert len(rows) == 286
    assert [f.name for f in table.fields][:3] == ["SEQ", "PMID", "UT"]
    assert rows[0]["PMID"] == brugada_tables.ti[0].pmid
    assert sum(1 for r in rows if r["UT"]) == 235
    assert all(r["TC"] == "" for r in rows)
    assert len(DBF(tmp_path / "mh.dbf", encoding="utf-8")) == len(brugada_tables.mh)
    assert len(DBF(tmp_path / "au.dbf", encoding="utf-8")) == len(brugada_tables.au)


def test_dbf_values(tmp_path):
    tables = build_tables([_record(ut="000298415800028")])
    tables.ti[0].times_cited = 0
    write_tables(tables, "dbf", tmp_path)
    ti = list(DBF(tmp_path / "ti.dbf", encoding="utf-8"))[0]
    assert ti["UT"] == "000298415800028"
    # numbers are right-justified in their character fields
    assert ti["TC"].strip() == "0"
    assert ti["PY"].strip() == "1992"
    mh = list(DBF(tmp_path / "mh.dbf", encoding="utf-8"))
    assert [(r["QUALIFIER"], r["QUAL_MAJOR"]) for r in mh] == [("genetics", "T"), ("pathology", "F")]


def test_dbf_header_date():
    data = dbf_bytes("au", [], dt.date(2012, 2, 24))
    assert tuple(data[1:4]) == (112, 2, 24)


def test_dbf_overflow_is_an_error():
    long_title = TiRow(1, "1", title="x" * 255)
    with pytest.raises(DbfFieldOverflow) as err:
        dbf_bytes("ti", [long_title])
    assert err.value.field == "TITLE"
    assert err.value.width == 254


def test_dbf_overflow_counts_utf8_bytes():
    with pytest.raises(DbfFieldOverflow):
        dbf_bytes("au", [AuRow(1, 1, "é" * 51)])


# -- randomized round trip ------------------------------------------------------

# NUL cannot be written by the csv module; every other code point must survive
_chars = st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00")
_text = st.text(_chars, max_size=30)
_opt = st.none() | st.text(_chars, min_size=1, max_size=10)
_opt_ut = st.none() | st.from_regex(r"[0-9]{15}", fullmatch=True)


@st.composite
def table_sets(draw):
    n = draw(st.integers(0, 5))
    ti = [
        TiRow(
            seq,
            str(1000 + seq),
            draw(_opt_ut),
            draw(_text),
            draw(_text),
            draw(st.none() | st.integers(1800, 2100)),
            draw(_opt),
            draw(_opt),
            draw(_opt),
            draw(st.none() | st.integers(0, 10**6)),
        )
        for seq in range(1, n + 1)
    ]
    au, mh = [], []
    for seq in range(1, n + 1):
        for pos in range(1, draw(st.integers(0, 3)) + 1):
            au.append(AuRow(seq, pos, draw(_text)))
        for pos in range(1, draw(st.integers(0, 3)) + 1):
            q = draw(_opt)
            mh.append(MhRow(seq, pos, draw(_text.filter(bool)), draw(st.booleans()),
                            q, None if q is None else draw(st.booleans())))
    return TableSet(ti, au, mh)


@settings(max_examples=150, deadline=None)
@given(table_sets())
def test_csv_round_trip_random(tmp_path_factory, tables):
    directory = tmp_path_factory.mktemp("t")
    write_tables(tables, "csv", directory)
    assert read_tables(directory) == tables
    tables.check_integrity()
