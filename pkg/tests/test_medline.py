import io
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meshcite.errors import EmptyDescriptor, InvalidAccession, MalformedTagLine, MissingPmid
from meshcite.medline import (
    MedlineRecord,
    MeshHeading,
    ParseReport,
    filter_by_mesh,
    parse_medline_text,
    parse_mesh_field,
    serialize_medline,
)

DATA = Path(__file__).parent / "data"

# Layout as produced by PubMed's "MEDLINE" display: the title wraps onto a
# six-space continuation line.
PUBMED_STYLE = """\
PMID- 100
OWN - NLM
DP  - 2011 Sep
TI  - Decadal electrocardiographic changes between age 40 and 50 in military
      pilots.
PG  - 904-8
AU  - Ohrui N
AU  - Hisada T
TA  - Aviat Space Environ Med
JT  - Aviation, space, and environmental medicine
MH  - Aerospace Medicine
MH  - *Electrocardiography/methods

PMID- 200
TI  - Second record
DP  - 2010
MH  - Brugada Syndrome/*genetics/pathology
"""


def test_two_records():
    records = parse_medline_text(PUBMED_STYLE)
    assert [r.pmid for r in records] == ["100", "200"]


def test_continuation_joined_with_one_space():
    rec = parse_medline_text(PUBMED_STYLE)[0]
    assert rec.title == (
        "Decadal electrocardiographic changes between age 40 and 50 in military pilots."
    )


def test_structured_fields():
    rec = parse_medline_text(PUBMED_STYLE)[0]
    assert rec.pub_year == 2011
    assert rec.pub_date_raw == "2011 Sep"
    assert rec.first_page == "904"
    assert rec.authors == ["Ohrui N", "Hisada T"]
    assert rec.journal_title == "Aviation, space, and environmental medicine"
    assert rec.journal_abbrev == "Aviat Space Environ Med"
    assert rec.mesh_headings[1] == MeshHeading("Electrocardiography", True, (("methods", False),))
    assert rec.wos_ut is None
    assert rec.get("OWN") == ["NLM"]


def test_empty_input():
    assert parse_medline_text("") == []
    assert parse_medline_text(b"\n\n") == []


def test_crlf_and_bytes():
    data = PUBMED_STYLE.replace("\n", "\r\n").encode("utf-8")
    assert parse_medline_text(data) == parse_medline_text(PUBMED_STYLE)
    assert parse_medline_text(io.BytesIO(data)) == parse_medline_text(PUBMED_STYLE)


def test_invalid_utf8_counted():
    report = ParseReport()
    records = parse_medline_text(b"PMID- 1\nTI  - caf\xe9 \xff\n", report=report)
    assert records[0].title == "caf\ufffd \ufffd"
    assert report.replaced_chars == 2


def test_genuine_replacement_char_not_counted():
    report = ParseReport()
    parse_medline_text("PMID- 1\nTI  - a \ufffd b\n".encode(), report=report)
    assert report.replaced_chars == 0


def test_malformed_line_reports_line_number():
    with pytest.raises(MalformedTagLine) as err:
        parse_medline_text("PMID- 1\nTI  - ok\nthis is not a tag line\n")
    assert err.value.line_no == 3


def test_continuation_before_any_tag_is_malformed():
    with pytest.raises(MalformedTagLine) as err:
        parse_medline_text("\n      floating continuation\n")
    assert err.value.line_no == 2


def test_missing_pmid_strict_and_reported():
    text = "PMID- 1\nTI  - a\n\nTI  - no id here\n\nPMID- 3\n"
    with pytest.raises(MissingPmid) as err:
        parse_medline_text(text)
    assert err.value.index == 1
    report = ParseReport()
    records = parse_medline_text(text, strict=False, report=report)
    assert [r.pmid for r in records] == ["1", "3"]
    assert report.missing_pmid == [1]


def test_non_numeric_pmid_rejected():
    with pytest.raises(MissingPmid):
        parse_medline_text("PMID- abc\n")


def test_ut_tag_read_and_normalized():
    rec = parse_medline_text("PMID- 1\nUT  - WOS:000298415800028\n")[0]
    assert rec.wos_ut == "000298415800028"
    with pytest.raises(InvalidAccession):
        parse_medline_text("PMID- 1\nUT  - 12345\n")


def test_unknown_tags_preserved():
    rec = parse_medline_text("PMID- 1\nZZ9 - something new\nTI  - t\n")[0]
    assert rec.raw_fields == [("PMID", "1"), ("ZZ9", "something new"), ("TI", "t")]


@pytest.mark.parametrize(
    "value, expected",
    [
        (
            "Brugada Syndrome/*genetics/pathology",
            MeshHeading("Brugada Syndrome", False, (("genetics", True), ("pathology", False))),
        ),
        ("*Brugada Syndrome", MeshHeading("Brugada Syndrome", True, ())),
        ("Humans", MeshHeading("Humans", False, ())),
        (
            "Death, Sudden, Cardiac/*prevention & control",
            MeshHeading("Death, Sudden, Cardiac", False, (("prevention & control", True),)),
        ),
    ],
)
def test_parse_mesh_field(value, expected):
    assert parse_mesh_field(value) == expected
    assert str(expected) == value


@pytest.mark.parametrize("value", ["", "*", "/", "*/genetics", "  * / "])
def test_empty_descriptor(value):
    with pytest.raises(EmptyDescriptor):
        parse_mesh_field(value)


@given(st.text(max_size=40))
def test_mesh_text_never_keeps_asterisks(value):
    try:
        heading = parse_mesh_field(value)
    except EmptyDescriptor:
        return
    assert "*" not in heading.descriptor and "/" not in heading.descriptor
    assert heading.descriptor
    for text, _ in heading.qualifiers:
        assert "*" not in text and text


def _rec(pmid, year, *mesh):
    fields = [("PMID", pmid), ("DP", str(year))] + [("MH", m) for m in mesh]
    return MedlineRecord.from_fields(fields)


def test_filter_by_mesh():
    records = [
        _rec("1", 2010, "Brugada Syndrome/genetics"),
        _rec("2", 2011, "Humans"),
        _rec("3", 2011, "*Brugada Syndrome"),
    ]
    assert [r.pmid for r in filter_by_mesh(records, "Brugada Syndrome", (2010, 2011))] == ["1", "3"]
    assert filter_by_mesh(records, "brugada syndrome", (2010, 2011)) == filter_by_mesh(
        records, "Brugada Syndrome", (2010, 2011)
    )
    assert [r.pmid for r in filter_by_mesh(records, "Brugada Syndrome", (2011, 2011))] == ["3"]
    assert filter_by_mesh(records, "genetics") == []


def test_filter_on_brugada_fixture(brugada_records):
    # the 286-record set of the Web of Knowledge recall
    assert len(brugada_records) == 286
    again = filter_by_mesh(brugada_records, "BRUGADA SYNDROME", (2010, 2011))
    assert again == brugada_records


def test_corpus_round_trip():
    text = (DATA / "medline_corpus.txt").read_bytes()
    records = parse_medline_text(text)
    assert len(records) >= 50
    for width in (80, 40, None):
        assert parse_medline_text(serialize_medline(records, width)) == records


# -- property tests -----------------------------------------------------------

_chars = st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp"))
_value = st.text(_chars, max_size=120).filter(lambda v: v == v.rstrip())
_tag = st.from_regex(r"[A-Z][A-Z0-9]{0,3}", fullmatch=True).filter(lambda t: t not in ("PMID", "MH", "UT"))
_mesh = st.builds(
    lambda d, major, qs: MeshHeading(d, major, tuple(qs)),
    st.text(st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=20),
    st.booleans(),
    st.lists(
        st.tuples(st.text(st.characters(whitelist_categories=("Ll",)), min_size=1, max_size=12), st.booleans()),
        max_size=3,
    ),
)


@st.composite
def raw_records(draw):
    pmid = str(draw(st.integers(1, 10**9)))
    fields = [("PMID", pmid)]
    fields += draw(st.lists(st.tuples(_tag, _value), max_size=8))
    fields += [("MH", str(h)) for h in draw(st.lists(_mesh, max_size=4))]
    if draw(st.booleans()):
        fields.append(("UT", f"{draw(st.integers(0, 10**15 - 1)):015d}"))
    order = draw(st.permutations(range(1, len(fields))))
    return [fields[0]] + [fields[i] for i in order]


@settings(max_examples=200, deadline=None)
@given(st.lists(raw_records(), max_size=4), st.sampled_from([80, 30, None]))
def test_serialize_parse_round_trip(raw, width):
    records = [MedlineRecord.from_fields(f) for f in raw]
    text = serialize_medline(records, width)
    assert parse_medline_text(text) == records


@settings(max_examples=100, deadline=None)
@given(st.lists(raw_records(), max_size=3), st.lists(raw_records(), max_size=3))
def test_concatenation(a, b):
    ta = serialize_medline([MedlineRecord.from_fields(f) for f in a])
    tb = serialize_medline([MedlineRecord.from_fields(f) for f in b])
    assert parse_medline_text(ta + "\n" + tb) == parse_medline_text(ta) + parse_medline_text(tb)


@given(st.lists(raw_records(), max_size=5), st.text(st.characters(whitelist_categories=("Lu",)), max_size=3))
def test_filter_idempotent_and_order_preserving(raw, descriptor):
    records = [MedlineRecord.from_fields(f) for f in raw]
    descriptor = descriptor or "X"
    once = filter_by_mesh(records, descriptor, (1900, 2100))
    assert filter_by_mesh(once, descriptor, (1900, 2100)) == once
    positions = [records.index(r) for r in once]
    assert positions == sorted(positions)


def test_genuine_pubmed_downloads():
    records = []
    for path in sorted((DATA / "genuine").glob("pubmed_result*.txt")):
        records += parse_medline_text(path)
    assert len(records) == 6
    rec = next(r for r in records if r.pmid == "16403221")
    assert rec.title == "A high level interface to SCOP and ASTRAL implemented in python."
    assert rec.pub_year == 2006
    assert rec.abstract.startswith("BACKGROUND: Benchmarking algorithms in structural bioinformatics often involves the")
    for width in (80, None):
        assert parse_medline_text(serialize_medline(records, width)) == records
