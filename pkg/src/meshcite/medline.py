"""Parser for the NLM MEDLINE flat-file format.

A record is a run of lines of the form::

    PMID- 22212345
    TI  - A title that is long enough to wrap onto the
          next line.
    MH  - Brugada Syndrome/*genetics/pathology

The tag is left-justified in four columns followed by ``"- "``. A line that
starts with exactly six spaces continues the previous field. Records are
separated by one or more blank lines.

Every field is kept, in order, in :attr:`MedlineRecord.raw_fields`; the
structured attributes are derived from it, so re-serializing the raw fields
with :func:`serialize_medline` and parsing again gives back an equal record.
"""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

from .errors import EmptyDescriptor, InvalidAccession, MalformedTagLine, MissingPmid

Source = Union[str, bytes, os.PathLike, IO[str], IO[bytes]]

CONTINUATION = " " * 6
_TAG_RE = re.compile(r"[A-Z][A-Z0-9]{0,3}")
_YEAR_RE = re.compile(r"\b(\d{4})\b")
_UT_RE = re.compile(r"[0-9A-Z]{15}")


@dataclass(frozen=True)
class MeshHeading:
    descriptor: str
    descriptor_major: bool = False
    qualifiers: tuple[tuple[str, bool], ...] = ()

    def __str__(self) -> str:
        parts = [("*" if self.descriptor_major else "") + self.descriptor]
        parts += [("*" if major else "") + q for q, major in self.qualifiers]
        return "/".join(parts)


@dataclass
class MedlineRecord:
    pmid: str
    title: str = ""
    abstract: Optional[str] = None
    journal_title: str = ""
    journal_abbrev: Optional[str] = None
    pub_year: Optional[int] = None
    pub_date_raw: str = ""
    volume: Optional[str] = None
    issue: Optional[str] = None
    first_page: Optional[str] = None
    authors: list[str] = field(default_factory=list)
    mesh_headings: list[MeshHeading] = field(default_factory=list)
    wos_ut: Optional[str] = None
    raw_fields: list[tuple[str, str]] = field(default_factory=list)

    def get(self, tag: str) -> list[str]:
        """All values of ``tag`` in file order."""
        return [v for t, v in self.raw_fields if t == tag]

    @classmethod
    def from_fields(cls, raw_fields: Iterable[tuple[str, str]], index: int = 0) -> "MedlineRecord":
        raw = list(raw_fields)
        values: dict[str, list[str]] = {}
        for tag, value in raw:
            values.setdefault(tag, []).append(value)

        def first(tag):
            vals = values.get(tag)
            return vals[0] if vals else None

        pmid = (first("PMID") or "").strip()
        if not pmid:
            raise MissingPmid(index)
        if not pmid.isdigit():
            raise MissingPmid(index, f"PMID {pmid!r} is not numeric")

        dp = first("DP") or ""
        m = _YEAR_RE.search(dp)
        pages = first("PG")
        ut = first("UT")
        return cls(
            pmid=pmid,
            title=first("TI") or "",
            abstract=first("AB"),
            journal_title=first("JT") or "",
            journal_abbrev=first("TA"),
            pub_year=int(m.group(1)) if m else None,
            pub_date_raw=dp,
            volume=first("VI") or None,
            issue=first("IP") or None,
            first_page=pages.split("-")[0].strip() or None if pages else None,
            authors=list(values.get("AU", [])),
            mesh_headings=[parse_mesh_field(v) for v in values.get("MH", [])],
            wos_ut=normalize_ut(ut) if ut is not None else None,
            raw_fields=raw,
        )


@dataclass
class ParseReport:
    """Side information gathered while parsing."""

    n_records: int = 0
    replaced_chars: int = 0
    missing_pmid: list[int] = field(default_factory=list)


def normalize_ut(value: str) -> str:
    """Strip a ``WOS:``/``ISI:`` prefix and check the 15-character form."""
    ut = value.strip().upper()
    for prefix in ("WOS:", "ISI:"):
        if ut.startswith(prefix):
            ut = ut[len(prefix):]
    if not _UT_RE.fullmatch(ut):
        raise InvalidAccession(value)
    return ut


def parse_mesh_field(value: str) -> MeshHeading:
    """Parse one ``MH`` payload such as ``"Brugada Syndrome/*genetics/pathology"``.

    A leading ``*`` marks a major topic, on the descriptor or on a qualifier.
    Asterisks never survive into the stored text. Empty qualifier segments
    are skipped.
    """
    segments = value.split("/")
    head = segments[0].strip()
    descriptor = head.replace("*", "").strip()
    if not descriptor:
        raise EmptyDescriptor(value)
    qualifiers = []
    for seg in segments[1:]:
        seg = seg.strip()
        text = seg.replace("*", "").strip()
        if text:
            qualifiers.append((text, seg.startswith("*")))
    return MeshHeading(descriptor, head.startswith("*"), tuple(qualifiers))


def _read_text(source: Source, report: ParseReport) -> str:
    if isinstance(source, os.PathLike):
        with open(source, "rb") as fh:
            source = fh.read()
    elif hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        if source.startswith(b"\xef\xbb\xbf"):
            source = source[3:]
        text = source.decode("utf-8", errors="replace")
        # U+FFFD characters present in the input are not replacements
        report.replaced_chars += text.count("\ufffd") - source.count("\ufffd".encode())
        return text
    return source.lstrip("\ufeff")


def _split_tag_line(line: str) -> Optional[tuple[str, str]]:
    if len(line) < 5 or line[4] != "-" or (len(line) > 5 and line[5] != " "):
        return None
    tag = line[:4].rstrip()
    if not _TAG_RE.fullmatch(tag) or line[:4] != tag.ljust(4):
        return None
    return tag, line[6:]


def iter_field_blocks(text: str) -> Iterable[tuple[int, list[tuple[str, str]]]]:
    """Yield ``(first_line_no, fields)`` for each record block in ``text``."""
    fields: list[tuple[str, str]] = []
    start = 0
    for line_no, line in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        line = line.rstrip()
        if not line:
            if fields:
                yield start, fields
                fields = []
            continue
        if line.startswith(CONTINUATION):
            if not fields:
                raise MalformedTagLine(line_no, line)
            tag, value = fields[-1]
            fields[-1] = (tag, value + " " + line[6:])
            continue
        parsed = _split_tag_line(line)
        if parsed is None:
            raise MalformedTagLine(line_no, line)
        if not fields:
            start = line_no
        fields.append(parsed)
    if fields:
        yield start, fields


def parse_medline_text(
    source: Source, *, strict: bool = True, report: Optional[ParseReport] = None
) -> list[MedlineRecord]:
    """Parse MEDLINE text into records.

    ``source`` may be a string, bytes, a path or an open file. Bytes are
    decoded as UTF-8 with invalid sequences replaced; the number of
    replacements lands in ``report``.

    A block without a PMID raises :class:`MissingPmid` when ``strict``;
    otherwise it is skipped and its index appended to
    ``report.missing_pmid``.
    """
    if report is None:
        report = ParseReport()
    text = _read_text(source, report)
    records = []
    for index, (_, fields) in enumerate(iter_field_blocks(text)):
        try:
            records.append(MedlineRecord.from_fields(fields, index))
        except MissingPmid:
            if strict:
                raise
            report.missing_pmid.append(index)
    report.n_records += len(records)
    return records


def read_medline_files(paths: Iterable[Union[str, os.PathLike]], **kwargs) -> list[MedlineRecord]:
    records = []
    for path in paths:
        with open(path, "rb") as fh:
            records.extend(parse_medline_text(fh.read(), **kwargs))
    return records


def _wrap(value: str, room: int) -> list[str]:
    # break only at a single space between two non-empty words so that joining
    # the pieces with one space restores the value exactly
    if len(value) <= room:
        return [value]
    pieces = []
    rest = value
    while len(rest) > room:
        cut = -1
        for i in range(min(room, len(rest) - 1), 0, -1):
            if rest[i] == " " and rest[i - 1] != " " and rest[i + 1] != " ":
                cut = i
                break
        if cut < 0:
            break
        pieces.append(rest[:cut])
        rest = rest[cut + 1:]
    pieces.append(rest)
    return pieces


def format_record(record: MedlineRecord, width: Optional[int] = 80) -> str:
    """Render ``record.raw_fields`` in MEDLINE layout (no trailing blank line)."""
    lines = []
    for tag, value in record.raw_fields:
        pieces = _wrap(value, width - 6) if width else [value]
        lines.append(f"{tag:<4}- {pieces[0]}".rstrip())
        lines.extend(CONTINUATION + p for p in pieces[1:])
    return "\n".join(lines)


def serialize_medline(records: Iterable[MedlineRecord], width: Optional[int] = 80) -> str:
    out = io.StringIO()
    for i, record in enumerate(records):
        if i:
            out.write("\n")
        out.write(format_record(record, width))
        out.write("\n")
    return out.getvalue()


def filter_by_mesh(
    records: Iterable[MedlineRecord],
    descriptor: str,
    year_range: Optional[tuple[int, int]] = None,
) -> list[MedlineRecord]:
    """Keep records indexed with ``descriptor`` (case-insensitive, qualifiers
    ignored) and, if given, published within the inclusive ``year_range``."""
    if not descriptor.strip():
        raise ValueError("descriptor must be non-empty")
    wanted = descriptor.strip().casefold()
    out = []
    for rec in records:
        if not any(h.descriptor.casefold() == wanted for h in rec.mesh_headings):
            continue
        if year_range is not None:
            lo, hi = year_range
            if rec.pub_year is None or not lo <= rec.pub_year <= hi:
                continue
        out.append(rec)
    return out
