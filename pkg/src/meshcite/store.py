"""The three relational tables TI, AU and MH.

TI holds one row per document, AU one row per author position and MH one row
per (descriptor, qualifier) pair. CSV is the lossless on-disk format; a
dBase III writer is provided for tools that still expect ``.dbf`` files.
"""

from __future__ import annotations

import csv
import datetime as dt
import os
import struct
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import DbfFieldOverflow, DuplicatePmid, IntegrityError, IoFailure, SchemaMismatch
from .medline import MedlineRecord

PathLike = Union[str, os.PathLike]


@dataclass
class TiRow:
    seq: int
    pmid: str
    wos_ut: Optional[str] = None
    title: str = ""
    journal_title: str = ""
    pub_year: Optional[int] = None
    volume: Optional[str] = None
    issue: Optional[str] = None
    first_page: Optional[str] = None
    # None = not matched in WoS, 0 = matched but uncited
    times_cited: Optional[int] = None


@dataclass
class AuRow:
    seq: int
    position: int
    author: str


@dataclass
class MhRow:
    seq: int
    position: int
    descriptor: str
    descriptor_major: bool = False
    qualifier: Optional[str] = None
    qualifier_major: Optional[bool] = None


@dataclass
class TableSet:
    ti: list[TiRow] = field(default_factory=list)
    au: list[AuRow] = field(default_factory=list)
    mh: list[MhRow] = field(default_factory=list)

    def first_authors(self) -> dict[int, str]:
        return {row.seq: row.author for row in self.au if row.position == 1}

    def check_integrity(self) -> None:
        seqs = [row.seq for row in self.ti]
        if seqs != list(range(1, len(seqs) + 1)):
            raise IntegrityError("TI seq values are not contiguous from 1")
        pmids = set()
        for row in self.ti:
            if row.pmid in pmids:
                raise DuplicatePmid(row.pmid)
            pmids.add(row.pmid)
        known = set(seqs)
        for name, rows in (("au", self.au), ("mh", self.mh)):
            for row in rows:
                if row.seq not in known:
                    raise IntegrityError(f"{name} row refers to unknown seq {row.seq}")
        au_keys = [(r.seq, r.position) for r in self.au]
        if len(set(au_keys)) != len(au_keys):
            raise IntegrityError("au (seq, position) pairs are not unique")


TABLE_TYPES = {"ti": TiRow, "au": AuRow, "mh": MhRow}
COLUMNS = {name: [f.name for f in fields(cls)] for name, cls in TABLE_TYPES.items()}
_INT_COLUMNS = {"seq", "position", "pub_year", "times_cited"}
_BOOL_COLUMNS = {"descriptor_major", "qualifier_major"}
_OPTIONAL_TEXT = {"wos_ut", "volume", "issue", "first_page", "qualifier"}


def build_tables(records: Iterable[MedlineRecord]) -> TableSet:
    tables = TableSet()
    seen = set()
    for seq, rec in enumerate(records, start=1):
        if rec.pmid in seen:
            raise DuplicatePmid(rec.pmid)
        seen.add(rec.pmid)
        tables.ti.append(
            TiRow(
                seq=seq,
                pmid=rec.pmid,
                wos_ut=rec.wos_ut,
                title=rec.title,
                journal_title=rec.journal_title,
                pub_year=rec.pub_year,
                volume=rec.volume or None,
                issue=rec.issue or None,
                first_page=rec.first_page or None,
            )
        )
        for pos, author in enumerate(rec.authors, start=1):
            tables.au.append(AuRow(seq, pos, author))
        for pos, heading in enumerate(rec.mesh_headings, start=1):
            if not heading.qualifiers:
                tables.mh.append(MhRow(seq, pos, heading.descriptor, heading.descriptor_major))
            for qualifier, major in heading.qualifiers:
                tables.mh.append(
                    MhRow(seq, pos, heading.descriptor, heading.descriptor_major, qualifier, major)
                )
    return tables


# -- CSV --------------------------------------------------------------------


def _to_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _from_cell(column: str, cell: str):
    if column in _BOOL_COLUMNS:
        if cell == "":
            return None
        if cell not in ("true", "false"):
            raise SchemaMismatch(f"column {column}: expected true/false, got {cell!r}")
        return cell == "true"
    if column in _INT_COLUMNS:
        if cell == "":
            return None
        try:
            return int(cell)
        except ValueError:
            raise SchemaMismatch(f"column {column}: expected integer, got {cell!r}") from None
    if column in _OPTIONAL_TEXT:
        return cell or None
    return cell


def write_csv_tables(tables: TableSet, directory: PathLike) -> list[Path]:
    directory = Path(directory)
    paths = []
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name, cls in TABLE_TYPES.items():
            path = directory / f"{name}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(COLUMNS[name])
                for row in getattr(tables, name):
                    writer.writerow(_to_cell(v) for v in asdict(row).values())
            paths.append(path)
    except OSError as exc:
        raise IoFailure(f"cannot write tables to {directory}: {exc}") from exc
    return paths


def read_tables(directory: PathLike, format: str = "csv") -> TableSet:
    """Inverse of :func:`write_tables` for the CSV format."""
    if format != "csv":
        raise ValueError(f"reading is only supported for csv, not {format!r}")
    directory = Path(directory)
    tables = TableSet()
    for name, cls in TABLE_TYPES.items():
        path = directory / f"{name}.csv"
        if not path.is_file():
            raise SchemaMismatch(f"missing table file {path}")
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != COLUMNS[name]:
                raise SchemaMismatch(f"{path}: header {header} != {COLUMNS[name]}")
            rows = getattr(tables, name)
            for line_no, cells in enumerate(reader, start=2):
                if len(cells) != len(header):
                    raise SchemaMismatch(f"{path}:{line_no}: expected {len(header)} cells")
                rows.append(cls(*(_from_cell(c, v) for c, v in zip(header, cells))))
    return tables


# -- dBase III --------------------------------------------------------------

# (attribute, DBF field name, width, right-justify)
DBF_LAYOUT = {
    "ti": [
        ("seq", "SEQ", 6, True),
        ("pmid", "PMID", 10, False),
        ("wos_ut", "UT", 15, False),
        ("title", "TITLE", 254, False),
        ("journal_title", "JOURNAL", 254, False),
        ("pub_year", "PY", 4, True),
        ("volume", "VOLUME", 20, False),
        ("issue", "ISSUE", 20, False),
        ("first_page", "PAGE", 20, False),
        ("times_cited", "TC", 8, True),
    ],
    "au": [
        ("seq", "SEQ", 6, True),
        ("position", "POSITION", 4, True),
        ("author", "AUTHOR", 100, False),
    ],
    "mh": [
        ("seq", "SEQ", 6, True),
        ("position", "POSITION", 4, True),
        ("descriptor", "DESCRIPTOR", 120, False),
        ("descriptor_major", "DESC_MAJOR", 1, False),
        ("qualifier", "QUALIFIER", 60, False),
        ("qualifier_major", "QUAL_MAJOR", 1, False),
    ],
}


def _dbf_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "T" if value else "F"
    return str(value)


def _dbf_date() -> dt.date:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        return dt.datetime.fromtimestamp(int(epoch), tz=dt.timezone.utc).date()
    return dt.date.today()


def dbf_bytes(name: str, rows: list, date: Optional[dt.date] = None) -> bytes:
    """Serialize one table as a dBase III file (version byte 0x03).

    All fields are character fields; numbers are right-justified. Text is
    UTF-8 and a value wider than its field raises :class:`DbfFieldOverflow`.
    """
    layout = DBF_LAYOUT[name]
    date = date or _dbf_date()
    header_size = 32 + 32 * len(layout) + 1
    record_size = 1 + sum(width for _, _, width, _ in layout)
    out = bytearray(
        struct.pack(
            "<BBBBIHH20x",
            0x03,
            date.year - 1900,
            date.month,
            date.day,
            len(rows),
            header_size,
            record_size,
        )
    )
    for _, fname, width, _ in layout:
        out += struct.pack("<11sc4xBB14x", fname.encode("ascii"), b"C", width, 0)
    out += b"\x0d"
    for row in rows:
        out += b" "
        for attr, fname, width, right in layout:
            raw = _dbf_value(getattr(row, attr)).encode("utf-8")
            if len(raw) > width:
                raise DbfFieldOverflow(name, fname, width, raw.decode("utf-8"))
            out += raw.rjust(width) if right else raw.ljust(width)
    out += b"\x1a"
    return bytes(out)


def write_dbf_tables(tables: TableSet, directory: PathLike, date: Optional[dt.date] = None) -> list[Path]:
    directory = Path(directory)
    # serialize everything first so an overflow leaves no partial output
    blobs = {name: dbf_bytes(name, getattr(tables, name), date) for name in DBF_LAYOUT}
    paths = []
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name, blob in blobs.items():
            path = directory / f"{name}.dbf"
            path.write_bytes(blob)
            paths.append(path)
    except OSError as exc:
        raise IoFailure(f"cannot write tables to {directory}: {exc}") from exc
    return paths


def write_tables(tables: TableSet, format: str, directory: PathLike) -> list[Path]:
    """Write ``ti``, ``au`` and ``mh`` files in ``format`` (``csv`` or ``dbf``)."""
    if format == "csv":
        return write_csv_tables(tables, directory)
    if format == "dbf":
        return write_dbf_tables(tables, directory)
    raise ValueError(f"unknown table format {format!r}")
