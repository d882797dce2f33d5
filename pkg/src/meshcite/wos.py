"""Web of Science tab-delimited exports and the citation merge onto TI."""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

from .errors import BadTcValue, MissingColumn
from .medline import normalize_ut
from .store import TableSet

log = logging.getLogger(__name__)

REQUIRED = ("UT", "TC", "WC")


@dataclass
class WosExportRecord:
    wos_ut: str
    times_cited: int = 0
    categories: list[str] = field(default_factory=list)
    pubmed_id: Optional[str] = None


@dataclass
class WosParseReport:
    n_records: int = 0
    no_categories: list[str] = field(default_factory=list)


def decode_export(data: bytes) -> str:
    """UTF-16 is recognised by its byte-order mark; everything else is UTF-8."""
    if data.startswith((b"\xff\xfe", b"\xfe\xff")):
        return data.decode("utf-16")
    return data.decode("utf-8-sig", errors="replace")


def parse_wos_export(
    source: Union[str, bytes, os.PathLike, IO], report: Optional[WosParseReport] = None
) -> list[WosExportRecord]:
    """Parse a tab-delimited WoS export with at least UT, TC and WC columns.

    Records lacking categories are kept (their citations still count) and
    listed in ``report.no_categories``.
    """
    if isinstance(source, os.PathLike):
        with open(source, "rb") as fh:
            source = fh.read()
    elif hasattr(source, "read"):
        source = source.read()
    text = decode_export(source) if isinstance(source, bytes) else source.lstrip("\ufeff")
    if report is None:
        report = WosParseReport()

    reader = csv.reader(io.StringIO(text, newline=""), delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None:
        raise MissingColumn(list(REQUIRED))
    header = [h.strip() for h in header]
    missing = [c for c in REQUIRED if c not in header]
    if missing:
        raise MissingColumn(missing)
    col = {name: header.index(name) for name in (*REQUIRED, "PM") if name in header}

    def cell(cells, name):
        i = col.get(name)
        return cells[i].strip() if i is not None and i < len(cells) else ""

    records = []
    for row_no, cells in enumerate(reader, start=2):
        if not any(c.strip() for c in cells):
            continue
        tc_text = cell(cells, "TC")
        if tc_text == "":
            tc = 0
        elif tc_text.isdigit():
            tc = int(tc_text)
        else:
            raise BadTcValue(row_no, tc_text)
        categories = [c.strip() for c in cell(cells, "WC").split(";") if c.strip()]
        ut = normalize_ut(cell(cells, "UT"))
        if not categories:
            report.no_categories.append(ut)
            log.warning("row %d (%s): no Web of Science categories", row_no, ut)
        records.append(WosExportRecord(ut, tc, categories, cell(cells, "PM") or None))
    report.n_records += len(records)
    return records


@dataclass
class MergeReport:
    matched: int = 0
    unmatched_ti: int = 0
    unmatched_export: int = 0
    total_citations: int = 0
    cited: int = 0
    uncited: int = 0


@dataclass
class MergeResult:
    tables: TableSet
    report: MergeReport
    # PMID -> categories of the matched export record, in TI order
    categories: dict[str, list[str]]


def _dedupe_export(export: Iterable[WosExportRecord]) -> dict[str, WosExportRecord]:
    by_ut: dict[str, WosExportRecord] = {}
    for rec in export:
        prev = by_ut.get(rec.wos_ut)
        if prev is not None:
            log.warning("duplicate UT %s in export; keeping the larger TC", rec.wos_ut)
            if rec.times_cited <= prev.times_cited:
                continue
        by_ut[rec.wos_ut] = rec
    return by_ut


def merge_citations(tables: TableSet, export: Iterable[WosExportRecord]) -> MergeResult:
    """Join times-cited and categories onto TI by accession number.

    Unmatched rows keep whatever ``times_cited`` they had.
    """
    by_ut = _dedupe_export(export)
    report = MergeReport()
    categories: dict[str, list[str]] = {}
    used = set()
    ti = []
    for row in tables.ti:
        rec = by_ut.get(row.wos_ut) if row.wos_ut else None
        if rec is None:
            report.unmatched_ti += 1
            ti.append(row)
            continue
        used.add(rec.wos_ut)
        report.matched += 1
        report.total_citations += rec.times_cited
        if rec.times_cited:
            report.cited += 1
        else:
            report.uncited += 1
        categories[row.pmid] = list(rec.categories)
        ti.append(dataclasses.replace(row, times_cited=rec.times_cited))
    report.unmatched_export = len(by_ut) - len(used)
    return MergeResult(TableSet(ti, list(tables.au), list(tables.mh)), report, categories)
