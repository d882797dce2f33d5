"""Bridging PubMed identifiers and Web of Science accession numbers.

Covers filling in missing accession numbers from a PMID -> UT mapping,
packing accession numbers into ``UT=(... OR ...)`` Advanced Search queries,
and rendering TI rows for the PubMed batch citation matcher.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    CapExceeded,
    CitmatchError,
    CrosswalkCollision,
    EmptyInput,
    IoFailure,
    MaxLenTooSmall,
    MissingJournal,
    MissingYear,
    SchemaMismatch,
)
from .medline import normalize_ut
from .store import TableSet

log = logging.getLogger(__name__)

DEFAULT_MAX_LEN = 8000
SYSTEM_CAP = 100_000


@dataclass
class IdentifierMap:
    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "IdentifierMap":
        entries: dict[str, str] = {}
        owners: dict[str, str] = {}
        for pmid, ut in pairs:
            pmid = pmid.strip()
            ut = normalize_ut(ut)
            if entries.get(pmid, ut) != ut:
                raise CrosswalkCollision(f"PMID {pmid} maps to both {entries[pmid]} and {ut}")
            if owners.get(ut, pmid) != pmid:
                raise CrosswalkCollision(f"UT {ut} maps to both PMID {owners[ut]} and {pmid}")
            entries[pmid] = ut
            owners[ut] = pmid
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)


def load_identifier_map(path: Union[str, os.PathLike]) -> IdentifierMap:
    """Read a two-column ``pmid,wos_ut`` CSV with a header row."""
    try:
        with open(path, encoding="utf-8-sig", newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header != ["pmid", "wos_ut"]:
                raise SchemaMismatch(f"{path}: expected header pmid,wos_ut, got {header}")
            return IdentifierMap.from_pairs((row[0], row[1]) for row in reader if row)
    except OSError as exc:
        raise IoFailure(f"cannot read crosswalk {path}: {exc}") from exc


@dataclass
class FillReport:
    already_present: int = 0
    filled: int = 0
    still_missing: int = 0
    conflicts: int = 0


def apply_crosswalk(tables: TableSet, idmap: IdentifierMap) -> tuple[TableSet, FillReport]:
    """Fill absent TI accession numbers from ``idmap``.

    Existing values are never overwritten; a disagreeing map entry counts as
    a conflict. Conflicting rows are also counted in ``already_present``.
    """
    report = FillReport()
    ti = []
    for row in tables.ti:
        mapped = idmap.entries.get(row.pmid)
        if row.wos_ut is not None:
            report.already_present += 1
            if mapped is not None and mapped != row.wos_ut:
                report.conflicts += 1
                log.warning("PMID %s: keeping UT %s, crosswalk says %s", row.pmid, row.wos_ut, mapped)
        elif mapped is not None:
            report.filled += 1
            row = dataclasses.replace(row, wos_ut=mapped)
        else:
            report.still_missing += 1
        ti.append(row)
    return TableSet(ti, list(tables.au), list(tables.mh)), report


@dataclass
class QueryBatch:
    queries: list[str] = field(default_factory=list)
    uts_per_query: list[list[str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.queries)


def _query(uts: Sequence[str], spaced: bool = False) -> str:
    return ("UT= (" if spaced else "UT=(") + " OR ".join(uts) + ")"


_QUERY_RE = re.compile(r"UT= ?\(([0-9A-Z]{15}(?: OR [0-9A-Z]{15})*)\)")


def parse_ut_query(query: str) -> list[str]:
    """Inverse of the query generator: ``"UT=(A OR B)"`` -> ``["A", "B"]``."""
    m = _QUERY_RE.fullmatch(query.strip())
    if not m:
        raise ValueError(f"not a UT query: {query[:60]!r}")
    return m.group(1).split(" OR ")


def dedupe_uts(uts: Iterable[str]) -> list[str]:
    seen = set()
    out = []
    for ut in uts:
        ut = normalize_ut(ut)
        if ut in seen:
            log.warning("duplicate accession number %s dropped", ut)
            continue
        seen.add(ut)
        out.append(ut)
    return out


def generate_ut_queries(
    uts: Iterable[str], max_len: Optional[int] = DEFAULT_MAX_LEN, *, spaced: bool = False
) -> QueryBatch:
    """Greedily pack accession numbers, in order, into queries no longer than
    ``max_len`` characters. ``max_len=None`` means unbounded (one query).
    ``spaced`` emits ``UT= (`` instead of the canonical ``UT=(``."""
    uts = dedupe_uts(uts)
    if not uts:
        raise EmptyInput("no accession numbers to query")
    single = len(_query([uts[0]], spaced))
    if max_len is not None and max_len < single:
        raise MaxLenTooSmall(f"max_len {max_len} is shorter than a one-UT query ({single})")

    batch = QueryBatch()
    current: list[str] = []
    length = 0
    for ut in uts:
        if not current:
            current, length = [ut], single
            continue
        grown = length + 4 + len(ut)  # " OR " + ut
        if max_len is None or grown <= max_len:
            current.append(ut)
            length = grown
        else:
            batch.queries.append(_query(current, spaced))
            batch.uts_per_query.append(current)
            current, length = [ut], single
    batch.queries.append(_query(current, spaced))
    batch.uts_per_query.append(current)
    return batch


def enforce_system_cap(uts: Sequence[str], cap: int = SYSTEM_CAP) -> int:
    """Return ``len(uts)`` if it does not exceed ``cap``, else raise CapExceeded."""
    n = len(uts)
    if n > cap:
        raise CapExceeded(n, cap)
    return n


def write_wos_txt(batch: QueryBatch, path: Union[str, os.PathLike]) -> Path:
    path = Path(path)
    try:
        path.write_text("".join(q + "\n" for q in batch.queries), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def format_citmatch(tables: TableSet) -> list[str]:
    """One ``journal|year|volume|first page|author name|key|`` line per TI row.

    The key is the PMID prefixed with ``K``. All rows are checked before
    raising, so the error lists every row lacking a journal or a year.
    """
    authors = tables.first_authors()
    errors = []
    lines = []
    for row in tables.ti:
        if not row.journal_title:
            errors.append(MissingJournal(row.seq))
        if row.pub_year is None:
            errors.append(MissingYear(row.seq))
        cells = [
            row.journal_title,
            "" if row.pub_year is None else str(row.pub_year),
            row.volume or "",
            row.first_page or "",
            authors.get(row.seq, ""),
            "K" + row.pmid,
        ]
        lines.append("|".join(cells) + "|")
    if errors:
        raise CitmatchError(errors)
    return lines
