"""Exception hierarchy for meshcite."""

from __future__ import annotations


class MeshCiteError(Exception):
    """Base class for all meshcite errors."""


class ConfigError(MeshCiteError):
    """Invalid run configuration."""


class IoFailure(MeshCiteError, OSError):
    """A file could not be read or written."""


# -- MEDLINE ingest ---------------------------------------------------------


class MedlineParseError(MeshCiteError):
    pass


class MalformedTagLine(MedlineParseError):
    def __init__(self, line_no: int, line: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no}: not a tag, continuation or blank line: {line[:60]!r}")


class MissingPmid(MedlineParseError):
    def __init__(self, index: int, detail: str = "no PMID field"):
        self.index = index
        super().__init__(f"record {index}: {detail}")


class EmptyDescriptor(MedlineParseError, ValueError):
    def __init__(self, value: str):
        self.value = value
        super().__init__(f"MeSH field has no descriptor: {value!r}")


class InvalidAccession(MeshCiteError, ValueError):
    def __init__(self, value: str):
        self.value = value
        super().__init__(f"not a 15-character WoS accession number: {value!r}")


# -- table store ------------------------------------------------------------


class DuplicatePmid(MeshCiteError):
    def __init__(self, pmid: str):
        self.pmid = pmid
        super().__init__(f"duplicate PMID {pmid}")


class IntegrityError(MeshCiteError):
    pass


class DbfFieldOverflow(MeshCiteError):
    def __init__(self, table: str, field: str, width: int, value: str):
        self.table = table
        self.field = field
        self.width = width
        self.value = value
        super().__init__(f"{table}.{field}: value needs more than {width} bytes: {value[:40]!r}...")


class SchemaMismatch(MeshCiteError):
    pass


# -- crosswalk --------------------------------------------------------------


class CrosswalkCollision(MeshCiteError):
    pass


class EmptyInput(MeshCiteError, ValueError):
    pass


class MaxLenTooSmall(MeshCiteError, ValueError):
    pass


class CapExceeded(MeshCiteError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} accession numbers exceed the system cap of {cap}")


class MissingJournal(MeshCiteError):
    def __init__(self, seq: int):
        self.seq = seq
        super().__init__(f"TI row {seq}: journal title missing")


class MissingYear(MeshCiteError):
    def __init__(self, seq: int):
        self.seq = seq
        super().__init__(f"TI row {seq}: publication year missing")


class CitmatchError(MeshCiteError):
    """Collects the per-row MissingJournal / MissingYear problems."""

    def __init__(self, errors: list[MeshCiteError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


# -- WoS export -------------------------------------------------------------


class MissingColumn(MeshCiteError):
    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(f"WoS export lacks column(s): {', '.join(columns)}")


class BadTcValue(MeshCiteError):
    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: times-cited value {value!r} is not a non-negative integer")


# -- analytics / exporters --------------------------------------------------


class UnknownCategory(MeshCiteError, KeyError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(label)

    def __str__(self) -> str:
        return f"category not in similarity matrix: {self.label!r}"


class EmptyDistribution(MeshCiteError, ValueError):
    pass


class EmptySeries(MeshCiteError, ValueError):
    pass


class InvalidSimilarityMatrix(MeshCiteError, ValueError):
    pass


# -- fetcher ----------------------------------------------------------------


class FetchError(MeshCiteError):
    pass


class NetworkError(FetchError):
    retryable = True


class ServiceError(FetchError):
    def __init__(self, status: int, body: str):
        self.status = status
        self.body = body[:200]
        super().__init__(f"HTTP {status}: {self.body}")


class RateLimited(ServiceError):
    pass


class PartialFetch(FetchError):
    def __init__(self, succeeded: list[int], failed: list[int], missing_pmids: list[str], paths: list):
        self.succeeded = succeeded
        self.failed = failed
        self.missing_pmids = missing_pmids
        self.paths = paths
        super().__init__(
            f"pages succeeded {succeeded}, failed {failed}; "
            f"{len(missing_pmids)} PMID(s) not returned: {', '.join(missing_pmids[:10])}"
        )
