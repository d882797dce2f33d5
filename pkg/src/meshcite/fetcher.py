"""Retrieve MEDLINE records from the NCBI E-utilities service.

Requests go out one at a time through a :class:`RateLimiter` (3 per second
by default, 10 with an API key). Results are saved page by page as
``<prefix>1.txt``, ``<prefix>2.txt``, ... and the saved pages can be read
back without network access via :func:`load_saved_pages`.
"""

from __future__ import annotations

import logging
import os
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

from .errors import NetworkError, PartialFetch, RateLimited, ServiceError
from .medline import MedlineRecord, parse_medline_text

log = logging.getLogger(__name__)

EUTILS = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/"
API_KEY_ENV = "NCBI_API_KEY"
DEFAULT_RATE = 3.0
KEYED_RATE = 10.0


@dataclass
class FetchJob:
    query: str
    date_range: Optional[tuple[str, str]] = None
    page_size: int = 500
    start_index: int = 0
    output_prefix: Union[str, os.PathLike] = "p"

    def __post_init__(self):
        if not 1 <= self.page_size <= 10000:
            raise ValueError(f"page_size must be in [1, 10000], got {self.page_size}")
        if self.start_index < 0:
            raise ValueError("start_index must be >= 0")

    def term(self) -> str:
        if not self.query.strip():
            raise ValueError("empty search query")
        if self.date_range is None:
            return self.query
        lo, hi = self.date_range
        return f'({self.query}) AND ("{lo}"[PDAT] : "{hi}"[PDAT])'


class RateLimiter:
    """Blocks in :meth:`wait` until at least ``1/rate`` seconds have passed
    since the previous request started."""

    def __init__(self, rate: float = DEFAULT_RATE, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.interval = 1.0 / rate
        self.clock = clock
        self.sleep = sleep
        self._last: Optional[float] = None

    def wait(self) -> None:
        if self._last is not None:
            remaining = self._last + self.interval - self.clock()
            if remaining > 0:
                self.sleep(remaining)
        self._last = self.clock()


class EutilsClient:
    """Minimal esearch/efetch client.

    ``session`` is anything with a requests-style ``get(url, params=...,
    timeout=...)``; tests pass a stub.
    """

    def __init__(self, api_key: Optional[str] = None, session: Any = None, rate: Optional[float] = None,
                 clock: Callable[[], float] = time.monotonic, sleep: Callable[[float], None] = time.sleep,
                 retries: int = 3, backoff: float = 1.0, base_url: str = EUTILS, timeout: float = 60.0):
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV) or None
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        if rate is None:
            rate = KEYED_RATE if self.api_key else DEFAULT_RATE
        self.limiter = RateLimiter(rate, clock, sleep)
        self.sleep = sleep
        self.retries = retries
        self.backoff = backoff
        self.base_url = base_url
        self.timeout = timeout

    def _get(self, endpoint: str, params: dict[str, Any]):
        params = dict(params)
        if self.api_key:
            params["api_key"] = self.api_key
        delay = self.backoff
        for attempt in range(1, self.retries + 1):
            self.limiter.wait()
            try:
                resp = self.session.get(self.base_url + endpoint, params=params, timeout=self.timeout)
            except OSError as exc:  # includes requests.RequestException
                error: Exception = NetworkError(str(exc))
            else:
                status = resp.status_code
                if status == 200:
                    return resp
                if status == 429:
                    error = RateLimited(status, resp.text)
                elif status >= 500:
                    error = ServiceError(status, resp.text)
                else:
                    raise ServiceError(status, resp.text)
            if attempt == self.retries:
                raise error
            log.warning("%s attempt %d failed (%s); retrying in %.1fs", endpoint, attempt, error, delay)
            self.sleep(delay)
            delay *= 2
        raise AssertionError("unreachable")

    def esearch_page(self, term: str, retstart: int, retmax: int) -> tuple[list[str], int]:
        resp = self._get("esearch.fcgi", {
            "db": "pubmed", "term": term, "retstart": retstart, "retmax": retmax, "retmode": "json",
        })
        try:
            result = resp.json()["esearchresult"]
            return [str(i) for i in result.get("idlist", [])], int(result["count"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ServiceError(resp.status_code, f"unexpected esearch response: {exc}") from None

    def efetch_medline(self, pmids: Sequence[str]) -> str:
        resp = self._get("efetch.fcgi", {
            "db": "pubmed", "id": ",".join(pmids), "rettype": "medline", "retmode": "text",
        })
        return resp.text


def search_ids(job: FetchJob, client: Optional[EutilsClient] = None) -> tuple[list[str], int]:
    """All PMIDs matching ``job`` from ``start_index`` on, fetched in pages of
    ``page_size``, plus the total count reported by the service."""
    client = client or EutilsClient()
    term = job.term()
    ids: list[str] = []
    start = job.start_index
    while True:
        page, total = client.esearch_page(term, start, job.page_size)
        ids.extend(page)
        start += len(page)
        if not page or start >= total:
            return ids, total


def page_path(prefix: Union[str, os.PathLike], number: int) -> Path:
    return Path(f"{os.fspath(prefix)}{number}.txt")


def fetch_medline(
    pmids: Sequence[str],
    output_prefix: Union[str, os.PathLike],
    client: Optional[EutilsClient] = None,
    page_size: int = 500,
    start_page: int = 1,
    resume: bool = False,
) -> list[Path]:
    """Download ``pmids`` as MEDLINE text, one file per page.

    Existing page files are overwritten, except that with ``resume=True``
    pages whose file already exists are skipped, as are pages numbered below
    ``start_page``. Raises :class:`PartialFetch` if any page failed or any
    PMID did not come back.
    """
    if not pmids:
        raise ValueError("no PMIDs to fetch")
    client = client or EutilsClient()
    pages = [list(pmids[i:i + page_size]) for i in range(0, len(pmids), page_size)]
    paths, succeeded, failed, missing = [], [], [], []
    for number, chunk in enumerate(pages, start=1):
        path = page_path(output_prefix, number)
        if number < start_page or (resume and path.exists()):
            paths.append(path)
            continue
        try:
            text = client.efetch_medline(chunk)
            got = {r.pmid for r in parse_medline_text(text)}
        except (NetworkError, ServiceError) as exc:
            log.error("page %d failed: %s", number, exc)
            failed.append(number)
            missing.extend(chunk)
            continue
        lost = [p for p in chunk if p not in got]
        missing.extend(lost)
        if len(lost) == len(chunk):
            failed.append(number)
            continue
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        paths.append(path)
        succeeded.append(number)
    if failed or missing:
        raise PartialFetch(succeeded, failed, missing, paths)
    return paths


_PAGE_RE = re.compile(r"(\d+)\.txt$")


def saved_pages(output_prefix: Union[str, os.PathLike]) -> list[Path]:
    """Saved page files for ``output_prefix`` in page-number order."""
    prefix = Path(output_prefix)
    found = []
    for path in prefix.parent.glob(prefix.name + "*.txt"):
        m = _PAGE_RE.search(path.name[len(prefix.name):])
        if m and path.name == f"{prefix.name}{m.group(1)}.txt":
            found.append((int(m.group(1)), path))
    return [p for _, p in sorted(found)]


def load_saved_pages(output_prefix: Union[str, os.PathLike]) -> list[MedlineRecord]:
    """Offline mode: parse previously saved page files."""
    records = []
    for path in saved_pages(output_prefix):
        records.extend(parse_medline_text(path))
    return records
