"""Category distributions, core-category share, Rao-Stirling diversity and
citation rank series."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import EmptyDistribution, InvalidSimilarityMatrix, IoFailure, UnknownCategory

PathLike = Union[str, os.PathLike]


@dataclass
class CategoryDistribution:
    counts: dict[str, int] = field(default_factory=dict)
    n_documents: int = 0
    total_attributions: int = 0

    def ranked(self) -> list[tuple[str, int]]:
        """Categories by descending count, ties broken by label."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def proportions(self) -> dict[str, float]:
        total = self.total_attributions
        return {k: v / total for k, v in self.counts.items()} if total else {}


def wc_distribution(per_record_categories: Iterable[Sequence[str]]) -> CategoryDistribution:
    """Count category attributions over documents.

    A document with k distinct categories contributes k attributions; a name
    repeated within one document is counted once.
    """
    counts: dict[str, int] = {}
    n_documents = 0
    for cats in per_record_categories:
        n_documents += 1
        for cat in dict.fromkeys(cats):
            counts[cat] = counts.get(cat, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return CategoryDistribution(dict(ranked), n_documents, sum(counts.values()))


def core_share(dist: CategoryDistribution, core: str) -> float:
    """Fraction of documents attributed to ``core``."""
    if dist.n_documents == 0:
        raise ZeroDivisionError("core share of an empty document set")
    return dist.counts.get(core, 0) / dist.n_documents


@dataclass
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise InvalidSimilarityMatrix("duplicate labels")
        if self.values.shape != (n, n):
            raise InvalidSimilarityMatrix(f"expected a {n}x{n} matrix, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise InvalidSimilarityMatrix("non-finite similarity")
        if np.any(self.values < 0) or np.any(self.values > 1):
            raise InvalidSimilarityMatrix("similarities must lie in [0, 1]")
        if not np.all(np.diag(self.values) == 1.0):
            raise InvalidSimilarityMatrix("diagonal must be exactly 1")
        if not np.allclose(self.values, self.values.T, rtol=0, atol=1e-9):
            raise InvalidSimilarityMatrix("matrix is not symmetric")
        self._index = {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownCategory(label) from None

    def get(self, a: str, b: str) -> float:
        return float(self.values[self.index(a), self.index(b)])

    @classmethod
    def all_distinct(cls, labels: Iterable[str]) -> "SimilarityMatrix":
        """Identity similarity: every pair of categories is maximally distant."""
        labels = tuple(labels)
        return cls(labels, np.eye(len(labels)))


def read_similarity_csv(path: PathLike) -> SimilarityMatrix:
    """Read a matrix whose first row and first column hold the labels."""
    try:
        with open(path, encoding="utf-8-sig", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise IoFailure(f"cannot read similarity matrix {path}: {exc}") from exc
    if not rows:
        raise InvalidSimilarityMatrix(f"{path} is empty")
    labels = [c.strip() for c in rows[0][1:]]
    if [r[0].strip() for r in rows[1:]] != labels:
        raise InvalidSimilarityMatrix(f"{path}: row labels differ from column labels")
    try:
        values = [[float(c) for c in r[1:]] for r in rows[1:]]
    except ValueError as exc:
        raise InvalidSimilarityMatrix(f"{path}: {exc}") from None
    return SimilarityMatrix(tuple(labels), np.array(values).reshape(len(labels), len(labels)))


def write_similarity_csv(sim: SimilarityMatrix, path: PathLike) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *sim.labels])
        for label, row in zip(sim.labels, sim.values):
            writer.writerow([label, *(repr(float(v)) for v in row)])
    return path


def rao_stirling(dist: CategoryDistribution, sim: SimilarityMatrix) -> float:
    """Rao-Stirling diversity over ordered pairs i != j of p_i p_j (1 - s_ij).

    Proportions are taken over attributions, not documents.
    """
    if dist.total_attributions <= 0 or not dist.counts:
        raise EmptyDistribution("cannot compute diversity of an empty distribution")
    idx = np.array([sim.index(label) for label in dist.counts])
    p = np.array(list(dist.counts.values()), dtype=float) / dist.total_attributions
    d = 1.0 - sim.values[np.ix_(idx, idx)]
    np.fill_diagonal(d, 0.0)
    return float(p @ d @ p)


@dataclass
class RankSeries:
    values: tuple[int, ...] = ()
    total: int = 0
    zeros: int = 0

    def __len__(self) -> int:
        return len(self.values)


def citation_rank_series(tc_values: Iterable[Optional[int]]) -> RankSeries:
    """Rank matched records by times cited; ``None`` (unmatched) is skipped."""
    values = sorted((v for v in tc_values if v is not None), reverse=True)
    return RankSeries(tuple(values), sum(values), sum(1 for v in values if v == 0))


def write_distribution_csv(dist: CategoryDistribution, path: PathLike) -> Path:
    path = Path(path)
    props = dist.proportions()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["category", "count", "proportion"])
        for label, count in dist.ranked():
            writer.writerow([label, count, repr(props[label])])
    return path
