"""Map-ready and human-readable outputs.

All writers order categories by descending weight, then label, and number
them from 1 in that order, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union
from xml.sax.saxutils import escape

from .analytics import CategoryDistribution, RankSeries, SimilarityMatrix
from .errors import EmptyDistribution, EmptySeries, IoFailure

PathLike = Union[str, os.PathLike]

SCHEMA_VERSION = 1


@dataclass
class MapNode:
    id: int
    label: str
    weight: float
    cluster: Optional[int] = None
    x: Optional[float] = None
    y: Optional[float] = None


def _num(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def map_nodes(
    dist: CategoryDistribution,
    coords: Optional[Mapping[str, tuple[float, float]]] = None,
    clusters: Optional[Mapping[str, int]] = None,
) -> list[MapNode]:
    coords = coords or {}
    clusters = clusters or {}
    nodes = []
    for i, (label, count) in enumerate(dist.ranked(), start=1):
        x, y = coords.get(label, (None, None))
        nodes.append(MapNode(i, label, count, clusters.get(label), x, y))
    return nodes


def _edges(nodes: list[MapNode], sim: Optional[SimilarityMatrix]) -> list[tuple[int, int, float]]:
    if sim is None:
        return []
    edges = []
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            s = sim.get(nodes[a].label, nodes[b].label)
            if s > 0:
                edges.append((nodes[a].id, nodes[b].id, s))
    return edges


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def export_vosviewer(
    dist: CategoryDistribution,
    sim: Optional[SimilarityMatrix],
    directory: PathLike,
    coords: Optional[Mapping[str, tuple[float, float]]] = None,
    clusters: Optional[Mapping[str, int]] = None,
) -> tuple[Path, Optional[Path]]:
    """Write ``vosviewer_map.txt`` and, given a matrix, ``vosviewer_network.txt``.

    The map is tab-separated with header ``id label weight``; ``x y cluster``
    columns are appended when coordinates are passed in. Layout itself is
    left to VOSviewer.
    """
    if not dist.counts:
        raise EmptyDistribution("nothing to map")
    directory = Path(directory)
    nodes = map_nodes(dist, coords, clusters)
    with_layout = bool(coords)
    header = ["id", "label", "weight"] + (["x", "y", "cluster"] if with_layout else [])
    lines = ["\t".join(header)]
    for n in nodes:
        cells = [str(n.id), n.label, _num(n.weight)]
        if with_layout:
            cells += [
                "" if n.x is None else _num(n.x),
                "" if n.y is None else _num(n.y),
                "" if n.cluster is None else str(n.cluster),
            ]
        lines.append("\t".join(cells))
    map_path = _write(directory / "vosviewer_map.txt", "\n".join(lines) + "\n")
    if sim is None:
        return map_path, None
    edges = _edges(nodes, sim)
    net_text = "".join(f"{a}\t{b}\t{_num(w)}\n" for a, b, w in edges)
    return map_path, _write(directory / "vosviewer_network.txt", net_text)


def export_pajek(dist: CategoryDistribution, sim: Optional[SimilarityMatrix], path: PathLike) -> Path:
    nodes = map_nodes(dist)
    lines = [f"*Vertices {len(nodes)}"]
    # Pajek labels cannot contain escaped quotes
    lines += [f'{n.id} "{n.label.replace(chr(34), chr(39))}"' for n in nodes]
    lines.append("*Edges")
    lines += [f"{a} {b} {_num(w)}" for a, b, w in _edges(nodes, sim)]
    return _write(Path(path), "\n".join(lines) + "\n")


def render_rank_plot(series: RankSeries, path: PathLike, title: Optional[str] = None) -> Path:
    """Draw times cited against rank as a standalone SVG 1.1 document."""
    if not series.values:
        raise EmptySeries("no ranked values to plot")
    width, height = 640, 400
    left, right, top, bottom = 70, 20, 50, 60
    pw, ph = width - left - right, height - top - bottom
    n = len(series.values)
    ymax = max(series.values) or 1

    def sx(rank):
        return left + (pw * (rank - 1) / (n - 1) if n > 1 else pw / 2)

    def sy(value):
        return top + ph - ph * value / ymax

    caption = title or (
        f"Ranking of {series.total} citations to {n} papers; {series.zeros} not cited"
    )
    points = " ".join(f"{sx(r):.2f},{sy(v):.2f}" for r, v in enumerate(series.values, start=1))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(caption)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for k in range(5):
        value = ymax * k / 4
        y = sy(value)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{_num(round(value, 1))}</text>'
        )
    for rank in sorted({1, (n + 1) // 2, n}):
        x = sx(rank)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{rank}</text>'
        )
    out += [
        f'<text x="{left + pw / 2:.0f}" y="{height - 15}" text-anchor="middle" '
        'font-family="sans-serif" font-size="13">Rank</text>',
        f'<text x="18" y="{top + ph / 2:.0f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {top + ph / 2:.0f})">Times cited</text>',
    ]
    if n > 1:
        out.append(f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    else:
        out.append(
            f'<circle cx="{sx(1):.2f}" cy="{sy(series.values[0]):.2f}" r="3" fill="steelblue"/>'
        )
    out.append("</svg>")
    return _write(Path(path), "\n".join(out) + "\n")


@dataclass
class RunResults:
    """Everything that goes into the run report."""

    merge: dict[str, Any] = field(default_factory=dict)
    distribution: Optional[CategoryDistribution] = None
    core: Optional[str] = None
    core_share: Optional[float] = None
    diversity: Optional[float] = None
    similarity: Optional[str] = None
    rank: Optional[RankSeries] = None
    crosswalk: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        dist = self.distribution or CategoryDistribution()
        rank = self.rank or RankSeries()
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "crosswalk": self.crosswalk,
            "merge": self.merge,
            "distribution": {
                "n_documents": dist.n_documents,
                "total_attributions": dist.total_attributions,
                "counts": [[label, count] for label, count in dist.ranked()],
            },
            "core": {"category": self.core, "share": self.core_share},
            "diversity": {"rao_stirling": self.diversity, "similarity": self.similarity},
            "rank": {"n": len(rank.values), "total": rank.total, "uncited": rank.zeros},
        }


def _markdown(doc: Mapping[str, Any]) -> str:
    dist = doc["distribution"]
    merge = doc["merge"]
    lines = ["# Citation analysis report", ""]
    lines.append("## Citations")
    lines.append("")
    if merge:
        for key in ("matched", "cited", "uncited", "total_citations", "unmatched_ti", "unmatched_export"):
            lines.append(f"- {key}: {merge.get(key, 0)}")
    else:
        lines.append("- no citation data merged")
    lines += ["", "## Web of Science Categories", ""]
    lines.append(
        f"{dist['n_documents']} documents, {dist['total_attributions']} category attributions, "
        f"{len(dist['counts'])} categories."
    )
    lines += ["", "| Web of Science Categories | N |", "|---|---:|"]
    lines += [f"| {label} | {count} |" for label, count in dist["counts"]]
    core = doc["core"]
    lines += ["", "## Indicators", ""]
    if core["category"] is not None and core["share"] is not None:
        lines.append(f"- core share ({core['category']}): {core['share']:.4f} ({core['share']:.0%})")
    else:
        lines.append("- core share: n/a")
    div = doc["diversity"]
    if div["rao_stirling"] is not None:
        lines.append(f"- Rao-Stirling diversity: {div['rao_stirling']:.4f} ({div['similarity']})")
    else:
        lines.append("- Rao-Stirling diversity: n/a")
    rank = doc["rank"]
    lines.append(f"- ranked papers: {rank['n']}, citations: {rank['total']}, uncited: {rank['uncited']}")
    return "\n".join(lines) + "\n"


def write_report(results: RunResults, path: PathLike) -> tuple[Path, Path]:
    """Write ``<path>.json`` and ``<path>.md``."""
    base = Path(path)
    if base.suffix in (".json", ".md"):
        base = base.with_suffix("")
    doc = results.to_json()
    json_path = _write(base.with_suffix(".json"), json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    md_path = _write(base.with_suffix(".md"), _markdown(doc))
    return json_path, md_path


def read_report(path: PathLike) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def report_data(results: RunResults) -> dict[str, Any]:
    """The JSON document :func:`write_report` would write."""
    return json.loads(json.dumps(results.to_json()))

