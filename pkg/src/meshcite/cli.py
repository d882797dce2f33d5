"""Command line entry point: ``meshcite <stage> [options]``.

Stages read and write fixed locations inside ``--out``::

    pages/p<N>.txt           fetch
    records.txt              parse     (filtered records, MEDLINE layout)
    tables/{ti,au,mh}.csv    build     (+ .dbf copies, crosswalk applied)
    wos.txt, citmatch.txt    query
    merged/...               merge     (tables with times cited, categories.csv)
    analysis/...             analyze
    export/...               export
    manifests/<stage>.json   every stage

Exit status: 0 success, 1 invalid configuration, 2 stage failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import analytics, crosswalk, exporters, fetcher, medline, store, wos
from .crosswalk import DEFAULT_MAX_LEN, SYSTEM_CAP
from .errors import CitmatchError, ConfigError, EmptyInput, MeshCiteError

log = logging.getLogger("meshcite")

STAGES = ("fetch", "parse", "build", "query", "merge", "analyze", "export")
CONFIG_SECTION = "meshcite"


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    query: Optional[str] = None
    page_size: int = 500
    mesh: Optional[str] = None
    years: Optional[tuple[int, int]] = None
    crosswalk: Optional[Path] = None
    wos_exports: list[Path] = field(default_factory=list)
    categories: Optional[Path] = None
    similarity: Optional[Path] = None
    core: Optional[str] = None
    out: Path = Path("meshcite-out")
    max_len: int = DEFAULT_MAX_LEN
    cap: int = SYSTEM_CAP
    offline: bool = False
    paper_spacing: bool = False
    dbf: bool = True

    def validate(self, stages: tuple[str, ...]) -> None:
        files = list(self.inputs) + list(self.wos_exports)
        files += [p for p in (self.crosswalk, self.categories, self.similarity) if p is not None]
        for path in files:
            if not path.is_file():
                raise ConfigError(f"file not found: {path}")
        out = self.out.resolve()
        for path in files:
            if path.resolve().parent == out:
                raise ConfigError(f"output directory {self.out} also holds input {path}; use another --out")
        if self.years is not None and self.years[0] > self.years[1]:
            raise ConfigError(f"--years range is reversed: {self.years[0]}-{self.years[1]}")
        if self.max_len < 1 or self.cap < 1:
            raise ConfigError("--max-len and --cap must be positive")
        if "parse" in stages and not self.inputs and "fetch" not in stages:
            pages = fetcher.saved_pages(self.out / "pages" / "p")
            if not pages:
                raise ConfigError("no --input files given and no fetched pages in the output directory")
        if "fetch" in stages and not self.inputs and not self.offline and not self.query:
            raise ConfigError("pipeline needs --input files, --query for fetching, or --offline with saved pages")

    def summary(self) -> dict[str, Any]:
        """Settings recorded in manifests and the report (no output path, so
        the same inputs give the same bytes wherever the run is written)."""
        d = asdict(self)
        d.pop("out")
        for key, value in d.items():
            if isinstance(value, Path):
                d[key] = str(value)
            elif isinstance(value, list):
                d[key] = [str(v) for v in value]
            elif isinstance(value, tuple):
                d[key] = list(value)
        return d


# -- configuration ------------------------------------------------------------


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.replace("\n", ",").split(",") if v.strip()]


def parse_years(text: str) -> tuple[int, int]:
    try:
        if "-" in text or ":" in text:
            lo, hi = text.replace(":", "-").split("-", 1)
            return int(lo), int(hi)
        year = int(text)
        return year, year
    except ValueError:
        raise ConfigError(f"years must look like 2010-2011, got {text!r}") from None


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def read_config_file(path: Path) -> dict[str, Any]:
    """Read ``key = value`` lines; a ``[meshcite]`` header is optional.
    Relative paths resolve against the file's directory."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not any(line.strip().startswith("[") for line in text.splitlines()):
        text = f"[{CONFIG_SECTION}]\n" + text
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not parser.has_section(CONFIG_SECTION):
        raise ConfigError(f"{path}: no [{CONFIG_SECTION}] section")
    raw = {k.replace("-", "_"): v for k, v in parser.items(CONFIG_SECTION)}
    base = path.parent

    def p(value: str) -> Path:
        return base / value

    values: dict[str, Any] = {}
    for key, value in raw.items():
        if key in ("input", "inputs"):
            values["inputs"] = [p(v) for v in _split_list(value)]
        elif key in ("wos_export", "wos_exports"):
            values["wos_exports"] = [p(v) for v in _split_list(value)]
        elif key in ("crosswalk", "categories", "similarity"):
            values[key] = p(value.strip())
        elif key == "out":
            values["out"] = p(value.strip())
        elif key == "years":
            values["years"] = parse_years(value)
        elif key in ("max_len", "cap", "page_size"):
            values[key] = _int(key, value)
        elif key in ("offline", "paper_spacing", "dbf"):
            values[key] = _bool(value)
        elif key in ("mesh", "core", "query"):
            values[key] = value.strip()
        else:
            raise ConfigError(f"{path}: unknown key {key!r}")
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if args.config:
        values.update(read_config_file(Path(args.config)))
    overrides = {
        "inputs": [Path(p) for p in args.input] if args.input else None,
        "query": args.query,
        "page_size": args.page_size,
        "mesh": args.mesh,
        "years": parse_years(args.years) if args.years else None,
        "crosswalk": Path(args.crosswalk) if args.crosswalk else None,
        "wos_exports": [Path(p) for p in args.wos_export] if args.wos_export else None,
        "categories": Path(args.categories) if args.categories else None,
        "similarity": Path(args.similarity) if args.similarity else None,
        "core": args.core,
        "out": Path(args.out) if args.out else None,
        "max_len": args.max_len,
        "cap": args.cap,
        "offline": True if args.offline else None,
        "paper_spacing": True if args.paper_spacing else None,
        "dbf": False if args.no_dbf else None,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


# -- manifests ------------------------------------------------------------------


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Stage:
    """Collects the inputs and outputs of one stage for its manifest."""

    def __init__(self, name: str, cfg: RunConfig):
        self.name = name
        self.cfg = cfg
        self.inputs: list[Path] = []
        self.outputs: list[Path] = []
        self.info: dict[str, Any] = {}

    def _key(self, path: Path) -> str:
        try:
            return path.resolve().relative_to(self.cfg.out.resolve()).as_posix()
        except ValueError:
            return str(path)

    def write_manifest(self) -> Path:
        doc = {
            "stage": self.name,
            "inputs": {self._key(p): _digest(p) for p in self.inputs},
            "outputs": {self._key(p): _digest(p) for p in self.outputs},
            "info": self.info,
            "settings": self.cfg.summary(),
        }
        path = self.cfg.out / "manifests" / f"{self.name}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return path


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MeshCiteError(f"{path} not found; run the stage before '{stage}' first")
    return path


def _write_json(path: Path, obj: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


# -- stages -----------------------------------------------------------------------


def stage_fetch(cfg: RunConfig, st: Stage, client: Optional[fetcher.EutilsClient] = None) -> None:
    prefix = cfg.out / "pages" / "p"
    if cfg.offline:
        pages = fetcher.saved_pages(prefix)
        if not pages:
            raise MeshCiteError(f"offline mode: no saved pages under {prefix.parent}")
        st.info["offline"] = True
        st.outputs += pages
        return
    if not cfg.query:
        raise ConfigError("fetch needs --query")
    years = cfg.years
    job = fetcher.FetchJob(
        cfg.query,
        (f"{years[0]}/01/01", f"{years[1]}/12/31") if years else None,
        page_size=cfg.page_size,
        output_prefix=prefix,
    )
    client = client or fetcher.EutilsClient()
    pmids, total = fetcher.search_ids(job, client)
    st.info.update(total=total, retrieved=len(pmids))
    if pmids:
        st.outputs += fetcher.fetch_medline(pmids, prefix, client, page_size=cfg.page_size)


def stage_parse(cfg: RunConfig, st: Stage) -> None:
    sources = list(cfg.inputs) or fetcher.saved_pages(cfg.out / "pages" / "p")
    report = medline.ParseReport()
    records = []
    for path in sources:
        st.inputs.append(path)
        records.extend(medline.parse_medline_text(path, strict=False, report=report))
    if cfg.mesh:
        kept = medline.filter_by_mesh(records, cfg.mesh, cfg.years)
    elif cfg.years:
        lo, hi = cfg.years
        kept = [r for r in records if r.pub_year is not None and lo <= r.pub_year <= hi]
    else:
        kept = records
    out = cfg.out / "records.txt"
    out.write_text(medline.serialize_medline(kept), encoding="utf-8")
    st.outputs.append(out)
    st.info.update(
        parsed=len(records),
        kept=len(kept),
        replaced_chars=report.replaced_chars,
        missing_pmid=report.missing_pmid,
    )
    print(f"parse: {len(records)} records read, {len(kept)} kept")


def stage_build(cfg: RunConfig, st: Stage) -> None:
    src = _require(cfg.out / "records.txt", "build")
    st.inputs.append(src)
    tables = store.build_tables(medline.parse_medline_text(src))
    if cfg.crosswalk:
        st.inputs.append(cfg.crosswalk)
        tables, fill = crosswalk.apply_crosswalk(tables, crosswalk.load_identifier_map(cfg.crosswalk))
    else:
        tables, fill = crosswalk.apply_crosswalk(tables, crosswalk.IdentifierMap())
    st.info["crosswalk"] = asdict(fill)
    st.outputs += store.write_tables(tables, "csv", cfg.out / "tables")
    if cfg.dbf:
        st.outputs += store.write_tables(tables, "dbf", cfg.out / "tables")
    with_ut = sum(1 for r in tables.ti if r.wos_ut)
    print(f"build: {len(tables.ti)} documents, {with_ut} with a WoS accession number")


def stage_query(cfg: RunConfig, st: Stage) -> None:
    tdir = cfg.out / "tables"
    for name in ("ti", "au", "mh"):
        st.inputs.append(_require(tdir / f"{name}.csv", "query"))
    tables = store.read_tables(tdir)
    uts = [r.wos_ut for r in tables.ti if r.wos_ut]
    crosswalk.enforce_system_cap(uts, cfg.cap)
    wos_txt = cfg.out / "wos.txt"
    try:
        batch = crosswalk.generate_ut_queries(uts, cfg.max_len, spaced=cfg.paper_spacing)
    except EmptyInput:
        log.warning("no accession numbers; wos.txt is empty")
        batch = crosswalk.QueryBatch()
    crosswalk.write_wos_txt(batch, wos_txt)
    st.outputs.append(wos_txt)

    try:
        lines = crosswalk.format_citmatch(tables)
    except CitmatchError as exc:
        bad = {e.seq for e in exc.errors}
        log.warning("citmatch: skipping %d row(s) lacking journal or year", len(bad))
        kept = store.TableSet([r for r in tables.ti if r.seq not in bad], tables.au, tables.mh)
        lines = crosswalk.format_citmatch(kept)
        st.info["citmatch_skipped"] = sorted(bad)
    cit = cfg.out / "citmatch.txt"
    cit.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    st.outputs.append(cit)
    st.info.update(uts=len(uts), queries=len(batch))
    print(f"query: {len(uts)} accession numbers in {len(batch)} quer{'y' if len(batch) == 1 else 'ies'}")


def write_categories_csv(categories: dict[str, list[str]], uts: dict[str, Optional[str]], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pmid", "wos_ut", "categories"])
        for pmid, cats in categories.items():
            writer.writerow([pmid, uts.get(pmid) or "", "; ".join(cats)])
    return path


def read_categories_csv(path: Path) -> list[list[str]]:
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "categories" not in reader.fieldnames:
            raise MeshCiteError(f"{path}: expected a 'categories' column")
        return [[c.strip() for c in row["categories"].split(";") if c.strip()] for row in reader]


def stage_merge(cfg: RunConfig, st: Stage) -> None:
    tdir = cfg.out / "tables"
    for name in ("ti", "au", "mh"):
        st.inputs.append(_require(tdir / f"{name}.csv", "merge"))
    tables = store.read_tables(tdir)
    export = []
    for path in cfg.wos_exports:
        st.inputs.append(path)
        export.extend(wos.parse_wos_export(path))
    result = wos.merge_citations(tables, export)
    mdir = cfg.out / "merged"
    st.outputs += store.write_tables(result.tables, "csv", mdir)
    if cfg.dbf:
        st.outputs += store.write_tables(result.tables, "dbf", mdir)
    uts = {r.pmid: r.wos_ut for r in result.tables.ti}
    st.outputs.append(write_categories_csv(result.categories, uts, mdir / "categories.csv"))
    st.outputs.append(_write_json(mdir / "merge_report.json", asdict(result.report)))
    rep = result.report
    print(
        f"merge: matched {rep.matched}, cited {rep.cited}, uncited {rep.uncited}, "
        f"total citations {rep.total_citations}"
    )


def stage_analyze(cfg: RunConfig, st: Stage) -> None:
    adir = cfg.out / "analysis"
    cat_path = cfg.categories or _require(cfg.out / "merged" / "categories.csv", "analyze")
    st.inputs.append(cat_path)
    dist = analytics.wc_distribution(read_categories_csv(cat_path))
    doc: dict[str, Any] = {
        "distribution": {
            "counts": [[k, v] for k, v in dist.ranked()],
            "n_documents": dist.n_documents,
            "total_attributions": dist.total_attributions,
        },
        "core": None,
        "core_share": None,
        "diversity": None,
        "similarity": None,
        "rank": None,
    }
    if cfg.core and dist.n_documents:
        doc["core"] = cfg.core
        doc["core_share"] = analytics.core_share(dist, cfg.core)
    if dist.counts:
        if cfg.similarity:
            st.inputs.append(cfg.similarity)
            sim = analytics.read_similarity_csv(cfg.similarity)
            doc["similarity"] = cfg.similarity.name
        else:
            sim = analytics.SimilarityMatrix.all_distinct(dist.counts)
            doc["similarity"] = "all-distinct"
        doc["diversity"] = analytics.rao_stirling(dist, sim)
    ti_csv = cfg.out / "merged" / "ti.csv"
    if ti_csv.exists() and not cfg.categories:
        st.inputs.append(ti_csv)
        tables = store.read_tables(cfg.out / "merged")
        series = analytics.citation_rank_series(r.times_cited for r in tables.ti)
        doc["rank"] = {"values": list(series.values), "total": series.total, "uncited": series.zeros}
    st.outputs.append(analytics.write_distribution_csv(dist, _mkparent(adir / "distribution.csv")))
    st.outputs.append(_write_json(adir / "analysis.json", doc))

    print(f"analyze: {dist.n_documents} documents, {dist.total_attributions} attributions, "
          f"{len(dist.counts)} categories")
    if doc["core_share"] is not None:
        print(f"core share ({cfg.core}): {doc['core_share']:.4f} ({doc['core_share']:.0%})")
    if doc["diversity"] is not None:
        print(f"Rao-Stirling diversity ({doc['similarity']}): {doc['diversity']:.4f}")


def _mkparent(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def stage_export(cfg: RunConfig, st: Stage) -> None:
    analysis_path = _require(cfg.out / "analysis" / "analysis.json", "export")
    st.inputs.append(analysis_path)
    doc = json.loads(analysis_path.read_text(encoding="utf-8"))
    d = doc["distribution"]
    dist = analytics.CategoryDistribution(
        {k: v for k, v in d["counts"]}, d["n_documents"], d["total_attributions"]
    )
    sim = None
    if cfg.similarity:
        st.inputs.append(cfg.similarity)
        sim = analytics.read_similarity_csv(cfg.similarity)
    edir = cfg.out / "export"
    edir.mkdir(parents=True, exist_ok=True)
    if dist.counts:
        map_path, net_path = exporters.export_vosviewer(dist, sim, edir)
        st.outputs += [p for p in (map_path, net_path) if p is not None]
        st.outputs.append(exporters.export_pajek(dist, sim, edir / "categories.net"))

    rank = None
    if doc.get("rank"):
        r = doc["rank"]
        rank = analytics.RankSeries(tuple(r["values"]), r["total"], r["uncited"])
        if rank.values:
            st.outputs.append(exporters.render_rank_plot(rank, edir / "rank_plot.svg"))

    merge: dict[str, Any] = {}
    merge_path = cfg.out / "merged" / "merge_report.json"
    if merge_path.exists():
        st.inputs.append(merge_path)
        merge = json.loads(merge_path.read_text(encoding="utf-8"))
    fill: dict[str, Any] = {}
    build_manifest = cfg.out / "manifests" / "build.json"
    if build_manifest.exists():
        fill = json.loads(build_manifest.read_text(encoding="utf-8"))["info"].get("crosswalk", {})
    results = exporters.RunResults(
        merge=merge,
        distribution=dist,
        core=doc["core"],
        core_share=doc["core_share"],
        diversity=doc["diversity"],
        similarity=doc["similarity"],
        rank=rank,
        crosswalk=fill,
        config=cfg.summary(),
    )
    st.outputs += exporters.write_report(results, edir / "report")
    print(f"export: wrote {len(st.outputs)} files to {edir}")


STAGE_FUNCS = {
    "fetch": stage_fetch,
    "parse": stage_parse,
    "build": stage_build,
    "query": stage_query,
    "merge": stage_merge,
    "analyze": stage_analyze,
    "export": stage_export,
}


def pipeline_stages(cfg: RunConfig) -> tuple[str, ...]:
    # fetching is optional: given input files it is skipped
    if cfg.inputs:
        return STAGES[1:]
    return STAGES


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value run configuration file")
    common.add_argument("--input", action="append", help="MEDLINE file (repeatable)")
    common.add_argument("--query", help="PubMed search expression for fetch")
    common.add_argument("--page-size", type=int, help="records per fetched page")
    common.add_argument("--mesh", help="MeSH descriptor to select records by")
    common.add_argument("--years", help="inclusive publication year range, e.g. 2010-2011")
    common.add_argument("--crosswalk", help="pmid,wos_ut CSV filling missing accession numbers")
    common.add_argument("--wos-export", action="append", help="WoS tab-delimited export (repeatable)")
    common.add_argument("--categories", help="per-document category CSV for analyze")
    common.add_argument("--similarity", help="category similarity matrix CSV")
    common.add_argument("--core", help="core category for the core-share indicator")
    common.add_argument("--out", help="output directory")
    common.add_argument("--max-len", type=int, help="maximum characters per UT query")
    common.add_argument("--cap", type=int, help="maximum number of accession numbers")
    common.add_argument("--offline", action="store_true", help="use saved pages, no network")
    common.add_argument("--paper-spacing", action="store_true", help="write 'UT= (' instead of 'UT=('")
    common.add_argument("--no-dbf", action="store_true", help="skip the dBase copies of the tables")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="meshcite", description="Citation analysis of MeSH-selected PubMed records.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*STAGES, "pipeline"):
        sub.add_parser(name, parents=[common], help=f"run the {name} stage" if name != "pipeline"
                       else "run all stages (fetch skipped when --input is given)")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
        stages = pipeline_stages(cfg) if args.command == "pipeline" else (args.command,)
        cfg.validate(stages)
    except ConfigError as exc:
        print(f"meshcite: invalid configuration: {exc}", file=sys.stderr)
        return 1

    cfg.out.mkdir(parents=True, exist_ok=True)
    for name in stages:
        st = Stage(name, cfg)
        try:
            STAGE_FUNCS[name](cfg, st)
            st.write_manifest()
        except ConfigError as exc:
            print(f"meshcite: invalid configuration for stage '{name}': {exc}", file=sys.stderr)
            return 1
        except (MeshCiteError, OSError, ValueError) as exc:
            print(f"meshcite: stage '{name}' failed: {exc}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
