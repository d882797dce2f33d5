"""Citation analysis of MeSH-selected document sets.

MEDLINE records are parsed, organised into TI/AU/MH tables, bridged to Web
of Science accession numbers, merged with times-cited counts and journal
categories, and summarised as category distributions, Rao-Stirling
diversity and citation rankings with VOSviewer/Pajek/SVG exports.
"""

from .analytics import (
    CategoryDistribution,
    RankSeries,
    SimilarityMatrix,
    citation_rank_series,
    core_share,
    rao_stirling,
    read_similarity_csv,
    wc_distribution,
)
from .crosswalk import (
    IdentifierMap,
    QueryBatch,
    apply_crosswalk,
    enforce_system_cap,
    format_citmatch,
    generate_ut_queries,
    load_identifier_map,
    parse_ut_query,
)
from .medline import (
    MedlineRecord,
    MeshHeading,
    filter_by_mesh,
    parse_medline_text,
    parse_mesh_field,
    serialize_medline,
)
from .store import TableSet, build_tables, read_tables, write_tables
from .wos import MergeReport, WosExportRecord, merge_citations, parse_wos_export

__version__ = "0.1.0"
