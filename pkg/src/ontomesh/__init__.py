"""Cross-domain schema corpus analytics.

Ingests a directory tree of JSON schema files organized by domain and data
model, builds a four-level ontology network graph (domains, data models,
types, attributes), and quantifies how much vocabulary the domains share:
centrality of individual attributes, domain-overlap matrices, and per-domain
specificity ratios.
"""

from ontomesh.corpus import (
    AttributeOccurrence,
    CorpusSnapshot,
    DataModelRecord,
    DomainRecord,
    LayoutConfig,
    TypeRecord,
    ingest_corpus,
    parse_schema_file,
)
from ontomesh.graph import NodeKind, OntologyGraph, build_graph, domain_subgraph, edge_census
from ontomesh.analytics import (
    AnalysisReport,
    CentralityResult,
    DomainMatrix,
    betweenness_centrality,
    degree_centrality,
    dissonance_summary,
    domain_overlap_matrix,
    top_k_attributes,
)
from ontomesh.store import ArtifactStore

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "ArtifactStore",
    "AttributeOccurrence",
    "CentralityResult",
    "CorpusSnapshot",
    "DataModelRecord",
    "DomainMatrix",
    "DomainRecord",
    "LayoutConfig",
    "NodeKind",
    "OntologyGraph",
    "TypeRecord",
    "betweenness_centrality",
    "build_graph",
    "degree_centrality",
    "dissonance_summary",
    "domain_overlap_matrix",
    "domain_subgraph",
    "edge_census",
    "ingest_corpus",
    "parse_schema_file",
    "top_k_attributes",
]
