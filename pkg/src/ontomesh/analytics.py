"""Centrality metrics, top-k attribute ranking, and domain overlap matrices.

Betweenness uses Brandes' accumulation (one BFS per source plus dependency
back-propagation) over the unweighted simple graph, with the undirected
unordered-pair convention: disconnected pairs contribute nothing and
endpoints are excluded. Sources are processed in a fixed order so results
are bit-stable.
"""

from __future__ import annotations

import datetime
import logging
from dataclasses import dataclass

import numpy as np

from ontomesh.corpus import CorpusSnapshot
from ontomesh.errors import ProvenanceError
from ontomesh.graph import (
    EDGE_ATTR_DOMAIN,
    NodeKind,
    OntologyGraph,
    edge_census,
)

logger = logging.getLogger(__name__)

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

MATRIX_METRICS = ("shared_models", "shared_attributes", "jaccard_attributes")


@dataclass
class CentralityResult:
    metric: str
    normalized: bool
    scores: dict[int, float]
    ranking: list[int]
    weighted: bool = False
    graph_hash: str | None = None

    kind = "centrality"

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "metric": self.metric,
            "normalized": self.normalized,
            "weighted": self.weighted,
            "graph_hash": self.graph_hash,
            "scores": {str(node_id): score for node_id, score in sorted(self.scores.items())},
            "ranking": list(self.ranking),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CentralityResult":
        return cls(
            metric=doc["metric"],
            normalized=doc["normalized"],
            weighted=doc.get("weighted", False),
            graph_hash=doc.get("graph_hash"),
            scores={int(k): v for k, v in doc["scores"].items()},
            ranking=list(doc["ranking"]),
        )


def _rank(graph: OntologyGraph, scores: dict[int, float]) -> list[int]:
    # score desc, then label asc, then ordinal: fully deterministic.
    labels = {node.node_id: node.label for node in graph.nodes}
    return sorted(scores, key=lambda nid: (-scores[nid], labels[nid], nid))


def degree_centrality(
    graph: OntologyGraph, normalized: bool = False, weighted: bool = False
) -> CentralityResult:
    """Distinct-neighbor count per node, or the incident-weight sum when
    ``weighted``. Normalization divides by |V|-1 (0 on a singleton graph)."""
    n = len(graph.nodes)
    if weighted:
        raw: dict[int, float] = {node.node_id: 0 for node in graph.nodes}
        for e in graph.edges:
            raw[e.u] += e.weight
            raw[e.v] += e.weight
    else:
        raw = {
            node.node_id: len(set(graph.adjacency[node.node_id]))
            for node in graph.nodes
        }
    if normalized:
        denom = n - 1
        scores = {
            nid: (value / denom if denom > 0 else 0.0) for nid, value in raw.items()
        }
    else:
        scores = raw
    return CentralityResult(
        metric="degree",
        normalized=normalized,
        weighted=weighted,
        scores=scores,
        ranking=_rank(graph, scores),
        graph_hash=graph.graph_hash(),
    )


def _graph_csr(graph: OntologyGraph) -> tuple[np.ndarray, np.ndarray]:
    n = len(graph.nodes)
    degrees = np.zeros(n, dtype=np.int64)
    neighbor_sets = [sorted(set(neighbors)) for neighbors in graph.adjacency]
    for i, neighbors in enumerate(neighbor_sets):
        degrees[i] = len(neighbors)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    for i, neighbors in enumerate(neighbor_sets):
        indices[indptr[i] : indptr[i + 1]] = neighbors
    return indptr, indices


if _HAVE_NUMBA:

    @njit(cache=True)
    def _brandes_csr(indptr, indices, n):  # pragma: no cover - exercised via wrapper
        bc = np.zeros(n, dtype=np.float64)
        dist = np.empty(n, dtype=np.int64)
        sigma = np.empty(n, dtype=np.float64)
        delta = np.empty(n, dtype=np.float64)
        order = np.empty(n, dtype=np.int64)
        for s in range(n):
            for i in range(n):
                dist[i] = -1
                sigma[i] = 0.0
                delta[i] = 0.0
            dist[s] = 0
            sigma[s] = 1.0
            order[0] = s
            head = 0
            tail = 1
            while head < tail:
                v = order[head]
                head += 1
                dv = dist[v] + 1
                sv = sigma[v]
                for j in range(indptr[v], indptr[v + 1]):
                    w = indices[j]
                    if dist[w] < 0:
                        dist[w] = dv
                        order[tail] = w
                        tail += 1
                    if dist[w] == dv:
                        sigma[w] += sv
            for idx in range(tail - 1, 0, -1):
                w = order[idx]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw = dist[w]
                for j in range(indptr[w], indptr[w + 1]):
                    v = indices[j]
                    if dist[v] == dw - 1:
                        delta[v] += sigma[v] * coeff
                if w != s:
                    bc[w] += delta[w]
        return bc


def _betweenness_python(adjacency: list[list[int]]) -> list[float]:
    n = len(adjacency)
    neighbor_sets = [sorted(set(neighbors)) for neighbors in adjacency]
    bc = [0.0] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        delta = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv = dist[v] + 1
            sv = sigma[v]
            for w in neighbor_sets[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    order.append(w)
                if dist[w] == dv:
                    sigma[w] += sv
        for w in reversed(order[1:]):
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for v in neighbor_sets[w]:
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc


def betweenness_centrality(
    graph: OntologyGraph, normalized: bool = False, *, engine: str = "auto"
) -> CentralityResult:
    """Shortest-path betweenness over unordered {s, t} pairs.

    ``engine`` picks the implementation: "numba" for the compiled kernel,
    "python" for the reference loop, "auto" prefers the kernel when
    available. Both produce identical values.
    """
    if engine not in ("auto", "numba", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    n = len(graph.nodes)
    use_numba = _HAVE_NUMBA if engine == "auto" else engine == "numba"
    if use_numba and not _HAVE_NUMBA:
        raise RuntimeError("numba engine requested but numba is not importable")
    if use_numba and n > 0:
        indptr, indices = _graph_csr(graph)
        values = _brandes_csr(indptr, indices, n)
        raw = [float(v) for v in values]
    else:
        raw = _betweenness_python(graph.adjacency)
    # Brandes accumulates each unordered pair from both endpoints.
    raw = [v / 2.0 for v in raw]
    if normalized:
        denom = (n - 1) * (n - 2) / 2.0
        raw = [v / denom if denom > 0 else 0.0 for v in raw]
    scores = {node.node_id: raw[node.node_id] for node in graph.nodes}
    return CentralityResult(
        metric="betweenness",
        normalized=normalized,
        scores=scores,
        ranking=_rank(graph, scores),
        graph_hash=graph.graph_hash(),
    )


def top_k_attributes(
    result: CentralityResult, graph: OntologyGraph, k: int = 14
) -> list[tuple[str, float, int]]:
    """First k attribute nodes in ranking order as (label, score, spread),
    where spread counts the distinct domains the attribute occurs in.
    Fewer than k attributes: all of them, no error."""
    if k < 1:
        raise ValueError("k must be >= 1")
    spread: dict[int, set[int]] = {}
    for e in graph.edges:
        if e.kind == EDGE_ATTR_DOMAIN:
            kinds = (graph.nodes[e.u].kind, graph.nodes[e.v].kind)
            attr, dom = (e.u, e.v) if kinds[0] == NodeKind.ATTRIBUTE else (e.v, e.u)
            spread.setdefault(attr, set()).add(dom)
    rows: list[tuple[str, float, int]] = []
    for node_id in result.ranking:
        node = graph.nodes[node_id]
        if node.kind != NodeKind.ATTRIBUTE:
            continue
        rows.append((node.label, result.scores[node_id], len(spread.get(node_id, ()))))
        if len(rows) == k:
            break
    return rows


# ---------------------------------------------------------------------------
# Domain matrices
# ---------------------------------------------------------------------------


@dataclass
class DomainMatrix:
    metric: str
    labels: list[str]
    cells: list[list[float]]
    snapshot_hash: str | None = None

    kind = "domain_matrix"

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "metric": self.metric,
            "labels": list(self.labels),
            "cells": [list(row) for row in self.cells],
            "snapshot_hash": self.snapshot_hash,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "DomainMatrix":
        return cls(
            metric=doc["metric"],
            labels=list(doc["labels"]),
            cells=[list(row) for row in doc["cells"]],
            snapshot_hash=doc.get("snapshot_hash"),
        )

    def value_range(self) -> tuple[float, float]:
        flat = [value for row in self.cells for value in row]
        return (min(flat), max(flat))


def domain_overlap_matrix(snapshot: CorpusSnapshot, metric: str) -> DomainMatrix:
    """Pairwise domain overlap; diagonal forced to zero for every metric."""
    if metric not in MATRIX_METRICS:
        raise ValueError(f"unknown matrix metric {metric!r}")
    labels = [d.domain_id for d in snapshot.domains]
    if len(labels) < 2:
        logger.warning("degenerate matrix: %d domain(s)", len(labels))
        label = labels[0] if labels else "-"
        return DomainMatrix(
            metric=metric,
            labels=[label],
            cells=[[0]],
            snapshot_hash=snapshot.content_hash,
        )
    attr_sets = snapshot.attribute_names_by_domain()
    n = len(labels)
    cells: list[list[float]] = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if metric == "shared_models":
                value: float = sum(
                    1
                    for m in snapshot.models
                    if labels[i] in m.domain_ids and labels[j] in m.domain_ids
                )
            else:
                a = attr_sets.get(labels[i], set())
                b = attr_sets.get(labels[j], set())
                if metric == "shared_attributes":
                    value = len(a & b)
                else:
                    union = len(a | b)
                    value = len(a & b) / union if union else 0.0
            cells[i][j] = value
            cells[j][i] = value
    return DomainMatrix(
        metric=metric, labels=labels, cells=cells, snapshot_hash=snapshot.content_hash
    )


def specificity_ratios(snapshot: CorpusSnapshot) -> dict[str, float]:
    """Per-domain fraction of its attribute names that occur nowhere else.
    Empty domains get 0.0."""
    attr_sets = snapshot.attribute_names_by_domain()
    ratios: dict[str, float] = {}
    for d in snapshot.domains:
        own = attr_sets.get(d.domain_id, set())
        if not own:
            ratios[d.domain_id] = 0.0
            continue
        elsewhere: set[str] = set()
        for other, names in attr_sets.items():
            if other != d.domain_id:
                elsewhere |= names
        ratios[d.domain_id] = len(own - elsewhere) / len(own)
    return ratios


# ---------------------------------------------------------------------------
# Aggregate report
# ---------------------------------------------------------------------------


@dataclass
class AnalysisReport:
    snapshot_hash: str
    graph_hash: str
    containment_edges: bool
    census: dict
    top_k_metric: str
    top_k: list[tuple[str, float, int]]
    matrices: dict[str, DomainMatrix]
    specificity: dict[str, float]
    generated_at: str | None = None

    kind = "report"

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "snapshot_hash": self.snapshot_hash,
            "graph_hash": self.graph_hash,
            "containment_edges": self.containment_edges,
            "census": self.census,
            "top_k_metric": self.top_k_metric,
            "top_k": [[label, score, spread] for label, score, spread in self.top_k],
            "matrices": {name: m.to_doc() for name, m in sorted(self.matrices.items())},
            "specificity": dict(sorted(self.specificity.items())),
            "generated_at": self.generated_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "AnalysisReport":
        return cls(
            snapshot_hash=doc["snapshot_hash"],
            graph_hash=doc["graph_hash"],
            containment_edges=doc["containment_edges"],
            census=doc["census"],
            top_k_metric=doc["top_k_metric"],
            top_k=[(row[0], row[1], row[2]) for row in doc["top_k"]],
            matrices={
                name: DomainMatrix.from_doc(m) for name, m in doc["matrices"].items()
            },
            specificity=dict(doc["specificity"]),
            generated_at=doc.get("generated_at"),
        )


def dissonance_summary(
    snapshot: CorpusSnapshot,
    graph: OntologyGraph,
    *,
    top_k: int = 14,
    centrality_metric: str = "degree",
    include_timestamp: bool = True,
) -> AnalysisReport:
    """Aggregate census, top-k central attributes, the three overlap
    matrices, and per-domain specificity ratios into one report.

    The snapshot and graph must share provenance (the graph was built from
    this snapshot); higher specificity means a more isolated vocabulary.
    """
    if graph.provenance.snapshot_hash != snapshot.content_hash:
        raise ProvenanceError(
            "graph provenance does not match snapshot: "
            f"{graph.provenance.snapshot_hash[:12]} vs {snapshot.content_hash[:12]}"
        )
    if centrality_metric == "degree":
        result = degree_centrality(graph)
    elif centrality_metric == "betweenness":
        result = betweenness_centrality(graph)
    else:
        raise ValueError(f"unknown centrality metric {centrality_metric!r}")
    census_edges = edge_census(graph)
    census = {
        "nodes": len(graph.nodes),
        "edges": census_edges.total_edges,
        "node_kinds": graph.node_census(),
        "edge_kinds": {
            kind: {"edges": count, "weight": weight}
            for kind, (count, weight) in sorted(census_edges.by_kind.items())
        },
        "total_weight": census_edges.total_weight,
    }
    generated_at = None
    if include_timestamp:
        generated_at = (
            datetime.datetime.now(datetime.timezone.utc)
            .replace(microsecond=0)
            .isoformat()
        )
    return AnalysisReport(
        snapshot_hash=snapshot.content_hash,
        graph_hash=graph.graph_hash(),
        containment_edges=graph.provenance.containment_edges,
        census=census,
        top_k_metric=centrality_metric,
        top_k=top_k_attributes(result, graph, top_k),
        matrices={m: domain_overlap_matrix(snapshot, m) for m in MATRIX_METRICS},
        specificity=specificity_ratios(snapshot),
        generated_at=generated_at,
    )
