import json
import random

import pytest

from ontomesh.corpus import (
    AttributeOccurrence,
    CorpusSnapshot,
    DataModelRecord,
    DomainRecord,
    TypeRecord,
)
from ontomesh.errors import NotFoundError, SnapshotInvariantError
from ontomesh.graph import (
    EDGE_ATTR_ATTR,
    EDGE_ATTR_DOMAIN,
    EDGE_ATTR_MODEL,
    EDGE_CONTAINMENT,
    GraphEdge,
    GraphNode,
    GraphProvenance,
    NodeKind,
    OntologyGraph,
    build_graph,
    domain_subgraph,
    edge_census,
)

from oracles import random_snapshot


def _edge_labels(graph):
    """Edges as ((label, label), kind, weight) with sorted label pairs."""
    out = set()
    for e in graph.edges:
        pair = tuple(sorted((graph.nodes[e.u].label, graph.nodes[e.v].label)))
        out.add((pair, e.kind, e.weight))
    return out


class TestWorkedExample:
    def test_five_nodes(self, minimal):
        graph = build_graph(minimal)
        labels = {(n.kind.value, n.label) for n in graph.nodes}
        assert labels == {
            ("domain", "SmartCities"),
            ("model", "UrbanMobility"),
            ("type", "UrbanMobility/ArrivalEstimation"),
            ("attribute", "dataProvider"),
            ("attribute", "hasTrip"),
        }

    def test_five_edges(self, minimal):
        graph = build_graph(minimal)
        assert _edge_labels(graph) == {
            (("dataProvider", "hasTrip"), EDGE_ATTR_ATTR, 1),
            (("UrbanMobility", "dataProvider"), EDGE_ATTR_MODEL, 1),
            (("UrbanMobility", "hasTrip"), EDGE_ATTR_MODEL, 1),
            (("SmartCities", "dataProvider"), EDGE_ATTR_DOMAIN, 1),
            (("SmartCities", "hasTrip"), EDGE_ATTR_DOMAIN, 1),
        }

    def test_census(self, minimal):
        census = edge_census(build_graph(minimal))
        assert census.total_edges == 5
        assert census.by_kind == {
            EDGE_ATTR_ATTR: (1, 1),
            EDGE_ATTR_MODEL: (2, 2),
            EDGE_ATTR_DOMAIN: (2, 2),
        }


class TestFix1Graph:
    def test_node_census(self, fix1_graph, fix1_snapshot):
        assert len(fix1_graph.nodes) == 18
        assert fix1_graph.node_census() == {
            "domain": 2,
            "model": 3,
            "type": 4,
            "attribute": 9,
        }

    def test_edge_census(self, fix1_graph):
        census = edge_census(fix1_graph)
        assert census.total_edges == 33
        assert census.by_kind == {
            EDGE_ATTR_ATTR: (11, 11),
            EDGE_ATTR_MODEL: (10, 13),
            EDGE_ATTR_DOMAIN: (12, 13),
        }

    def test_repeat_occurrences_become_weights(self, fix1_graph):
        edges = _edge_labels(fix1_graph)
        assert (("UrbanMobility", "dataProvider"), EDGE_ATTR_MODEL, 2) in edges
        assert (("SmartCities", "dataProvider"), EDGE_ATTR_DOMAIN, 2) in edges
        assert (("WeatherShared", "temperature"), EDGE_ATTR_MODEL, 2) in edges

    def test_type_nodes_isolated_by_default(self, fix1_graph):
        for node in fix1_graph.nodes_of_kind(NodeKind.TYPE):
            assert fix1_graph.adjacency[node.node_id] == []

    def test_containment_adds_exact_count(self, fix1_snapshot, fix1_graph):
        withc = build_graph(fix1_snapshot, containment_edges=True)
        expected_extra = len(fix1_snapshot.types) + sum(
            len(m.domain_ids) for m in fix1_snapshot.models
        )
        assert expected_extra == 8
        assert len(withc.edges) == len(fix1_graph.edges) + expected_extra
        census = edge_census(withc)
        assert census.by_kind[EDGE_CONTAINMENT] == (8, 8)
        assert EDGE_CONTAINMENT not in edge_census(fix1_graph).by_kind

    def test_membership_metadata(self, fix1_graph):
        shared = fix1_graph.nodes[fix1_graph.node_id(NodeKind.MODEL, "WeatherShared")]
        assert json.loads(shared.metadata["domains"]) == ["SmartCities", "SmartEnergy"]
        t = fix1_graph.nodes[
            fix1_graph.node_id(NodeKind.TYPE, "EnergyMonitor/PowerReading")
        ]
        assert t.metadata["model"] == "EnergyMonitor"

    def test_deterministic_hash(self, fix1_snapshot):
        assert (
            build_graph(fix1_snapshot).graph_hash()
            == build_graph(fix1_snapshot).graph_hash()
        )

    def test_doc_round_trip(self, fix1_graph):
        back = OntologyGraph.from_doc(fix1_graph.to_doc())
        assert back.to_doc() == fix1_graph.to_doc()
        assert back.graph_hash() == fix1_graph.graph_hash()

    def test_build_rejects_invalid_snapshot(self, fix1_snapshot):
        broken = CorpusSnapshot(
            source_uri=fix1_snapshot.source_uri,
            content_hash=fix1_snapshot.content_hash,
            domains=fix1_snapshot.domains,
            models=fix1_snapshot.models,
            types=fix1_snapshot.types,
            occurrences=fix1_snapshot.occurrences
            + (AttributeOccurrence("ghostAttr", "M/Ghost", "M", "Nowhere"),),
            counts=fix1_snapshot.counts,
        )
        with pytest.raises(SnapshotInvariantError):
            build_graph(broken)


class TestDomainSubgraph:
    def test_smartcities_slice(self, fix1_graph):
        sub = domain_subgraph(fix1_graph, "SmartCities")
        assert sub.node_census() == {"domain": 1, "model": 2, "type": 3, "attribute": 6}
        attr_labels = {n.label for n in sub.nodes_of_kind(NodeKind.ATTRIBUTE)}
        assert attr_labels == {
            "dataProvider", "hasTrip", "routeCode", "stopName", "temperature", "windSpeed",
        }
        assert len(sub.edges) == 17

    def test_provenance_chain(self, fix1_graph):
        sub = domain_subgraph(fix1_graph, "SmartEnergy")
        assert sub.provenance.parent_hash == fix1_graph.graph_hash()
        assert sub.provenance.domain == "SmartEnergy"
        assert sub.provenance.snapshot_hash == fix1_graph.provenance.snapshot_hash

    def test_induced_weights_preserved(self, fix1_graph):
        sub = domain_subgraph(fix1_graph, "SmartCities")
        edges = _edge_labels(sub)
        assert (("SmartCities", "dataProvider"), EDGE_ATTR_DOMAIN, 2) in edges

    def test_unknown_domain(self, fix1_graph):
        with pytest.raises(NotFoundError, match="unknown domain"):
            domain_subgraph(fix1_graph, "SmartNothing")

    def test_random_subgraphs_are_subsets(self):
        for seed in range(15):
            snapshot = random_snapshot(random.Random(seed))
            graph = build_graph(snapshot)
            parent_labels = {(n.kind, n.label) for n in graph.nodes}
            for d in snapshot.domains:
                sub = domain_subgraph(graph, d.domain_id)
                assert {(n.kind, n.label) for n in sub.nodes} <= parent_labels
                assert _edge_labels(sub) <= _edge_labels(graph)


class TestStructuralValidation:
    def _nodes(self, n):
        return [
            GraphNode(node_id=i, kind=NodeKind.ATTRIBUTE, label=f"a{i}") for i in range(n)
        ]

    def test_node_census_matches_counts_random(self):
        for seed in range(20):
            snapshot = random_snapshot(random.Random(100 + seed))
            graph = build_graph(snapshot)
            census = graph.node_census()
            assert census["domain"] == snapshot.counts.domains
            assert census["model"] == snapshot.counts.models
            assert census["type"] == snapshot.counts.types
            assert census["attribute"] == snapshot.counts.attributes
            assert len(graph.nodes) == sum(census.values())

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="canonical"):
            OntologyGraph.create(
                self._nodes(2),
                [GraphEdge(1, 1, EDGE_ATTR_ATTR, 1)],
                GraphProvenance("x"),
            )

    def test_duplicate_edge_rejected(self):
        edges = [GraphEdge(0, 1, EDGE_ATTR_ATTR, 1), GraphEdge(0, 1, EDGE_ATTR_ATTR, 2)]
        with pytest.raises(ValueError, match="duplicate edge"):
            OntologyGraph.create(self._nodes(2), edges, GraphProvenance("x"))

    def test_zero_weight_rejected(self):
        with pytest.raises(ValueError, match="weight"):
            OntologyGraph.create(
                self._nodes(2), [GraphEdge(0, 1, EDGE_ATTR_ATTR, 0)], GraphProvenance("x")
            )

    def test_dangling_endpoint_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            OntologyGraph.create(
                self._nodes(2), [GraphEdge(0, 5, EDGE_ATTR_ATTR, 1)], GraphProvenance("x")
            )

    def test_sparse_ordinals_rejected(self):
        nodes = self._nodes(3)
        nodes[2].node_id = 7
        with pytest.raises(ValueError, match="dense"):
            OntologyGraph.create(nodes, [], GraphProvenance("x"))


def test_attribute_in_two_types_of_one_model_weights_attr_model():
    snapshot = CorpusSnapshot.assemble(
        source_uri="synthetic:w",
        domains=[DomainRecord("D", "D")],
        models=[DataModelRecord("M", "M", frozenset({"D"}))],
        types=[
            TypeRecord("M/A", "A", "M", ("shared", "one")),
            TypeRecord("M/B", "B", "M", ("shared", "two")),
        ],
        occurrences=[
            AttributeOccurrence("shared", "M/A", "M", "D"),
            AttributeOccurrence("one", "M/A", "M", "D"),
            AttributeOccurrence("shared", "M/B", "M", "D"),
            AttributeOccurrence("two", "M/B", "M", "D"),
        ],
    )
    graph = build_graph(snapshot)
    edges = _edge_labels(graph)
    assert (("M", "shared"), EDGE_ATTR_MODEL, 2) in edges
    assert (("D", "shared"), EDGE_ATTR_DOMAIN, 2) in edges
    # two types, one shared attribute: still a simple graph
    assert (("one", "shared"), EDGE_ATTR_ATTR, 1) in edges
    assert (("shared", "two"), EDGE_ATTR_ATTR, 1) in edges
