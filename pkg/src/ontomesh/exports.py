"""Graph and matrix exporters: GraphML, DOT, canonical JSON, and CSV."""

from __future__ import annotations

import csv
import os
import xml.etree.ElementTree as ET
from pathlib import Path

from ontomesh.analytics import DomainMatrix
from ontomesh.canonical import canonical_json_bytes
from ontomesh.graph import NodeKind, OntologyGraph

GRAPH_FORMATS = ("graphml", "dot", "canonical-json")

_DOT_SHAPES = {
    NodeKind.DOMAIN: ("box", "#ffd97d"),
    NodeKind.MODEL: ("hexagon", "#a8dadc"),
    NodeKind.TYPE: ("diamond", "#e5e5e5"),
    NodeKind.ATTRIBUTE: ("ellipse", "#cdeac0"),
}


def _graphml_bytes(graph: OntologyGraph) -> bytes:
    root = ET.Element("graphml", {"xmlns": "http://graphml.graphdrawing.org/xmlns"})
    keys = [
        ("d_kind", "node", "kind", "string"),
        ("d_label", "node", "label", "string"),
        ("d_ekind", "edge", "kind", "string"),
        ("d_weight", "edge", "weight", "long"),
    ]
    for key_id, domain, name, typ in keys:
        ET.SubElement(
            root, "key",
            {"id": key_id, "for": domain, "attr.name": name, "attr.type": typ},
        )
    g = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "undirected"})
    for node in graph.nodes:
        el = ET.SubElement(g, "node", {"id": f"n{node.node_id}"})
        ET.SubElement(el, "data", {"key": "d_kind"}).text = node.kind.value
        ET.SubElement(el, "data", {"key": "d_label"}).text = node.label
    for e in graph.edges:
        el = ET.SubElement(g, "edge", {"source": f"n{e.u}", "target": f"n{e.v}"})
        ET.SubElement(el, "data", {"key": "d_ekind"}).text = e.kind
        ET.SubElement(el, "data", {"key": "d_weight"}).text = str(e.weight)
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="UTF-8", xml_declaration=True) + b"\n"


def _dot_escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _dot_bytes(graph: OntologyGraph) -> bytes:
    lines = ["graph ontomesh {", "  node [style=filled];"]
    for node in graph.nodes:
        shape, color = _DOT_SHAPES[node.kind]
        lines.append(
            f'  n{node.node_id} [label="{_dot_escape(node.label)}", shape={shape}, '
            f'fillcolor="{color}", kind={node.kind.value}];'
        )
    for e in graph.edges:
        lines.append(f'  n{e.u} -- n{e.v} [label={e.weight}, kind={e.kind}];')
    lines.append("}")
    return "\n".join(lines).encode("utf-8") + b"\n"


def export_graph(graph: OntologyGraph, format: str, out: str | os.PathLike) -> int:
    """Write the graph in the requested format; returns bytes written.

    canonical-json is the native lossless schema; GraphML keeps node kind,
    label, and edge kind/weight as typed attributes; DOT flattens weights to
    edge labels. Output bytes are deterministic for identical graphs.
    """
    if format == "graphml":
        data = _graphml_bytes(graph)
    elif format == "dot":
        data = _dot_bytes(graph)
    elif format == "canonical-json":
        data = canonical_json_bytes(graph.to_doc())
    else:
        raise ValueError(f"unknown graph format {format!r}")
    Path(out).write_bytes(data)
    return len(data)


def import_graph_json(path: str | os.PathLike) -> OntologyGraph:
    """Inverse of the canonical-json export."""
    import json

    with open(path, encoding="utf-8") as fh:
        return OntologyGraph.from_doc(json.load(fh))


def export_matrix_csv(matrix: DomainMatrix, out: str | os.PathLike) -> int:
    """CSV with a header row and leading column of domain labels."""
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([matrix.metric] + list(matrix.labels))
        for label, row in zip(matrix.labels, matrix.cells):
            writer.writerow([label] + [str(v) for v in row])
    return Path(out).stat().st_size
