import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from ontomesh.analytics import DomainMatrix, dissonance_summary
from ontomesh.exports import export_graph, export_matrix_csv, import_graph_json
from ontomesh.graph import build_graph
from ontomesh.heatmap import PaletteConfig, render_heatmap_svg
from ontomesh.report import render_report

GML_NS = {"g": "http://graphml.graphdrawing.org/xmlns"}


class TestGraphExports:
    def test_canonical_json_round_trip(self, fix1_graph, tmp_path):
        out = tmp_path / "g.json"
        export_graph(fix1_graph, "canonical-json", out)
        back = import_graph_json(out)
        assert back.to_doc() == fix1_graph.to_doc()
        assert back.graph_hash() == fix1_graph.graph_hash()

    def test_worked_example_graphml_counts(self, minimal, tmp_path):
        out = tmp_path / "min.graphml"
        export_graph(build_graph(minimal), "graphml", out)
        root = ET.parse(out).getroot()
        assert len(root.findall(".//g:node", GML_NS)) == 5
        assert len(root.findall(".//g:edge", GML_NS)) == 5

    def test_graphml_keys_declared_before_graph(self, fix1_graph, tmp_path):
        out = tmp_path / "f.graphml"
        export_graph(fix1_graph, "graphml", out)
        root = ET.parse(out).getroot()
        tags = [child.tag.split("}")[-1] for child in root]
        assert tags.index("graph") > max(i for i, t in enumerate(tags) if t == "key")

    def test_graphml_cross_checked_with_networkx(self, fix1_graph, tmp_path):
        out = tmp_path / "f.graphml"
        export_graph(fix1_graph, "graphml", out)
        loaded = nx.read_graphml(out)
        assert loaded.number_of_nodes() == len(fix1_graph.nodes)
        assert loaded.number_of_edges() == len(fix1_graph.edges)
        hub = loaded.nodes[f"n{fix1_graph.node_id('attribute', 'dataProvider')}"]
        assert hub["kind"] == "attribute"
        assert hub["label"] == "dataProvider"

    def test_graphml_weights_typed(self, fix1_graph, tmp_path):
        out = tmp_path / "f.graphml"
        export_graph(fix1_graph, "graphml", out)
        loaded = nx.read_graphml(out)
        weights = {d["weight"] for _, _, d in loaded.edges(data=True)}
        assert weights == {1, 2}

    def test_dot_structure(self, fix1_graph, tmp_path):
        out = tmp_path / "f.dot"
        export_graph(fix1_graph, "dot", out)
        text = out.read_text()
        assert text.startswith("graph ontomesh {")
        assert text.count(" -- ") == len(fix1_graph.edges)
        assert 'shape=box' in text and 'shape=ellipse' in text

    def test_deterministic_bytes(self, fix1_graph, tmp_path):
        a, b = tmp_path / "a.graphml", tmp_path / "b.graphml"
        export_graph(fix1_graph, "graphml", a)
        export_graph(fix1_graph, "graphml", b)
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_format(self, fix1_graph, tmp_path):
        with pytest.raises(ValueError, match="unknown graph format"):
            export_graph(fix1_graph, "gexf", tmp_path / "x")

    def test_unwritable_path(self, fix1_graph, tmp_path):
        with pytest.raises(OSError):
            export_graph(fix1_graph, "dot", tmp_path / "missing-dir" / "x.dot")


class TestMatrixCsv:
    def test_fix1_shared_models_bytes(self, fix1_snapshot, tmp_path):
        from ontomesh.analytics import domain_overlap_matrix

        out = tmp_path / "m.csv"
        export_matrix_csv(domain_overlap_matrix(fix1_snapshot, "shared_models"), out)
        assert out.read_bytes() == (
            b"shared_models,SmartCities,SmartEnergy\r\n"
            b"SmartCities,0,1\r\n"
            b"SmartEnergy,1,0\r\n"
        )

    def test_labels_with_commas_quoted(self, tmp_path):
        matrix = DomainMatrix(
            metric="shared_models", labels=["a,b", "c"], cells=[[0, 2], [2, 0]]
        )
        out = tmp_path / "m.csv"
        export_matrix_csv(matrix, out)
        assert b'"a,b"' in out.read_bytes()


def _cells(svg_path):
    root = ET.parse(svg_path).getroot()
    ns = {"s": "http://www.w3.org/2000/svg"}
    return [
        r
        for r in root.findall(".//s:rect", ns)
        if r.get("class") == "cell"
    ]


class TestHeatmap:
    def test_cell_count_and_single_gradient(self, tmp_path):
        matrix = DomainMatrix(metric="shared_models", labels=["A", "B"], cells=[[0, 3], [3, 0]])
        out = tmp_path / "h.svg"
        render_heatmap_svg(matrix, out)
        assert len(_cells(out)) == 4
        root = ET.parse(out).getroot()
        ns = {"s": "http://www.w3.org/2000/svg"}
        assert len(root.findall(".//s:linearGradient", ns)) == 1

    def test_all_zero_range_label(self, tmp_path):
        matrix = DomainMatrix(metric="shared_models", labels=["A", "B"], cells=[[0, 0], [0, 0]])
        out = tmp_path / "z.svg"
        render_heatmap_svg(matrix, out)
        root = ET.parse(out).getroot()
        ns = {"s": "http://www.w3.org/2000/svg"}
        range_text = next(
            t for t in root.findall(".//s:text", ns) if t.get("class") == "range"
        )
        assert range_text.text == "0–0"
        palette = PaletteConfig()
        off_diagonal = [c for c in _cells(out) if c.get("fill") != palette.neutral]
        assert {c.get("fill") for c in off_diagonal} == {palette.low}

    def test_colors_monotone_in_value(self, tmp_path):
        matrix = DomainMatrix(
            metric="x", labels=["A", "B", "C"],
            cells=[[0, 1, 4], [1, 0, 2], [4, 2, 0]],
        )
        out = tmp_path / "m.svg"
        render_heatmap_svg(matrix, out)
        palette = PaletteConfig()
        low_red = int(palette.low[1:3], 16)
        high_red = int(palette.high[1:3], 16)

        def darkness(fill):
            red = int(fill[1:3], 16)
            return (red - low_red) / (high_red - low_red)

        samples = sorted(
            (float(c.get("data-value")), darkness(c.get("fill")))
            for c in _cells(out)
            if c.get("fill") != palette.neutral
        )
        for (va, ta), (vb, tb) in zip(samples, samples[1:]):
            assert va <= vb
            assert ta <= tb + 1e-9

    def test_diagonal_neutral(self, tmp_path):
        matrix = DomainMatrix(metric="x", labels=["A", "B"], cells=[[0, 5], [5, 0]])
        out = tmp_path / "d.svg"
        render_heatmap_svg(matrix, out)
        cells = _cells(out)
        # row-major emission: cells[0] and cells[3] are the diagonal
        palette = PaletteConfig()
        assert cells[0].get("fill") == palette.neutral
        assert cells[3].get("fill") == palette.neutral
        assert cells[1].get("fill") == palette.high

    def test_custom_palette(self, tmp_path):
        matrix = DomainMatrix(metric="x", labels=["A", "B"], cells=[[0, 1], [1, 0]])
        out = tmp_path / "p.svg"
        palette = PaletteConfig(low="#000000", high="#ff0000", neutral="#123456")
        render_heatmap_svg(matrix, out, palette)
        fills = {c.get("fill") for c in _cells(out)}
        assert fills == {"#ff0000", "#123456"}


class TestRenderReport:
    def test_worked_example_census_row(self, minimal, tmp_path):
        graph = build_graph(minimal)
        report = dissonance_summary(minimal, graph, include_timestamp=False)
        out = tmp_path / "r.md"
        render_report(report, out)
        assert "- nodes: 5, edges: 5" in out.read_text()

    def test_no_timestamp_byte_identical(self, fix1_snapshot, fix1_graph, tmp_path):
        report = dissonance_summary(fix1_snapshot, fix1_graph)
        a, b = tmp_path / "a.md", tmp_path / "b.md"
        render_report(report, a, no_timestamp=True)
        render_report(report, b, no_timestamp=True)
        assert a.read_bytes() == b.read_bytes()
        assert report.generated_at not in a.read_text()

    def test_markdown_tables(self, fix1_snapshot, fix1_graph, tmp_path):
        report = dissonance_summary(fix1_snapshot, fix1_graph, include_timestamp=False)
        out = tmp_path / "r.md"
        render_report(report, out)
        text = out.read_text()
        assert "| 1 | dataProvider | 10 | 2 |" in text
        assert "## Domain overlap: jaccard_attributes" in text
        assert "| SmartCities | 0.5 |" in text

    def test_canonical_json_round_trip(self, fix1_snapshot, fix1_graph, tmp_path):
        import json

        from ontomesh.analytics import AnalysisReport

        report = dissonance_summary(fix1_snapshot, fix1_graph, include_timestamp=False)
        out = tmp_path / "r.json"
        render_report(report, out, format="canonical-json")
        back = AnalysisReport.from_doc(json.loads(out.read_text()))
        assert back.to_doc() == report.to_doc()

    def test_unknown_format(self, fix1_snapshot, fix1_graph, tmp_path):
        report = dissonance_summary(fix1_snapshot, fix1_graph, include_timestamp=False)
        with pytest.raises(ValueError, match="unknown report format"):
            render_report(report, tmp_path / "r.html", format="html")
