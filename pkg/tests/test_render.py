"""Tests for SVG rendering."""

import xml.etree.ElementTree as ET

import pytest

from linkspace.catalog import k33_example
from linkspace.graph_core import Realization, WeightedGraph
from linkspace.k33_extension import configuration_at, sweep_G3, workspaces_G2
from linkspace.render import render_realization, render_workspaces

SVG = "{http://www.w3.org/2000/svg}"
DC = "{http://purl.org/dc/elements/1.1/}"


def groups(root: ET.Element, prefix: str) -> list[ET.Element]:
    return [g for g in root.iter(f"{SVG}g") if g.get("id", "").startswith(prefix)]


class TestRenderWorkspaces:
    """Tests for workspace figures."""

    def test_is_valid_svg(self):
        """Output parses as SVG with both dashed carrier circles and the pinned edge."""
        lengths = k33_example(2)
        w3, w6 = workspaces_G2(lengths)
        root = ET.fromstring(render_workspaces(w3, w6, lengths.alpha, title="ws").encode())
        assert root.tag == f"{SVG}svg"
        assert root.find(f".//{DC}title").text == "ws"
        carriers = groups(root, "carrier-")
        assert [g.get("id") for g in carriers] == ["carrier-W3", "carrier-W6"]
        for g in carriers:
            assert "stroke-dasharray" in g.find(f"{SVG}path").get("style")
        assert len(groups(root, "pinned-edge")) == 1
        assert len(groups(root, "arc-W3-")) == len(w3.arcs())
        assert len(groups(root, "arc-W6-")) == len(w6.arcs())
        labels = [t.text for t in root.iter(f"{SVG}text")]
        assert labels == ["v4", "v1"]

    def test_deterministic(self):
        """Identical inputs give byte-identical output."""
        lengths = k33_example(3)
        w3, w6 = workspaces_G2(lengths)
        first = render_workspaces(w3, w6, lengths.alpha)
        assert first == render_workspaces(w3, w6, lengths.alpha)
        assert "<dc:date>" not in first


class TestRenderRealization:
    """Tests for realization figures."""

    def test_edges_and_vertices(self):
        """One group per edge and one label per vertex."""
        lengths = k33_example(2)
        branch, _ = sweep_G3(lengths, 1000)[0]
        realization = configuration_at(lengths, branch.theta, branch.signs)
        assert realization is not None
        svg = render_realization(lengths.graph(), realization, scale=20)
        root = ET.fromstring(svg.encode())
        assert len(groups(root, "edge-")) == 8
        assert len(groups(root, "vertex-")) == 6
        assert [t.text for t in root.iter(f"{SVG}text")] == ["v1", "v2", "v3", "v4", "v5", "v6"]

    def test_size_follows_scale(self):
        """The canvas is the bounding box times the scale plus a 20 px margin each side."""
        g = WeightedGraph.from_edges([("a", "b", 3.0), ("b", "c", 5.0), ("c", "a", 4.0)])
        r = Realization({"a": (0.0, 0.0), "b": (3.0, 0.0), "c": (0.0, 4.0)})
        root = ET.fromstring(render_realization(g, r, scale=20).encode())
        assert float(root.get("width").removesuffix("pt")) == pytest.approx(100.0)
        assert float(root.get("height").removesuffix("pt")) == pytest.approx(120.0)
