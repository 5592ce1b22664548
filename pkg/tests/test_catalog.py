"""Tests for the catalog of example graphs."""

import pytest

from linkspace.catalog import (
    EPSILON,
    four_ex_graph,
    k33_example,
    k33_graph,
    k4_graph,
    three_connex_g,
    three_connex_h,
)
from linkspace.graph_core import enumerate_simple_cycles
from linkspace.realizability import K4Lengths


class TestCatalog:
    """Tests for the named examples."""

    def test_four_ex_variants_differ_only_on_v7(self):
        """Corrected and printed graphs share every edge except the two at v7."""
        fixed = {(e.u, e.v): e.length for e in four_ex_graph().edges}
        printed = {(e.u, e.v): e.length for e in four_ex_graph(printed=True).edges}
        changed = {k for k in fixed if fixed[k] != printed[k]}
        assert changed == {("v2", "v7"), ("v3", "v7")}

    def test_three_connex_sizes(self):
        """H has seven vertices and nine edges; G adds v8 and two edges."""
        h, g = three_connex_h(), three_connex_g()
        assert (len(h.vertices), len(h.edges)) == (7, 9)
        assert (len(g.vertices), len(g.edges)) == (8, 11)
        assert len(enumerate_simple_cycles(g)) > len(enumerate_simple_cycles(h))

    def test_k33_examples_stop_at_beta(self):
        """Examples give lengths through beta and use a = ε from example 2 on."""
        for n in range(1, 6):
            assert k33_example(n).stage == "G3"
        assert k33_example(2).a == EPSILON

    def test_unknown_example(self):
        """Only examples 1 to 5 exist."""
        with pytest.raises(ValueError, match="Unknown K33 example 6"):
            k33_example(6)

    def test_k4_graph(self):
        """k4_graph is the K4 length graph."""
        assert len(k4_graph(K4Lengths(1, 1, 1, 1, 1, 1)).edges) == 6

    def test_k33_graph(self):
        """k33_graph carries all nine K33 edges once gamma is chosen."""
        g = k33_graph(k33_example(1).replace(gamma=1.0))
        assert len(g.vertices) == 6
        assert len(g.edges) == 9
        assert {e.length for e in g.edges} == {1.0}


def test_every_fixture_is_referenced(fixtures_dir):
    """Each fixture file is named by some test module."""
    modules = [p for p in fixtures_dir.parent.glob("test_*.py") if p.name != "test_catalog.py"]
    sources = "\n".join(p.read_text() for p in modules)
    for path in fixtures_dir.glob("*.json"):
        stem = path.stem
        referenced = path.name in sources or (
            stem.startswith("k33_example") and 'f"k33_example{' in sources
        )
        assert referenced, f"{path.name} is not used by any test"
