"""Tests for the staged K33 extension: f, alpha, beta and gamma feasible sets."""

import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkspace.catalog import SQRT2, SQRT5, k33_example
from linkspace.graph_core import WeightedGraph
from linkspace.intervals_arcs import IntervalSet
from linkspace.k33_extension import (
    SIGN_TUPLES,
    K33Lengths,
    alpha_interval,
    beta_set,
    configuration_at,
    default_merge_gap,
    f_interval,
    format_signs,
    gamma_set,
    gamma_set_oracle,
    sheet_gamma,
    sheet_index,
    staged_report,
    sweep_G3,
    workspaces_G2,
)
from linkspace.realizability import attempt_realize
from linkspace.schemas import decode_k33_file
from linkspace.utils.errors import GraphError, StageChoiceError, StageError, WorkspaceEmptyError

FIXTURES = Path(__file__).parent / "fixtures"


def sampled_chord_range(lengths: list[float], steps: int = 360) -> tuple[float, float]:
    """Min and max chord of a three-link chain sampled on an angle grid."""
    grid = np.arange(steps) * (2.0 * math.pi / steps)
    t1, t2 = np.meshgrid(grid, grid)
    x = lengths[0] + lengths[1] * np.cos(t1) + lengths[2] * np.cos(t2)
    y = lengths[1] * np.sin(t1) + lengths[2] * np.sin(t2)
    chord = np.hypot(x, y)
    return float(chord.min()), float(chord.max())


@pytest.fixture(scope="module")
def gamma_sets() -> dict[int, IntervalSet]:
    """Sweep γ-sets of the five examples at the default resolution."""
    return {n: gamma_set(k33_example(n)).feasible_set for n in range(1, 6)}


class TestK33Lengths:
    """Tests for the staged length record."""

    def test_stage_from_present_fields(self):
        """The stage follows the number of given lengths."""
        assert K33Lengths.from_sequence([1] * 5).stage == "G0"
        assert K33Lengths.from_sequence([1] * 8).stage == "G3"
        assert K33Lengths.from_sequence([1] * 9).stage == "K33"

    def test_later_field_without_earlier_rejected(self):
        """A length may only be given when every earlier stage is."""
        with pytest.raises(ValueError, match="earlier stage is missing"):
            K33Lengths(a=1, b=1, c=1, d=1, e=1, alpha=1)

    def test_negative_rejected(self):
        """Lengths are nonnegative."""
        with pytest.raises(ValueError, match="nonnegative"):
            K33Lengths.from_sequence([1, 1, -1, 1, 1])

    def test_sequence_size(self):
        """Between five and nine values."""
        with pytest.raises(ValueError, match="5 to 9 values"):
            K33Lengths.from_sequence([1, 1, 1])

    def test_require_names_missing_lengths(self):
        """require explains which lengths a stage needs."""
        with pytest.raises(StageError, match="alpha, beta"):
            K33Lengths.from_sequence([1] * 6).require("G3")

    def test_graph_round_trip(self):
        """graph() and from_graph() agree."""
        lengths = k33_example(2).replace(gamma=1.0)
        g = lengths.graph()
        assert len(g.edges) == 9
        assert g.edge_indices_between("v2", "v5") == [8]
        assert K33Lengths.from_graph(g) == lengths

    def test_from_graph_rejects_foreign_edges(self):
        """Edges other than K33 edges are refused."""
        g = WeightedGraph.from_edges(
            [("v1", "v6", 1), ("v1", "v2", 1), ("v2", "v3", 1), ("v3", "v4", 1), ("v4", "v5", 1), ("v1", "v3", 1)],
            vertices=("v1", "v2", "v3", "v4", "v5", "v6"),
        )
        with pytest.raises(GraphError, match="not K33 edges"):
            K33Lengths.from_graph(g)

    @pytest.mark.parametrize("number", [1, 2, 3, 4, 5])
    def test_fixture_files_match_catalog(self, number: int):
        """Lengths fixtures decode to the catalog examples."""
        doc = decode_k33_file((FIXTURES / f"k33_example{number}.json").read_bytes())
        assert K33Lengths.from_file(doc).values() == pytest.approx(k33_example(number).values())

    @pytest.mark.parametrize("number", [3, 4])
    def test_printed_fixture_files_match_catalog(self, number: int):
        """Historical lengths fixtures decode to the printed catalog examples."""
        doc = decode_k33_file((FIXTURES / f"k33_example{number}_printed.json").read_bytes())
        expected = k33_example(number, printed=True).values()
        assert K33Lengths.from_file(doc).values() == pytest.approx(expected)


class TestSheets:
    """Tests for sign tuple ordering."""

    def test_sign_order(self):
        """Sign tuples are lexicographic with + first and index by t = 4·i5 + 2·i3 + i2."""
        assert SIGN_TUPLES[0] == (1, 1, 1)
        assert SIGN_TUPLES[1] == (1, 1, -1)
        assert SIGN_TUPLES[7] == (-1, -1, -1)
        assert [sheet_index(s) for s in SIGN_TUPLES] == list(range(8))
        assert format_signs((1, -1, 1)) == "+-+"


class TestFAndAlphaStages:
    """Tests for the closed-form stages."""

    def test_f_interval_equal_path(self):
        """Unit path closes with f in [0, 5]."""
        assert f_interval(1, 1, 1, 1, 1).feasible_set.intervals == ((0.0, 5.0),)

    def test_f_interval_long_edge(self):
        """A dominant edge gives [6, 14]."""
        assert f_interval(1, 1, 1, 1, 10).feasible_set.intervals == ((6.0, 14.0),)

    def test_alpha_interval_single_point(self):
        """Quadrilaterals 5,1,1 and 1,1,1 only share the chord 3."""
        report = alpha_interval(5, 1, 1, 1, 1, 1)
        assert report.feasible_set.intervals == ((3.0, 3.0),)
        assert report.bounds.mu1 == 10.0
        assert report.bounds.mu2 == 2.0

    def test_alpha_interval_rejects_bad_f(self):
        """f outside its set raises, citing the set."""
        with pytest.raises(StageChoiceError, match=r"\[0, 5\]"):
            alpha_interval(1, 1, 1, 1, 1, 6)

    def test_staged_report_stops_at_bad_f(self):
        """The chain reports the first out-of-set choice."""
        with pytest.raises(StageChoiceError, match=r"f = 6 is outside the feasible set \[0, 5\]"):
            staged_report(K33Lengths.from_sequence([1, 1, 1, 1, 1, 6]))

    @given(st.lists(st.floats(0.1, 3.0), min_size=5, max_size=5), st.floats(0.0, 1.0))
    def test_alpha_interval_matches_sampled_quadrilaterals(self, path, u):
        """The alpha-interval is where both sampled quadrilaterals can close."""
        a, b, c, d, e = path
        f_lo, f_hi = f_interval(a, b, c, d, e).feasible_set.intervals[0]
        f = f_lo + u * (f_hi - f_lo)
        lo, hi = alpha_interval(a, b, c, d, e, f).feasible_set.intervals[0]
        first, second = sampled_chord_range([a, e, f]), sampled_chord_range([b, c, d])
        sampled_lo, sampled_hi = max(first[0], second[0]), min(first[1], second[1])
        assert hi == pytest.approx(sampled_hi, abs=1e-9)
        assert lo - 1e-9 <= sampled_lo <= lo + math.pi / 360 * (a + b + c + d + e + f)


class TestBetaStage:
    """Tests for workspaces and the beta-set."""

    def test_empty_workspace(self):
        """v3 cannot reach far enough to be within 1 of v1 three units away."""
        lengths = K33Lengths(a=1, b=0.5, c=0.5, d=1, e=2, f=2, alpha=3)
        with pytest.raises(WorkspaceEmptyError, match="W3"):
            workspaces_G2(lengths)

    def test_single_point_workspace(self):
        """e = f = 1/2 pins v6 at (1, 0)."""
        lengths = K33Lengths(a=1, b=1, c=1, d=1, e=0.5, f=0.5, alpha=2)
        _, w6 = workspaces_G2(lengths)
        (start, stop), = w6.arcs()
        assert start == pytest.approx(stop)
        assert w6.point_at(start) == pytest.approx((1.0, 0.0), abs=1e-9)

    def test_split_beta_set(self):
        """Thin mirrored workspaces split the beta-set in two."""
        lengths = K33Lengths(a=1, b=2.25, c=0.1, d=1, e=2.25, f=0.1, alpha=2)
        report = beta_set(lengths)
        assert len(report.feasible_set) == 2
        assert report.bounds.split

    def test_example_beta_inside_set(self):
        """Corrected example 4 chooses beta inside its set."""
        report = beta_set(k33_example(4))
        assert report.feasible_set.contains(2 * SQRT5, 1e-9)

    def test_printed_example4_beta_rejected(self):
        """The historical beta = 5√2 lies outside the beta-set."""
        with pytest.raises(StageChoiceError, match="beta ="):
            staged_report(k33_example(4, printed=True), resolution=2000)


class TestSweep:
    """Tests for the G3 sweep."""

    def test_example1_gamma_constant(self):
        """Every generic configuration of example 1 has d(v2, v5) = 1."""
        samples = sweep_G3(k33_example(1), 2000)
        assert samples
        assert all(abs(g - 1.0) <= 1e-9 for _, g in samples)

    def test_configurations_realize_g3(self):
        """Sweep configurations satisfy every G3 edge."""
        lengths = k33_example(2)
        g = lengths.graph()
        for branch, gamma in sweep_G3(lengths, 1000)[::97]:
            r = configuration_at(lengths, branch.theta, branch.signs)
            assert r is not None
            assert r.max_residual(g) < 1e-5
            assert math.dist(r.positions["v2"], r.positions["v5"]) == pytest.approx(gamma)

    def test_workers_do_not_change_sweep(self):
        """Chunked threads give identical samples."""
        lengths = k33_example(3)
        assert sweep_G3(lengths, 3000, workers=3) == sweep_G3(lengths, 3000)

    @pytest.mark.parametrize("number", [2, 4])
    def test_global_sign_flip_mirrors_samples(self, number: int):
        """Negating theta and all three signs gives the mirror image with the same gamma."""
        lengths = k33_example(number)
        samples = sweep_G3(lengths, 1000)
        assert samples
        for branch, gamma in samples[::7]:
            flipped = tuple(-s for s in branch.signs)
            mirrored = sheet_gamma(lengths, -branch.theta, sheet_index(flipped))
            assert mirrored == pytest.approx(gamma, rel=1e-9, abs=1e-12)
            r = configuration_at(lengths, branch.theta, branch.signs)
            m = configuration_at(lengths, -branch.theta, flipped)
            assert r is not None and m is not None
            for v, p in r.reflected().positions.items():
                assert m.positions[v] == pytest.approx(p, abs=1e-9)

    def test_emitted_gamma_multiset_is_flip_invariant(self):
        """The gamma values of all sheets at theta and -theta agree as multisets."""
        lengths = k33_example(4)
        for theta in np.linspace(0.1, 3.0, 12):
            here = [sheet_gamma(lengths, float(theta), t) for t in range(len(SIGN_TUPLES))]
            there = [sheet_gamma(lengths, float(-theta), t) for t in range(len(SIGN_TUPLES))]
            here = sorted(g for g in here if math.isfinite(g))
            there = sorted(g for g in there if math.isfinite(g))
            assert there == pytest.approx(here, rel=1e-9, abs=1e-12)


class TestGammaSet:
    """Tests for the numerical gamma-set."""

    def test_resolution_minimum(self):
        """Grids below 1000 angles are refused."""
        with pytest.raises(ValueError, match="at least 1000"):
            gamma_set(k33_example(1), resolution=999)

    def test_example1_whole_range(self, gamma_sets):
        """Coincident configurations make every gamma in [0, 3] feasible."""
        s = gamma_sets[1]
        assert len(s) == 1
        assert s.lo <= 1e-3
        assert s.hi >= 3 - 1e-3

    def test_example1_generic_only(self):
        """Without coincident configurations only gamma = 1 remains."""
        s = gamma_set(k33_example(1), include_coincident=False).feasible_set
        assert len(s) == 1
        assert s.contains(1.0, 1e-6)
        assert s.widths[0] <= 1e-6

    def test_example2(self, gamma_sets):
        """Two intervals: a narrow one at 1 and one containing √5."""
        s = gamma_sets[2]
        assert len(s) == 2
        assert s.contains(1.0, 1e-6)
        assert s.contains(SQRT5, 1e-6)
        narrow = next(iv for iv in s if iv[0] - 1e-6 <= 1.0 <= iv[1] + 1e-6)
        assert narrow[1] - narrow[0] < 0.1

    def test_example3(self, gamma_sets):
        """Three intervals around √5/2, √13/2 and √29/2."""
        s = gamma_sets[3]
        assert len(s) == 3
        for target in (SQRT5 / 2, math.sqrt(13) / 2, math.sqrt(29) / 2):
            assert s.distance_to(target) <= 1e-3

    def test_example4(self, gamma_sets):
        """Four intervals near 1.612, 2.236, 6.403 and 7.280."""
        s = gamma_sets[4]
        assert len(s) == 4
        for target in (1.612, 2.236, 6.403, 7.280):
            assert s.distance_to(target) <= 2e-3

    def test_example5(self, gamma_sets):
        """One interval containing √2."""
        s = gamma_sets[5]
        assert len(s) == 1
        assert s.contains(SQRT2, 1e-6)

    def test_interval_bound_respected(self):
        """No example exceeds four intervals."""
        report = gamma_set(k33_example(4))
        assert not report.bound_exceeded
        assert report.to_json()["interval_count"] == 4
        assert report.regions

    def test_oracle_example1(self):
        """The angle sampler sees only gamma = 1 for example 1."""
        s = gamma_set_oracle(k33_example(1), samples=20_000)
        assert s.contains(1.0, 1e-6)
        assert s.hi - s.lo <= 1e-6

    def test_oracle_agrees_example4(self, gamma_sets):
        """Sweep and sampler agree to 1e-3 on example 4."""
        sweep = gamma_sets[4]
        oracle = gamma_set_oracle(k33_example(4))
        assert len(oracle) == len(sweep)
        for lo, hi in oracle:
            assert sweep.distance_to(lo) <= 1e-3
            assert sweep.distance_to(hi) <= 1e-3
        for lo, hi in sweep:
            assert oracle.distance_to(lo) <= 1e-3
            assert oracle.distance_to(hi) <= 1e-3


class TestStageSoundness:
    """Lengths inside the gamma-set realize K33; lengths well outside do not."""

    @pytest.mark.parametrize("number", [2, 4])
    def test_interval_centres_are_realizable(self, number: int, gamma_sets):
        """The realizer finds K33 at the centre of every gamma interval."""
        lengths = k33_example(number)
        for centre in gamma_sets[number].centers:
            report = attempt_realize(lengths.replace(gamma=centre).graph(), restarts=200, seed=0)
            assert report.realized, f"gamma={centre}"

    def test_far_outside_is_not_realizable(self, gamma_sets):
        """Beyond the set by more than ten merge gaps, neither the sweep nor the realizer succeeds."""
        lengths = k33_example(4)
        gamma = gamma_sets[4].hi + 10 * default_merge_gap(lengths) + 0.5
        assert all(g < gamma for _, g in sweep_G3(lengths, 2000))
        report = attempt_realize(lengths.replace(gamma=gamma).graph(), restarts=200, seed=0)
        assert not report.realized


class TestStagedReport:
    """Tests for the full chain."""

    def test_full_chain_example2(self):
        """All four stages are reported and gamma = 1 is accepted."""
        chain = staged_report(k33_example(2).replace(gamma=1.0))
        assert [r.stage for r in chain.reports] == ["f", "alpha", "beta", "gamma"]
        assert chain.stage("gamma").feasible_set.contains(1.0, 1e-6)
        assert chain.to_json()["lengths"]["gamma"] == 1.0

    def test_chain_stops_where_lengths_stop(self):
        """Only stages with chosen predecessors are reported."""
        chain = staged_report(K33Lengths.from_sequence([1, 1, 1, 1, 1, 1]))
        assert [r.stage for r in chain.reports] == ["f", "alpha"]
        assert chain.stage("beta") is None

    def test_gamma_outside_set(self):
        """A gamma far from the set is rejected."""
        with pytest.raises(StageChoiceError, match="gamma ="):
            staged_report(k33_example(2).replace(gamma=10.0), resolution=2000)
