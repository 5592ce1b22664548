"""Tests for the linkspace command line."""

import json
import logging
from pathlib import Path

import pytest

from linkspace.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, load_k33_lengths, main, parse_lengths
from linkspace.graph_core import WeightedGraph, save_graph
from linkspace.utils.errors import GraphFormatError


@pytest.fixture(autouse=True)
def restore_root_handlers():
    """configure_logging replaces root handlers; put pytest's back afterwards."""
    root = logging.getLogger()
    saved, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    for handler in saved:
        root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(False)
    logging.getLogger("py.warnings").handlers.clear()
    logging.getLogger("py.warnings").propagate = True


@pytest.fixture
def triangle(tmp_path: Path) -> Path:
    """A 3-4-5 triangle graph file."""
    g = WeightedGraph.from_edges([("a", "b", 3.0), ("b", "c", 4.0), ("c", "a", 5.0)])
    return save_graph(g, tmp_path / "triangle.json")


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestLengthsParsing:
    """Tests for --lengths parsing."""

    def test_inline(self):
        """Comma-separated numbers parse in order."""
        assert parse_lengths("1, 2.5,3") == [1.0, 2.5, 3.0]

    def test_inline_garbage(self):
        """Non-numbers are a format error."""
        with pytest.raises(GraphFormatError, match="Invalid lengths"):
            parse_lengths("1,x")

    def test_k33_from_file(self, fixtures_dir: Path):
        """A path to a lengths file is decoded."""
        lengths = load_k33_lengths(str(fixtures_dir / "k33_example2.json"))
        assert lengths.stage == "G3"
        assert lengths.a == 0.05

    def test_k33_bad_file(self, tmp_path: Path):
        """Unknown keys in a lengths file are a format error."""
        path = tmp_path / "bad.json"
        path.write_text('{"a": 1, "zeta": 2}')
        with pytest.raises(GraphFormatError, match="Invalid lengths file"):
            load_k33_lengths(str(path))


class TestPredicates:
    """Tests for check-cycle, check-k4 and closure-interval."""

    def test_cycle_not_realizable(self, capsys):
        """1,1,3 violates the polygon inequality: exit 3."""
        code, out, err = run(capsys, "check-cycle", "--lengths", "1,1,3")
        assert code == EXIT_NEGATIVE
        assert "not realizable" in err
        assert json.loads(out)["realizable"] is False

    def test_cycle_realizable(self, capsys):
        """Degenerate polygons count as realizable."""
        code, out, _ = run(capsys, "check-cycle", "--lengths", "1,1,2")
        assert code == EXIT_OK
        assert json.loads(out) == {"lengths": [1.0, 1.0, 2.0], "realizable": True}

    def test_check_k4(self, capsys):
        """The unit square with diagonals is a planar K4."""
        code, out, _ = run(capsys, "check-k4", "--lengths", "1,1,1,1,1.4142135623730951,1.4142135623730951")
        assert code == EXIT_OK
        assert json.loads(out)["realizable"] is True

    def test_closure_interval_csv(self, capsys):
        """CSV output lists the interval."""
        code, out, _ = run(capsys, "closure-interval", "--lengths", "1,1,1,1,10", "--format", "csv")
        assert code == EXIT_OK
        assert out == "lo,hi\n6.0,14.0\n"

    def test_unsupported_format(self, capsys):
        """check-cycle has no CSV form."""
        code, _, err = run(capsys, "check-cycle", "--lengths", "1,1,1", "--format", "csv")
        assert code == EXIT_USAGE
        assert "supports --format json" in err

    def test_malformed_lengths(self, capsys):
        """Bad numbers exit 2 with a hint."""
        code, _, err = run(capsys, "check-cycle", "--lengths", "1,,x")
        assert code == EXIT_USAGE
        assert err.startswith("Error: Invalid lengths")
        assert "Hint:" in err

    @pytest.mark.parametrize("command", ["check-cycle", "closure-interval"])
    @pytest.mark.parametrize("lengths", ["1,-2,3", "1,nan,1", "1,inf,1"])
    def test_negative_or_non_finite_lengths(self, capsys, command, lengths):
        """Negative and non-finite lengths are malformed input, not a verdict."""
        code, out, err = run(capsys, command, f"--lengths={lengths}")
        assert code == EXIT_USAGE
        assert out == ""
        assert "finite and nonnegative" in err

    def test_check_k4_banner_has_seed(self, capsys):
        """check-k4 prints the effective-options banner like the other commands."""
        _, _, err = run(capsys, "check-k4", "--lengths", "1,1,1,1,1,1", "--seed", "11")
        assert err.splitlines()[0] == "linkspace check-k4: lengths=6 seed=11"


class TestK33Commands:
    """Tests for k33-stage and gamma-set."""

    def test_f_stage(self, capsys):
        """The f-stage of the unit path is [0, 5]."""
        code, out, err = run(capsys, "k33-stage", "--lengths", "1,1,1,1,1", "--stage", "f")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["stage"] == "f"
        assert report["feasible_set"]["intervals"] == [[0.0, 5.0]]
        assert "f: [0, 5]" in err

    def test_banner_includes_seed(self, capsys, monkeypatch):
        """The k33-stage banner carries the seed so the run can be repeated."""
        monkeypatch.setenv("LINKSPACE_SEED", "23")
        _, _, err = run(capsys, "k33-stage", "--lengths", "1,1,1,1,1", "--stage", "f")
        banner = err.splitlines()[0]
        assert banner.startswith("linkspace k33-stage: stage=f ")
        assert banner.endswith(" seed=23")

    def test_bad_f_choice(self, capsys):
        """f = 6 outside [0, 5] is a negative result citing the set."""
        code, _, err = run(capsys, "k33-stage", "--lengths", "1,1,1,1,1,6", "--stage", "alpha")
        assert code == EXIT_NEGATIVE
        assert "[0, 5]" in err

    def test_missing_prerequisites(self, capsys):
        """The beta stage needs f and alpha."""
        code, _, err = run(capsys, "k33-stage", "--lengths", "1,1,1,1,1", "--stage", "beta")
        assert code == EXIT_USAGE
        assert "needs" in err

    def test_beta_stage_from_file(self, capsys, fixtures_dir: Path):
        """Example 4 reports a beta-set containing 2√5."""
        path = fixtures_dir / "k33_example4.json"
        code, out, _ = run(capsys, "k33-stage", "--lengths", str(path), "--stage", "beta")
        assert code == EXIT_OK
        intervals = json.loads(out)["feasible_set"]["intervals"]
        assert any(lo - 1e-9 <= 4.47213595499958 <= hi + 1e-9 for lo, hi in intervals)

    def test_printed_example4_beta_rejected(self, capsys, fixtures_dir: Path):
        """The historical beta is outside its set."""
        path = fixtures_dir / "k33_example4_printed.json"
        code, _, err = run(capsys, "k33-stage", "--lengths", str(path), "--stage", "gamma",
                           "--resolution", "2000")
        assert code == EXIT_NEGATIVE
        assert "beta =" in err

    def test_gamma_set_csv(self, capsys, fixtures_dir: Path, tmp_path: Path):
        """gamma-set writes CSV to --output."""
        out_path = tmp_path / "out" / "gamma.csv"
        code, _, err = run(capsys, "gamma-set", "--lengths", str(fixtures_dir / "k33_example5.json"),
                           "--format", "csv", "--output", str(out_path))
        assert code == EXIT_OK
        rows = out_path.read_text().splitlines()
        assert rows[0] == "lo,hi"
        assert len(rows) == 2
        assert "resolution=20000" in err

    def test_gamma_set_needs_beta(self, capsys):
        """gamma-set needs lengths through beta."""
        code, _, err = run(capsys, "gamma-set", "--lengths", "1,1,1,1,1,1")
        assert code == EXIT_USAGE
        assert "Stage G3 needs" in err

    def test_gamma_set_oracle(self, capsys, fixtures_dir: Path):
        """--oracle uses the angle sampler."""
        code, out, _ = run(capsys, "gamma-set", "--lengths", str(fixtures_dir / "k33_example1.json"),
                           "--oracle", "--samples", "5000")
        assert code == EXIT_OK
        assert json.loads(out)["method"] == "oracle"


class TestComponentsCommand:
    """Tests for the components subcommand."""

    def test_sweep_empty(self, capsys, fixtures_dir: Path):
        """A gamma outside the gamma-set has no components: exit 3."""
        code, out, _ = run(capsys, "components", "--lengths", str(fixtures_dir / "k33_example2.json"),
                           "--gamma", "10", "--resolution", "2000")
        assert code == EXIT_NEGATIVE
        assert json.loads(out)["count"] == 0

    def test_sampling_graph(self, capsys, triangle: Path):
        """A pinned triangle has two mirror-image points."""
        code, out, _ = run(capsys, "components", "--graph", str(triangle), "--pin", "a,b",
                           "--samples", "40")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["method"] == "sampling"
        assert report["count"] == 2

    def test_graph_needs_pin(self, capsys, triangle: Path):
        """--graph without --pin is a usage error."""
        code, _, err = run(capsys, "components", "--graph", str(triangle))
        assert code == EXIT_USAGE
        assert "--pin is required" in err

    def test_bad_pin(self, capsys, triangle: Path):
        """A pin naming a non-edge exits 2 with the pin hint."""
        code, _, err = run(capsys, "components", "--graph", str(triangle), "--pin", "a,z")
        assert code == EXIT_USAGE
        assert "positive length" in err
        assert "--pin v4,v1" in err


class TestGraphCommands:
    """Tests for realize and cycles."""

    def test_realize(self, capsys, triangle: Path):
        """A triangle is realized: exit 0."""
        code, out, err = run(capsys, "realize", "--graph", str(triangle), "--restarts", "20")
        assert code == EXIT_OK
        assert json.loads(out)["verdict"] == "realized"
        assert "restarts=20" in err

    def test_cycles(self, capsys, fixtures_dir: Path):
        """The corrected fourex2 graph has seven cycles, all passing."""
        code, out, _ = run(capsys, "cycles", "--graph", str(fixtures_dir / "fourex2.json"))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["cycle_count"] == 7
        assert report["all_realizable"] is True

    def test_cycles_csv(self, capsys, triangle: Path):
        """CSV has one row per cycle."""
        code, out, _ = run(capsys, "cycles", "--graph", str(triangle), "--format", "csv")
        assert code == EXIT_OK
        assert out.splitlines() == ["vertices,edges,lengths,realizable", "a b c,0 1 2,3.0 4.0 5.0,true"]

    def test_malformed_graph(self, capsys, tmp_path: Path):
        """Unknown keys exit 2 with the graph format hint."""
        path = tmp_path / "g.json"
        path.write_text('{"vertices": [], "edges": [], "extra": 1}')
        code, _, err = run(capsys, "cycles", "--graph", str(path))
        assert code == EXIT_USAGE
        assert "Invalid graph file" in err
        assert "unknown keys are rejected" in err


class TestRenderCommand:
    """Tests for render."""

    def test_workspaces(self, capsys, fixtures_dir: Path, tmp_path: Path):
        """render workspaces writes an SVG file."""
        out_path = tmp_path / "ws.svg"
        code, _, _ = run(capsys, "render", "workspaces", "--lengths",
                         str(fixtures_dir / "k33_example2.json"), "--output", str(out_path))
        assert code == EXIT_OK
        assert out_path.read_text().startswith("<?xml")

    def test_components_needs_output_dir(self, capsys, fixtures_dir: Path):
        """render components needs a directory."""
        code, _, err = run(capsys, "render", "components", "--lengths",
                           str(fixtures_dir / "k33_example2.json"), "--gamma", "1")
        assert code == EXIT_USAGE
        assert "--output DIR" in err

    def test_components_one_file_per_representative(self, capsys, fixtures_dir: Path, tmp_path: Path):
        """Example 2 at gamma = √5 renders four files."""
        out_dir = tmp_path / "figs"
        code, out, _ = run(capsys, "render", "components", "--lengths",
                           str(fixtures_dir / "k33_example2.json"), "--gamma", "2.23606797749979",
                           "--output", str(out_dir))
        assert code == EXIT_OK
        assert sorted(p.name for p in out_dir.iterdir()) == [f"component_0{i}.svg" for i in range(1, 5)]
        assert len(out.splitlines()) == 4

    def test_render_rejects_json(self, capsys, fixtures_dir: Path):
        """render only produces SVG."""
        code, _, _ = run(capsys, "render", "workspaces", "--lengths",
                         str(fixtures_dir / "k33_example2.json"), "--format", "json")
        assert code == EXIT_USAGE


class TestOptionPrecedence:
    """Flags beat env vars, which beat the config file."""

    def test_env_then_flag(self, capsys, monkeypatch, triangle: Path):
        """LINKSPACE_SEED applies unless --seed is given."""
        monkeypatch.setenv("LINKSPACE_SEED", "5")
        _, _, err = run(capsys, "realize", "--graph", str(triangle), "--restarts", "3")
        assert "seed=5" in err
        _, _, err = run(capsys, "realize", "--graph", str(triangle), "--restarts", "3", "--seed", "7")
        assert "seed=7" in err

    def test_config_file_value(self, capsys, triangle: Path):
        """config set changes the default used by later commands."""
        assert main(["config", "set", "realize.restarts", "4"]) == EXIT_OK
        _, _, err = run(capsys, "realize", "--graph", str(triangle))
        assert "restarts=4" in err

    def test_config_get(self, capsys):
        """config get prints the value as JSON."""
        main(["config", "set", "sweep.workers", "3"])
        capsys.readouterr()
        code, out, _ = run(capsys, "config", "get", "sweep.workers")
        assert code == EXIT_OK
        assert out.strip() == "3"

    def test_bad_config_value(self, capsys):
        """Invalid config values exit 2."""
        code, _, err = run(capsys, "config", "set", "sweep.resolution", "10")
        assert code == EXIT_USAGE
        assert "at least 1000" in err


def test_no_command(capsys):
    """Running without a subcommand prints help and exits 2."""
    code, _, err = run(capsys)
    assert code == EXIT_USAGE
    assert "usage:" in err


class TestDeterminism:
    """Repeated runs give byte-identical machine output."""

    def test_gamma_set_repeatable_across_workers(self, capsys, fixtures_dir: Path):
        """Same command twice, then with more workers: identical stdout."""
        argv = ["gamma-set", "--lengths", str(fixtures_dir / "k33_example2.json"), "--resolution", "2000"]
        outputs = [run(capsys, *argv)[1], run(capsys, *argv)[1], run(capsys, *argv, "--workers", "3")[1]]
        assert outputs[0] == outputs[1] == outputs[2]

    def test_realize_repeatable(self, capsys, fixtures_dir: Path):
        """A seeded realization run repeats exactly."""
        argv = ["realize", "--graph", str(fixtures_dir / "fourex2_printed.json"), "--restarts", "10", "--seed", "4"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
