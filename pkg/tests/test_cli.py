"""Tests for the command line interface."""

from __future__ import annotations

import json

import pytest
from typer.testing import CliRunner

from timed_membrane_nets.cli import app
from timed_membrane_nets.dsl import load_file


@pytest.fixture()
def runner() -> CliRunner:
    """Return a runner keeping stderr apart from stdout."""
    return CliRunner(mix_stderr=False)


class TestRun:
    """Test the run command."""

    def test_text_trace(self, runner, model_file):
        """Test the two-membrane trace in text form."""
        result = runner.invoke(
            app, ["run", str(model_file("timed-psystem")), "--steps", "3"]
        )
        assert result.exit_code == 0, result.stderr
        lines = result.stdout.splitlines()
        assert lines[0] == "(a b, a^2 b, 0)"
        assert lines[1] == "  {r1:1, r2:2}"
        assert lines[2] == "(a, b^2, 1) pending 1:a^2@1"
        assert lines[4] == "(a, b^2, 2) pending 1:a^2@0"
        assert lines[-2] == "(a^3, b^2, 3)"
        assert lines[-1] == "halted"

    def test_json_report_is_replayable(self, runner, model_file):
        """Test identical arguments give byte-identical reports."""
        path = str(model_file("branching-psystem"))
        args = ["run", path, "--steps", "3", "--policy", "seed=5", "--format", "json"]
        first = runner.invoke(app, args)
        second = runner.invoke(app, args)
        assert first.exit_code == 0, first.stderr
        assert first.stdout == second.stdout
        report = json.loads(first.stdout)
        assert report["policy"] == "seed=5"
        assert len(report["trace"]) == 3
        assert "elapsed_ms" not in report

    def test_timing_flag(self, runner, model_file):
        """Test elapsed time is only reported on request."""
        result = runner.invoke(
            app,
            [
                "run",
                str(model_file("timed-net")),
                "--format",
                "json",
                "--timing",
            ],
        )
        assert result.exit_code == 0, result.stderr
        assert "elapsed_ms" in json.loads(result.stdout)

    def test_exhaustive_layers(self, runner, model_file):
        """Test exhaustive runs print every reachable state per depth."""
        result = runner.invoke(
            app,
            [
                "run",
                str(model_file("branching-net")),
                "--steps",
                "1",
                "--policy",
                "exhaustive",
            ],
        )
        assert result.exit_code == 0, result.stderr
        assert "depth 1: 2 states" in result.stdout

    def test_exhaustive_layers_show_pending(self, runner, tmp_path):
        """Test states differing only in pending objects print differently."""
        path = tmp_path / "delays.tmn"
        path.write_text(
            "psystem { alphabet a b; membrane 1 { contents a;\n"
            "  rule r1: a -> (b, here) @1;\n"
            "  rule r2: a -> (b, here) @2; } }\n",
            encoding="utf-8",
        )
        result = runner.invoke(
            app, ["run", str(path), "--steps", "1", "--policy", "exhaustive"]
        )
        assert result.exit_code == 0, result.stderr
        assert "depth 1: 2 states" in result.stdout
        lines = result.stdout.splitlines()
        assert "  (eps, 1) pending 1:b@0" in lines
        assert "  (eps, 1) pending 1:b@1" in lines

    def test_seed_policy_needs_seed(self, runner, model_file):
        """Test the bare seed policy without --seed is an input error."""
        result = runner.invoke(
            app, ["run", str(model_file("timed-net")), "--policy", "seed"]
        )
        assert result.exit_code == 2
        assert result.stderr.startswith("error: ")

    def test_budget_exit_code(self, runner, model_file):
        """Test exceeding the state budget exits with 3."""
        result = runner.invoke(
            app,
            [
                "run",
                str(model_file("branching-psystem")),
                "--policy",
                "exhaustive",
                "--budget",
                "1",
            ],
        )
        assert result.exit_code == 3
        assert "budget" in result.stderr

    def test_parse_error_exit_code(self, runner, tmp_path):
        """Test malformed input exits with 2 and a located message."""
        path = tmp_path / "broken.tmn"
        path.write_text("petri { place p }\n", encoding="utf-8")
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 2
        assert result.stderr.startswith("error: 1:17:")


class TestTranslate:
    """Test the translate command."""

    def test_writes_model_and_map(self, runner, model_file, tmp_path):
        """Test the translated net and its correspondence are written."""
        out = tmp_path / "net.tmn"
        result = runner.invoke(
            app,
            [
                "translate",
                str(model_file("timed-psystem")),
                "--to",
                "tpn",
                "-o",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.stderr
        assert load_file(out) == load_file(model_file("timed-net"))
        mapping = json.loads((tmp_path / "net.tmn.map.json").read_text())
        assert mapping["direction"] == "tps->tpn"

    def test_detime_to_stdout(self, runner, model_file):
        """Test the detimed net is printed when no output is given."""
        result = runner.invoke(
            app, ["translate", str(model_file("timed-net")), "--to", "pn"]
        )
        assert result.exit_code == 0, result.stderr
        assert "transition tr_r2_2_1 @0 loc=2;" in result.stdout

    def test_unsupported_direction(self, runner, model_file):
        """Test nets cannot become membrane systems."""
        result = runner.invoke(
            app, ["translate", str(model_file("timed-net")), "--to", "ps"]
        )
        assert result.exit_code == 2
        assert "Unsupported" in result.stderr

    def test_source_kind_mismatch(self, runner, model_file):
        """Test --from must match the file."""
        result = runner.invoke(
            app,
            [
                "translate",
                str(model_file("timed-net")),
                "--from",
                "tps",
                "--to",
                "tpn",
            ],
        )
        assert result.exit_code == 2


class TestVerify:
    """Test the verify command."""

    @pytest.mark.parametrize(
        ("name", "prop"),
        [
            ("timed-psystem", "1"),
            ("timed-net", "2"),
            ("timed-psystem", "3"),
            ("branching-net", "inclusion"),
        ],
    )
    def test_examples_hold(self, runner, model_file, name, prop):
        """Test every property holds on the bundled examples."""
        result = runner.invoke(
            app,
            ["verify", str(model_file(name)), "--prop", prop, "--depth", "4"],
        )
        assert result.exit_code == 0, result.stderr
        verdict = json.loads(result.stdout)
        assert verdict["ok"] is True
        assert verdict["depth"] == 4

    def test_random_model_from_seed(self, runner):
        """Test a seed alone checks a generated model."""
        result = runner.invoke(
            app, ["verify", "--prop", "2", "--seed", "3", "--depth", "3"]
        )
        assert result.exit_code == 0, result.stderr
        assert json.loads(result.stdout)["check"] == "prop2"

    def test_wrong_model_kind(self, runner, model_file):
        """Test property 2 needs a net."""
        result = runner.invoke(
            app, ["verify", str(model_file("timed-psystem")), "--prop", "2"]
        )
        assert result.exit_code == 2

    def test_needs_model_or_seed(self, runner):
        """Test verify without input is an input error."""
        result = runner.invoke(app, ["verify", "--prop", "1"])
        assert result.exit_code == 2

    def test_budget_exit_code(self, runner, model_file):
        """Test an exhausted budget is inconclusive."""
        result = runner.invoke(
            app,
            [
                "verify",
                str(model_file("branching-psystem")),
                "--prop",
                "1",
                "--budget",
                "1",
            ],
        )
        assert result.exit_code == 3


class TestOtherCommands:
    """Test export, fmt and example."""

    def test_export_dot_to_stdout(self, runner, model_file):
        """Test DOT output by default."""
        result = runner.invoke(app, ["export", str(model_file("timed-net"))])
        assert result.exit_code == 0, result.stderr
        assert result.stdout.startswith("digraph net {")

    def test_export_files(self, runner, model_file, tmp_path):
        """Test DOT and JSON files are written."""
        dot = tmp_path / "model.dot"
        document = tmp_path / "model.json"
        result = runner.invoke(
            app,
            [
                "export",
                str(model_file("timed-psystem")),
                "--dot",
                str(dot),
                "--json",
                str(document),
            ],
        )
        assert result.exit_code == 0, result.stderr
        assert "cluster_membrane_2" in dot.read_text()
        assert json.loads(document.read_text())["kind"] == "psystem"

    def test_fmt_is_canonical(self, runner, model_file):
        """Test formatting a formatted model changes nothing."""
        path = model_file("branching-net")
        first = runner.invoke(app, ["fmt", str(path)])
        assert first.exit_code == 0, first.stderr
        path.write_text(first.stdout, encoding="utf-8")
        second = runner.invoke(app, ["fmt", str(path)])
        assert second.stdout == first.stdout

    def test_example_lists_and_prints(self, runner):
        """Test example listing and printing."""
        listing = runner.invoke(app, ["example"])
        assert listing.exit_code == 0
        assert "timed-psystem" in listing.stdout
        printed = runner.invoke(app, ["example", "timed-net"])
        assert printed.stdout.startswith("# The Petri net")

    def test_unknown_example(self, runner):
        """Test unknown example names are input errors."""
        result = runner.invoke(app, ["example", "nope"])
        assert result.exit_code == 2
        assert "Unknown example" in result.stderr
