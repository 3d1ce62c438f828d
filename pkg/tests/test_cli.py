"""Command line behavior: outputs, formats, exit codes, resume."""

import json

import pytest

from socgraph.cli import main

TRIANGLE = "3\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n"
SWITCH = "4\n0 1\n0 2\n0 3\n1 2\n2 1\n1 3\n2 3\n"
DIRECTED_3CYCLE = "3\n0 1\n1 2\n2 0\n"


@pytest.fixture
def triangle_file(tmp_path):
    p = tmp_path / "triangle.graph"
    p.write_text(TRIANGLE)
    return str(p)


@pytest.fixture
def switch_file(tmp_path):
    p = tmp_path / "switch.graph"
    p.write_text(SWITCH)
    return str(p)


class TestAnalyze:
    def test_json_record(self, triangle_file, capsys):
        assert main(["analyze", triangle_file, "--verify", "--games"]) == 0
        rec = json.loads(capsys.readouterr().out)
        assert rec["soc"] is True
        assert rec["chordless_soc"] is False
        assert rec["noncausal_cycle"] == [0, 1, 2]
        assert rec["verdict"] == "consistent"
        assert rec["game"]["violated"] is True

    def test_tsv(self, switch_file, capsys):
        assert main(["analyze", switch_file, "--format", "tsv"]) == 0
        out = capsys.readouterr().out
        assert "\t" in out and "soc" in out

    def test_missing_file(self, tmp_path):
        assert main(["analyze", str(tmp_path / "nope")]) == 2

    def test_bad_graph(self, tmp_path, capsys):
        p = tmp_path / "bad.graph"
        p.write_text("2\n0 5\n")
        assert main(["analyze", str(p)]) == 2
        assert "error" in capsys.readouterr().err


class TestSurvey:
    def test_summary_to_stderr(self, capsys):
        assert main(["survey", "3", "--verify"]) == 0
        captured = capsys.readouterr()
        assert captured.err.strip() == "16 classes, 8 soc, 8 consistent, 8 inadmissible"
        lines = captured.out.strip().split("\n")
        assert len(lines) == 16
        assert all(json.loads(l)["n"] == 3 for l in lines)

    def test_plain_summary(self, capsys):
        assert main(["survey", "3"]) == 0
        assert (
            capsys.readouterr().err.strip()
            == "16 classes, 8 soc, 7 chordless, 1 noncausal"
        )

    def test_six_requires_flag(self, capsys):
        assert main(["survey", "6"]) == 2

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "records.jsonl"
        assert main(["survey", "2", "--output", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert len(out.read_text().strip().split("\n")) == 3

    def test_resume_skips_and_counts(self, tmp_path, capsys):
        full = tmp_path / "full.jsonl"
        assert main(["survey", "3", "--output", str(full)]) == 0
        lines = full.read_text().strip().split("\n")
        partial = tmp_path / "partial.jsonl"
        partial.write_text("\n".join(lines[:10]) + "\n")
        capsys.readouterr()
        assert main(["survey", "3", "--resume", str(partial)]) == 0
        captured = capsys.readouterr()
        emitted = captured.out.strip().split("\n")
        assert emitted == lines[10:]
        # the summary still covers all sixteen classes
        assert captured.err.strip().startswith("16 classes")

    def test_jobs_byte_identical(self, capsys):
        assert main(["survey", "3", "--verify"]) == 0
        one = capsys.readouterr()
        assert main(["survey", "3", "--verify", "--jobs", "2"]) == 0
        two = capsys.readouterr()
        assert one.out == two.out


class TestVerify:
    def test_consistent(self, switch_file, capsys):
        assert main(["verify", switch_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["status"] == "consistent"

    def test_skip_vs_force(self, tmp_path, capsys):
        p = tmp_path / "c3.graph"
        p.write_text(DIRECTED_3CYCLE)
        assert main(["verify", str(p)]) == 0
        assert json.loads(capsys.readouterr().out)["status"] == "skipped"
        assert main(["verify", str(p), "--force"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["status"] == "counterexample"
        assert out["counterexample"]["fixed_points"]

    def test_budget_exit_code(self, triangle_file):
        assert main(["verify", triangle_file, "--budget", "5"]) == 3


class TestGame:
    def test_triangle_report(self, triangle_file, capsys):
        assert main(["game", triangle_file, "--parties", "0,1,2"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["violated"] is True
        assert rep["win"] == {"num": 1, "den": 1}
        assert rep["bound"] == {"num": 5, "den": 6}

    def test_scan(self, triangle_file, capsys):
        assert main([
            "game", triangle_file, "--parties", "0,1,2",
            "--scan", "20", "--seed", "1",
        ]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert 0 <= rep["scan_best"]["num"] <= rep["scan_best"]["den"]

    def test_no_eligible_cycle(self, switch_file, capsys):
        assert main(["game", switch_file, "--parties", "1,2"]) == 2

    def test_bad_parties(self, triangle_file):
        assert main(["game", triangle_file, "--parties", "a,b"]) == 2


class TestFixedPoint:
    def test_prediction_starved(self, tmp_path, capsys):
        g = tmp_path / "pair.graph"
        # pair with a common parent: 2 -> 0, 2 -> 1, 0 <-> 1
        g.write_text("3\n2 0\n2 1\n0 1\n1 0\n")
        mu = tmp_path / "mu.txt"
        # 0 and 1 relay on their bit; 2 always selects node 0.  Node 1 never
        # hears from 2, so the relay loop stays down and 0 gets nothing.
        mu.write_text("0 1\n0 1\n1 1\n")
        assert main(["fixed-point", str(g), str(mu)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == {"predicted_point": [0, 0, 1]}

    def test_prediction_delivered(self, tmp_path, capsys):
        g = tmp_path / "pair.graph"
        g.write_text("3\n2 0\n2 1\n0 1\n1 0\n")
        mu = tmp_path / "mu.txt"
        # both parents of node 0 select it unconditionally
        mu.write_text("0 1\n1 1\n1 1\n")
        assert main(["fixed-point", str(g), str(mu)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == {"predicted_point": [1, 0, 1]}

    def test_tsv(self, tmp_path, capsys):
        g = tmp_path / "single.graph"
        g.write_text("1\n")
        mu = tmp_path / "mu.txt"
        mu.write_text("0 0\n")
        assert main(["fixed-point", str(g), str(mu), "--format", "tsv"]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_self_loop_rejected(self, tmp_path):
        g = tmp_path / "loop.graph"
        g.write_text("1\n0 0\n")
        mu = tmp_path / "mu.txt"
        mu.write_text("0 0\n")
        assert main(["fixed-point", str(g), str(mu)]) == 2

    def test_bad_mu(self, tmp_path):
        g = tmp_path / "pair.graph"
        g.write_text("2\n0 1\n")
        mu = tmp_path / "mu.txt"
        mu.write_text("0 7\n0 0\n")
        assert main(["fixed-point", str(g), str(mu)]) == 2


class TestUsage:
    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_no_command(self):
        assert main([]) == 2
