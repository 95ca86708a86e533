import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from mrdp.cli import main, run

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


def result(argv):
    code, report = run(argv)
    assert code == 0, report.get("error")
    return report["result"]


def cli_bytes(argv):
    proc = subprocess.run([sys.executable, "-m", "mrdp", *argv], capture_output=True, check=False)
    return proc.returncode, proc.stdout


class TestRd:
    def test_chain(self):
        assert result(["rd", "chain", "--f", "0.5,0.5", "--g", "1,1"])["value"] == pytest.approx(math.log(2))

    def test_partition(self):
        assert result(["rd", "partition", "--f", "1,1,1", "--g", "3,3,3"])["value"] == pytest.approx(3 * math.log(3))
        assert result(["rd", "partition", "--f", "0.25,0.25,0.5"])["value"] == pytest.approx(
            -(0.5 * math.log(0.25) + 0.5 * math.log(0.5))
        )

    def test_power_set_additive(self):
        out = result(["rd", "poset", "--poset", d("powerset_abc.json"), "--F", d("additive_abc.json")])
        expected = -sum(p * math.log(p) for p in (0.2, 0.3, 0.5))
        assert out["value"] == pytest.approx(expected, abs=1e-12)
        assert round(out["value"], 6) == 1.029653
        assert out["n_chains"] == 6

    def test_tie_break_witness(self):
        out = result(["rd", "poset", "--poset", d("powerset_ab.json"), "--F", d("additive_ab_half.json")])
        assert out["witness_chain"] == ["", "a", "a,b"]

    def test_diamond(self):
        out = result(["rd", "poset", "--poset", d("diamond.json"), "--F", d("diamond_F.json")])
        a = -(0.3 * math.log(0.3) + 0.7 * math.log(0.7))
        b = -(0.6 * math.log(0.6) + 0.4 * math.log(0.4))
        assert out["value"] == pytest.approx(min(a, b))
        assert out["witness_chain"] == ["l", "a", "g"]

    def test_sampled(self):
        code, report = run(["rd", "poset", "--poset", d("powerset_abc.json"), "--F", d("additive_abc.json"),
                            "--sample", "5", "--seed", "1"])
        assert code == 0 and report["result"]["approximate"] is True
        assert report["warnings"]

    def test_bundle_parts(self):
        out = result(["rd", "bundle", "--dims", "2,1", "--parts", "0,1,3;0,2"])
        assert out["value"] == pytest.approx(out["separable_sum"], abs=1e-10)


class TestSolve:
    def test_uniform(self):
        out = result(["mrdp", "uniform", "--n", "5"])
        assert abs(out["entropy"] - math.log(5)) < 1e-12

    def test_independence(self):
        assert result(["mrdp", "independence", "--p1", "0.5", "--p2", "0.5"])["x"] == 0.25

    def test_conditional_verify(self):
        code, report = run(["mrdp", "conditional", "--p1", "0.2", "--p2", "0.5", "--verify"])
        assert code == 0 and report["verify"]["passed"]
        assert report["result"]["x"] == pytest.approx(0.4)

    def test_interpolate_verify(self):
        code, report = run(["mrdp", "interpolate", "--n", "5", "--knots", "0:0,2:0.6,5:1", "--verify"])
        assert code == 0 and report["verify"]["passed"]

    def test_bundle_height(self):
        code, report = run(["mrdp", "bundle-height", "--dims", "2,3", "--m", "0", "--M", "1", "--verify"])
        assert code == 0
        assert report["result"]["max_rd"] == pytest.approx(math.log(5))

    def test_type_distribution_verify(self):
        code, report = run(["mrdp", "type-distribution", "--D", "0.2,0.5,0.9", "--spans", "1,2,1", "--verify"])
        assert code == 0 and report["verify"]["passed"]

    def test_cardinality(self):
        out = result(["mrdp", "cardinality", "--n", "6", "--M", "3", "--knots", "0:0,3:2,6:3"])
        assert out["values"][3] == 2.0


class TestApps:
    def test_group_test_fix(self):
        out = result(["apps", "group-test", "--N", "10", "--M", "10", "--fix", "5=4"])
        assert out["cost_model"]["slopes"] == pytest.approx([0.8, 1.2])
        assert len(out["history"]) == 2

    def test_group_test_plan(self):
        out = result(["apps", "group-test", "--plan", d("plan.json")])
        assert [g["cost"] for g in out["partition"]["groups"]] == pytest.approx([5, 20, 25])

    def test_queue_types(self):
        out = result(["apps", "queue-types", "--model", d("queues_identical.json"), "--batch", "2,1"])
        assert out["p"] == pytest.approx([0.5, 0.5], abs=1e-12)
        assert out["batch"]["cost_expected"] == pytest.approx(1.5)


class TestExitCodes:
    def test_bad_input(self):
        code, report = run(["mrdp", "conditional", "--p1", "0.7", "--p2", "0.3"])
        assert code == 2 and report["error"]["type"] == "InputError"

    def test_missing_file(self):
        assert run(["rd", "poset", "--poset", "/nonexistent.json", "--F", d("diamond_F.json")])[0] == 2

    def test_undefined(self):
        code, _ = run(["rd", "poset", "--poset", d("diamond.json"), "--F", d("diamond_F.json"),
                       "--G", d("diamond_null_broken.json")])
        assert code == 3

    def test_undefined_chain(self):
        assert run(["rd", "chain", "--f", "0.5,0.5", "--g", "1,0"])[0] == 3

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("MRDP_MAX_CHAINS", "2")
        code, report = run(["rd", "poset", "--poset", d("powerset_abc.json"), "--F", d("additive_abc.json")])
        assert code == 4 and report["error"]["type"] == "EnumerationLimitError"

    def test_verify_failure(self, monkeypatch):
        from mrdp import solvers

        real = solvers.solve_conditional

        def skewed(p1, p2):
            sol = real(p1, p2)
            return solvers.ScalarSolution(sol.x + 0.01, sol.value, sol.derivative, sol.curvature, sol.interval)

        monkeypatch.setattr(solvers, "solve_conditional", skewed)
        assert run(["mrdp", "conditional", "--p1", "0.2", "--p2", "0.5", "--verify"])[0] == 5

    def test_main_prints_json(self, capsys):
        assert main(["rd", "chain", "--f", "1", "--g", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["result"]["value"] == 0.0
        assert set(doc) >= {"conventions", "inputs_digest", "result", "warnings"}

    def test_human(self, capsys):
        main(["mrdp", "uniform", "--n", "2", "--human"])
        assert "entropy: 0.69314718056" in capsys.readouterr().out


class TestDeterminism:
    def test_digest_tracks_inputs(self):
        a = run(["rd", "chain", "--f", "0.5,0.5", "--g", "1,1"])[1]["inputs_digest"]
        b = run(["rd", "chain", "--f", "0.5,0.5", "--g", "1,2"])[1]["inputs_digest"]
        assert a != b

    def test_repeated_runs_identical(self):
        argv = ["rd", "poset", "--poset", d("powerset_ab.json"), "--F", d("additive_ab_half.json")]
        first = cli_bytes(argv)
        assert first[0] == 0
        assert json.loads(first[1])["result"]["witness_chain"] == ["", "a", "a,b"]
        assert cli_bytes(argv) == first
