import json

import pytest

from belex.cli import main

from conftest import fixture_path


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRun:
    def test_empty_scenario_table(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run",
            "--network", fixture_path("sample_network.json"),
            "--scenario", fixture_path("empty_scenario.json"),
        )
        assert code == 0
        assert "t=0  grounded: (none)" in out
        # With no evidence, every belief equals the prior-propagated marginal.
        assert "b_1          pi=0.300000   lambda=1.000000   bel=0.300000" in out
        assert "b_2          pi=0.380000   lambda=1.000000   bel=0.380000" in out

    def test_json_snapshot_values(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run",
            "--network", fixture_path("sample_network.json"),
            "--scenario", fixture_path("sample_scenario.json"),
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["snapshots"]) == 3
        bel = doc["snapshots"][2]["nodes"]["B"]["bel"]
        assert abs(bel[0] - 0.429) < 1e-3

    def test_missing_network_file(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--network", "/nonexistent/net.json"
        )
        assert code == 1
        assert "error" in err

    def test_invalid_network_document(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nodes": [{"id": "X", "states": ["a"], "prior": [1.0]}]}')
        code, _, err = run_cli(capsys, "run", "--network", str(bad))
        assert code == 1
        assert "invalid_network" in err


class TestInject:
    def test_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "inject", "--inject", fixture_path("sample_trajectory_inject.json")
        )
        assert code == 0
        assert "t=2" in out and "b_3" in out


class TestExplain:
    def test_golden_text_from_injected_vectors(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "explain",
            "--inject", fixture_path("sample_trajectory_inject.json"),
            "--focal", "B=b1",
            "--from", "1",
            "--to", "2",
            "--support", "causal",
            "--format", "text",
        )
        assert code == 0
        assert "10%" in out
        assert "b_3" in out
        assert "overwhelming evidence against" in out

    def test_json_format_carries_plan_and_text(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "explain",
            "--inject", fixture_path("balanced_evidence_inject.json"),
            "--focal", "B=b_1",
            "--from", "1",
            "--to", "2",
            "--support", "causal",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["plan"]["case"] == "eliminate_and_reinstate"
        assert "remains fixed" in doc["text"]

    def test_network_plus_scenario_source(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "explain",
            "--network", fixture_path("sample_network.json"),
            "--scenario", fixture_path("sample_scenario.json"),
            "--focal", "B=b1",
            "--from", "1",
            "--to", "2",
            "--support", "causal",
        )
        assert code == 0
        assert "10%" in out

    def test_inject_and_network_are_exclusive(self, capsys):
        code, _, err = run_cli(
            capsys,
            "explain",
            "--inject", fixture_path("sample_trajectory_inject.json"),
            "--network", fixture_path("sample_network.json"),
            "--focal", "B=b1",
            "--from", "1",
            "--to", "2",
        )
        assert code == 1
        assert "invalid_request" in err

    def test_malformed_focal(self, capsys):
        code, _, err = run_cli(
            capsys,
            "explain",
            "--inject", fixture_path("sample_trajectory_inject.json"),
            "--focal", "Bb1",
            "--from", "1",
            "--to", "2",
        )
        assert code == 1
        assert "NODE=state" in err

    def test_unknown_state(self, capsys):
        code, _, err = run_cli(
            capsys,
            "explain",
            "--inject", fixture_path("sample_trajectory_inject.json"),
            "--focal", "B=b9",
            "--from", "1",
            "--to", "2",
        )
        assert code == 1
        assert "unknown_state" in err

    def test_nothing_to_explain_window(self, capsys, tmp_path):
        doc = {
            "node": "X",
            "timesteps": [
                {"pi": [0.5, 0.5], "lambda": [1, 1]},
                {"pi": [0.5, 0.5], "lambda": [1, 1]},
            ],
        }
        path = tmp_path / "flat.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(
            capsys,
            "explain",
            "--inject", str(path),
            "--focal", "X=x_1",
            "--from", "0",
            "--to", "1",
        )
        assert code == 1
        assert "nothing_to_explain" in err


class TestVerify:
    def test_all_claims_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--claims", "all", "--trials", "150", "--seed", "42"
        )
        assert code == 0
        assert "result: PASS" in out

    def test_json_report(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "verify",
            "--claims", "sign_causal,sign_evidential",
            "--trials", "100",
            "--seed", "7",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["claims"] == ["sign_causal", "sign_evidential"]

    def test_unknown_claim(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--claims", "bogus", "--trials", "1")
        assert code == 1
        assert "unknown claims" in err


class TestArgumentErrors:
    def test_usage_errors_exit_one(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["explain", "--focal"])
        assert exc_info.value.code == 1

    def test_unknown_command_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["frobnicate"])
        assert exc_info.value.code == 1
