import json

import pytest

from stabheap import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def summary(out):
    vals = {}
    for line in out.splitlines():
        line = line.lstrip("# ")
        if ": " in line:
            k, v = line.split(": ", 1)
            vals[k] = v
    return vals


class TestDifferential:
    def test_clean_run(self, capsys):
        code, out = run(capsys, "differential", "--ops", "3000",
                        "--capacity", "255", "--seed", "42")
        assert code == 0
        s = summary(out)
        assert s["mismatches"] == "0"
        assert int(s["max_steps"]) <= int(s["step_budget"])

    def test_all_removals_on_empty(self, capsys):
        code, out = run(capsys, "differential", "--ops", "200",
                        "--capacity", "63", "--op-mix", "0.0")
        assert code == 0
        s = summary(out)
        assert s["heap_empty_responses"] == "200"
        assert s["mismatches"] == "0"

    def test_insert_only_overflows_exactly(self, capsys):
        code, out = run(capsys, "differential", "--ops", "20",
                        "--capacity", "15", "--op-mix", "1.0")
        assert code == 0
        s = summary(out)
        assert s["heap_full_responses"] == "5"
        assert s["final_size"] == "15"

    def test_deterministic_output(self, capsys):
        _, out1 = run(capsys, "differential", "--ops", "500", "--seed", "7",
                      "--capacity", "127", "--format", "csv")
        _, out2 = run(capsys, "differential", "--ops", "500", "--seed", "7",
                      "--capacity", "127", "--format", "csv")
        assert out1 == out2


class TestLemmaCommands:
    @pytest.mark.parametrize("which", ["1", "2", "3", "4"])
    def test_small_runs_pass(self, capsys, which):
        code, out = run(capsys, "lemma", which, "--trials", "25",
                        "--capacity", "31", "--ops", "60", "--seed", "11")
        assert code == 0
        assert summary(out)["violations"] == "0"

    def test_lemma4_reports_fit(self, capsys):
        code, out = run(capsys, "lemma", "4", "--trials", "120",
                        "--capacity", "127", "--seed", "5")
        assert code == 0
        s = summary(out)
        assert "linear_slope" in s
        assert float(s["linear_slope"]) < 1.0


class TestHistoryCommands:
    def test_availability_clean(self, capsys):
        code, out = run(capsys, "history", "availability", "--trials", "40",
                        "--ops", "80", "--capacity", "31", "--seed", "3")
        assert code == 0
        assert summary(out)["violations"] == "0"

    def test_stabilization_clean_with_period_stats(self, capsys):
        code, out = run(capsys, "history", "stabilization", "--trials", "25",
                        "--ops", "140", "--capacity", "31", "--seed", "3")
        assert code == 0
        s = summary(out)
        assert s["violations"] == "0"
        assert s["histories_without_legitimate_point"] == "0"
        assert int(s["period_max"]) <= 2 * 31 + 2

    def test_always_fail_strawman_is_available(self, capsys):
        code, out = run(capsys, "history", "availability", "--trials", "10",
                        "--ops", "60", "--strawman", "always-fail")
        assert code == 0
        assert summary(out)["violations"] == "0"

    def test_always_fail_strawman_is_not_stabilizing(self, capsys):
        # failing every insert below capacity breaks the strict insert rule
        code, out = run(capsys, "history", "stabilization", "--trials", "4",
                        "--ops", "60", "--strawman", "always-fail")
        assert code == 1
        assert summary(out)["violations"] != "0"

    def test_reset_strawman_is_stabilizing(self, capsys):
        code, out = run(capsys, "history", "stabilization", "--trials", "10",
                        "--ops", "120", "--capacity", "31",
                        "--strawman", "reset")
        assert code == 0
        s = summary(out)
        assert s["violations"] == "0"
        assert s["histories_without_legitimate_point"] == "0"


class TestSnapshotCommands:
    def test_dump_then_load(self, capsys, tmp_path):
        path = tmp_path / "state.json"
        code, _ = run(capsys, "snapshot", "dump", "--mode", "corrupt",
                      "--items", "9", "--faults", "2", "--capacity", "15",
                      "--seed", "4", "--out", str(path))
        assert code == 0
        code, out = run(capsys, "snapshot", "load", "--in", str(path))
        assert code == 0
        doc = json.loads(out)
        assert doc["m"] >= 0
        assert len(doc["active_members"]) == 15

    def test_dump_is_deterministic(self, capsys):
        _, out1 = run(capsys, "snapshot", "dump", "--mode", "arbitrary",
                      "--capacity", "15", "--seed", "8")
        _, out2 = run(capsys, "snapshot", "dump", "--mode", "arbitrary",
                      "--capacity", "15", "--seed", "8")
        assert out1 == out2


class TestConfigDocument:
    def test_config_file_matches_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"seed": 7, "capacity": 127, "ops": 500,
                                   "format": "csv"}))
        _, from_cfg = run(capsys, "differential", "--config", str(cfg))
        _, from_flags = run(capsys, "differential", "--seed", "7",
                            "--capacity", "127", "--ops", "500",
                            "--format", "csv")
        assert from_cfg == from_flags

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"seed": 7, "ops": 100}))
        _, out = run(capsys, "differential", "--config", str(cfg),
                     "--ops", "50")
        assert summary(out)["ops"] == "50"

    def test_unknown_config_keys_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"sede": 7}))
        with pytest.raises(SystemExit):
            run(capsys, "differential", "--config", str(cfg))

    def test_report_written_to_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.csv"
        code, out = run(capsys, "differential", "--ops", "50",
                        "--capacity", "15", "--format", "csv",
                        "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert "# mismatches: 0" in out_path.read_text()
