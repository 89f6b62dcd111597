"""CLI: flags, exit codes, JSON round-trips, instance files."""

import json

import pytest

from entropy_count.cli import count_string, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCountString:
    def test_basic(self):
        assert count_string(0.0) == "1.00e0"
        assert count_string(16.4009392) == "1.33e7"

    def test_zero_count(self):
        assert count_string(float("-inf")) == "0"

    def test_mantissa_carry(self):
        import math

        # ln(9.999e4): mantissa rounds to 10.00 and must carry
        assert count_string(math.log(9.999e4)) == "1.00e5"


class TestCount:
    def test_graph_with_exact(self, capsys):
        code, out, _ = run(capsys, "count", "--degrees", "3,3,3,3,3,3,3,3", "--exact")
        assert code == 0
        assert "19355" in out
        assert "error_edgeworth" in out

    def test_table_with_exact(self, capsys):
        code, out, _ = run(capsys, "count", "--rows", "2,2", "--cols", "2,2", "--exact")
        assert code == 0
        assert "exact            3" in out

    def test_odd_degrees_count_zero(self, capsys):
        code, out, _ = run(capsys, "count", "--degrees", "1,1,1")
        assert code == 0
        assert "count_edgeworth  0" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "count", "--rows", "5,5", "--cols", "3,7", "--json")
        assert code == 0
        line = out.strip()
        assert json.dumps(json.loads(line), sort_keys=True, separators=(",", ":")) == line

    def test_json_deterministic(self, capsys):
        _, first, _ = run(capsys, "count", "--degrees", "4,4,4,4,3,3,3,3", "--json")
        _, second, _ = run(capsys, "count", "--degrees", "4,4,4,4,3,3,3,3", "--json")
        assert first == second

    def test_infeasible_sum_mismatch(self, capsys):
        code, _, err = run(capsys, "count", "--rows", "1,2", "--cols", "4,4")
        assert code == 2
        assert "infeasible" in err

    def test_infeasible_degrees(self, capsys):
        code, _, _ = run(capsys, "count", "--degrees", "5,0,0")
        assert code == 2

    def test_solver_failure_exit(self, capsys):
        code, _, err = run(capsys, "count", "--degrees", "1.9,1.9,0.1,0.1")
        assert code == 3
        assert "solver failure" in err

    def test_flag_conflicts(self, capsys):
        code, _, _ = run(capsys, "count", "--rows", "2,2", "--cols", "2,2", "--degrees", "1,1,1,1")
        assert code == 1
        code, _, _ = run(capsys, "count", "--rows", "2,2")
        assert code == 1
        code, _, _ = run(capsys, "count")
        assert code == 1

    def test_bad_number_list_exits_one(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["count", "--rows", "2,banana", "--cols", "2,2"])
        assert info.value.code == 1

    def test_missing_subcommand_exits_one(self, capsys):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1


class TestInstanceFile:
    def test_table_file_with_oracle_option(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps({"rows": [2, 2], "cols": [2, 2], "options": {"oracle": True}}))
        code, out, _ = run(capsys, "count", "--input", str(path))
        assert code == 0
        assert "exact            3" in out

    def test_graph_file(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps({"degrees": [3, 3, 3, 3, 3, 3, 3, 3]}))
        code, out, _ = run(capsys, "count", "--input", str(path))
        assert code == 0
        assert "model            graph" in out

    def test_options_tol_respected(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps({"rows": [7, 2], "cols": [3, 6], "options": {"max_iter": 0}}))
        code, _, err = run(capsys, "count", "--input", str(path))
        assert code == 3

    def test_both_kinds_rejected(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps({"rows": [2], "cols": [2], "degrees": [1, 1, 1, 1]}))
        code, _, _ = run(capsys, "count", "--input", str(path))
        assert code == 1

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "count", "--input", "/nonexistent/inst.json")
        assert code == 1

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text("{not json")
        code, _, _ = run(capsys, "count", "--input", str(path))
        assert code == 1


class TestOracleCommand:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "oracle", "--rows", "2,2", "--cols", "2,2")
        assert code == 0
        assert "count     3" in out

    def test_graph_values(self, capsys):
        code, out, _ = run(capsys, "oracle", "--degrees", "2,2,2")
        assert code == 0 and "count     1" in out
        code, out, _ = run(capsys, "oracle", "--degrees", "1,1,1,1")
        assert code == 0 and "count     3" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "oracle", "--rows", "4,4", "--cols", "4,4", "--json")
        assert code == 0
        line = out.strip()
        doc = json.loads(line)
        assert doc["count"] == 5
        assert json.dumps(doc, sort_keys=True, separators=(",", ":")) == line

    def test_budget_exit(self, capsys, monkeypatch):
        monkeypatch.setenv("ENTROPY_COUNT_BUDGET", "5")
        code, _, err = run(capsys, "oracle", "--degrees", "3,3,3,3,3,3,3,3")
        assert code == 5
        assert "budget" in err

    def test_non_integer_rejected(self, capsys):
        code, _, _ = run(capsys, "oracle", "--rows", "1.5,0.5", "--cols", "1,1")
        assert code == 2


class TestDiag:
    def test_plain(self, capsys):
        code, out, _ = run(capsys, "diag", "--rows", "100,100,100", "--cols", "100,100,100")
        assert code == 0
        assert "density" in out

    def test_no_warnings(self, capsys):
        code, out, _ = run(capsys, "diag", "--degrees", "3,3,3,3,3,3,3,3")
        assert code == 0
        assert "no warnings" in out

    def test_mc_cross_check(self, capsys):
        code, out, _ = run(
            capsys, "diag", "--degrees", "3,3,3,3,3,3,3,3", "--mc-samples", "20000", "--seed", "5"
        )
        assert code == 0
        assert "kappa3" in out

    def test_mc_json_deterministic(self, capsys):
        args = ("diag", "--rows", "3,1", "--cols", "2,2", "--mc-samples", "20000",
                "--seed", "5", "--json")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second
        line = first.strip()
        assert json.dumps(json.loads(line), sort_keys=True, separators=(",", ":")) == line


class TestRepro:
    def test_repro_three_rows(self, capsys):
        code, out, _ = run(capsys, "repro", "3", "--json")
        doc = json.loads(out.strip())
        assert len(doc["rows"]) == 3
        # the third published row has an odd degree total; the honest
        # recomputation cannot match it, so the table fails overall
        assert doc["rows"][0]["status"] == "ok"
        assert doc["rows"][1]["status"] == "ok"
        assert doc["rows"][2]["status"] == "FAIL"
        assert code == 4

    def test_repro_one_flags_long_thin_row(self, capsys):
        code, out, _ = run(capsys, "repro", "1", "--json")
        doc = json.loads(out.strip())
        by_shape = {(r["m"], r["n"]): r for r in doc["rows"]}
        assert by_shape[(3, 49)]["status"] == "flagged"
        assert by_shape[(3, 49)]["flagged"] is True
        assert by_shape[(10, 10)]["status"] == "ok"
        assert by_shape[(3, 9)]["status"] == "ok"
        assert by_shape[(18, 18)]["status"] == "ok"
        assert code == 4  # known mismatched rows stay red

    def test_repro_json_round_trip(self, capsys):
        _, out, _ = run(capsys, "repro", "3", "--json")
        line = out.strip()
        assert json.dumps(json.loads(line), sort_keys=True, separators=(",", ":")) == line

    def test_repro_bad_table_number(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["repro", "9"])
        assert info.value.code == 1
