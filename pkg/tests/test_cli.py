import json
import subprocess
import sys

import pytest

from ampqc.cli import ConfigError, main, parse_data_file, parse_values
from ampqc.transcript import SCHEMA_VERSION, Transcript


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestRun:
    def test_protocol_two_sum(self, capsys):
        code, out, _ = run(["run", "--protocol", "two", "--n", "3", "--values", "2,0,5", "--d", "auto",
                            "--seed", "7", "--f", "sum"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["f"] == 7
        assert doc["schema_version"] == SCHEMA_VERSION

    def test_intercept_aborts(self, capsys):
        code, out, err = run(["run", "--protocol", "one", "--eve", "intercept", "--decoys", "50", "--seed", "7"], capsys)
        assert code == 2
        assert json.loads(out)["aborted"] is True
        assert "aborted" in err

    def test_missing_flag(self, capsys):
        code, _, err = run(["run", "--n", "3"], capsys)
        assert code == 1 and "usage" in err

    def test_unknown_subcommand(self, capsys):
        assert run(["teleport"], capsys)[0] == 1

    def test_bad_eve(self, capsys):
        code, _, err = run(["run", "--protocol", "two", "--values", "1,2", "--eve", "laser"], capsys)
        assert code == 1 and "error" in err

    def test_d_too_small(self, capsys):
        assert run(["run", "--protocol", "two", "--values", "1,6", "--d", "3"], capsys)[0] == 1

    def test_n_mismatch(self, capsys):
        assert run(["run", "--protocol", "two", "--n", "2", "--values", "1,2,3"], capsys)[0] == 1

    def test_protocol_one_lists(self, capsys):
        code, out, _ = run(["run", "--protocol", "one", "--values", "1,1,3;3", "--strict-d", "--f", "histogram",
                            "--seed", "1"], capsys)
        assert code == 0
        assert json.loads(out)["result"]["f"] == [[1, 2], [3, 2]]

    def test_data_file_and_output(self, tmp_path, capsys):
        data = tmp_path / "inputs.txt"
        data.write_text("# participants\n1 3\n\n2 2\n")
        out = tmp_path / "t.json"
        code, stdout, err = run(["run", "--protocol", "one", "--data", str(data), "--output", str(out),
                                 "--strict-d", "--seed", "3"], capsys)
        assert code == 0 and stdout == ""
        t = Transcript.from_json(out.read_text())
        assert t.config["n"] == 3
        assert t.result["counts"] == [0, 1, 2, 1]
        assert err.strip() == "f=8"

    def test_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert run(["run", "--protocol", "two", "--values", "4,1,6,0", "--seed", "11", "--output", str(p)],
                       capsys)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_env_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("AMPQC_SEED", "5")
        a = run(["run", "--protocol", "two", "--values", "1,2,3"], capsys)[1]
        b = run(["run", "--protocol", "two", "--values", "1,2,3", "--seed", "5"], capsys)[1]
        monkeypatch.setenv("AMPQC_SEED", "6")
        c = run(["run", "--protocol", "two", "--values", "1,2,3"], capsys)[1]
        assert a == b != c


class TestSwapcheck:
    def test_exhaustive(self, capsys):
        code, out, _ = run(["swapcheck", "--d", "2", "--m", "2", "--exhaustive"], capsys)
        report = json.loads(out)
        assert code == 0 and report["cases"] == 16 and report["failures"] == 0

    def test_sampled(self, capsys):
        code, out, _ = run(["swapcheck", "--d", "3", "--m", "2", "--samples", "20", "--seed", "7"], capsys)
        assert code == 0 and json.loads(out)["cases"] == 20

    def test_cap(self, capsys):
        assert run(["swapcheck", "--d", "7", "--m", "5"], capsys)[0] == 1

    def test_mismatch_exit(self, monkeypatch, capsys):
        import ampqc.cli as cli

        monkeypatch.setattr(cli, "run_swap_check", lambda *a, **k: {"cases": 1, "failures": 1, "details": []})
        assert run(["swapcheck", "--d", "2", "--m", "2"], capsys)[0] == 3


class TestExperiment:
    def test_protocol_two(self, capsys):
        code, out, _ = run(["experiment", "--protocol", "two", "--trials", "50", "--seed", "1"], capsys)
        assert code == 0
        assert json.loads(out)["statistics"]["correct_exact"]["mean"] == 1.0

    def test_detection(self, capsys):
        code, out, _ = run(["experiment", "--protocol", "detection", "--dims", "2,3,5", "--decoys", "5000",
                            "--seed", "2"], capsys)
        doc = json.loads(out)
        assert code == 0
        for d in (2, 3, 5):
            stat = doc["statistics"][f"d={d}"]
            assert abs(stat["mean"] - doc["expected"][f"d={d}"]) <= 3 * stat["stderr"] + 1e-3

    def test_zero_trials(self, capsys):
        assert run(["experiment", "--protocol", "one", "--trials", "0"], capsys)[0] == 1

    def test_reproducible(self, capsys):
        argv = ["experiment", "--protocol", "one", "--trials", "20", "--seed", "4", "--strict-d"]
        assert run(argv, capsys)[1] == run(argv, capsys)[1]


class TestApps:
    def test_vote(self, capsys):
        code, out, _ = run(["vote", "--m", "2", "--values", "1,1,2"], capsys)
        assert code == 0 and json.loads(out) == {"tally": [2, 1]}

    def test_multi_vote(self, capsys):
        code, out, _ = run(["vote", "--m", "2", "--mode", "multi-vote", "--values", "1,1;2"], capsys)
        assert json.loads(out) == {"tally": [2, 1]}

    def test_invalid_vote(self, capsys):
        assert run(["vote", "--m", "2", "--values", "3,1"], capsys)[0] == 1

    def test_rank(self, capsys):
        code, out, _ = run(["rank", "--values", "5,2,5"], capsys)
        assert json.loads(out) == {"ranking": [2, 5, 5], "multiplicities": [[2, 1], [5, 2]]}

    def test_survey(self, capsys):
        assert json.loads(run(["survey", "--values", "2,0,5"], capsys)[1]) == {"sum": 7}

    def test_survey_lists(self, tmp_path, capsys):
        data = tmp_path / "s.txt"
        data.write_text("3\n4\n")
        assert json.loads(run(["survey", "--data", str(data), "--lists"], capsys)[1]) == {"sum": 7}

    def test_survey_needs_input(self, capsys):
        assert run(["survey"], capsys)[0] == 1


class TestParsing:
    def test_values(self):
        assert parse_values("2,0,5") == [[2], [0], [5]]
        assert parse_values("1,1,3;3") == [[1, 1, 3], [3]]
        assert parse_values("1;") == [[1], []]
        with pytest.raises(ConfigError):
            parse_values("1,x")

    def test_data_file(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1 2\n# comment\n\n7\n")
        assert parse_data_file(p) == [[1, 2], [], [7]]
        p.write_text("1 -2\n")
        with pytest.raises(ConfigError):
            parse_data_file(p)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ampqc", "survey", "--values", "1,2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"sum": 3}
