import io
import json
import subprocess
import sys

import pytest

from stieltjes_schur.cli import main

TENSOR = {"n": 2, "max_degree": 2, "entries": [
    {"idx": [0, 0], "val": 1}, {"idx": [1, 1], "val": 1},
    {"idx": [1, 0], "val": 2}, {"idx": [2, 1], "val": "1/2"}]}


def run(argv, stdin, monkeypatch, capsys):
    """Call the CLI in-process; returns (exit code, parsed stdout or None, parsed stderr or None)."""
    text = stdin if isinstance(stdin, str) else json.dumps(stdin)
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, json.loads(out) if out else None, json.loads(err) if err else None


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin: run(argv, stdin, monkeypatch, capsys)


class TestCommands:
    def test_indices(self, cli):
        code, out, _ = cli(["indices"], [2, 3, 5, 9, 17, 33])
        assert code == 0
        assert out == {"indices": [1, 2], "nu": [1, 2], "mu": [1, 2], "regular": True}

    def test_schur_even(self, cli):
        code, out, _ = cli(["schur"], [2, 3, 5, 9])
        assert code == 0
        assert out["atoms"] == [{"m": ["1/2"], "l": ["4/3"]}, {"m": ["9/2"], "l": ["1/6"]}]
        assert out["tail_contract"] == "o(1)"

    def test_schur_odd(self, cli):
        _, out, _ = cli(["schur", "--parity", "odd"], {"moments": [1, 1, 1]})
        assert out["atoms"] == [{"m": ["1/1"], "l": None}]
        assert out["tail"]["contract"] == "o(z)"

    def test_schur_ab(self, cli):
        _, out, _ = cli(["schur", "--kind", "ab"], [1, 1, 1, 1])
        assert out["atoms"] == [{"b": "1/1", "a": ["-1/1", "1/1"]}]

    def test_decimal_input_is_exact(self, cli):
        _, out, _ = cli(["schur"], "[0.5, 0.5]")
        # half a point mass at 1: -1/(2z) - 1/(4 l z**2) forces l = 1/2
        assert out["atoms"] == [{"m": ["2/1"], "l": ["1/2"]}]

    def test_resolvent(self, cli):
        code, out, _ = cli(["resolvent"], [1, 1])
        assert code == 0
        assert out["det"] == "1"
        assert out["matrix"] == [[["1/1"], ["1/1"]], [["0/1", "-1/1"], ["1/1", "-1/1"]]]
        assert out["factorization"]["ok"]

    def test_expand_with_tail(self, cli):
        _, out, _ = cli(["expand", "--order", "4"], {"moments": [1, 1], "tau": [0, -1]})
        assert out["series"]["coeffs"] == ["-1/1", "-1/1", "-1/1", "-2/1"]
        # the matrix route tracks precision more conservatively; shared terms agree
        shared = out["moebius"]["order"]
        assert shared >= 3
        assert out["moebius"]["coeffs"] == out["series"]["coeffs"][:shared]

    def test_indeterminacy(self, cli):
        _, out, _ = cli(["indeterminacy"], [2, 3, 5, 9, 17, 33])
        assert (out["sumP"], out["sumQ"], out["sumM"], out["sumL"]) == ("5/1", "8/1", "5/1", "3/2")

    def test_verify(self, cli):
        code, out, _ = cli(["verify"], {"n": 1, "atoms": [{"node": ["1"], "weight": "1"},
                                                          {"node": ["2"], "weight": "1"}]})
        assert code == 0 and out["ok"] and out["levels"] == 2

    def test_decompose_and_solve(self, cli):
        _, out, _ = cli(["decompose"], TENSOR)
        assert out["diagonals"] == [{"key": [0, 0], "moments": ["1/1", "2/1", "0/1"]},
                                    {"key": [1, 0], "moments": ["2/1", "3/2"]}]
        _, out, _ = cli(["solve", "--key", "1,0"], TENSOR)
        assert out["key"] == [1, 0] and out["prefactor"] == [1, 0]
        _, out, _ = cli(["solve"], TENSOR)
        assert out["mismatches"] == [] and out["errors"] == []

    def test_pipe_decompose_into_schur(self, cli):
        _, diagonals, _ = cli(["decompose"], TENSOR)
        code, out, _ = cli(["schur", "--parity", "auto"], diagonals)
        assert code == 0
        assert [d["key"] for d in out["diagonals"]] == [[0, 0], [1, 0]]

    def test_pipe_schur_into_resolvent_keeps_key(self, cli):
        _, schur, _ = cli(["schur"], {"moments": [1, 1], "key": [1, 0]})
        _, out, _ = cli(["resolvent"], schur)
        assert out["prefactor"] == [1, 0]

    def test_output_file(self, cli, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = cli(["indices", "-o", str(target)], [1, 1])
        assert code == 0 and out is None
        assert json.loads(target.read_text())["indices"] == [1]


class TestErrors:
    def test_malformed_json_exits_two_with_position(self, cli):
        code, out, err = cli(["indices"], "[1, 1,\n 2")
        assert code == 2 and out is None
        assert err["error"] == "InputFormatError" and err["line"] == 2

    def test_wrong_shape_exits_two(self, cli):
        code, _, err = cli(["schur"], {"values": [1]})
        assert code == 2 and err["error"] == "InputFormatError"

    def test_floats_in_fraction_strings_refused(self, cli):
        code, _, _ = cli(["schur"], '["1/0"]')
        assert code == 2

    def test_domain_error_exits_one(self, cli):
        code, _, err = cli(["schur"], [1, 1, 2, 4])
        assert code == 1
        assert err == {"error": "SingularStep", "level": 4,
                       "message": "level 4 sequence vanishes; zero pivot"}

    def test_truncated_reports_counts(self, cli):
        code, _, err = cli(["schur"], [0, 1, 0])
        assert code == 1 and err["error"] == "Truncated"

    def test_failed_diagonal_reported_inline(self, cli):
        code, out, _ = cli(["schur"], {"diagonals": [{"key": [0, 0], "moments": ["1", "1"]},
                                                     {"key": [1, 0], "moments": ["0", "3"]}]})
        assert code == 0
        assert out["diagonals"][1]["error"]["error"] == "Truncated"
        assert out["diagonals"][1]["error"]["key"] == [1, 0]

    def test_missing_file_exits_two(self, cli, tmp_path):
        code, _, err = cli(["indices", str(tmp_path / "absent.json")], "")
        assert code == 2 and "cannot read" in err["message"]


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "stieltjes_schur", "schur"]
    runs = [subprocess.run(cmd, input="[2, 3, 5, 9]", capture_output=True, text=True, check=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1]
    assert runs[0].endswith("}\n")
