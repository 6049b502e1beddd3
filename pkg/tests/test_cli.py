import csv
import io
import json
import subprocess
import sys

import pytest

from q2fock import cli, verify
from q2fock.verify import Invariant


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--q", "1/2", "--norm2", "1", "--max-n", "3")
    assert code == 0
    assert json.loads(out) == {
        "q": "1/2",
        "norm2": "1",
        "method": "closed",
        "u": ["1", "1", "5/2", "31/4"],
        "v": ["1", "1", "3/2", "15/4"],
    }


def test_moments_csv_and_all_methods(capsys):
    code, out, _ = run(capsys, "moments", "--q", "0", "--norm2", "1", "--max-n", "4",
                       "--method", "all", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "u", "v"]
    assert [r[1] for r in rows[1:]] == ["1", "1", "2", "5", "14"]


def test_output_is_deterministic(capsys):
    argv = ("moments", "--q", "-1/2", "--norm2", "9/4", "--max-n", "5", "--method", "all")
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_partitions(capsys):
    assert run(capsys, "partitions", "--count", "ncpp", "--n", "4")[1].strip() == "14"
    assert run(capsys, "partitions", "--count", "eps-plus-star", "--n", "4")[1].strip() == "5"
    assert run(capsys, "partitions", "--count", "pp", "--epsilon=-1,-1,1,1")[1].strip() == "2"
    code, out, _ = run(capsys, "partitions", "--list", "ncpp", "--n", "2")
    assert code == 0
    assert json.loads(out) == [
        {"pairs": [[1, 2], [3, 4]], "depth": [0, 0]},
        {"pairs": [[1, 4], [2, 3]], "depth": [0, 1]},
    ]


def test_vexpect_file_and_stdin(capsys, tmp_path, monkeypatch):
    doc = {"q": "1/3", "dimension": 1, "vectors": [["1/2"]], "word": [["-", 0], ["+", 0]]}
    path = tmp_path / "word.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "vexpect", "--file", str(path))[1] == '"1/4"\n'
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(doc)))
    assert run(capsys, "vexpect", "--file", "-")[1] == '"1/4"\n'


def test_vexpect_bad_document(capsys, tmp_path):
    path = tmp_path / "word.json"
    path.write_text('{"q": "1/2"}')
    code, out, err = run(capsys, "vexpect", "--file", str(path))
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "ValueError"


def test_mgf(capsys):
    code, out, _ = run(capsys, "mgf", "--q", "0", "--norm2", "1", "--taylor", "4")
    assert json.loads(out) == {"coefficients": ["1", "1", "2", "5", "14"]}
    code, out, _ = run(capsys, "mgf", "--q", "-1", "--norm2", "1", "--x", "0.5")
    assert json.loads(out)["T"] == pytest.approx(2.0)
    code, _, err = run(capsys, "mgf", "--q", "1/2", "--norm2", "1", "--x", "0.25")
    assert code == 1 and "error" in json.loads(err)


def test_density_csv_with_sidecar(capsys, tmp_path):
    out = tmp_path / "density.csv"
    code, stdout, _ = run(capsys, "density", "--q", "1", "--norm", "1", "--points", "5", "--out", str(out))
    assert code == 0 and stdout == ""
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["x", "density"] and len(rows) == 6
    side = json.loads((tmp_path / "density.csv.json").read_text())
    assert side["kind"] == "density_plus_atoms"
    assert [a["w"] for a in side["atoms"]] == pytest.approx([0.0527864045] * 2)


def test_density_json(capsys):
    code, out, _ = run(capsys, "density", "--q", "0", "--norm", "1", "--points", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["kind"] == "semicircle" and doc["atoms"] == []
    assert [p["density"] for p in doc["points"]] == pytest.approx([0, 1 / 3.141592653589793, 0])


def test_usage_errors_exit_one(capsys):
    code, out, err = run(capsys, "moments", "--q", "0")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "usage"
    assert run(capsys, "nonsense")[0] == 1


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "moments", "--q", "2", "--norm2", "1", "--max-n", "2")
    assert code == 1 and json.loads(err)["error"] == "ValueError"


def test_verify_pass_and_list(capsys):
    code, out, _ = run(capsys, "verify", "--only", "fock.operator_norm", "--only", "combinatorics.epsilon")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["PASS"] * 3
    code, out, _ = run(capsys, "verify", "--list")
    assert json.loads(out) == list(verify.REGISTRY)


def test_verify_failure_exits_two(capsys, monkeypatch):
    registry = {
        "broken.one": Invariant("broken.one", "x", lambda: (False, "boom")),
        "fine.two": Invariant("fine.two", "x", lambda: (True, 0)),
    }
    monkeypatch.setattr(verify, "REGISTRY", registry)
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert code == 2
    assert [d["name"] for d in json.loads(out)] == ["broken.one"]
    code, out, _ = run(capsys, "verify", "--keep-going", "--format", "csv")
    assert code == 2
    assert [r[1] for r in csv.reader(io.StringIO(out))] == ["status", "FAIL", "PASS"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "q2fock", "partitions", "--count", "ncpp", "--n", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "5"
