import re
import subprocess
import sys

import pytest

from leafroot.cli import EXIT_ERROR, EXIT_NO, EXIT_NOT_TPG, EXIT_OK, main
from leafroot.gen import gen_dart, gen_family_f
from leafroot.graph import write_graph


@pytest.fixture
def dart_file(tmp_path):
    p = tmp_path / "dart.txt"
    p.write_text(write_graph(gen_dart()))
    return p


def summary(text):
    return dict(re.findall(r"(\w+)=(\S+)", text))


def test_construct_best(dart_file, tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert main(["construct", "--input", str(dart_file), "--parity", "best", "--output", str(out)]) == EXIT_OK
    s = summary(capsys.readouterr().out)
    assert s["k"] == "4" and s["parity"] == "0" and s["n"] == "5"
    assert set(s) == {"k", "parity", "n", "diam", "rad", "dmin"}
    assert out.read_text().startswith("T ")


def test_construct_family_odd(tmp_path, capsys):
    p = tmp_path / "f2.txt"
    p.write_text(write_graph(gen_family_f(2)))
    assert main(["construct", "-i", str(p), "--parity", "odd", "-o", str(tmp_path / "t")]) == EXIT_OK
    assert summary(capsys.readouterr().out)["k"] == "15"


def test_construct_not_tpg(tmp_path, capsys):
    p = tmp_path / "p4.txt"
    p.write_text("4 3\n0 1\n1 2\n2 3\n")
    assert main(["construct", "-i", str(p)]) == EXIT_NOT_TPG
    assert "P4" in capsys.readouterr().out


def test_construct_io_errors(tmp_path):
    assert main(["construct", "-i", str(tmp_path / "missing")]) == EXIT_ERROR
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n")
    assert main(["construct", "-i", str(bad)]) == EXIT_ERROR


@pytest.mark.parametrize("fmt, marker", [("dot", "graph leafroot"), ("newick", ";"), ("cotree", "join -1")])
def test_construct_formats(dart_file, capsys, fmt, marker):
    assert main(["construct", "-i", str(dart_file), "--format", fmt]) == EXIT_OK
    cap = capsys.readouterr()
    assert marker in cap.out
    assert "k=4" in cap.err


@pytest.mark.parametrize("k, code, word", [(5, EXIT_OK, "yes"), (4, EXIT_OK, "yes"), (3, EXIT_NO, "no")])
def test_recognize(dart_file, capsys, k, code, word):
    assert main(["recognize", "-i", str(dart_file), "-k", str(k)]) == code
    out = capsys.readouterr().out
    assert out.startswith(word) and "kappa=" in out


def test_recognize_family(tmp_path, capsys):
    p = tmp_path / "f1.txt"
    p.write_text(write_graph(gen_family_f(1)))
    assert main(["recognize", "-i", str(p), "-k", "6"]) == EXIT_NO
    assert "kappa=8" in capsys.readouterr().out


def test_recognize_not_tpg(tmp_path):
    p = tmp_path / "c4.txt"
    p.write_text("4 4\n0 1\n1 2\n2 3\n0 3\n")
    assert main(["recognize", "-i", str(p), "-k", "4"]) == EXIT_NOT_TPG


def test_verify_round_trip(dart_file, tmp_path, capsys):
    tree = tmp_path / "t.txt"
    main(["construct", "-i", str(dart_file), "-o", str(tree)])
    capsys.readouterr()
    assert main(["verify", "-i", str(dart_file), "--tree", str(tree)]) == EXIT_OK
    assert "ok=true" in capsys.readouterr().out
    assert main(["verify", "-i", str(dart_file), "--tree", str(tree), "-k", "3"]) == EXIT_ERROR
    assert "dist=" in capsys.readouterr().out


def test_verify_leaf_mismatch(dart_file, tmp_path, capsys):
    tree = tmp_path / "t.txt"
    tree.write_text("T 3 2 2\n0 1 1\n0 2 1\nL 1 0\nL 2 1\n")
    assert main(["verify", "-i", str(dart_file), "--tree", str(tree)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_oracle(capsys):
    assert main(["oracle", "--max-n", "4"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("graph_id") and all(line.endswith("True") for line in lines[1:])
    assert main(["oracle", "--max-n", "9"]) == EXIT_ERROR


def test_gen(capsys):
    assert main(["gen", "dart"]) == EXIT_OK
    assert capsys.readouterr().out == write_graph(gen_dart())
    assert main(["gen", "random", "-n", "50", "--seed", "3"]) == EXIT_OK
    first = capsys.readouterr().out
    main(["gen", "random", "-n", "50", "--seed", "3"])
    assert capsys.readouterr().out == first
    assert main(["gen", "family_f", "-i", "1", "--format", "cotree"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("0 join -1")
    assert main(["gen", "star", "-t", "1"]) == EXIT_ERROR


def test_bench(capsys):
    assert main(["bench", "--sizes", "200,2000", "--seed", "1"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].split() == ["n", "m", "parse_s", "construct_s", "ratio", "k"]
    assert [r.split()[0] for r in rows[1:]] == ["200", "2000"]
    main(["bench", "--sizes", "200,2000", "--seed", "1"])
    again = capsys.readouterr().out.splitlines()
    assert [r.split()[:2] for r in again] == [r.split()[:2] for r in rows]
    assert main(["bench", "--sizes", ""]) == EXIT_ERROR


def test_usage_error():
    assert main(["construct", "--parity", "sideways"]) == EXIT_ERROR


def test_module_entry_point(dart_file):
    proc = subprocess.run(
        [sys.executable, "-m", "leafroot", "construct", "-i", str(dart_file), "--parity", "odd", "-o", "-"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "k=5" in proc.stderr
