import subprocess
import sys
from importlib import resources

import pytest

from conlat.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main

DATA = resources.files("conlat").joinpath("data")


def data(name):
    return str(DATA.joinpath(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_n5_example_one(capsys):
    code, out, _ = run(capsys, "classify-n5", data("example_m2.alg"), "--gamma", "gamma0")
    assert code == EXIT_OK
    assert "result: M_2" in out and "generated lattice: 17 elements" in out
    assert "gamma^0 = |1|2,3|4,5|6|a,b|c|d|" in out
    assert "stabilizes at gamma^1 < alpha" in out
    assert "isomorphism onto catalog M_2: verified" in out


def test_classify_n5_example_two(capsys):
    code, out, _ = run(capsys, "classify-n5", data("example_k2.alg"), "--gamma", "gamma0")
    assert code == EXIT_OK and "result: K_2" in out
    assert "stabilizes at gamma^2 = alpha" in out


def test_classify_n5_dot_and_all(capsys, tmp_path):
    code, out, _ = run(capsys, "classify-n5", data("pentagon4.alg"), "--dot", str(tmp_path), "--all",
                       "--lemmas", "--threads", "2")
    assert code == EXIT_OK
    assert (tmp_path / "n5-generated.dot").exists() and (tmp_path / "n5-catalog-K_1.dot").exists()
    assert "some pentagon gives M_1 or K_1: yes" in out
    assert "lemma suite:" in out and "lemma3: 4 pass, 0 fail" in out


def test_modular_quintuple_is_input_error(capsys, tmp_path):
    f = tmp_path / "m3.alg"
    f.write_text("%conlat-algebra 1\nuniverse = 3\ngamma = [[0,1],[2]]\nalpha = [[0,2],[1]]\nbeta = [[1,2],[0]]\n")
    code, _, err = run(capsys, "classify-n5", str(f))
    assert code == EXIT_INPUT and "not an N5: modular quintuple" in err


@pytest.mark.parametrize("argv,needle", [
    (["classify-n5", "/nonexistent.alg"], "cannot read"),
    (["classify-n5", data("example_m2.alg")], "no partition named 'gamma'"),
    (["lattice-audit", "catalog:Q9"], "unknown catalog entry"),
    (["lattice-audit", "chain:x"], "bad chain length"),
    (["lattice-audit", "nowhere"], "not a file"),
    (["catalog", "Z"], "unknown catalog entry"),
])
def test_input_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and needle in err


def test_format_error_names_line(capsys, tmp_path):
    f = tmp_path / "bad.alg"
    f.write_text("%conlat-algebra 1\nuniverse = 3\nbeta = [[0,1],[1,2]]\n")
    code, _, err = run(capsys, "classify-n5", str(f))
    assert code == EXIT_INPUT and "line 3" in err and "'beta'" in err


def test_relaxed_bounds_flag(capsys, tmp_path):
    f = tmp_path / "q.alg"
    f.write_text("%conlat-algebra 1\nuniverse = 5\ngamma = [[0,1,4],[2],[3]]\n"
                 "alpha = [[0,1,4],[2,3]]\nbeta = [[0,2,4],[1,3]]\n")
    code, _, err = run(capsys, "classify-n5", str(f))
    assert code == EXIT_INPUT and "alpha ^ beta = 0_A fails" in err
    code, out, _ = run(capsys, "classify-n5", str(f), "--relaxed-bounds")
    assert code == EXIT_OK and "computed in the quotient by |0,4|1|2|3|" in out


def test_check_d1_reports_mismatch(capsys, tmp_path):
    code, out, _ = run(capsys, "check-d1", data("d1_square.alg"), "--dot", str(tmp_path))
    assert code == EXIT_MISMATCH
    assert "not isomorphic to D13" in out and "generated lattice: 17 elements" in out
    assert (tmp_path / "d1-generated.dot").exists()


def test_check_d1_mislabelled(capsys, tmp_path):
    code, _, err = run(capsys, "check-d1", data("d1_square.alg"), "--beta", "alpha")
    assert code == EXIT_INPUT and "not a D1" in err


def test_classify_d2(capsys):
    code, out, _ = run(capsys, "classify-d2", data("d2_square.alg"))
    assert code == EXIT_OK and "result: S_1" in out and "delta^0 = |0,2|1|3|" in out
    code, _, err = run(capsys, "classify-d2", data("d2_square.alg"), "--delta", "mu")
    assert code == EXIT_INPUT and "delta label disagrees" in err


@pytest.mark.parametrize("target,lines", [
    ("catalog:N5", ["modular: no", "meet-semidistributive: yes", "join-semidistributive: yes",
                    "whitman (W): yes", "projective (SD and W): yes", "contains N5: yes"]),
    ("catalog:D13", ["modular: no", "meet-semidistributive: no", "contains D1: yes"]),
    ("chain:4", ["modular: yes", "distributive: yes", "projective (SD and W): yes", "contains N5: no"]),
])
def test_lattice_audit(capsys, target, lines):
    code, out, _ = run(capsys, "lattice-audit", target)
    assert code == EXIT_OK
    got = out.splitlines()
    for line in lines:
        assert any(g == line or g.startswith(line + " (") for g in got), line


def test_lattice_audit_of_files(capsys):
    code, out, _ = run(capsys, "lattice-audit", data("pentagon4.alg"))
    assert code == EXIT_OK and "lattice: " in out and "contains N5: yes" in out
    fig = str(resources.files("conlat").joinpath("catalog", "figures", "D2.txt"))
    code, out, _ = run(capsys, "lattice-audit", fig)
    assert code == EXIT_OK and "contains D2: yes" in out


def test_catalog_listing(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "--max-param", "2")
    assert code == EXIT_OK
    assert "M_2: 17 elements" in out and "K_2: 20 elements" in out
    assert "S_2: 22 elements" in out and "theta_0 is not the join of its diamond" in out
    code, out, _ = run(capsys, "catalog", "N5", "--dot", str(tmp_path))
    assert "0 < gamma" in out and (tmp_path / "catalog-N5.dot").read_text().count("->") == 5


def test_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "examples", "--dot", str(tmp_path), "--lemmas")
    assert code == EXIT_OK
    rows = [l for l in out.splitlines() if l.startswith("example_")]
    assert len(rows) == 2
    assert rows[0].split()[:4] == ["example_m2.alg", "M_2", "M_2", "yes"]
    assert rows[1].split()[:4] == ["example_k2.alg", "K_2", "K_2", "yes"]
    assert "lemma suite on example_k2.alg:" in out and "  lem:skew: 3 pass, 0 fail, 0 skipped" in out
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "example_k2-catalog-K_2.dot", "example_k2-generated.dot",
        "example_m2-catalog-M_2.dot", "example_m2-generated.dot",
    ]


def test_reports_are_deterministic(capsys):
    outs = set()
    for threads in ("1", "3", "1"):
        code, out, _ = run(capsys, "classify-n5", data("pentagon4.alg"), "--all", "--threads", threads)
        outs.add(out)
    assert len(outs) == 1


def test_timings_are_opt_in(capsys):
    _, out, _ = run(capsys, "examples")
    assert "time " not in out
    _, out, _ = run(capsys, "examples", "--timings")
    assert "time example_m2.alg:" in out


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "conlat.cli", "catalog", "D1"], capture_output=True, text=True)
    assert res.returncode == 0 and "D1: 7 elements" in res.stdout
    res = subprocess.run([sys.executable, "-m", "conlat.cli"], capture_output=True, text=True)
    assert res.returncode == 2
