"""Tests for the command line front end: formatting, matrix files, subcommands."""

import math
import os

import numpy as np
import pytest

from mpkit.cli import (
    DEMO_NAMES,
    MatrixFileError,
    main,
    print_octave,
    read_matrix_file,
)
from mpkit.ddarith import DDouble, dd_from_string, dd_sqrt
from mpkit.mpblas import Matrix


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return os.fspath(p)


# ---------------------------------------------------------------------------
# Octave-style formatting

def test_print_octave_one_by_one_zero():
    assert print_octave(Matrix(1, 1, "f64")) == \
        "[ [ +0.0000000000000000e+00] ]"
    assert print_octave(Matrix(1, 1, "dd")) == \
        "[ [ +0.0000000000000000e+00] ]"


def test_print_octave_two_by_two():
    a = Matrix.from_rows([[1.0, 2.0], [-3.0, 4.0]], "f64")
    assert print_octave(a) == (
        "[ [ +1.0000000000000000e+00, +2.0000000000000000e+00]; "
        "[ -3.0000000000000000e+00, +4.0000000000000000e+00] ]")


def test_print_octave_empty():
    assert print_octave(Matrix(0, 0, "f64")) == "[ ]"


def test_print_octave_dd_prints_dd_digits():
    a = Matrix.from_rows([[dd_sqrt(DDouble(2.0))]], "dd")
    long = print_octave(a, 33)
    assert "+1.41421356237309504880168872420967e+00" in long
    # the 17-digit short form rounds the dd value, not its binary64 image
    short = print_octave(a)
    assert "+1.4142135623730950e+00" in short
    assert "%+.16e" % math.sqrt(2.0) == "+1.4142135623730951e+00"


def test_print_octave_complex_entries():
    a = Matrix.from_rows([[complex(1.0, -2.0)]], "cdd")
    assert print_octave(a) == \
        "[ [ +1.0000000000000000e+00-2.0000000000000000e+00i] ]"


def test_octave_text_round_trips_binary64():
    def parse(text):
        inner = text[2:-2].strip()
        rows = []
        for rtxt in inner.split("; "):
            assert rtxt.startswith("[ ") and rtxt.endswith("]")
            rows.append([float(t) for t in rtxt[2:-1].split(", ")])
        return rows
    rng = np.random.default_rng(12)
    rows = rng.uniform(-1, 1, (3, 4)).tolist()
    a = Matrix.from_rows(rows, "f64")
    assert parse(print_octave(a)) == rows


# ---------------------------------------------------------------------------
# matrix file loader

def test_read_matrix_file_good(tmp_path):
    path = write(tmp_path, "m.txt", "2 3\n1 0.5 -2\n\n0.1 3 4\n\n")
    a = read_matrix_file(path, "dd")
    assert (a.m, a.n) == (2, 3)
    tenth = a.get(1, 0)
    want = dd_from_string("0.1")
    assert tenth.hi == want.hi and tenth.lo == want.lo
    f = read_matrix_file(path, "f64")
    assert f.get(0, 1) == 0.5 and f.get(1, 0) == 0.1


def test_read_matrix_file_zero_dims(tmp_path):
    path = write(tmp_path, "z.txt", "0 0\n")
    a = read_matrix_file(path, "f64")
    assert (a.m, a.n) == (0, 0)


def test_read_matrix_file_errors(tmp_path):
    cases = [
        ("", ":1:1: missing"),
        ("2\n1 2\n3 4\n", ":1:1: header must be 'm n'"),
        ("a b\n", ":1:1: header must be two integers"),
        ("-1 2\n", ":1:1: dimensions"),
        ("2 2\n1 2 3\n4 5\n", ":2:1: expected 2 token(s)"),
        ("2 2\n1 2\n3 oops\n", ":3:2: bad numeric token"),
        ("2 2\n1 2\n", ":2:1: expected 2 data row(s)"),
        ("1 1\n1\n7\n", ":3:1: unexpected extra data"),
    ]
    for i, (text, frag) in enumerate(cases):
        path = write(tmp_path, f"bad{i}.txt", text)
        with pytest.raises(MatrixFileError) as exc:
            read_matrix_file(path, "dd")
        assert frag in str(exc.value), (i, str(exc.value))


def test_read_matrix_file_missing_path():
    with pytest.raises(MatrixFileError):
        read_matrix_file("/no/such/file.txt")


# ---------------------------------------------------------------------------
# demos (each exits 0 only if its self-check passes)

@pytest.mark.parametrize("name", DEMO_NAMES)
def test_demo_exits_clean(name, capsys):
    assert main(["demo", name]) == 0
    out = capsys.readouterr().out
    assert "MISMATCH" not in out


def test_demo_rgemm_prints_integer_answer(capsys):
    assert main(["demo", "rgemm"]) == 0
    out = capsys.readouterr().out
    assert "ans =" in out
    assert "+2.1000000000000000e+01" in out
    assert "-1.9200000000000000e+02" in out


def test_demo_hilbert_prints_residual_lines(capsys):
    assert main(["demo", "hilbert"]) == 0
    out = capsys.readouterr().out
    assert "InfnormL:(ainv * a - I)=+0.0000000000000000e+00" in out
    assert out.count("InfnormL:(ainv * a - I)=") == 16


# ---------------------------------------------------------------------------
# qa subcommand

def test_qa_small_run(capsys):
    rc = main(["qa", "--seeds", "1", "--nmax", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out and "FAIL" not in out
    assert "0 failures" in out.splitlines()[-1]


def test_qa_routine_filter(capsys):
    rc = main(["qa", "--nmax", "5", "--routine", "Rdot"])
    out = capsys.readouterr().out
    assert rc == 0
    body = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert body and all(ln.startswith("Rdot[dd-vs-f64]") for ln in body)


def test_qa_unknown_routine(capsys):
    rc = main(["qa", "--routine", "Rfoo"])
    err = capsys.readouterr().err
    assert rc == 2 and "unknown routine" in err


def test_qa_nmax_excludes_everything(capsys):
    rc = main(["qa", "--nmax", "0"])
    assert rc == 2


def test_qa_csv_and_png(tmp_path, capsys):
    csv_path = os.fspath(tmp_path / "qa.csv")
    rc = main(["qa", "--nmax", "2", "--csv", csv_path])
    capsys.readouterr()
    assert rc == 0
    assert os.path.getsize(csv_path) > 0
    assert os.path.getsize(os.fspath(tmp_path / "qa.png")) > 0


# ---------------------------------------------------------------------------
# bench subcommand

def test_bench_streams_csv_rows(capsys):
    rc = main(["bench", "--routine", "Raxpy", "--precision", "f64",
               "--nmin", "100", "--nmax", "200", "--step", "100"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln]
    assert lines[0] == "routine,precision,n,k,threads,elapsed_s,mflops"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "Raxpy" and first[2] == "100" and first[3] == ""
    assert float(first[6]) > 0.0


def test_bench_csv_file(tmp_path, capsys):
    path = os.fspath(tmp_path / "b.csv")
    rc = main(["bench", "--routine", "Rgemm", "--precision", "f64",
               "--nmin", "4", "--nmax", "8", "--step", "4",
               "--csv", path])
    capsys.readouterr()
    assert rc == 0
    assert os.path.getsize(path) > 0
    assert os.path.getsize(os.fspath(tmp_path / "b.png")) > 0


def test_bench_bad_range(capsys):
    rc = main(["bench", "--routine", "Raxpy", "--precision", "f64",
               "--nmin", "0", "--nmax", "8", "--step", "4"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_bench_oversubscribe_rejected(capsys):
    rc = main(["bench", "--routine", "Raxpy", "--precision", "f64",
               "--nmin", "8", "--nmax", "8", "--step", "1",
               "--threads", "9999"])
    err = capsys.readouterr().err
    assert rc == 2 and "oversubscribes" in err


def test_bench_threads_default_from_env(monkeypatch, capsys):
    # MPKIT_THREADS feeds the default thread count; an absurd value is
    # rejected by the same oversubscription guard
    monkeypatch.setenv("MPKIT_THREADS", "9999")
    rc = main(["bench", "--routine", "Raxpy", "--precision", "f64",
               "--nmin", "8", "--nmax", "8", "--step", "1"])
    err = capsys.readouterr().err
    assert rc == 2 and "oversubscribes" in err


# ---------------------------------------------------------------------------
# matrix-file drivers

def test_invert_exact_diagonal(tmp_path, capsys):
    path = write(tmp_path, "d.txt", "2 2\n2 0\n0 4\n")
    rc = main(["invert", "--file", path])
    out = capsys.readouterr().out
    assert rc == 0
    assert "a =" in out and "ainv =" in out
    assert "+5.0000000000000000e-01" in out
    assert "InfnormL:(ainv * a - I)=+0.0000000000000000e+00" in out


def test_invert_rejects_nonsquare(tmp_path, capsys):
    path = write(tmp_path, "r.txt", "1 2\n1 2\n")
    rc = main(["invert", "--file", path])
    assert rc == 1
    assert "square" in capsys.readouterr().err


def test_invert_singular(tmp_path, capsys):
    path = write(tmp_path, "s.txt", "2 2\n1 1\n1 1\n")
    rc = main(["invert", "--file", path])
    assert rc == 1
    assert "singular" in capsys.readouterr().err


def test_invert_missing_file(capsys):
    rc = main(["invert", "--file", "/no/such/m.txt"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_eig_driver(tmp_path, capsys):
    path = write(tmp_path, "e.txt", "2 2\n2 1\n1 2\n")
    rc = main(["eig", "--file", path])
    out = capsys.readouterr().out
    assert rc == 0
    assert "w =" in out and "U =" in out
    assert "+1.0000000000000000e+00" in out
    assert "+3.0000000000000000e+00" in out


def test_svd_driver(tmp_path, capsys):
    path = write(tmp_path, "w.txt", "2 3\n1 0 0\n0 2 0\n")
    rc = main(["svd", "--file", path, "--precision", "f64"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "s =" in out and "u =" in out and "vt =" in out
    assert "+2.0000000000000000e+00" in out


def test_schur_driver_complex_pair(tmp_path, capsys):
    path = write(tmp_path, "q.txt", "2 2\n0 -1\n1 0\n")
    for precision in ("dd", "f64"):
        rc = main(["schur", "--file", path, "--precision", precision])
        out = capsys.readouterr().out
        assert rc == 0
        assert "w =" in out and "T =" in out and "Z =" in out
        # eigenvalues are the unit imaginary pair
        assert "+1.0000000000000000e+00i" in out
        assert "-1.0000000000000000e+00i" in out


# ---------------------------------------------------------------------------
# parser behavior

def test_version_reports_product_scheme(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == \
        "mpkit 0.1.0 (two_prod: dekker-split)"


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qa", "--frobnicate"])
    assert exc.value.code == 2


def test_unknown_demo_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["demo", "nope"])
    assert exc.value.code == 2


def test_missing_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
