import csv
import io
import subprocess
import sys

import pytest

from metadehn.cli import CSV_HEADER, InputError, fit_slope, main, parse_lengths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--model", "gamma 2", "--word", "a [P2: 1, 0] a^-1")
    assert code == 0
    assert "efficient form" in out
    code, out, _ = run(capsys, "eval", "--model", "gamma 2", "--word", "a b a^-1 b^-1")
    assert code == 0 and "identity" in out


def test_fill_and_verify_round_trip(capsys, tmp_path):
    cert = tmp_path / "c.tsv"
    word = "a [P2: 1, 0] a^-1 b [Vm: 1] b^-1 a [P2: -1, 0] a^-1 b [Vm: -1] b^-1"
    code, out, _ = run(capsys, "fill", "--model", "gamma 2", "--word", word, "--out", str(cert))
    assert code == 0
    area = int(out.split()[1])
    assert cert.read_text().startswith(f"# area {area}")
    code, out, _ = run(capsys, "verify", "--model", "gamma 2", "--word", word, "--cert", str(cert))
    assert code == 0 and f"area {area}" in out
    # a certificate for a different word fails
    code, _, _ = run(capsys, "verify", "--model", "gamma 2", "--word", "a a^-1", "--cert", str(cert))
    assert code == 1


def test_word_file(capsys, tmp_path):
    wf = tmp_path / "w.txt"
    wf.write_text("t a t^-1 a t a^-1 t^-1 a^-1\n")
    code, _, _ = run(capsys, "embed", "--map", "lamplighter", "--word-file", str(wf))
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["fill", "--model", "gamma 2", "--word", "a b"],
    ["fill", "--model", "gamma 2", "--word", "a [P2: 1/2, 0]"],
    ["fill", "--model", "gamma 2", "--word", "a^"],
    ["fill", "--model", "torus 3", "--word", "a"],
    ["fill", "--model", "gamma 2"],
    ["fill", "--model", "gamma 2", "--word", "a a^-1", "--k", "2"],
    ["fill", "--model", "bs-ambient 2", "--word", "[P2: 1] [R: 1] [P2: -1] [R: -1]"],
    ["scan", "--model", "gamma 2", "--lengths", "1:2:0"],
    ["oracle", "--presentation", "z2", "--word", "t"],
    ["verify", "--model", "gamma 2", "--word", "e", "--cert", "/nonexistent/cert"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_scan_csv(capsys, tmp_path):
    out_file = tmp_path / "scan.csv"
    code, _, err = run(capsys, "scan", "--model", "lambda 2", "--lengths", "16,32", "--samples", "2",
                       "--seed", "5", "--out", str(out_file))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_file.read_text())))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 5
    for r in rows[1:]:
        assert int(r[3]) == sum(int(x) for x in r[4:8])
    assert "slope" in err
    # deterministic apart from the timing column
    code, out, _ = run(capsys, "scan", "--model", "lambda 2", "--lengths", "16,32", "--samples", "2", "--seed", "5")
    again = list(csv.reader(io.StringIO(out)))
    assert [r[:-1] for r in again] == [r[:-1] for r in rows]


def test_oracle_methods(capsys):
    w = "t x t^-1 x t x^-1 t^-1 x^-1"
    for method in ("bfs", "cyclic", "corridor"):
        code, out, _ = run(capsys, "oracle", "--presentation", "bs 2", "--word", w, "--method", method)
        assert code == 0
        assert list(csv.reader(io.StringIO(out)))[1][2] == "2"
    code, _, err = run(capsys, "oracle", "--presentation", "z2", "--word", "a b", "--max-area", "3")
    assert code == 1 and "no area" in err


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--model", "gamma 2", "--radius", "1")
    assert code == 0
    assert "a^-1  contracts {Vp, Vm}" in out


def test_embed_maps(capsys):
    code, out, _ = run(capsys, "embed", "--map", "bs-gamma", "--word", "t x t^-1 x^-2")
    assert code == 0 and "[P2:" in out
    code, out, _ = run(capsys, "embed", "--map", "lambda-sol", "--n", "3", "--word", "a^3")
    assert code == 0


def test_parse_lengths():
    assert parse_lengths("32:512:*2") == [32, 64, 128, 256, 512]
    assert parse_lengths("8:20:4") == [8, 12, 16, 20]
    assert parse_lengths("5, 9") == [5, 9]
    for bad in ("x", "8:4:*1", "1,2", ""):
        with pytest.raises(InputError):
            parse_lengths(bad)


def test_fit_slope():
    xs = [1, 2, 4, 8]
    assert fit_slope(xs, [3 * x ** 2 for x in xs]) == pytest.approx(2.0)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "metadehn", "eval", "--model", "rank1 2", "--word", "a a^-1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "identity" in r.stdout
