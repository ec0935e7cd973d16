import csv
import io
import json
import subprocess
import sys

import pytest

from poissonbounds.cli import main
from poissonbounds.output import dumps


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_example1_json(capsys):
    code, out, _ = run(capsys, "example1", "--n", "100", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["n"] == 100 and row["ordered"] is True
    assert abs(row["theorem1_tv"] - 0.014213381090374028) <= 1e-15


def test_example2_csv(capsys):
    code, out, _ = run(capsys, "example2", "--n", "100", "1000", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["100", "1000"]
    assert set(rows[0]) >= {"exact_tv", "bound", "asymptote", "reference_rate", "holds"}


def test_example3_table(capsys):
    code, out, _ = run(capsys, "example3", "--n", "1", "10")
    assert code == 0
    assert out.splitlines()[0].split()[:2] == ["n", "q"]


def test_example3_explicit_q(capsys):
    code, out, _ = run(capsys, "example3", "--q", "0.5", "0.8", "--format", "json")
    assert code == 0 and json.loads(out)[0]["holds"]


def test_markov(capsys):
    code, out, _ = run(capsys, "markov", "--n", "3", "100", "1000", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert abs(rows[2]["bound"] - 0.0217233) <= 1e-7


def test_markov_small_n(capsys):
    code, _, err = run(capsys, "markov", "--n", "2")
    assert code == 2 and "n >= 3" in err


def test_compound(capsys):
    code, out, _ = run(capsys, "compound", "--p", "0.1", "--repeat", "10", "--format", "json")
    assert code == 0
    reports = json.loads(out)
    assert reports[0]["name"] == "compound" and len(reports) == 11


@pytest.mark.parametrize("argv", [["bern", "0.5"], ["binomial", "5", "0.2"], ["poisson", "1"]])
def test_debruijn(capsys, argv):
    code, out, _ = run(capsys, "debruijn", *argv, "--format", "json")
    assert code == 0
    (r,) = json.loads(out)
    assert abs(r["lhs"] - r["rhs"]) <= 1e-4
    assert "tail_estimate" in r["params"] and "diagnostic" in r["params"]


def test_debruijn_bad_params(capsys):
    code, _, _ = run(capsys, "debruijn", "binomial", "2.5", "0.2")
    assert code == 2


def test_debruijn_depth_failure(capsys):
    code, _, err = run(capsys, "debruijn", "bern", "0.5", "--abs-tol", "1e-14", "--max-depth", "3")
    assert code == 1 and "depth" in err


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--family", "bernoulli-lists", "--trials", "20", "--format", "json")
    assert code == 0
    summary = json.loads(out)
    assert summary["failures"] == 0 and summary["checks"] > 0


@pytest.mark.parametrize("argv", [
    ["verify", "--trials", "0"],
    ["verify", "--family", "nope"],
    ["verify", "--max-n", "21", "--family", "joint-binary"],
    ["verify", "--tol-override", "1e-3"],
    ["verify", "--jobs", "0"],
])
def test_verify_config_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_tol_override_tighter_is_allowed(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "5", "--tol-override", "1e-12", "--format", "json")
    assert code in (0, 1)
    assert json.loads(out)["trials"] == 5


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["example1", "--format", "xml"])
    assert exc.value.code == 2


def test_verify_deterministic(capsys):
    argv = ["verify", "--family", "random-pmf", "--seed", "7", "--trials", "30", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_parallel_matches_serial(capsys):
    argv = ["verify", "--family", "geometric-lists", "--seed", "3", "--trials", "16", "--format", "json"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", "2")
    assert serial == parallel


def test_dumps_float_format():
    assert dumps([0.1, 1.0, True, None]) == "[\n  0.10000000000000001,\n  1,\n  true,\n  null\n]"


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "poissonbounds.cli", "example1", "--n", "100"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "exact_tv" in proc.stdout
