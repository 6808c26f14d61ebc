import json
import subprocess
import sys

import pytest

from lineschemes import fixtures
from lineschemes.cli import THREADS_ENV, main


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def checks_by_name(text):
    report = json.loads(text)
    return report, {c["name"]: c for c in report["checks"]}


def test_point_scheme_on_bundled_input(capsys):
    code, out, _ = run(["point-scheme", "--no-timings"], capsys)
    report, checks = checks_by_name(out)
    assert code == 0 and report["passed"]
    assert set(checks) == {"point-scheme/minors", "point-scheme/golden", "point-scheme/points-and-sigma"}


def test_commutative_input_notes_projective_space(capsys):
    path = fixtures.data_path(fixtures.POLYNOMIAL_RING)
    code, out, _ = run(["point-scheme", path, "--no-timings"], capsys)
    _, checks = checks_by_name(out)
    minors = checks["point-scheme/minors"]["details"]
    assert code == 0
    assert minors["zero_minors"] == 15
    assert "P^3" in json.dumps(minors)


def test_degenerate_alpha_exits_2(capsys):
    code, out, err = run(["line-scheme", "--alpha", "1"], capsys)
    assert code == 2 and out == ""
    assert "NonGenericError" in err


def test_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("gens: x1 x2 x3 x4\nrel: x1*x2*x3 = 0\n")
    code, _, err = run(["point-scheme", bad], capsys)
    assert code == 2 and "line 2" in err
    code, _, _ = run(["point-scheme", tmp_path / "missing.txt"], capsys)
    assert code == 2


def test_golden_mismatch_exits_1(tmp_path, capsys):
    wrong = tmp_path / "wrong.txt"
    wrong.write_text("vars: x1 x2 x3 x4\n" + "x1^4\n" * 15)
    code, out, _ = run(["point-scheme", fixtures.data_path(fixtures.A_ALPHA), "--golden", wrong], capsys)
    _, checks = checks_by_name(out)
    assert code == 1
    assert checks["point-scheme/golden"]["status"] == "fail"


def test_groebner_on_a_polynomial_list(capsys):
    path = fixtures.data_path(fixtures.POINT_GOLDEN)
    code, out, _ = run(["groebner", path, "--alpha", "3", "--no-timings"], capsys)
    text = json.dumps(json.loads(out))
    assert code == 0
    assert '"degree": 20' in text and '"dimension": 0' in text


def test_text_output_round_trips(tmp_path, capsys):
    out_path = tmp_path / "minors.txt"
    code, _, _ = run(["point-scheme", "--text", out_path, "--no-timings"], capsys)
    assert code == 0
    _, polys = fixtures.load_poly_list(out_path)
    assert len(polys) == 15


def test_ideal_dim(capsys):
    code, out, _ = run(["ideal-dim", "--no-timings"], capsys)
    assert code == 0 and json.loads(out)["passed"]


def test_report_is_deterministic_across_threads(tmp_path):
    outputs = []
    for threads in ("1", "4"):
        target = tmp_path / f"report{threads}.json"
        env = {"PATH": "/usr/bin:/bin", THREADS_ENV: threads}
        subprocess.run(
            [sys.executable, "-m", "lineschemes", "line-scheme", "--no-timings", "-o", str(target)],
            check=True, env=env,
        )
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("order", ["lex", "grlex", "grevlex"])
def test_groebner_orders(order, capsys):
    path = fixtures.data_path(fixtures.POINT_GOLDEN)
    code, _, _ = run(["groebner", path, "--alpha", "5", "--order", order, "--no-timings"], capsys)
    assert code == 0
