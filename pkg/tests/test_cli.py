import json

import numpy as np
import pytest

from linoep import cli
from linoep.io import ParseError, fmt_float, parse_csv, parse_json


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def floats(x):
    if isinstance(x, list):
        return [floats(v) for v in x]
    return float(x)


def test_linoep_basis(capsys, fixtures_dir):
    code, out, err = run(capsys, "linoep", "--input", str(fixtures_dir / "basis3.csv"))
    assert code == 0 and err == ""
    rep = json.loads(out)
    assert rep["command"] == "linoep" and rep["status"] == "ok"
    assert (rep["n"], rep["m"]) == (3, 3)
    assert floats(rep["alphas"]) == [0.0, 0.0]
    assert all(float(v) == 0.0 for v in rep["residuals"].values())


def test_noep_worked_example(capsys, fixtures_dir):
    code, out, _ = run(capsys, "noep", "--input", str(fixtures_dir / "y3.csv"))
    rep = json.loads(out)
    assert code == 0
    assert float(rep["gamma"]) == pytest.approx(3 / 11, abs=1e-15)
    assert float(rep["energy"]["d_component_energy"]) == pytest.approx(6.0, abs=1e-14)
    assert len(rep["d_vectors"]) == 4
    for key in ("betas", "z2", "c_vectors"):
        assert key in rep


def test_analyze_cancellation(capsys, fixtures_dir):
    code, out, _ = run(capsys, "analyze", "--input", str(fixtures_dir / "cancel3.csv"))
    rep = json.loads(out)
    assert code == 0
    assert rep["families"] == ["Cancellation"]
    assert float(rep["cross_term"]) == 0.0


def test_gsom_report(capsys, fixtures_dir):
    code, out, _ = run(capsys, "gsom", "--input", str(fixtures_dir / "random4.csv"))
    rep = json.loads(out)
    assert code == 0
    assert len(rep["s_vectors"]) == 4
    assert float(rep["residuals"]["orthogonality"]) <= 1e-9


def test_perm_flag(capsys, fixtures_dir):
    path = str(fixtures_dir / "pair2.json")
    code, out, _ = run(capsys, "linoep", "--input", path, "--perm", "1,0")
    rep = json.loads(out)
    assert code == 0 and rep["permutation"] == [1, 0]
    assert floats(rep["c_vectors"]) == [[-0.5, 0.5], [1.0, 1.0]]
    code, _, err = run(capsys, "linoep", "--input", path, "--perm", "0,0")
    assert code == 2 and "--perm" in err


def test_sweep_report(capsys, fixtures_dir):
    code, out, _ = run(capsys, "sweep", "--input", str(fixtures_dir / "y3.csv"))
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 6
    assert [e["permutation"] for e in rep["entries"]][:2] == [[0, 1, 2], [0, 2, 1]]
    code, _, _ = run(capsys, "sweep", "--input", str(fixtures_dir / "y3.csv"), "--limit-n", "2")
    assert code == 2


def test_format_override_and_output(capsys, fixtures_dir, tmp_path):
    src = tmp_path / "vectors.txt"
    src.write_text((fixtures_dir / "y3.csv").read_text())
    dest = tmp_path / "report.json"
    code, out, _ = run(capsys, "noep", "--input", str(src), "--format", "csv", "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["command"] == "noep"
    code, _, err = run(capsys, "noep", "--input", str(src))
    assert code == 2 and "--format" in err


def test_tol_echoed(capsys, fixtures_dir):
    _, out, _ = run(capsys, "analyze", "--input", str(fixtures_dir / "y3.csv"), "--tol", "1e-6")
    assert float(json.loads(out)["tolerances"]["tol"]) == 1e-6


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["linoep"],
        ["linoep", "--input", "x.csv", "--tol", "-1"],
        ["linoep", "--input", "x.csv", "--perm", "a,b"],
        ["sweep", "--input", "x.csv", "--perm", "0,1"],
        ["generate", "nested"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 64 and out == ""


def test_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, "linoep", "--input", str(tmp_path / "nope.csv"))
    assert code == 2
    assert json.loads(out)["status"] == "error"
    assert "nope.csv" in err


def test_dependent_input_exit_code(capsys, fixtures_dir):
    path = str(fixtures_dir / "dependent3.csv")
    for cmd in ("gsom", "linoep", "noep", "sweep"):
        code, out, _ = run(capsys, cmd, "--input", path)
        assert code == 2
        assert json.loads(out)["error"] == "NotLinearlyIndependent"
    assert run(capsys, "analyze", "--input", path)[0] == 0


def test_numerical_breakdown_exit_code(capsys, tmp_path, monkeypatch):
    from linoep import transform

    def broken(*args, **kwargs):
        raise transform.DegenerateTailSum("tail sum vanished")

    monkeypatch.setattr(transform, "linoep_transform", broken)
    path = tmp_path / "y.csv"
    path.write_text("1,0\n0,1\n")
    code, out, _ = run(capsys, "linoep", "--input", str(path))
    assert code == 3 and json.loads(out)["code"] == 3


def test_size_caps(capsys, tmp_path):
    path = tmp_path / "big.csv"
    path.write_text("\n".join(["1"] * 65) + "\n")
    code, _, err = run(capsys, "analyze", "--input", str(path))
    assert code == 2 and "at most" in err


def test_generate_is_deterministic(capsys, tmp_path):
    for kind in ("nested", "cancellation"):
        a = run(capsys, "generate", kind, "--seed", "3")[1]
        b = run(capsys, "generate", kind, "--seed", "3")[1]
        assert a == b
        path = tmp_path / f"{kind}.json"
        path.write_text(a)
        code, out, _ = run(capsys, "analyze", "--input", str(path), "--tol", "1e-9")
        expected = {"nested": ["Nested"], "cancellation": ["Cancellation"]}[kind]
        assert code == 0 and json.loads(out)["families"] == expected


def test_parse_csv_diagnostics():
    assert parse_csv("# head\n1, 2.5e-3\n\n-3,.5\n") == [[1.0, 0.0025], [-3.0, 0.5]]
    with pytest.raises(ParseError) as info:
        parse_csv("1,2\n3, x\n")
    assert (info.value.line, info.value.column) == (2, 4)
    for bad in ("1_0,2\n", "inf,1\n", "1e999,1\n", "0x1,1\n"):
        with pytest.raises(ParseError):
            parse_csv(bad)


def test_parse_json_diagnostics():
    assert parse_json('{"vectors": [[1, "2.5"], [3, 4]], "extra": 1}') == [[1.0, 2.5], [3.0, 4.0]]
    with pytest.raises(ParseError) as info:
        parse_json('{"meta": [1, {"a": 2}],\n "vectors": [[1, 2],\n   [3, false]]}')
    assert (info.value.line, info.value.column) == (3, 8)
    with pytest.raises(ParseError) as info:
        parse_json('{"vectors": [[1, -Infinity]]}')
    assert (info.value.line, info.value.column) == (1, 18)


def test_float_format_round_trips(rng):
    values = np.concatenate([rng.normal(size=500) * 10.0 ** rng.integers(-300, 300, 500),
                             [0.0, -0.0, 1 / 3, 5e-324, 1.7976931348623157e308]])
    for x in values:
        s = fmt_float(x)
        assert np.float64(s).tobytes() == np.float64(x).tobytes()
        assert len(s.lstrip("-").split("e")[0].replace(".", "").lstrip("0")) <= 17


def test_report_vectors_round_trip(capsys, fixtures_dir, tmp_path):
    _, out, _ = run(capsys, "noep", "--input", str(fixtures_dir / "random4.csv"))
    rep = json.loads(out)
    from linoep import linoep
    from linoep.io import read_vectors

    expected = linoep(read_vectors(fixtures_dir / "random4.csv"))
    for key, arr in (("c_vectors", expected.c_set), ("d_vectors", expected.d_set)):
        parsed = np.array(floats(rep[key]))
        assert parsed.tobytes() == np.asarray(arr).tobytes()
    # a report's vector payload is itself valid input
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"vectors": rep["c_vectors"]}))
    code, out2, _ = run(capsys, "linoep", "--input", str(path))
    assert code == 0
    # nested-orthogonal input is a fixed point of the transform, up to rounding
    np.testing.assert_allclose(floats(json.loads(out2)["c_vectors"]), floats(rep["c_vectors"]), atol=1e-12)


@pytest.mark.parametrize("argv", [["noep", "y3.csv"], ["sweep", "random4.csv"], ["analyze", "malformed/ragged.csv"]])
def test_module_entry_point_matches_in_process(capsys, fixtures_dir, argv):
    import subprocess
    import sys

    command, name = argv
    path = str(fixtures_dir / name)
    proc = subprocess.run(
        [sys.executable, "-m", "linoep", command, "--input", path], capture_output=True, check=False
    )
    code, out, _ = run(capsys, command, "--input", path)
    assert proc.returncode == code
    assert proc.stdout == out.encode()
