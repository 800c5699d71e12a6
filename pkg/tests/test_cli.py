import json
import subprocess
import sys

import pytest

from qore import cli
from qore.cli import main, parse_range


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("2..5") == [2, 3, 4, 5]
    with pytest.raises(cli.InputError):
        parse_range("5..2")
    with pytest.raises(cli.InputError):
        parse_range("a..b")


def test_pideg_family(capsys):
    code, out, _ = run(["pideg", "family", "euclidean-odd", "--n", "3", "--r", "5", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pi_degree"] == 125 and rep["h"] == 125**2 and rep["match"] is True


def test_pideg_symplectic(capsys):
    code, out, _ = run(["pideg", "family", "symplectic", "--n", "2", "--r", "4", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["pi_degree"] == 4


def test_pideg_matrix(tmp_path, capsys):
    f = tmp_path / "zero4.json"
    f.write_text(json.dumps({"rows": 4, "cols": 4, "entries": [[0] * 4 for _ in range(4)]}))
    code, out, _ = run(["pideg", "matrix", "--input", str(f), "--r", "7"], capsys)
    assert code == 0
    assert out.splitlines()[1].split()[-1] == "1"


def test_pideg_text_table(capsys):
    code, out, _ = run(["pideg", "family", "weyl-single", "--n", "2", "--r", "3"], capsys)
    lines = out.splitlines()
    assert lines[0].split()[0] == "family"
    assert "9" in lines[1].split()


def test_sweep_csv(capsys):
    code, out, _ = run(["sweep", "family", "euclidean-odd", "--n", "1..4", "--r", "2..12", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "family,n,r,ell,h,pi_degree,closed_form,match"
    assert len(lines) == 1 + 4 * 11
    assert all(line.endswith(",yes") for line in lines[1:])
    # deterministic (n, r) order
    keys = [tuple(map(int, line.split(",")[1:3])) for line in lines[1:]]
    assert keys == sorted(keys)


def test_sweep_mismatch_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "closed_form_pidegree", lambda fid, r: 0)
    code, out, _ = run(["sweep", "family", "weyl-single", "--n", "1", "--r", "3", "--format", "csv"], capsys)
    assert code == 2
    assert out.splitlines()[1].endswith(",no")


def test_json_is_deterministic(tmp_path, capsys):
    args = ["sweep", "family", "symplectic", "--n", "1..3", "--r", "2..6", "--format", "json"]
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b
    out = tmp_path / "o.json"
    main(args + ["--output", str(out)])
    assert out.read_text() == a


@pytest.mark.parametrize(
    "args",
    [
        ["pideg", "family", "nope", "--n", "1", "--r", "3"],
        ["pideg", "family", "weyl-single", "--n", "x", "--r", "3"],
        ["pideg", "family", "weyl-single", "--n", "0", "--r", "3"],
        ["pideg", "family", "weyl-single", "--n", "1", "--r", "0"],
        ["pideg", "family", "weyl-multi", "--n", "2", "--r", "3"],
        ["pideg", "matrix", "--input", "/nonexistent.json", "--r", "3"],
        ["sweep", "family", "weyl-single", "--n", "0..2", "--r", "3"],
        ["verify", "bogus"],
        [],
    ],
)
def test_input_errors_exit_1(args):
    with pytest.raises(SystemExit) as info:
        sys.exit(main(args))
    assert info.value.code == 1


def test_non_skew_matrix(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"rows": 2, "cols": 2, "entries": [[0, 1], [1, 0]]}))
    code, _, err = run(["pideg", "matrix", "--input", str(f), "--r", "3"], capsys)
    assert code == 1 and "skew" in err
    f.write_text("{not json")
    assert run(["pideg", "matrix", "--input", str(f), "--r", "3"], capsys)[0] == 1


def test_multi_family_with_assignment(capsys):
    code, out, _ = run(
        ["pideg", "family", "kpq", "--n", "2", "--r", "7", "--assign", "q1=1,q2=2,p1=3,p2=5,g12=4", "--format", "json"],
        capsys,
    )
    rep = json.loads(out)
    assert code == 0 and rep["closed_form"] is None and rep["pi_degree"] == 49


def test_remove(capsys):
    code, out, _ = run(["remove", "weyl-multi", "--n", "2", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["steps"] == ["x2", "x1"] and len(rep["ore_generators"]) == 4
    code, out, _ = run(["remove", "symplectic", "--n", "2", "--r", "4", "--format", "json"], capsys)
    assert json.loads(out)["pi_degree"] == 4


def test_remove_max_index_too_small(capsys):
    code, _, err = run(["remove", "weyl-single", "--n", "1", "--r", "5", "--max-index", "0"], capsys)
    assert code == 1 and err


def test_verify(capsys):
    code, out, _ = run(["verify", "qarith"], capsys)
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(["verify", "removal"], capsys)
    assert code == 0 and "four expected generators" in out


def test_verify_failure_exit_2(monkeypatch, capsys):
    import qore.verify as v

    monkeypatch.setattr(v, "run_suite", lambda name: [("qarith", v.Check("forced", False, "x"))])
    code, out, _ = run(["verify", "qarith"], capsys)
    assert code == 2 and out.startswith("FAIL")


def test_manifest(tmp_path, capsys):
    m = tmp_path / "run.json"
    m.write_text(json.dumps({"command": "sweep", "family": "matrices-single", "n": "2..3", "r": "3..5", "format": "csv"}))
    code, out, _ = run(["run", str(m)], capsys)
    assert code == 0 and len(out.splitlines()) == 7
    m.write_text(json.dumps({"command": "pideg", "family": "weyl-single", "input": "x.json", "n": 1, "r": 3}))
    assert run(["run", str(m)], capsys)[0] == 1
    m.write_text(json.dumps({"command": "pideg", "family": "weyl-multi", "n": 2, "r": 5, "assign": {"q1": 1, "q2": 2, "g12": 0}, "format": "json"}))
    code, out, _ = run(["run", str(m)], capsys)
    assert code == 0 and json.loads(out)["pi_degree"] == 25


def test_console_entry_points():
    for cmd in (["qore"], [sys.executable, "-m", "qore"]):
        res = subprocess.run(cmd + ["pideg", "family", "weyl-single", "--n", "2", "--r", "5", "--format", "json"], capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        assert json.loads(res.stdout)["pi_degree"] == 25


def test_verify_all_suites_pass():
    from qore.verify import run_suite

    results = run_suite("all")
    assert {s for s, _ in results} == {"qarith", "scalars", "ore", "removal", "pidegree", "families"}
    assert all(c.ok for _, c in results), [(s, c.name, c.detail) for s, c in results if not c.ok]
