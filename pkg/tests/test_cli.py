"""Command-line harness: subcommands, exit codes, report files, determinism."""

import json

import pytest

from stada.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---- eval ----------------------------------------------------------------


@pytest.mark.parametrize("expr,want", [
    ("e0 * e1", "e01"),
    ("e1 * e1", "-1"),
    ("star(e)", "e0123"),
    ("e0 ^ e1", "e01"),
    ("rev(e01)", "-e01"),
    ("2 e01 + 1/2", "1/2 + 2 e01"),
    ("(0+1i) e12 * (0+1i) e12", "1"),
    ("star(e) ^ e0", "0"),
])
def test_eval_expressions(expr, want, capsys):
    code, out, _ = run_cli(["eval", expr], capsys)
    assert code == 0
    assert out.strip() == want


def test_eval_basis_rendering(capsys):
    code, out, _ = run_cli(["eval", "e0 * e1", "--basis", "l"], capsys)
    assert code == 0
    assert out.strip() == "l01"


def test_eval_parse_error_is_usage(capsys):
    code, _, err = run_cli(["eval", "e0 @ e1"], capsys)
    assert code == 2
    assert "error" in err


# ---- verify --------------------------------------------------------------


def test_verify_small_suite(tmp_path, capsys):
    report_path = tmp_path / "hodge.json"
    code, out, _ = run_cli(["verify", "--suite", "hodge", "--seed", "7",
                            "--report", str(report_path)], capsys)
    assert code == 0
    assert "suite hodge" in out
    data = json.loads(report_path.read_text())
    assert data["summary"]["status"] == "pass"
    assert data["suite"] == "hodge"
    assert data["seed"] == 7
    for check in data["checks"]:
        assert {"id", "law", "status", "measured", "bound", "detail"} == set(check)


def test_verify_deterministic_for_fixed_seed(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = run_cli(["verify", "--suite", "hodge", "--seed", "3",
                              "--report", str(p)], capsys)
        assert code == 0
    blobs = []
    for p in paths:
        data = json.loads(p.read_text())
        data.pop("environment")
        blobs.append(json.dumps(data, sort_keys=True))
    assert blobs[0] == blobs[1]


def test_verify_unknown_suite_is_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2


def test_verify_env_report_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("STADA_REPORT_DIR", str(tmp_path))
    code, out, _ = run_cli(["verify", "--suite", "hodge"], capsys)
    assert code == 0
    assert (tmp_path / "verify_hodge_seed0.json").exists()


# ---- residual --------------------------------------------------------------


def test_residual_plane_wave(capsys):
    code, out, _ = run_cli(["residual", "--form", "tde",
                            "--plane-wave", "m=1;p=1,0,0,0"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "pass"
    assert data["max_norm"] <= 1e-12
    assert data["form"] == "tde"


def test_residual_zero_state(capsys):
    code, out, _ = run_cli(["residual", "--form", "dirac", "--state", "zero"],
                           capsys)
    assert code == 0
    assert json.loads(out)["max_norm"] == 0.0


def test_residual_expression_state(capsys):
    # a constant even state is not a solution at m=1: the mass term survives
    code, out, _ = run_cli(["residual", "--form", "hde", "--state", "1"], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["verdict"] == "fail"
    assert data["max_norm"] > 0.5


def test_residual_with_expression_state_and_potential(capsys):
    # (e + e0) exp(-i x0) solves the general-form equation at m = 1, A = 0
    code, out, _ = run_cli([
        "residual", "--form", "ilk",
        "--state", "e exp(i[-1,0,0,0]) + e0 exp(i[-1,0,0,0])",
        "--potential", "0 e1", "--mass", "1"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_residual_reduction(capsys):
    for kind in ("t-HI", "t-H", "t-e5"):
        code, out, _ = run_cli(["residual", "--form", "ilk", "--reduce", kind],
                               capsys)
        assert code == 0
        data = json.loads(out)
        assert data["verdict"] == "pass"
        assert any(kind in note for note in data["notes"])


def test_residual_grid_state(tmp_path, capsys):
    import math

    from stada import equations as eq
    from stada import ideal
    from stada.grid import sample

    basis = ideal.canonical_basis()
    sol = eq.plane_wave(eq.EquationForm.TENSOR, (1.0, 0, 0, 0), 1.0, basis=basis)
    grid = sample(sol.state, 8, math.pi / 4)
    path = tmp_path / "state.json"
    grid.save(str(path))
    code, out, _ = run_cli(["residual", "--form", "tde", "--state", str(path),
                            "--tolerance", "0.2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["backend"] == "grid"
    assert data["grid"] == {"n": 8, "h": math.pi / 4}


def test_residual_offshell_is_usage(capsys):
    code, _, err = run_cli(["residual", "--form", "tde",
                            "--plane-wave", "m=1;p=2,0,0,0"], capsys)
    assert code == 2
    assert "off shell" in err


def test_residual_requires_state(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["residual", "--form", "tde"])
    assert exc.value.code == 2


def test_residual_random_generators(capsys):
    code, out, _ = run_cli(["residual", "--form", "tde",
                            "--plane-wave", "m=1;p=1,0,0,0",
                            "--generators", "random:5"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


# ---- report -----------------------------------------------------------------


def test_report_summarizes(tmp_path, capsys):
    run_cli(["verify", "--suite", "hodge", "--report", str(tmp_path / "v.json")],
            capsys)
    run_cli(["residual", "--form", "tde", "--plane-wave", "m=1;p=1,0,0,0",
             "--report", str(tmp_path / "r.json")], capsys)
    code, out, _ = run_cli(["report", str(tmp_path / "v.json"),
                            str(tmp_path / "r.json")], capsys)
    assert code == 0
    assert "suite hodge pass" in out
    assert "form tde pass" in out


def test_report_without_files_is_usage(capsys, monkeypatch):
    monkeypatch.delenv("STADA_REPORT_DIR", raising=False)
    code, _, err = run_cli(["report"], capsys)
    assert code == 2
