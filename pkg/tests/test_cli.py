import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from plumbfloer.cli import main

SCHEMA = json.loads(resources.files("plumbfloer").joinpath("schema.json").read_text())


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, first_line",
    [
        (["twist", "--seifert", "-1; 1/2, 1/3"], "tw = -5 (height: #=4; farey: q=5, p=3,2)"),
        (["hf", "--brieskorn", "2,3,5"], "spin^c classes: 1; d = 2"),
        (["obstruct", "--brieskorn", "2,3,7"], "obstructed (d=0; blown-down form not even)"),
        (["obstruct", "--brieskorn", "2,3,5"], "obstructed (d=2; d = 2 != 0)"),
        (["classify", "--seifert", "-2; 1/3, 1/3"], "tight structures: 4 (count)"),
        (["classify", "--seifert", "-1; 1/3, 1/5"], "fillable structures: <= 7 (bound, not count)"),
        (["brieskorn", "2,3,7"], "Σ(2,3,7) = M(-1; 1/2, 1/3, 1/7)"),
        (["seifert", "--seifert", "-1; 1/2, 1/3"], "M(-1; 1/2, 1/3)"),
        (["graph", "--seifert", "-1; 1/2, 1/3"], "graph: -1; [-2] | [-3]"),
        (["present", "--seifert", "-1; 1/2, 1/3, 1/7"], "case: cable_T33"),
        (["torus-link", "--p", "2", "--q", "3", "--matrix=-7,6;6,-7"], "M(-1; 1/2, 1/3, 1/13, 1/13)"),
        (["sweep", "--e0=-1", "--n", "2", "--max-den", "5", "--workers", "1"], "suite twist: 20 cases, 20 pass, 0 fail"),
    ],
)
def test_text_output(argv, first_line, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.splitlines()[0] == first_line


@pytest.mark.parametrize(
    "argv, code",
    [
        (["twist", "--seifert", "-1; 0.5, 1/3"], 1),
        (["twist"], 1),
        (["nope"], 1),
        (["hf", "--graph", "-1; -2, -3"], 1),
        (["twist", "--seifert", "0; 1/2, 1/3"], 2),
        (["hf", "--seifert", "-1; 1/2, 1/2"], 2),
        (["brieskorn", "2,4,5"], 2),
        (["classify", "--seifert", "-2; 1/2, 1/2, 1/2, 1/2"], 2),
        (["torus-link", "--p", "2", "--q", "3", "--matrix", "1"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, out, err = run(argv, capsys)
    assert got == code
    assert err.startswith("error:")


def test_consistency_exit_code(monkeypatch, capsys):
    from plumbfloer import cli

    monkeypatch.setattr(cli, "twisting_number_farey", lambda s: type("R", (), {"q": 99, "witnesses": {}})())
    code, _, err = run(["twist", "--seifert", "-1; 1/2, 1/3"], capsys)
    assert code == 3 and "disagree" in err


ALL_JSON = [
    ["seifert", "--seifert", "-1; 1/2, 1/3"],
    ["brieskorn", "2,3,5"],
    ["graph", "--brieskorn", "2,3,7"],
    ["hf", "--seifert", "-1; 1/3, 1/5"],
    ["twist", "--seifert", "-1; 2/3, 1/4"],
    ["classify", "--seifert", "-3; 1/2"],
    ["classify", "--brieskorn", "2,3,7"],
    ["present", "--seifert", "-1; 2/5, 1/3, 1/4"],
    ["obstruct", "--brieskorn", "3,4,5"],
    ["obstruct", "--seifert", "-2; 1/2, 1/2"],
    ["torus-link", "--p", "2", "--q", "3", "--sign", "-", "--matrix=-2"],
    ["sweep", "--e0=-1,-2", "--n", "2", "--max-den", "4", "--workers", "1", "--rows"],
]


@pytest.mark.parametrize("argv", ALL_JSON, ids=lambda a: a[0])
def test_json_schema_and_determinism(argv, capsys):
    code, out1, _ = run(argv + ["--json"], capsys)
    assert code == 0
    doc = json.loads(out1)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == argv[0]
    _, out2, _ = run(argv + ["--json"], capsys)
    assert out1 == out2


def test_cache_is_transparent(tmp_path, capsys, monkeypatch):
    argv = ["hf", "--brieskorn", "2,3,7", "--classes", "--json"]
    _, plain, _ = run(argv, capsys)
    _, cold, _ = run(argv + ["--cache", str(tmp_path)], capsys)
    assert len(list(tmp_path.glob("*.json"))) == 1
    _, warm, _ = run(argv + ["--cache", str(tmp_path)], capsys)
    monkeypatch.setenv("PLUMBFLOER_CACHE", str(tmp_path))
    _, env, _ = run(argv, capsys)
    assert plain == cold == warm == env


def test_figures(tmp_path, capsys):
    code, out, _ = run(["hf", "--seifert", "-1; 1/3, 1/5", "--figures", str(tmp_path)], capsys)
    assert code == 0 and (tmp_path / "hf.png").stat().st_size > 0
    code, out, _ = run(["sweep", "--e0=-1", "--n", "2", "--max-den", "4", "--workers", "1", "--figures", str(tmp_path)], capsys)
    assert code == 0 and (tmp_path / "sweep.png").stat().st_size > 0


def test_sweep_parallel_order_is_deterministic(capsys):
    base = ["sweep", "--e0=-1,-2", "--n", "2", "--max-den", "5", "--rows", "--json"]
    _, one, _ = run(base + ["--workers", "1"], capsys)
    _, two, _ = run(base + ["--workers", "2"], capsys)
    assert one == two


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "plumbfloer", "twist", "--seifert", "-1; 1/2, 1/3"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.startswith("tw = -5")
