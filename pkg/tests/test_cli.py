import json
from pathlib import Path

import pytest

from wildram.cli import main

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "wildram" / "schemas"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def validate(payload, schema_name):
    if jsonschema is None:
        pytest.skip("jsonschema not installed")
    with open(SCHEMA_DIR / schema_name) as fh:
        schema = json.load(fh)
    jsonschema.validate(payload, schema)


def write_additive_json(tmp_path, name, p, k, coeffs):
    data = {"field": {"p": p, "k": k, "modulus": None}, "a": coeffs}
    if k == 1:
        data["field"] = {"p": p, "k": 1, "modulus": [0, 1]}
    else:
        del data["field"]["modulus"]
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def write_map_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_obstruction_command(capsys):
    code, out = run_cli(capsys, "obstruction", "--p", "2", "--m", "3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["crit_count"] == 14
    assert payload["obstructed"] is True
    validate(payload, "obstruction.json")

    code, out = run_cli(capsys, "obstruction", "--p", "2", "--m", "2", "--json")
    assert code == 1  # mathematically negative: not obstructed at this level
    payload = json.loads(out)
    assert payload["crit_count"] == 6 and payload["iterate_hint"] == 2
    validate(payload, "obstruction.json")


def test_identities_command(capsys):
    code, out = run_cli(capsys, "identities", "--p", "5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["wilson_residue"] == 4
    validate(payload, "identities.json")


def test_census_command(capsys):
    code, out = run_cli(capsys, "census", "--p", "3", "--m", "1", "--q", "9", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["class_count"] == 8
    validate(payload, "census.json")


def test_census_jobs_matches_sequential(capsys):
    code, out = run_cli(capsys, "census", "--p", "2", "--m", "2", "--q", "4", "--json")
    assert code == 0
    seq = json.loads(out)
    code, out = run_cli(
        capsys, "census", "--p", "2", "--m", "2", "--q", "4", "--json", "--jobs", "2"
    )
    assert code == 0
    par = json.loads(out)
    assert seq == par


def test_lift_reduce_command(capsys):
    code, out = run_cli(
        capsys, "lift", "--p", "3", "--a", "1", "--reduce", "--sbar", "1", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["reduction"]["coeffs"] == [[0], [2], [0], [1]]  # z^3 - z = z^3 + 2z
    validate(payload, "lift.json")


def test_lift_scaling_and_critical(capsys):
    code, out = run_cli(
        capsys, "lift", "--p", "3", "--a", "1", "--scaling-check", "--critical", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["scaling_check"] is True
    assert payload["critical"]["value_valuation"] == -3
    validate(payload, "lift.json")


def test_lift_locus_flag(capsys):
    code, out = run_cli(
        capsys, "lift", "--p", "3", "--a", "1", "--locus", "1", "1", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["locus"]["degree"] == 9
    validate(payload, "lift.json")


def test_orbit_command_grid(capsys):
    code, out = run_cli(
        capsys, "orbit", "--p", "3", "--a", "1,2,4", "--max-steps", "8", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert [o["verdict"] for o in payload["orbits"]] == ["escape"] * 3
    validate(payload, "orbit_grid.json")


def test_locus_command(capsys):
    code, out = run_cli(capsys, "locus", "--p", "3", "--m", "1", "--n", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["degree"] == 9
    validate(payload, "locus.json")

    code, _ = run_cli(capsys, "locus", "--p", "7", "--m", "1", "--n", "1")
    assert code == 3  # budget


def test_pco_command(capsys, tmp_path):
    fc = {
        "domain": {"kind": "finite_field", "p": 3, "k": 1, "modulus": [0, 1]},
        "num": [[0], [2], [0], [1]],
        "den": [[1]],
    }
    path = write_map_json(tmp_path, "fc.json", fc)
    code, out = run_cli(capsys, "pco", "--map", path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["edges"] == [[0, 0, 3]]
    validate(payload, "pco.json")

    code, out = run_cli(capsys, "pco", "--map", path, "--dot")
    assert code == 0
    assert out.startswith("digraph")
    assert '"3"' in out


def test_monodromy_command(capsys, tmp_path):
    path = write_additive_json(tmp_path, "f.json", 2, 1, [[1], [1]])
    code, out = run_cli(capsys, "monodromy", "--map", path, "--depth", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["levels"][1]["order"] == 4
    assert payload["projections"][0]["kernel_size"] == 2
    validate(payload, "monodromy.json")


def test_normal_form_and_conjugate_commands(capsys, tmp_path):
    f1 = write_additive_json(tmp_path, "f1.json", 3, 1, [[2], [1]])
    code, out = run_cli(capsys, "normal-form", "--map", f1, "--json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "normal_form.json")

    f2 = write_additive_json(tmp_path, "f2.json", 3, 1, [[1], [1]])
    code, out = run_cli(capsys, "conjugate", "--first", f1, "--second", f2, "--json")
    assert code == 1  # different multipliers: not conjugate
    payload = json.loads(out)
    assert payload == {"conjugate": False}
    validate(payload, "conjugate.json")

    code, out = run_cli(capsys, "conjugate", "--first", f1, "--second", f1, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["conjugate"] is True
    validate(payload, "conjugate.json")


def test_obstruction_pipeline_command(capsys, tmp_path):
    path = write_additive_json(tmp_path, "f.json", 2, 1, [[1], [1]])
    code, out = run_cli(capsys, "obstruction", "--map", path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 3 and payload["level_order"] == 8
    assert payload["obstruction"]["crit_count"] == 14
    validate(payload, "obstruction.json")


def test_deterministic_output(capsys):
    _, out1 = run_cli(capsys, "census", "--p", "3", "--m", "1", "--q", "9", "--json")
    _, out2 = run_cli(capsys, "census", "--p", "3", "--m", "1", "--q", "9", "--json")
    assert out1 == out2


def test_deterministic_across_processes():
    # fresh interpreters must produce byte-identical reports
    import subprocess
    import sys

    def run(args):
        return subprocess.run(
            [sys.executable, "-m", "wildram.cli", *args],
            capture_output=True,
            check=True,
        ).stdout

    for args in (
        ["census", "--p", "2", "--m", "2", "--q", "4", "--json"],
        ["orbit", "--p", "3", "--a", "1,2", "--max-steps", "6", "--json"],
        ["obstruction", "--p", "2", "--m", "3", "--json"],
    ):
        assert run(args) == run(args)


def test_usage_error_exit_code(capsys):
    code = main(["census", "--p", "3"])  # missing required flags
    assert code == 2

    code = main(["obstruction"])
    assert code == 2


def test_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("WILDRAM_BUDGET", "4")
    code, _ = run_cli(capsys, "census", "--p", "3", "--m", "1", "--q", "9", "--json")
    assert code == 3
    monkeypatch.delenv("WILDRAM_BUDGET")
