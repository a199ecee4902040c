"""Command line entry point: exit codes and output formats"""

import json

import pytest

from quartica.arrangement import ProjLine, parse_table_csv
from quartica.numberfield import NumberField
from quartica.serialization import CurveSpec
from scripts import quartica_cli
from scripts.quartica_cli import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, build_parser, main
from services import commands

GLOBAL = ["--threads", "1", "--seed", "20240601"]


def _run(capsys, *argv):
    code = main(GLOBAL + list(argv))
    return code, capsys.readouterr().out


def test_quadruple_bound_json(capsys):
    code, out = _run(capsys, "quadruple-bound", "--h", "0", "--json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["command"] == "quadruple-bound"
    assert report["results"]["n4_cap"] == 44


def test_quadruple_bound_out_of_range(capsys):
    code, _ = _run(capsys, "quadruple-bound", "--h", "13")
    assert code == EXIT_INPUT_ERROR


def test_diophantine_default_system(capsys):
    code, out = _run(capsys, "diophantine", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["results"]["count"] == 0


def test_diophantine_custom_system(capsys):
    system = json.dumps({"unknowns": ["a", "b"],
                         "equations": [{"coeffs": [1, 2], "rhs": 4}]})
    code, out = _run(capsys, "diophantine", "--system", system, "--json")
    assert code == EXIT_OK
    assert json.loads(out)["results"]["solutions"] == [
        {"a": 0, "b": 2}, {"a": 2, "b": 1}, {"a": 4, "b": 0}
    ]


def test_incidence_from_lines(capsys):
    code, out = _run(capsys, "incidence", "--lines", "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]",
                     "--json")
    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["t_vector"] == {"2": 3}
    assert results["ordinary_tjurina"] == 3


def test_incidence_csv_matches_reference(capsys, data_dir):
    code, out = _run(capsys, "incidence", "--builtin", "dyck-bitangents", "--csv")
    assert code == EXIT_OK
    reference = parse_table_csv((data_dir / "dyck_incidence.csv").read_text())
    assert parse_table_csv(out).diff(reference) == []


def test_incidence_text(capsys):
    code, out = _run(capsys, "incidence", "--builtin", "kk-bitangents")
    assert code == EXIT_OK
    assert out.startswith("incidence: PASS")
    assert 't_vector: {"2": 324, "4": 9}' in out


def test_unknown_builtin(capsys):
    code, _ = _run(capsys, "incidence", "--builtin", "nope")
    assert code == EXIT_INPUT_ERROR


def test_missing_input_file(capsys, tmp_path):
    code, _ = _run(capsys, "milnor", "--input", str(tmp_path / "absent.json"))
    assert code == EXIT_INPUT_ERROR


def test_malformed_curve_json(capsys, tmp_path):
    path = tmp_path / "curve.json"
    path.write_text('{"label": "broken", "quartic": {"degree": 4, "terms": [}')
    code, _ = _run(capsys, "milnor", "--input", str(path))
    assert code == EXIT_INPUT_ERROR


def test_curve_json_with_unknown_field(capsys, tmp_path):
    path = tmp_path / "curve.json"
    path.write_text(json.dumps({"label": "x", "colour": "red"}))
    code, _ = _run(capsys, "milnor", "--input", str(path))
    assert code == EXIT_INPUT_ERROR


def test_milnor_from_file(capsys, tmp_path):
    curve = {
        "label": "fermat-plus-line",
        "quartic": {"degree": 4, "terms": [{"exp": [4, 0, 0], "coeff": 1},
                                           {"exp": [0, 4, 0], "coeff": 1},
                                           {"exp": [0, 0, 4], "coeff": "1"}]},
        "lines": [{"coords": [1, 1, 1]}],
    }
    path = tmp_path / "curve.json"
    path.write_text(json.dumps(curve))
    code, out = _run(capsys, "milnor", "--input", str(path), "--json")
    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["tau"] == 6
    assert results["d"] == 5
    assert results["profile"]["t2"] == 2
    assert results["certified"] is True
    assert results["checks"]["certified"] is True
    assert results["checks"]["profile"] == "passed"


def test_milnor_degree_cap(capsys):
    code, _ = _run(capsys, "milnor", "--builtin", "klein")
    assert code == EXIT_INPUT_ERROR


def test_verify_dyck(capsys):
    code, out = _run(capsys, "verify", "--builtin", "dyck", "--json", "--timing")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["results"]["h"] == 12
    assert report["results"]["census"] == {"t2": 32, "t7": 12}
    assert "tangency" in report["timing"]


def test_verify_without_lines(capsys):
    code, _ = _run(capsys, "verify", "--builtin", "fermat")
    assert code == EXIT_INPUT_ERROR


def test_hirzebruch_from_counts(capsys):
    wc = json.dumps({"k": 1, "d": 28, "n2": 252, "n4": 21, "t2": 56})
    code, out = _run(capsys, "hirzebruch", "--wc", wc, "--json")
    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["hirzebruch"]["slack"] == "140"
    assert results["count"]["holds"]


def test_hirzebruch_failure_exit_code(capsys):
    code, _ = _run(capsys, "hirzebruch", "--wc", json.dumps({"k": 1, "d": 2, "t7": 9}))
    assert code == EXIT_CHECK_FAILED


def test_hirzebruch_rejects_negative_counts(capsys):
    code, _ = _run(capsys, "hirzebruch", "--wc", json.dumps({"k": 1, "d": 2, "n2": -1}))
    assert code == EXIT_INPUT_ERROR


def test_list(capsys):
    code, out = _run(capsys, "list")
    assert code == EXIT_OK
    assert "kl-octic" in out.splitlines()


def test_bad_rank_method():
    with pytest.raises(SystemExit):
        main(["--rank-method", "gauss", "list"])


def test_two_curve_sources():
    with pytest.raises(SystemExit):
        main(["incidence", "--builtin", "klein", "--lines", "[]"])


def _lines_file(tmp_path, rows):
    path = tmp_path / "lines.json"
    path.write_text(json.dumps({"label": "lines", "lines": [{"coords": r} for r in rows]}))
    return str(path)


def test_milnor_fails_when_profile_is_skipped(capsys, tmp_path):
    # five lines through (0:0:1) plus Z = 0: an ordinary 5-fold point
    rows = [[1, a, 0] for a in range(5)] + [[0, 0, 1]]
    code, out = _run(capsys, "milnor", "--input", _lines_file(tmp_path, rows), "--json")
    assert code == EXIT_CHECK_FAILED
    report = json.loads(out)
    assert report["passed"] is False
    assert report["results"]["tau"] == 21
    assert report["results"]["checks"]["profile"] == "skipped"
    assert report["results"]["checks"]["certified"] is True
    assert "profile" not in report["results"]
    assert any(m.startswith("tau not cross-checked against local types") for m in report["messages"])


def test_milnor_modular_ranks_do_not_pass(capsys, tmp_path):
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    code, out = main(["--rank-method", "modular"] + GLOBAL + ["milnor", "--input",
                     _lines_file(tmp_path, rows), "--json"]), capsys.readouterr().out
    assert code == EXIT_CHECK_FAILED
    report = json.loads(out)
    assert report["results"]["checks"]["certified"] is False
    assert report["results"]["checks"]["profile"] == "passed"
    assert any("mod" in m and "only" in m for m in report["messages"])


def test_milnor_lines_without_quartic_pass(capsys, tmp_path):
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    code, out = _run(capsys, "milnor", "--input", _lines_file(tmp_path, rows), "--json")
    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["tau"] == 6
    assert results["checks"]["certified"] is True
    assert results["checks"]["profile"] == "passed"
    assert "du-plessis-wall-upper" in results["checks"]["classification"]


def test_tol_is_a_global_option(monkeypatch):
    args = build_parser().parse_args(["--tol", "1e-6", "milnor", "--builtin", "fermat"])
    assert args.tol == 1e-6
    seen = {}

    def fake_milnor(spec, cfg, timing):
        seen["tol"] = cfg.tol
        return commands.cmd_list()

    monkeypatch.setattr(commands, "cmd_milnor", fake_milnor)
    quartica_cli.run(args)
    assert seen["tol"] == 1e-6


def test_tol_after_subcommand_rejected():
    with pytest.raises(SystemExit):
        main(["milnor", "--builtin", "fermat", "--tol", "1e-6"])


def test_arrangement_profile_reason(config):
    qq = NumberField.rationals()
    rows = [[1, a, 0] for a in range(5)]
    spec = CurveSpec(label="pencil", field=qq, lines=[ProjLine.of(qq, r) for r in rows])
    profile, reason = commands.arrangement_profile(spec, config)
    assert profile is None
    assert "5 concurrent lines" in reason
    spec = CurveSpec(label="triangle", field=qq, lines=[ProjLine.of(qq, r) for r in rows[:1]]
                     + [ProjLine.of(qq, (0, 1, 0)), ProjLine.of(qq, (0, 0, 1))])
    profile, reason = commands.arrangement_profile(spec, config)
    assert profile.n2 == 3 and reason is None
