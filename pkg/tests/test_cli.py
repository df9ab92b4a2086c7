import csv
import io
import json

import pytest

from volcomp import cli
from volcomp.config import parse_config
from volcomp.exceptions import SchemaError


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_constants_csv(capsys):
    code, out = run(["constants", "--n", "3..6"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert rows[0].keys() == {"name", "n", "alpha", "value"}
    cn3 = [r for r in rows if r["name"] == "cn" and r["n"] == "3"][0]
    assert float(cn3["value"]) == pytest.approx(0.8271339878658664)


def test_constants_window_error(capsys):
    code, out = run(["constants", "--n", "5", "--name", "thm3", "--alpha", "5"], capsys)
    assert code == 3 and "[1, 4)" in out.err


def test_bodies_list(capsys):
    code, out = run(["bodies", "list"], capsys)
    assert code == 0 and "zonotope" in out.out


def test_eval(capsys):
    code, out = run(["eval", "--body", "{type: cube, n: 3}", "--functional", "projection",
                     "--direction", "1,1,1"], capsys)
    assert code == 0
    assert json.loads(out.out)["value"] == pytest.approx(4 * 3 ** 0.5)
    code, out = run(["eval", "--body", "{type: ball, n: 3}", "--functional", "mu",
                     "--density", "{type: constant}"], capsys)
    assert json.loads(out.out)["value"] == pytest.approx(4.18879, rel=1e-5)


def test_certify(capsys):
    code, out = run(["certify", "--body", "{type: lp_ball, n: 3, p: 1}", "--test", "projection"],
                    capsys)
    assert code == 0 and json.loads(out.out)["verdict"] == "certified-negative"


def test_check_cube(capsys):
    code, out = run(["check", "--case", "sec-hyper", "--bodyK", "{type: cube, n: 3, half: 1}"],
                    capsys)
    assert code == 0 and json.loads(out.out)["status"] == "pass"


def test_check_bad_body(capsys):
    code, _ = run(["check", "--case", "sec-hyper", "--bodyK", "{type: teapot}"], capsys)
    assert code == 3


def test_check_violation_exit_code(capsys):
    code, _ = run(["check", "--case", "proj-frac-stab", "--bodyK",
                   "{type: ball, n: 3, radius: 1.1}", "--bodyL", "{type: ball, n: 3}",
                   "--alpha", "3.5"], capsys)
    assert code == 1


def test_suite_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("cases: [{case: sec-bogus}]\n")
    code, out = run(["suite", "--config", str(bad), "--out", str(tmp_path / "o")], capsys)
    assert code == 3 and "cases[0].case" in out.err
    code, _ = run(["suite", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == 3


def test_parse_config_minimal_and_errors():
    cfg = parse_config("cases:\n  - {case: sec-hyper, n: 3}\n")
    assert cfg.cases[0]["case"] == "sec-hyper" and cfg.cases[0]["n"] == [3]
    with pytest.raises(SchemaError) as exc:
        parse_config("cases:\n  - {case: sec-bogus}\n")
    assert exc.value.path == "cases[0].case"
    with pytest.raises(SchemaError, match=r"\[n-4, n-1\)") as exc:
        parse_config("cases:\n  - {case: sec-frac-stab, n: 5, alpha: 5}\n")
    assert exc.value.path == "cases[0].alpha"
    with pytest.raises(SchemaError) as exc:
        parse_config("cases:\n  - {case: sec-avg, n: 2}\n")
    assert exc.value.path == "cases[0].n[0]"
    with pytest.raises(SchemaError) as exc:
        parse_config("cases:\n  - {case: sec-hyper, bodyK: {type: teapot}}\n")
    assert exc.value.path == "cases[0].bodyK"
    with pytest.raises(SchemaError):
        parse_config("colour: blue\ncases: [{case: sec-hyper}]\n")


def test_suite_outputs_round_trip(tmp_path, capsys):
    cfg = tmp_path / "s.yaml"
    cfg.write_text("seed: 3\ncases:\n  - {case: sec-hyper, count: 4, n: [3, 4]}\n"
                   "  - {case: proj-hyper-min, count: 2, n: 3}\n")
    out = tmp_path / "out"
    code, _ = run(["suite", "--config", str(cfg), "--out", str(out)], capsys)
    assert code == 0
    header = (out / "reports.csv").read_text().splitlines()[0]
    assert header == "case,seed,n,epsilon,lhs,rhs,slack,mode,status"
    reports, summary = cli.read_reports(out / "reports.json")
    assert len(reports) == 6 and summary["total"] == 6
    assert cli.reports_csv(reports) == (out / "reports.csv").read_text()
    hist = (out / "slack_histogram.dat").read_text().splitlines()
    assert hist[0].startswith("#") and len(hist[1].split()) == 2
