import json

import pytest

from chebcert.cli import main, sandbox
from chebcert import Certificate


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_derive_writes_certificate(tmp_path, capsys):
    out = tmp_path / "certificate.json"
    code, text = run(capsys, "derive", "--out", str(out))
    assert code == 0
    assert "12577" in text
    cert = Certificate.read(out)
    assert cert.enclosure("A_1").lo == 12577
    assert cert.verdicts()["zfr"] == "PROVED"


def test_derive_threads_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["derive", "--no-claims", "--threads", "1", "--out", str(a)]) == 0
    assert main(["derive", "--no-claims", "--threads", "8", "--out", str(b)]) == 0
    assert Certificate.read(a).canonical() == Certificate.read(b).canonical()


def test_ineq_selector(capsys):
    code, text = run(capsys, "ineq", "Q")
    assert code == 0 and "Q_nonneg" in text and "PROVED" in text


def test_ineq_lemma86_reports_routes(capsys, tmp_path):
    code, text = run(capsys, "ineq", "lemma86", "--out", str(tmp_path / "r.json"))
    assert code == 0
    assert "REFUTED (report)" in text
    assert "exponent" in text


def test_ineq_bad_selector():
    with pytest.raises(SystemExit):
        main(["ineq", "bogus"])


def test_dag(capsys):
    code, text = run(capsys, "dag")
    assert code == 0 and '"alpha_0" -> "alpha_1"' in text and '"c_7" -> "c_12"' in text
    code, text = run(capsys, "dag", "--empty")
    assert code == 0 and text.startswith("digraph")


def test_bad_config_value(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("b_zfr = 2\n")
    assert main(["derive", "--config", str(cfg), "--out", str(tmp_path / "x.json")]) == 2


def test_missing_config(tmp_path):
    assert main(["ineq", "Q", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_refuted_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("c16 = 100\n")
    assert main(["ineq", "lemma84", "--config", str(cfg)]) == 1


def test_sandbox_commands(capsys):
    code, text = run(capsys, "sandbox", "pi")
    assert code == 0 and json.loads(text)["quantities"]["pi"] == 78498
    code, text = run(capsys, "sandbox", "S", "--x", "100")
    assert json.loads(text)["quantities"]["S"] == 10
    code, text = run(capsys, "sandbox", "ap", "--q", "4")
    rows = json.loads(text)["comparisons"]
    assert {r["residue"]: r["least_prime"] for r in rows} == {1: 5, 3: 3}


def test_sandbox_limits(capsys):
    assert main(["sandbox", "pi", "--x-max", str(10**9)]) == 2
    assert main(["sandbox", "ap", "--q", "100000"]) == 2


def test_sandbox_tail():
    res = sandbox("tail", x_max=10**5)
    assert res.passed and [r["x"] for r in res.comparisons] == [101, 150, 1000, 10**4]
    # at the sieve limit itself the remainder term alone exceeds the bound
    assert not sandbox("tail", x_max=10**5, tail_points=(10**5,)).passed


def test_optimize_empty_spec(tmp_path, capsys):
    spec = tmp_path / "empty.json"
    spec.write_text("")
    out = tmp_path / "sweep.csv"
    assert main(["optimize", str(spec), "--out", str(out)]) == 0
    assert out.read_text().count("\n") == 1


def test_optimize_sweep(tmp_path, capsys):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"objective": "minimize_c16", "grid": {"c16": ["2000", "3144.25"]}}))
    out = tmp_path / "sweep.csv"
    assert main(["optimize", str(spec), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and ",False," in lines[1] and ",True," in lines[2]
    best = Certificate.read(tmp_path / "sweep.best.json")
    assert best.params["c16"] == "3144.25"


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
