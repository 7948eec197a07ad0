import json
import subprocess
import sys

import pytest

from relpres.cli import BAD_INPUT, OK, UNDETERMINED, VIOLATED, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_area_of_commutator(capsys):
    code, out, _ = run(capsys, "area", "--pres", "zxz.rpres", "--word", "H1[a^-2] b^-1 H1[a^2] b")
    assert code == OK
    assert "area: 2" in out and "exact: true" in out
    assert out.startswith("# relpres ")


def test_area_of_nontrivial_word(capsys):
    code, out, _ = run(capsys, "area", "--pres", "zxz", "--word", "b H1[a]", "--max-area", "3")
    assert code == VIOLATED
    assert "area: none" in out


def test_area_budget_is_undetermined(capsys):
    code, _, _ = run(capsys, "area", "--pres", "zxz", "--word", "H1[a^-4] b^-1 H1[a^4] b",
                     "--max-area", "2")
    assert code == UNDETERMINED


def test_area_svg(capsys, tmp_path):
    svg = tmp_path / "d.svg"
    code, _, _ = run(capsys, "area", "--pres", "zxz", "--word", "H1[a] b H1[a^-1] b^-1",
                     "--svg", str(svg))
    assert code == OK
    assert svg.read_text().startswith("<svg")


def test_bad_inputs(capsys):
    assert run(capsys, "area", "--pres", "missing.rpres", "--word", "b")[0] == BAD_INPUT
    code, _, err = run(capsys, "area", "--pres", "zxz", "--word", "q")
    assert code == BAD_INPUT and "error:" in err
    assert run(capsys, "hnn", "--pres", "f2-rel", "--k", "K", "--nu", "H1", "--iota", "y")[0] == BAD_INPUT


def test_dehn_csv_and_jobs_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "dehn", "--pres", "zxz.rpres", "--n", "4", "--rho", "3", "--jobs", "1",
               "--out", str(a))[0] == OK
    assert run(capsys, "dehn", "--pres", "zxz.rpres", "--n", "4", "--rho", "3", "--jobs", "3",
               "--out", str(b))[0] == OK
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0].startswith("# relpres") and lines[1].startswith("# config")
    assert lines[2] == "n,delta,witness,exact_flag"
    assert lines[-1].startswith("4,3,")


def test_dry_run_does_no_work(capsys, tmp_path):
    out = tmp_path / "never.csv"
    code, text, _ = run(capsys, "--dry-run", "dehn", "--pres", "zxz", "--n", "9", "--out", str(out))
    assert code == OK and text.startswith("plan:")
    assert not out.exists()
    code, text, _ = run(capsys, "dehn", "--dry-run", "--pres", "zxz", "--n", "9")
    assert code == OK and text.startswith("plan:")


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", "--pres", "zxz", "--horizon", "4")
    assert code == OK
    assert "verdict: ill-defined-evidence" in out
    assert "areas: [1, 2, 3, 4]" in out


def test_hnn_matches_golden(capsys, tmp_path):
    path = tmp_path / "e1.rpres"
    assert run(capsys, "hnn", "--pres", "f2-rel", "--k", "K", "--nu", "H1", "--iota", "y=x",
               "--out", str(path))[0] == OK
    data = json.loads(path.read_text())
    assert data["relators"] == ["t^-1 y t H1[x^-1]"]
    assert data["meta"]["provenance"][0].startswith("relpres")


def test_amalgam(capsys, tmp_path):
    path = tmp_path / "am.rpres"
    assert run(capsys, "amalgam", "--a", "f2-rel", "--b", "zxz", "--k", "K", "--eta", "H1",
               "--xi", "y=a", "--out", str(path))[0] == OK
    data = json.loads(path.read_text())
    assert data["stable"] is False
    assert data["relators"] == ["H1_2[a] b H1_2[a^-1] b^-1", "y H1_2[a^-1]"]


@pytest.mark.parametrize("action, code", [
    ("check", OK), ("bands", OK), ("domains", OK), ("surgery", OK), ("audit", UNDETERMINED)])
def test_diagram_actions(capsys, tmp_path, action, code):
    got, out, _ = run(capsys, "diagram", action, "--in", "fig1.vkd", "--pres", "e1",
                      "--out", str(tmp_path / "o.vkd"))
    assert got == code, out


def test_diagram_domains_reports_pair(capsys):
    _, out, _ = run(capsys, "diagram", "domains", "--in", "fig1.vkd", "--pres", "e1")
    assert "K-connected" in out
    assert out.count("domain ") >= 3


def test_diagram_audit_with_gamma(capsys, tmp_path):
    gamma = tmp_path / "g.csv"
    gamma.write_text("n,value,exact\n" + "".join(f"{n},0,1\n" for n in range(1, 13)))
    code, out, _ = run(capsys, "diagram", "audit", "--in", "fig2.vkd", "--pres", "e1",
                       "--gamma", str(gamma))
    # the unshortened band of fig2 breaks the per-domain band bound
    assert code == VIOLATED
    assert "fails" in out


def test_growth_commands(capsys, tmp_path):
    f = tmp_path / "f.csv"
    f.write_text("n,value,exact\n1,1,1\n2,0,1\n3,0,1\n4,5,1\n")
    out = tmp_path / "bar.csv"
    assert run(capsys, "closure", "--in", str(f), "--out", str(out))[0] == OK
    assert out.read_text().splitlines()[-1] == "4,5,1"
    g = tmp_path / "g.csv"
    g.write_text("n,value,exact\n" + "".join(f"{n},{n * n},1\n" for n in range(1, 33)))
    code, text, _ = run(capsys, "fit", "--f", str(f), "--g", str(g))
    assert code == OK and "holds" in text
    code, text, _ = run(capsys, "fit", "--f", str(g), "--g", str(f), "--box", "2")
    assert code == VIOLATED
    code, text, _ = run(capsys, "bound", "--delta", str(f), "--gamma", str(g))
    assert code == OK


def test_corpus(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus")
    assert code == OK and "zxz.rpres" in out and "fig1.vkd" in out
    assert run(capsys, "corpus", "--out", str(tmp_path / "c"))[0] == OK
    assert (tmp_path / "c" / "e1.golden.rpres").exists()


def test_console_script_version():
    res = subprocess.run([sys.executable, "-m", "relpres.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip().startswith("relpres ")
