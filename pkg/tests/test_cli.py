import json

import pytest

from stgq import io
from stgq.cli import main
from stgq.gq import verify_gq


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_times(run):
    for r in run["records"]:
        r.pop("wall_time", None)
    return run


def test_verify_all_w3(capsys):
    code, out, _ = run(capsys, "verify", "all", "--model", "w", "--q", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    got = {r["check"]: r["verdict"] for r in data["records"]}
    for key in ("gq.verify", "kantor.axioms", "stgq.family", "benson.congruence", "star.ab1", "averaging.stabilizers", "ar1.dual_net", "pcp.axioms"):
        assert got[key] is True, key
    assert got["pcp.factor_analysis"] == "AI"


def test_json_deterministic(capsys):
    args = ("verify", "gq", "--model", "w", "--q", "3", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert strip_times(json.loads(a)) == strip_times(json.loads(b))


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "gq", "--model", "w", "--q", "2")
    assert code == 0
    assert "PASS gq.verify" in out


def test_build_and_verify_file(tmp_path, capsys):
    geo = tmp_path / "w3.geo"
    code, out, _ = run(capsys, "build", "w", "--q", "3", "--out", str(geo))
    assert code == 0 and "40 points" in out
    assert verify_gq(io.load_geometry(geo.read_text())).order == (3, 3)
    code, out, _ = run(capsys, "verify", "gq", "--geometry", str(geo), "--format", "json")
    assert code == 0
    recs = {r["check"]: r["verdict"] for r in json.loads(out)["records"]}
    assert recs["gq.verify"] is True


def test_build_coset_writes_autos(tmp_path, capsys):
    out = tmp_path / "c.geo"
    code, _, _ = run(capsys, "build", "coset", "--q", "3", "--from", "classical-family", "--out", str(out))
    assert code == 0
    g = io.load_geometry(out.read_text())
    acts = io.load_autos((tmp_path / "c.aut").read_text(), g)
    assert len(acts) == 27
    code, text, _ = run(capsys, "verify", "benson", "--geometry", str(out), "--autos", str(tmp_path / "c.aut"), "--format", "json")
    assert code == 0
    assert all(r["verdict"] is True for r in json.loads(text)["records"])


def test_build_family_file(tmp_path, capsys):
    fam = tmp_path / "k.fam"
    code, out, _ = run(capsys, "build", "classical-family", "--q", "3", "--out", str(fam))
    assert code == 0 and "axioms true" in out
    code, out, _ = run(capsys, "verify", "stgq", "--family", str(fam), "--format", "json")
    assert code == 0
    assert {r["check"]: r["verdict"] for r in json.loads(out)["records"]}["stgq.family"] is True


def test_report_round_trip(tmp_path, capsys):
    saved = tmp_path / "run.json"
    code, out, _ = run(capsys, "verify", "averaging", "--model", "w", "--q", "3", "--out", str(saved))
    assert code == 0
    code, again, _ = run(capsys, "report", str(saved))
    assert code == 0 and again == out
    code, js, _ = run(capsys, "report", str(saved), "--format", "json")
    assert json.loads(js) == json.loads(saved.read_text())


def test_expectations(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("# expectations\ngq.verify=true\n")
    assert run(capsys, "verify", "gq", "--model", "w", "--q", "3", "--expect", str(good))[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("gq.verify=false\n")
    code, out, _ = run(capsys, "verify", "gq", "--model", "w", "--q", "3", "--expect", str(bad))
    assert code == 1 and "MISMATCH gq.verify" in out


def test_h3_findings(capsys):
    code, out, _ = run(capsys, "verify", "all", "--model", "h3", "--q", "2", "--format", "json")
    assert code == 0
    got = {r["check"]: r["verdict"] for r in json.loads(out)["records"]}
    assert got["twist.decomposition"] is True
    assert got["twist.subgq_plane"] is True
    assert got["star.ab1"] is True


def test_suzuki_tits_2(capsys):
    code, out, _ = run(capsys, "verify", "moufang", "--model", "suzuki-tits", "--q", "2", "--format", "json")
    assert code == 0
    got = {r["check"]: r["verdict"] for r in json.loads(out)["records"]}
    assert got["moufang.iroot_inf"] is True
    assert got["moufang.iroot_0"] is False and got["moufang.iroot_1"] is False
    assert got["moufang.mstgq"] is False


def test_suzuki_tits_8_needs_deep(capsys):
    code, _, err = run(capsys, "verify", "stgq", "--model", "suzuki-tits", "--q", "8")
    assert code == 2 and "--deep" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("build", "w", "--q", "4"),
        ("build", "w"),
        ("verify", "gq", "--model", "heisenberg", "--n", "3", "--q", "2"),
        ("verify", "gq", "--geometry", "/nonexistent/file.geo"),
        ("report", "/nonexistent/run.json"),
    ],
)
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "report", "x.json", "--format", "xml")[0] == 2


def test_malformed_input_file(tmp_path, capsys):
    p = tmp_path / "bad.geo"
    p.write_text("geom 3 2\nL 0: 0 1 2\n")
    code, _, err = run(capsys, "verify", "gq", "--geometry", str(p))
    assert code == 2 and "expected 2 lines" in err


def test_autos_mismatch(tmp_path, capsys):
    run(capsys, "build", "coset", "--q", "3", "--out", str(tmp_path / "c.geo"))
    run(capsys, "build", "w", "--q", "2", "--out", str(tmp_path / "w2.geo"))
    code, _, _ = run(capsys, "verify", "benson", "--geometry", str(tmp_path / "w2.geo"), "--autos", str(tmp_path / "c.aut"))
    assert code == 2


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("STGQ_THREADS", "4")
    _, a, _ = run(capsys, "verify", "all", "--model", "w", "--q", "3", "--format", "json")
    monkeypatch.setenv("STGQ_THREADS", "1")
    _, b, _ = run(capsys, "verify", "all", "--model", "w", "--q", "3", "--format", "json")
    assert strip_times(json.loads(a)) == strip_times(json.loads(b))
