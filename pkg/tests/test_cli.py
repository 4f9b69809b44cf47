import io
import json

from branchtor.cli import run


def call(*argv, env_seed=None, monkeypatch=None):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


def test_torsion_cover_certificate():
    code, out, _ = call("torsion-cover", "--factors", "2,3", "--certify")
    assert code == 0
    assert out["degree"] == "11" and out["torsion"] == ["6"]
    cert = out["certificate"]
    assert cert["result"] == {"degree": "11", "torsion": ["6"]}
    assert len(cert["inputs_digest"]) == 64
    assert any(t.startswith("verify_cover: ok") for t in cert["transcript"])


def test_output_is_deterministic():
    a = call("torsion-cover", "--factors", "3,4", "--certify")[2]
    b = call("torsion-cover", "--factors", "3,4", "--certify")[2]
    assert a == b


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("BRANCHTOR_SEED", "7")
    _, out, _ = call("torsion-cover", "--factors", "2", "--certify")
    assert "--seed" in out["certificate"]["command"]
    assert out["certificate"]["command"][out["certificate"]["command"].index("--seed") + 1] == "7"
    monkeypatch.setenv("BRANCHTOR_SEED", "x")
    assert call("match", "--counts", "1,1")[0] == 2


def test_snf_and_groups():
    assert call("snf", "--json", "[[1,0,0],[0,1,0],[0,0,1]]")[1] == {"diagonal": ["1", "1", "1"], "rank": "3"}
    assert call("snf", "--json", "[[4,0],[0,6]]")[1]["diagonal"] == ["2", "12"]
    system = '{"variables":["x1","x2"],"equations":[[["x1",1],["x2",-1]],[["x1",1],["x2",-1]],[["x1",1],["x2",-1]]]}'
    assert call("quotient", "--json", system)[1]["free_rank"] == "1"
    assert call("h1", "--json", system)[1]["free_rank"] == "9"
    out = call("table1", "--factors", "2,3")[1]
    assert len(out["variables"]) == 11 and out["quotient"]["torsion"] == ["6"]


def test_free_group_commands():
    out = call("elevations", "--rank", "2", "--subgroup", "aaa,abAB,baaB", "--word", "a")[1]
    assert sorted(out["degrees"]) == ["2", "3"]
    out = call("intersect", "--rank", "2", "--subgroup", "aa,b,aba", "--other", "aaaa,baaa,abaa,aaba,aaab")[1]
    assert out["rank"] == "9" and out["index"] == "8"
    out = call("complete", "--rank", "2", "--subgroup", "aaa,abAB,baaB")[1]
    assert out["index"] == "5"
    out = call("pullback", "--rank", "2", "--subgroup", "aaa,baa,aba,aab", "--classes", "a,b,ab")[1]
    assert len(out["classes"]) == 3
    code, out, _ = call("pullback", "--rank", "2", "--subgroup", "a", "--classes", "a")
    assert code == 1 and out["error"] == "InfiniteIndexError"


def test_cover_surface_and_match():
    code, out, _ = call("cover-surface", "--genus", "1", "--boundary", "1", "--degree", "2", "--partition", "1,1")
    assert code == 0 and out["surface"]["genus"] == "1" and len(out["surface"]["boundary"]) == 2
    code, out, _ = call("cover-surface", "--genus", "1", "--boundary", "1", "--degree", "2", "--partition", "2")
    assert code == 1 and out["error"] == "InfeasibleError"
    assert len(call("match", "--counts", "2,2,2")[1]["pairs"]) == 3
    code, out, _ = call("match", "--counts", "3,1,1")
    assert code == 1 and "3 elevations" in out["message"]


def test_malformed_input_exit_code():
    assert call("snf", "--json", "[1")[0] == 2
    assert call("snf")[0] == 2
    assert call("not-a-command")[0] == 2
    assert call("elevations", "--rank", "2", "--subgroup", "a", "--word", "a?")[0] == 2


def test_emit_then_verify(tmp_path):
    std = tmp_path / "std.json"
    cover = tmp_path / "b.json"
    data = tmp_path / "d.json"
    pre = tmp_path / "pre.json"
    pdata = tmp_path / "pd.json"
    fig = tmp_path / "fig.json"
    fig.write_text(json.dumps({
        "variables": ["x", "y"],
        "equations": [[["x", 1], ["y", -1]], [["x", 1], ["y", -1]], [["x", 1], ["y", 1]], [["x", 1]]],
    }))
    code, out, _ = call("standardize", "--input", str(fig), "--emit", str(std),
                        "--emit-precover", str(pre), "--emit-data", str(pdata))
    assert code == 0 and out["precover"]["hanging"] != "0"
    assert call("verify", "--cover", str(pre), "--base", str(fig), "--data", str(pdata), "--precover")[1]["ok"]
    assert not call("verify", "--cover", str(pre), "--base", str(fig), "--data", str(pdata))[1]["ok"]
    code, out, _ = call("torsion-cover", "--factors", "2,3", "--emit", str(cover), "--emit-data", str(data))
    base = tmp_path / "base.json"
    base.write_text(json.dumps({
        "circles": [{"id": "C1"}, {"id": "C2"}],
        "surfaces": [{"id": n, "orientable": True, "genus": 1,
                      "boundary": [{"label": "b1", "sign": 1}, {"label": "b2", "sign": 1}]}
                     for n in ("Sigma", "Theta", "Pi")],
        "attachments": [{"surface": n, "boundary": l, "circle": c, "sign": s, "m": 1, "n": 1}
                        for n in ("Sigma", "Theta", "Pi") for l, c, s in (("b1", "C1", 1), ("b2", "C2", -1))],
    }))
    out = call("verify", "--cover", str(cover), "--base", str(base), "--data", str(data))[1]
    assert out["ok"] and out["degree"] == "11"
    batch = tmp_path / "batch.json"
    batch.write_text(json.dumps([
        {"cover": str(cover), "base": str(base), "data": str(data)},
        {"cover": str(pre), "base": str(fig), "data": str(pdata), "precover": True},
    ]))
    out = call("verify", "--batch", str(batch), "--jobs", "2")[1]
    assert out["ok"] and len(out["reports"]) == 2
