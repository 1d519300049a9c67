from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from liesec.cli import (
    FormatError,
    dumps_algebra,
    load_algebra,
    loads_algebra,
    main,
    parse_rows,
    save_algebra,
    strip_timing,
)
from liesec.exactla import GF, QQ
from liesec.maximal import CorpusSpec, catalog, gejn, generate_corpus, sl2

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ["sl2", "r2", "heisenberg", "gejn(1)", "direct_sum(sl2,r2)", "abelian(0)"])
def test_round_trip_catalog(name, tmp_path):
    L = catalog(name).algebra
    path = tmp_path / "a.json"
    save_algebra(L, str(path))
    M = load_algebra(str(path))
    assert M == L and M.labels == L.labels
    assert dumps_algebra(M) == path.read_text()


def test_round_trip_corpus():
    for p in (2, 3):
        for L in generate_corpus(CorpusSpec(GF(p), 3, 2, 5, 4, 15, attempt_budget=200)):
            text = dumps_algebra(L)
            M = loads_algebra(text)
            assert M == L and dumps_algebra(M) == text


def _sl2_obj():
    return json.loads(dumps_algebra(sl2()))


def _bad(mutate):
    obj = _sl2_obj()
    mutate(obj)
    return json.dumps(obj)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        json.dumps({"field": "Q", "dim": 1}),
        _bad(lambda o: o.update(field="R")),
        _bad(lambda o: o.update(field={"GF": 4})),
        _bad(lambda o: o.update(dim=-1)),
        _bad(lambda o: o.update(basis=["h", "e"])),
        _bad(lambda o: o["brackets"][0]["coeffs"].update({"1": "2/4"})),
        _bad(lambda o: o["brackets"][0]["coeffs"].update({"1": "1.5"})),
        _bad(lambda o: o["brackets"][0]["coeffs"].update({"1": 2})),
        _bad(lambda o: o["brackets"][0]["coeffs"].update({"7": "1"})),
        _bad(lambda o: o["brackets"][0].update(i=2, j=1)),
        _bad(lambda o: o["brackets"][0].update(i=1, j=1)),
        _bad(lambda o: o["brackets"].append(dict(o["brackets"][0]))),
        _bad(lambda o: o["brackets"][0].update(extra=1)),
    ],
)
def test_malformed_rational_files(text):
    with pytest.raises(FormatError):
        loads_algebra(text)


def test_malformed_residues():
    obj = json.loads(dumps_algebra(sl2(GF(3))))
    obj["brackets"][0]["coeffs"] = {"1": "3"}
    with pytest.raises(FormatError):
        loads_algebra(json.dumps(obj))
    obj["brackets"][0]["coeffs"] = {"1": "-1"}
    with pytest.raises(FormatError):
        loads_algebra(json.dumps(obj))


def test_malformed_file_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(_bad(lambda o: o["brackets"][0]["coeffs"].update({"1": "2/4"})))
    assert run(["validate", path], capsys)[0] == 2
    assert run(["validate", tmp_path / "missing.json"], capsys)[0] == 2


def test_validate_fixtures(capsys):
    assert run(["validate", FIXTURES / "sl2.json"], capsys)[0] == 0
    assert run(["validate", "--input", FIXTURES / "r2.json"], capsys)[0] == 0
    code, _, err = run(["validate", FIXTURES / "broken_jacobi.json"], capsys)
    assert code == 1 and "violation" in err


def test_catalog_matches_fixtures(capsys):
    for name in ("sl2", "r2"):
        code, out, _ = run(["catalog", name], capsys)
        assert code == 0
        assert out == (FIXTURES / f"{name}.json").read_text()
    assert run(["catalog", "nonsense"], capsys)[0] == 2
    code, out, _ = run(["catalog", "abelian", "2", "--field", "gf3"], capsys)
    assert code == 0 and loads_algebra(out).field == GF(3)


def test_analyze_r2(capsys):
    code, out, _ = run(["analyze", FIXTURES / "r2.json", "--maximal", "0 1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "liesec.report/1" and list(rep)[-1] == "timing"
    (r,) = rep["maximal_reports"]
    assert (r["c_index"], r["ideal_index"], r["type"]) == (0, 1, 1)


def test_analyze_sl2_borel_and_rejections(capsys):
    code, out, _ = run(["analyze", FIXTURES / "sl2.json", "--maximal", "1 0 0; 0 1 0"], capsys)
    assert code == 0
    (r,) = json.loads(out)["maximal_reports"]
    assert (r["c_index"], r["ideal_index"], r["type"]) == (2, 3, 2)
    # a non-maximal subalgebra, a non-subalgebra, and enumeration over Q
    assert run(["analyze", FIXTURES / "sl2.json", "--maximal", "0 1 0"], capsys)[0] == 2
    assert run(["analyze", FIXTURES / "sl2.json", "--maximal", "1 0 0; 0 0 1"], capsys)[0] == 2
    assert run(["analyze", FIXTURES / "sl2.json", "--enumerate"], capsys)[0] == 2
    assert run(["analyze", FIXTURES / "broken_jacobi.json", "--maximal", "0 1 0"], capsys)[0] == 1
    assert run(["analyze", "--maximal", "0 1"], capsys)[0] == 2


def test_analyze_enumerate_finite(tmp_path, capsys):
    path = tmp_path / "sl2_3.json"
    save_algebra(sl2(GF(3)), str(path))
    code, out, _ = run(["analyze", path, "--enumerate"], capsys)
    assert code == 0
    reps = json.loads(out)["maximal_reports"]
    assert len(reps) == 7 and all(r["c_index"] > 0 for r in reps)


def test_analyze_over_budget_is_capability_error(tmp_path, capsys):
    path = tmp_path / "ab.json"
    assert run(["catalog", "abelian", "4", "--field", "gf7", "--out", path], capsys)[0] == 0
    assert run(["analyze", path, "--enumerate", "--budget", "1000"], capsys)[0] == 2


def test_analyze_gejn(tmp_path, capsys):
    path = tmp_path / "g.json"
    save_algebra(gejn(1), str(path))
    rows = "1 0 0 0 0 0; 0 0 0 1 0 0"
    code, out, _ = run(["analyze", path, "--maximal", rows], capsys)
    assert code == 0
    (r,) = json.loads(out)["maximal_reports"]
    assert r["c_index"] == 2 and r["type"] == 2


def test_verify_single_claim(capsys):
    code, out, err = run(["verify", "--suite", "lemma2_ii", "--field", "gf2", "--max-dim", "3",
                          "--target-count", "12"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert [c["claim_id"] for c in rep["claims"]] == ["lemma2_ii"]
    assert rep["claims"][0]["status"] == "pass" and "lemma2_ii: pass" in err


def test_verify_rejects_unknown_suite(capsys):
    assert run(["verify", "--suite", "lemma9"], capsys)[0] == 2
    assert run(["search", "--field", "q"], capsys)[0] == 2
    assert run(["verify", "--max-dim", "0"], capsys)[0] == 2


def test_verify_rational_catalog(capsys):
    code, out, _ = run(["verify", "--field", "q", "--suite", "lemma2_ii,cor_cindex,thm_char0_structure"], capsys)
    assert code == 0
    status = {c["claim_id"]: c["status"] for c in json.loads(out)["claims"]}
    assert status == {"lemma2_ii": "pass", "cor_cindex": "pass", "thm_char0_structure": "pass"}


def test_reports_are_deterministic(capsys):
    argv = ["verify", "--field", "gf3", "--max-dim", "3", "--target-count", "10", "--seed", "9"]
    a = run(argv, capsys)
    b = run(argv, capsys)
    c = run(argv + ["--jobs", "2"], capsys)
    assert a[0] == b[0] == c[0] == 0
    assert strip_timing(a[1]) == strip_timing(b[1]) == strip_timing(c[1])
    code, s1, _ = run(["search", "--field", "gf3", "--max-dim", "3", "--target-count", "10"], capsys)
    _, s2, _ = run(["search", "--field", "gf3", "--max-dim", "3", "--target-count", "10"], capsys)
    assert code == 0 and strip_timing(s1) == strip_timing(s2)


def test_parse_rows():
    assert parse_rows("1 0; 0 1", QQ, 2).dim == 2
    assert parse_rows("1/2 1", QQ, 2).dim == 1
    with pytest.raises(FormatError):
        parse_rows("1 0 0", QQ, 2)
    with pytest.raises(FormatError):
        parse_rows("x 0", QQ, 2)
    assert parse_rows("", GF(2), 2).dim == 0


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "liesec", "validate", str(FIXTURES / "sl2.json")],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.startswith("ok")
