"""The nine acceptance criteria, each reported as one pass/fail line.

Corpora: seed 42 over GF(2) and GF(3), algebras of dimension at most 5,
drawn from 5x5 matrix closures plus the finite catalog and its enrichments.
One ``verify`` run covers criteria 1-6; 7 re-derives the catalog numbers;
8 compares against brute-force element-set oracles; 9 runs the CLI.
"""

from __future__ import annotations

import time

import pytest

from conftest import ACCEPTANCE_LINES
from liesec.cli import main, strip_timing
from liesec.csection import (
    FINITE_CLAIMS,
    analyze_maximal,
    c_index,
    ideal_index,
    is_c_ideal,
    primitivity_type,
    verify,
)
from liesec.exactla import GF, QQ, Subspace
from liesec.liealg import (
    Verdict,
    certify_simple,
    centroid,
    core,
    fingerprint,
    is_nil_subalgebra,
    is_subalgebra,
    killing_form,
    radical,
    span,
    validate,
)
from liesec.exactla import rank
from liesec.maximal import (
    CorpusSpec,
    certify_maximal,
    gejn,
    gejn_maximals,
    generate_corpus,
    heisenberg,
    maximal_subalgebras,
    one_step_extensions,
    r2,
    sl2,
)
from oracles import (
    ad_matrix,
    all_subspace_sets,
    elements,
    ideal_sets,
    is_nilpotent_matrix,
    is_solvable_set,
    is_subalgebra_set,
)

FIELDS = (2, 3)
TARGET = 150


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {num} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def corpora():
    t0 = time.perf_counter()
    out = {}
    for p in FIELDS:
        spec = CorpusSpec(GF(p), 5, 3, 42, 5, TARGET, attempt_budget=4000)
        out[p] = generate_corpus(spec)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def outcomes(corpora):
    cs, gen_seconds = corpora
    algebras = [L for p in FIELDS for L in cs[p]]
    ids = [f"GF({p})#{i}" for p in FIELDS for i in range(len(cs[p]))]
    t0 = time.perf_counter()
    out = verify(FINITE_CLAIMS, algebras, ids=ids, factor_max_dim=4)
    return {o.claim_id: o for o in out}, gen_seconds + time.perf_counter() - t0


def _summary(o) -> str:
    s = f"{o.instances_checked} instances, {len(o.violations)} violations"
    if o.degraded:
        s += f", {o.degraded} fingerprint-only comparisons"
    return s


def test_criterion_1_trivial_sections_iff_solvable(corpora, outcomes):
    cs, _ = corpora
    out, seconds = outcomes
    sizes = {p: len({fingerprint(L) for L in cs[p]}) for p in FIELDS}
    total = sum(sizes.values())
    dims_ok = all(1 <= L.dim <= 5 for p in FIELDS for L in cs[p])
    o = out["thm_trivial_i"]
    ok = total >= 200 and dims_ok and o.status == "pass" and seconds <= 300
    detail = (
        f"{total} distinct algebras (GF(2) {sizes[2]}, GF(3) {sizes[3]}), "
        f"{_summary(o)}, {seconds:.0f}s for corpus + all claims"
    )
    record(1, "solvable iff every c-index is 0", ok, detail)
    assert ok, o.violations[:3]


def test_criterion_2_nil_sections_iff_solvable(outcomes):
    o = outcomes[0]["thm_nil"]
    ok = o.status == "pass"
    record(2, "solvable iff every section is nil", ok, _summary(o))
    assert ok, o.violations[:3]


def test_criterion_3_index_identities(outcomes):
    a, b = outcomes[0]["lemma2_ii"], outcomes[0]["lemma2_i"]
    ok = a.status == "pass" and b.status == "pass" and a.instances_checked > 0
    record(3, "eta = eta* + codim and c-ideal iff eta* = 0", ok, f"{_summary(a)}; {_summary(b)}")
    assert ok, (a.violations + b.violations)[:3]


def test_criterion_4_section_uniqueness(outcomes):
    o = outcomes[0]["lemma_unique"]
    ok = o.status == "pass" and o.instances_checked > 0
    record(4, "sections from different supplementing factors agree", ok, _summary(o))
    assert ok, o.violations[:3]


def test_criterion_5_abelian_factors_are_complemented(outcomes):
    o = outcomes[0]["lemma_supp"]
    ok = o.status == "pass" and o.instances_checked > 0
    record(5, "M & A = B for abelian supplemented factors", ok, _summary(o))
    assert ok, o.violations[:3]


def test_criterion_6_sections_pass_to_quotients(outcomes):
    o = outcomes[0]["lemma_factor"]
    ok = o.status == "pass" and o.instances_checked > 0
    record(6, "Sec(M) agrees with Sec(M/B)", ok, _summary(o) + " (dim <= 4)")
    assert ok, o.violations[:3]


def _catalog_checks() -> list[str]:
    bad = []

    def expect(label, got, want):
        if got != want:
            bad.append(f"{label}: got {got}, expected {want}")

    S = sl2()
    B = span(S, [(1, 0, 0), (0, 1, 0)])
    r = analyze_maximal(S, B)
    expect("sl2 Borel eta*", r.c_index, 2)
    expect("sl2 Borel eta", r.ideal_index, 3)
    expect("sl2 Borel type", r.prim_type, 2)
    expect("sl2 Borel c-ideal", (r.is_c_ideal, is_c_ideal(S, B).exhaustive), (False, True))

    G = gejn(1)
    expect("gejn(1) validate", validate(G), [])
    expect("gejn(1) Killing rank", rank(killing_form(G), QQ), G.dim)
    expect("gejn(1) centroid dimension", len(centroid(G)), 1)
    expect("gejn(1) certified simple", certify_simple(G), True)
    for i, M in enumerate(gejn_maximals(1), 1):
        expect(f"gejn(1) M{i} subalgebra", is_subalgebra(G, M), True)
        expect(f"gejn(1) M{i} one-step extensions", all(E.dim == G.dim for E in one_step_extensions(G, M)), True)
        expect(f"gejn(1) M{i} certified", certify_maximal(G, M).verdict, Verdict.YES)
        expect(f"gejn(1) M{i} eta*", c_index(G, M), 2)
        expect(f"gejn(1) M{i} eta", ideal_index(G, M), 6)

    for name, L, want_type in (("r2", r2(GF(2)), None), ("h3", heisenberg(GF(2)), 1)):
        ms = maximal_subalgebras(L)
        expect(f"{name} GF(2) maximal count", len(ms), 3)
        expect(f"{name} GF(2) c-indices", [c_index(L, M) for M in ms], [0, 0, 0])
        if want_type:
            expect(f"{name} GF(2) types", [primitivity_type(L, M) for M in ms], [want_type] * 3)
    return bad


def test_criterion_7_catalog_regressions():
    bad = _catalog_checks()
    record(7, "catalog regressions", not bad, "; ".join(bad) if bad else "all exact matches")
    assert not bad


def test_criterion_8_oracle_equivalences(corpora):
    cs, _ = corpora
    small = [L for L in cs[2] if L.dim <= 4]
    mismatches = []
    checks = 0
    for idx, L in enumerate(small):
        p, n = 2, L.dim
        ideals = ideal_sets(L)
        best = max((I for I in ideals if is_solvable_set(L, I)), key=len)
        checks += 1
        if elements(radical(L)) != best:
            mismatches.append(f"radical of #{idx}")
        for S in all_subspace_sets(p, n):
            U = Subspace.span(L.field, n, [v for v in S if any(v)])
            want = max((I for I in ideals if I <= S), key=len)
            checks += 1
            if elements(core(L, U)) != want:
                mismatches.append(f"core in #{idx}")
            if is_subalgebra_set(L, S):
                brute = all(is_nilpotent_matrix(ad_matrix(L, u), p) for u in S)
                checks += 1
                if is_nil_subalgebra(L, U) != brute:
                    mismatches.append(f"nil in #{idx}")
    ok = not mismatches and bool(small)
    record(8, "radical, core and nil against exhaustive oracles", ok,
           f"{len(small)} GF(2) algebras, {checks} comparisons, {len(mismatches)} mismatches")
    assert ok, mismatches[:5]


def _cli(argv, capsys):
    code = main(argv)
    out, _ = capsys.readouterr()
    return code, out


def test_criterion_9_deterministic_reports(capsys):
    argv = ["verify", "--field", "gf2", "--max-dim", "4", "--seed", "42", "--target-count", "40"]
    runs = [_cli(argv, capsys), _cli(argv, capsys), _cli(argv + ["--jobs", "4"], capsys)]
    reports = [strip_timing(out) for _, out in runs]
    bodies = [out.split('"timing"')[0] for _, out in runs]
    ok = all(code == 0 for code, _ in runs) and reports[0] == reports[1] == reports[2] and len(set(bodies)) == 1
    record(9, "verify reports are byte-identical apart from timing", ok,
           f"2 runs with 1 worker and 1 run with 4 workers, {len(reports[0]['corpus'])} algebras")
    assert ok
