"""Cores, c-ideals, c-sections, c-index, ideal index and primitivity types,
plus the claim registry that checks them across corpora."""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .exactla import DEFAULT_BUDGET, Subspace, enumerate_subspaces, projective_points
from .liealg import (
    CapabilityError,
    ChiefFactor,
    LieAlgebra,
    Verdict,
    centralizer,
    centre,
    chief_series,
    certify_simple,
    chief_factor,
    core,
    fingerprint,
    full,
    ideal_closure,
    is_ideal,
    is_isomorphic,
    is_nil_subalgebra,
    is_nilpotent,
    is_solvable,
    is_subalgebra,
    minimal_ideals,
    quotient,
    radical,
    section,
    series,
    subspace_bracket,
    zero,
)
from .maximal import CatalogEntry, certify_maximal, maximal_subalgebras

log = logging.getLogger(__name__)

__all__ = [
    "AnomalyError",
    "CLAIMS",
    "CIdealResult",
    "MaximalReport",
    "VerificationOutcome",
    "all_ideals",
    "all_supplementing_factors",
    "analyze_maximal",
    "c_index",
    "c_section",
    "core",
    "ideal_index",
    "is_c_ideal",
    "primitivity_type",
    "search_counterexample",
    "supplementing_chief_factor",
    "verify",
]


class AnomalyError(RuntimeError):
    """A result that contradicts a cited background theorem; points at a bug."""


# --- finite-field ideal lattice ----------------------------------------------------------------


@lru_cache(maxsize=256)
def all_ideals(L: LieAlgebra, budget: int = DEFAULT_BUDGET) -> tuple:
    """Every ideal of ``L`` over a finite field, by dimension then RREF."""
    if not L.field.is_finite:
        raise CapabilityError("the ideal lattice is only enumerable over a finite field")
    out = []
    for d in range(L.dim + 1):
        for S in enumerate_subspaces(L.dim, L.field, d, budget):
            if is_ideal(L, S):
                out.append(S)
    return tuple(out)


@lru_cache(maxsize=65536)
def _members(S: Subspace) -> frozenset:
    return frozenset(S.vectors())


def _le(A: Subspace, B: Subspace) -> bool:
    """``A <= B``; uses the element set of ``B`` over small finite fields."""
    if A.dim > B.dim:
        return False
    if B.field.is_finite and B.field.p ** B.dim <= 4096:
        m = _members(B)
        return all(b in m for b in A.basis)
    return A.le(B)


@lru_cache(maxsize=256)
def _covers(L: LieAlgebra) -> dict:
    """For each ideal ``D``, the ideals ``C`` with ``C/D`` a chief factor."""
    F, n = L.field, L.dim
    out = {}
    for D in all_ideals(L):
        free = [c for c in range(n) if c not in D.pivots]
        seen = {}
        if free:
            for pt in projective_points(len(free), F):
                v = [F.zero] * n
                for c, x in zip(free, pt):
                    v[c] = x
                C = ideal_closure(L, D + Subspace.span(F, n, [tuple(v)]))
                seen.setdefault(C.key(), C)
        cands = sorted(seen.values(), key=lambda C: (C.dim, C.key()))
        out[D.key()] = [C for C in cands if not any(E.dim < C.dim and _le(E, C) for E in cands)]
    return out


def chief_factors_all(L: LieAlgebra) -> list[tuple[Subspace, Subspace]]:
    """Every chief factor ``(C, D)`` of ``L`` over a finite field."""
    cov = _covers(L)
    return [(C, D) for D in all_ideals(L) for C in cov[D.key()]]


def all_supplementing_factors(L: LieAlgebra, M: Subspace) -> list[tuple[Subspace, Subspace]]:
    """Chief factors ``C/D`` with ``D <= M`` and ``L = M + C`` (finite fields)."""
    cov = _covers(L)
    out = []
    for D in all_ideals(L):
        if not _le(D, M):
            continue
        for C in cov[D.key()]:
            if not _le(C, M):
                out.append((C, D))
    return out


# --- c-ideals -----------------------------------------------------------------------------------


class CIdealResult(NamedTuple):
    holds: bool
    witness: Subspace | None
    exhaustive: bool

    @property
    def unknown_over_q(self) -> bool:
        return not self.holds and not self.exhaustive


def _q_ideal_lattice(L: LieAlgebra, B: Subspace) -> tuple[list[Subspace], bool]:
    """A sublattice of ideals over the rationals, and whether it is the whole lattice."""
    simple = certify_simple(L)
    if simple:
        return [zero(L), full(L)], True
    gens = [zero(L), full(L), core(L, B)]
    for kind in ("derived", "lower_central"):
        gens += list(series(L, kind).terms)
    gens.append(radical(L))
    gens.append(centre(L))
    try:
        acc = zero(L)
        for f in chief_series(L):
            acc = f.A
            gens.append(acc)
    except CapabilityError:
        pass
    uniq = {}
    for g in gens:
        uniq.setdefault(g.key(), g)
    base = list(uniq.values())
    for a, b in itertools.combinations(base, 2):
        s = a + b
        uniq.setdefault(s.key(), s)
    return sorted(uniq.values(), key=lambda I: (I.dim, I.key())), False


def is_c_ideal(L: LieAlgebra, B: Subspace) -> CIdealResult:
    """Is there an ideal ``C`` with ``L = B + C`` and ``B & C`` inside the core of ``B``?"""
    if not is_subalgebra(L, B):
        raise ValueError("c-ideal test needs a subalgebra")
    if L.field.is_finite:
        ideals, exhaustive = all_ideals(L), True
    else:
        ideals, exhaustive = _q_ideal_lattice(L, B)
    BL = core(L, B)
    for C in ideals:
        if B.dim + C.dim < L.dim:
            continue
        if (B + C).dim == L.dim and _le(B & C, BL):
            return CIdealResult(True, C, exhaustive)
    return CIdealResult(False, None, exhaustive)


# --- c-sections ----------------------------------------------------------------------------------


def _require_maximal(L: LieAlgebra, M: Subspace) -> None:
    cert = certify_maximal(L, M)
    if cert.verdict == Verdict.NO:
        raise ValueError(f"not a maximal subalgebra: {cert.reason}")
    if cert.verdict == Verdict.UNKNOWN:
        raise CapabilityError(f"maximality could not be certified: {cert.reason}")


def supplementing_chief_factor(
    L: LieAlgebra, M: Subspace, certified: bool = False
) -> ChiefFactor:
    """The chief factor ``C/M_L`` with ``C/M_L`` minimal in ``L/M_L`` and ``L = M + C``."""
    if not certified:
        _require_maximal(L, M)
    D = core(L, M)
    Q, proj = quotient(L, D)
    mins = minimal_ideals(Q)
    good = [t.ideal for t in mins if t.verified]
    if not good:
        raise CapabilityError(
            "no certified minimal ideal of L/M_L (candidates of dimension "
            f"{[t.ideal.dim for t in mins]} are unconfirmed)"
        )
    C = proj.preimage(good[0])
    if (M + C).dim != L.dim:
        raise AnomalyError("a minimal ideal above the core of M fails to supplement M")
    return chief_factor(L, C, D)


def c_section(L: LieAlgebra, M: Subspace, certified: bool = False) -> LieAlgebra:
    f = supplementing_chief_factor(L, M, certified)
    return section(L, M & f.A, f.B)


def c_index(L: LieAlgebra, M: Subspace, certified: bool = False) -> int:
    f = supplementing_chief_factor(L, M, certified)
    return (M & f.A).dim - f.B.dim


def minimal_supplement(L: LieAlgebra, M: Subspace, certified: bool = False) -> tuple[Subspace, Subspace]:
    """An ideal ``C`` minimal among those with ``L = M + C``, and an ideal ``D`` with ``C/D`` chief.

    Over GF(p) ``C`` is a supplement of least dimension in the enumerated
    lattice and ``D`` the largest ideal strictly inside it.  Over the
    rationals ``C`` is found by descent from ``L``: with ``D`` the core of
    ``C & M``, either ``C/D`` is a certified minimal ideal of ``L/D`` or a
    smaller minimal ideal gives a smaller supplement.
    """
    if not certified:
        _require_maximal(L, M)
    n = L.dim
    if L.field.is_finite:
        ideals = all_ideals(L)
        # M is maximal and M + C is a subalgebra, so C supplements M iff C is not inside M
        sup = [C for C in ideals if not _le(C, M)]
        C = min(sup, key=lambda C: C.dim)
        below = [D for D in ideals if D.dim < C.dim and _le(D, C)]
        D = max(below, key=lambda D: D.dim)
        return C, D
    C = full(L)
    while True:
        D = core(L, C & M)
        Q, proj = quotient(L, D)
        mins = minimal_ideals(Q, within=proj.image_subspace(C))
        if len(mins) == 1 and mins[0].ideal.dim == C.dim - D.dim:
            if not mins[0].verified:
                raise CapabilityError("minimality of a supplementing chief factor is unconfirmed")
            return C, D
        smaller = min((t.ideal for t in mins), key=lambda I: I.dim)
        C = proj.preimage(smaller)
        if (M + C).dim != n:
            raise AnomalyError("an ideal inside a minimal supplement lies outside the core")


def ideal_index(L: LieAlgebra, M: Subspace, certified: bool = False) -> int:
    C, D = minimal_supplement(L, M, certified)
    return C.dim - D.dim


def primitivity_type(L: LieAlgebra, M: Subspace, certified: bool = False) -> int:
    """Type 1, 2 or 3 of the primitive quotient ``L/M_L``.

    Over GF(p) the minimal ideals of the quotient are counted.  Over the
    rationals one certified minimal ideal ``A`` is found: abelian means type
    1; otherwise its centralizer is zero for type 2 and is the second minimal
    ideal for type 3.
    """
    if not certified:
        _require_maximal(L, M)
    D = core(L, M)
    Q, _ = quotient(L, D)
    mins = minimal_ideals(Q)
    if Q.field.is_finite:
        ab = [subspace_bracket(Q, t.ideal, t.ideal).dim == 0 for t in mins]
        if len(mins) == 1:
            return 1 if ab[0] else 2
        if len(mins) == 2 and not any(ab):
            return 3
        raise AnomalyError(
            f"primitive quotient with {len(mins)} minimal ideals (abelian flags {ab})"
        )
    good = [t.ideal for t in mins if t.verified]
    if not good:
        raise CapabilityError("no certified minimal ideal of L/M_L")
    A = good[0]
    if subspace_bracket(Q, A, A).dim == 0:
        return 1
    Z = centralizer(Q, A)
    if Z.dim == 0:
        return 2
    other = minimal_ideals(Q, within=Z)
    if len(other) == 1 and other[0].ideal == Z and other[0].verified:
        if subspace_bracket(Q, Z, Z).dim == 0:
            raise AnomalyError("primitive quotient with an abelian second minimal ideal")
        return 3
    raise CapabilityError("could not certify the second minimal ideal of L/M_L")


# --- per-maximal report -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SecFlags:
    solvable: bool
    nilpotent: bool
    nil: bool


@dataclass(frozen=True)
class MaximalReport:
    M: Subspace
    core: Subspace
    prim_type: int
    sec: LieAlgebra
    c_index: int
    ideal_index: int
    is_c_ideal: bool
    c_ideal_witness: Subspace | None
    c_ideal_exhaustive: bool
    sec_flags: SecFlags
    codim: int

    def as_dict(self) -> dict:
        return {
            "maximal": _rows(self.M),
            "dim": self.M.dim,
            "core": _rows(self.core),
            "type": self.prim_type,
            "section_dim": self.sec.dim,
            "c_index": self.c_index,
            "ideal_index": self.ideal_index,
            "is_c_ideal": self.is_c_ideal,
            "c_ideal_witness": None if self.c_ideal_witness is None else _rows(self.c_ideal_witness),
            "c_ideal_search_exhaustive": self.c_ideal_exhaustive,
            "section_solvable": self.sec_flags.solvable,
            "section_nilpotent": self.sec_flags.nilpotent,
            "section_nil": self.sec_flags.nil,
        }


def _rows(S: Subspace) -> list:
    return [[str(x) for x in r] for r in S.basis]


def section_is_nil(L: LieAlgebra, M: Subspace, C: Subspace, D: Subspace) -> bool:
    """Whether ``M & C`` acts nilpotently on ``L/D``."""
    Q, proj = quotient(L, D)
    return is_nil_subalgebra(Q, proj.image_subspace(M & C))


def analyze_maximal(L: LieAlgebra, M: Subspace, certified: bool = False) -> MaximalReport:
    if not certified:
        _require_maximal(L, M)
    f = supplementing_chief_factor(L, M, certified=True)
    MC = M & f.A
    sec = section(L, MC, f.B)
    eta_star = MC.dim - f.B.dim
    eta = ideal_index(L, M, certified=True)
    ci = is_c_ideal(L, M)
    ptype = primitivity_type(L, M, certified=True)
    flags = SecFlags(is_solvable(sec), is_nilpotent(sec), section_is_nil(L, M, f.A, f.B))
    codim = L.dim - M.dim
    if eta != eta_star + codim:
        raise AnomalyError(f"ideal index {eta} != c-index {eta_star} + codim {codim}")
    if ci.exhaustive and ci.holds != (eta_star == 0):
        raise AnomalyError(f"c-ideal {ci.holds} but c-index {eta_star}")
    if ptype in (1, 3) and eta_star != 0:
        raise AnomalyError(f"type {ptype} maximal with c-index {eta_star}")
    return MaximalReport(M, f.B, ptype, sec, eta_star, eta, ci.holds, ci.witness, ci.exhaustive, flags, codim)


# --- verification ----------------------------------------------------------------------------------

CLAIMS = (
    "lemma_unique",
    "lemma2_i",
    "lemma2_ii",
    "lemma_supp",
    "lemma_factor",
    "lemma_prim",
    "lemma_prim_ii",
    "thm_trivial_i",
    "thm_nil",
    "thm_char0_structure",
    "cor_cindex",
)


@dataclass
class VerificationOutcome:
    claim_id: str
    instances_checked: int = 0
    violations: list = dc_field(default_factory=list)
    status: str = "pass"
    degraded: int = 0
    reason: str = ""

    def as_dict(self) -> dict:
        d = {
            "claim_id": self.claim_id,
            "status": self.status,
            "instances_checked": self.instances_checked,
            "violations": self.violations,
            "fingerprint_only_comparisons": self.degraded,
        }
        if self.reason:
            d["reason"] = self.reason
        return d


class _Tally:
    def __init__(self):
        self.n = 0
        self.viol = []
        self.degraded = 0

    def check(self, ok: bool, witness: dict):
        self.n += 1
        if not ok:
            self.viol.append(witness)


def _iso_or_fp(A: LieAlgebra, B: LieAlgebra, t: _Tally) -> bool:
    v = is_isomorphic(A, B)
    if v == Verdict.UNKNOWN:
        t.degraded += 1
        return fingerprint(A) == fingerprint(B)
    return v == Verdict.YES


def _algebra_checks(job) -> dict:
    """All finite-field claims on one algebra; returns per-claim tallies as plain data."""
    alg_id, L, claims, factor_max_dim = job
    T = {c: _Tally() for c in claims}
    maxs = maximal_subalgebras(L)
    abelian_factor = {}
    all_trivial = True
    all_nil = True
    for M in maxs:
        mid = {"algebra": alg_id, "maximal": _rows(M)}
        sec = None
        f = supplementing_chief_factor(L, M, certified=True)
        MC = M & f.A
        eta_star = MC.dim - f.B.dim
        all_trivial &= eta_star == 0
        nil = section_is_nil(L, M, f.A, f.B) if eta_star else True
        all_nil &= nil
        if "lemma2_ii" in T:
            eta = ideal_index(L, M, certified=True)
            T["lemma2_ii"].check(eta == eta_star + L.dim - M.dim, {**mid, "eta": eta, "eta_star": eta_star})
        if "lemma2_i" in T:
            ci = is_c_ideal(L, M)
            T["lemma2_i"].check(ci.holds == (eta_star == 0), {**mid, "c_ideal": ci.holds, "eta_star": eta_star})
        if "lemma_prim" in T:
            ptype = primitivity_type(L, M, certified=True)
            if ptype in (1, 3):
                T["lemma_prim"].check(eta_star == 0, {**mid, "type": ptype, "eta_star": eta_star})
        if "lemma_unique" in T or "lemma_supp" in T:
            factors = all_supplementing_factors(L, M)
            for C, D in factors:
                ab = abelian_factor.get((C, D))
                if ab is None:
                    ab = abelian_factor[(C, D)] = _le(subspace_bracket(L, C, C), D)
                # L = M + C, so dim(M & C) follows from the dimensions alone
                k = M.dim + C.dim - L.dim - D.dim
                MCi = M & C if (ab and "lemma_supp" in T) or k else None
                if "lemma_supp" in T and ab:
                    T["lemma_supp"].check(MCi == D, {**mid, "A": _rows(C), "B": _rows(D)})
                if "lemma_unique" in T and len(factors) >= 2:
                    if k != eta_star:
                        ok = False
                    elif k == 0:
                        ok = True
                    else:
                        if sec is None:
                            sec = section(L, MC, f.B)
                        ok = _iso_or_fp(sec, section(L, MCi, D), T["lemma_unique"])
                    T["lemma_unique"].check(ok, {**mid, "C": _rows(C), "D": _rows(D), "section_dim": k, "expected": eta_star})
        if "lemma_factor" in T and L.dim <= factor_max_dim:
            sec = section(L, MC, f.B)
            for B in all_ideals(L):
                if B.dim == 0 or not _le(B, M):
                    continue
                Q, proj = quotient(L, B)
                MB = proj.image_subspace(M)
                sec_b = c_section(Q, MB, certified=True)
                T["lemma_factor"].check(
                    sec.dim == sec_b.dim and _iso_or_fp(sec, sec_b, T["lemma_factor"]),
                    {**mid, "B": _rows(B), "dims": [sec.dim, sec_b.dim]},
                )
    solv = is_solvable(L)
    if "thm_trivial_i" in T:
        T["thm_trivial_i"].check(solv == all_trivial, {"algebra": alg_id, "solvable": solv, "all_trivial": all_trivial})
    if "thm_nil" in T:
        T["thm_nil"].check(solv == all_nil, {"algebra": alg_id, "solvable": solv, "all_nil": all_nil})
    return {c: (t.n, t.viol, t.degraded) for c, t in T.items()}


FINITE_CLAIMS = (
    "lemma_unique", "lemma2_i", "lemma2_ii", "lemma_supp",
    "lemma_factor", "lemma_prim", "thm_trivial_i", "thm_nil",
)
CATALOG_CLAIMS = ("lemma2_i", "lemma2_ii", "lemma_prim", "lemma_prim_ii", "thm_char0_structure", "cor_cindex")


def _catalog_checks(entries: Sequence[CatalogEntry], claims, T: dict) -> None:
    for e in entries:
        L = e.algebra
        if L.field.is_finite or not e.declared_maximals:
            continue
        reports = []
        for M in e.declared_maximals:
            cert = certify_maximal(L, M)
            if cert.verdict != Verdict.YES:
                continue
            reports.append(analyze_maximal(L, M, certified=True))
        for r in reports:
            mid = {"algebra": e.name, "maximal": _rows(r.M)}
            if "lemma2_ii" in T:
                T["lemma2_ii"].check(r.ideal_index == r.c_index + r.codim, {**mid, "eta": r.ideal_index, "eta_star": r.c_index})
            if "lemma2_i" in T and r.c_ideal_exhaustive:
                T["lemma2_i"].check(r.is_c_ideal == (r.c_index == 0), {**mid, "c_ideal": r.is_c_ideal})
            if "lemma_prim" in T and r.prim_type in (1, 3):
                T["lemma_prim"].check(r.c_index == 0, {**mid, "type": r.prim_type})
            if "lemma_prim_ii" in T and r.prim_type == 2:
                mq = section(L, r.M, r.core)
                T["lemma_prim_ii"].check(_iso_or_fp(r.sec, mq, T["lemma_prim_ii"]), {**mid, "section_dim": r.sec.dim})
        if "thm_char0_structure" in T and e.levi_components:
            if all(c in ("sl2", "minimal_nonabelian") for c in e.levi_components):
                for r in reports:
                    T["thm_char0_structure"].check(r.sec_flags.solvable, {"algebra": e.name, "maximal": _rows(r.M)})
        if "cor_cindex" in T and reports and e.name in ("sl2", "gejn(1)"):
            ks = sorted({r.c_index for r in reports})
            T["cor_cindex"].check(len(ks) == 1, {"algebra": e.name, "c_indices": ks})
            if ks[0] > 0:
                T["cor_cindex"].check(radical(L).dim == 0, {"algebra": e.name, "semisimple": False})


def verify(
    claims: Iterable[str],
    corpus: Sequence[LieAlgebra],
    catalog_entries: Sequence[CatalogEntry] = (),
    ids: Sequence[str] | None = None,
    jobs: int = 1,
    factor_max_dim: int = 4,
) -> list[VerificationOutcome]:
    """Run each claim over the corpus (finite fields) and the rational catalog.

    Work is split per algebra; with ``jobs > 1`` a process pool evaluates the
    algebras and results are merged in corpus order.
    """
    wanted = set(claims)
    unknown = wanted - set(CLAIMS)
    if unknown:
        raise ValueError(f"unknown claims {sorted(unknown)}")
    claims = [c for c in CLAIMS if c in wanted]
    ids = list(ids) if ids is not None else [f"{L.field}#{i}" for i, L in enumerate(corpus)]
    finite = [c for c in claims if c in FINITE_CLAIMS]
    T = {c: _Tally() for c in claims}
    work = [(i, L, tuple(finite), factor_max_dim) for i, L in zip(ids, corpus) if L.field.is_finite]
    if finite and work:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_algebra_checks, work, chunksize=1))
        else:
            results = [_algebra_checks(w) for w in work]
        for res in results:
            for c, (n, viol, deg) in res.items():
                T[c].n += n
                T[c].viol += viol
                T[c].degraded += deg
    _catalog_checks(catalog_entries, claims, T)
    out = []
    for c in claims:
        t = T[c]
        status = "fail" if t.viol else "pass"
        reason = ""
        if t.n == 0:
            status = "skipped"
            if c in FINITE_CLAIMS and not work:
                reason = "needs exhaustive maximal enumeration over a finite-field corpus"
            else:
                reason = "no applicable instances in the corpus or catalog"
        out.append(VerificationOutcome(c, t.n, t.viol, status, t.degraded, reason))
    return out


def search_counterexample(
    corpus: Sequence[LieAlgebra], ids: Sequence[str] | None = None
) -> list[dict]:
    """Non-solvable algebras with at least one maximal subalgebra of trivial c-section."""
    ids = list(ids) if ids is not None else [f"{L.field}#{i}" for i, L in enumerate(corpus)]
    findings = []
    for aid, L in zip(ids, corpus):
        if is_solvable(L):
            continue
        trivial = [M for M in maximal_subalgebras(L) if c_index(L, M, certified=True) == 0]
        if trivial:
            findings.append(
                {
                    "algebra": aid,
                    "dim": L.dim,
                    "provenance": L.provenance,
                    "trivial_section_maximals": [_rows(M) for M in trivial],
                }
            )
    return findings
