"""Command-line front end: the JSON algebra format, reports, and the
validate / analyze / catalog / verify / search commands.

Exit codes: 0 success, 1 verification failure or Jacobi violation, 2 usage,
malformed input or capability error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import re
import sys
import time
from fractions import Fraction

from . import __version__
from .csection import CLAIMS, AnomalyError, analyze_maximal, search_counterexample, verify
from .exactla import GF, QQ, BudgetExceeded, FieldSpec, InfiniteFieldError, Subspace
from .liealg import CapabilityError, LieAlgebra, Verdict, is_subalgebra, validate
from .maximal import CorpusSpec, catalog, certify_maximal, generate_corpus, maximal_subalgebras

log = logging.getLogger("liesec")

SCHEMA = "liesec.report/1"
FIELDS = {"q": QQ, "gf2": GF(2), "gf3": GF(3), "gf5": GF(5), "gf7": GF(7)}
RATIONAL_CATALOG = (
    "sl2", "gejn(1)", "r2", "heisenberg", "abelian(2)", "upper_triangular(2)",
    "direct_sum(sl2,r2)", "direct_sum(sl2,abelian(1))",
)

_Q_SCALAR = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")
_GF_SCALAR = re.compile(r"0|[1-9][0-9]*")


class FormatError(ValueError):
    """A malformed algebra file."""


# --- algebra files ---------------------------------------------------------------------------------


def field_to_json(F: FieldSpec):
    return "Q" if F.p is None else {"GF": F.p}


def field_from_json(obj) -> FieldSpec:
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"GF"} and isinstance(obj["GF"], int):
        try:
            return GF(obj["GF"])
        except ValueError as e:
            raise FormatError(str(e)) from None
    raise FormatError(f'field must be "Q" or {{"GF": p}}, got {obj!r}')


def parse_scalar(s, F: FieldSpec):
    """Parse a canonical scalar string; anything else is a FormatError."""
    if not isinstance(s, str):
        raise FormatError(f"scalars are strings, got {s!r}")
    if F.p is None:
        if not _Q_SCALAR.fullmatch(s) or str(Fraction(s)) != s:
            raise FormatError(f"{s!r} is not a rational in lowest terms")
        return Fraction(s)
    if not _GF_SCALAR.fullmatch(s) or int(s) >= F.p:
        raise FormatError(f"{s!r} is not a residue in [0, {F.p})")
    return int(s)


def algebra_to_json(L: LieAlgebra) -> dict:
    brackets = []
    for i, j, v in L.sc:
        coeffs = {str(k): L.field.format(x) for k, x in enumerate(v) if x}
        brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {
        "field": field_to_json(L.field),
        "dim": L.dim,
        "basis": list(L.labels),
        "brackets": brackets,
    }


def algebra_from_json(obj, provenance: str = "") -> LieAlgebra:
    if not isinstance(obj, dict):
        raise FormatError("an algebra file holds a JSON object")
    missing = {"field", "dim", "basis", "brackets"} - set(obj)
    if missing:
        raise FormatError(f"missing keys {sorted(missing)}")
    F = field_from_json(obj["field"])
    n = obj["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError(f"dim must be a nonnegative integer, got {n!r}")
    labels = obj["basis"]
    if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
        raise FormatError("basis must list one string label per dimension")
    if not isinstance(obj["brackets"], list):
        raise FormatError("brackets must be a list")
    br = {}
    for rec in obj["brackets"]:
        if not isinstance(rec, dict) or set(rec) != {"i", "j", "coeffs"}:
            raise FormatError(f"bracket records have keys i, j, coeffs: {rec!r}")
        i, j, coeffs = rec["i"], rec["j"], rec["coeffs"]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < n):
            raise FormatError(f"bracket indices need 0 <= i < j < dim: {rec!r}")
        if (i, j) in br:
            raise FormatError(f"bracket ({i}, {j}) appears twice")
        if not isinstance(coeffs, dict):
            raise FormatError(f"coeffs must be an object: {rec!r}")
        vec = {}
        for k, s in coeffs.items():
            if not re.fullmatch(r"0|[1-9][0-9]*", k) or int(k) >= n:
                raise FormatError(f"coefficient index {k!r} out of range")
            vec[int(k)] = parse_scalar(s, F)
        br[(i, j)] = vec
    return LieAlgebra.from_brackets(F, n, br, labels, provenance)


def dumps_algebra(L: LieAlgebra) -> str:
    return json.dumps(algebra_to_json(L), indent=2) + "\n"


def loads_algebra(text: str, provenance: str = "") -> LieAlgebra:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not JSON: {e}") from None
    return algebra_from_json(obj, provenance)


def load_algebra(path: str) -> LieAlgebra:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(str(e)) from None
    return loads_algebra(text, path)


def save_algebra(L: LieAlgebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_algebra(L))


def parse_rows(text: str, F: FieldSpec, n: int) -> Subspace:
    """``"1 0 0; 0 1 0"`` as the span of its rows."""
    rows = []
    for chunk in text.split(";"):
        parts = chunk.split()
        if not parts:
            continue
        if len(parts) != n:
            raise FormatError(f"row {chunk.strip()!r} has {len(parts)} entries, expected {n}")
        try:
            rows.append(tuple(F.parse(x) for x in parts))
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"bad scalar in row {chunk.strip()!r}: {e}") from None
    return Subspace.span(F, n, rows)


# --- reports -------------------------------------------------------------------------------------------


def digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
    return "sha256:" + h.hexdigest()


def make_report(command, parameters, input_digest, seconds, **sections) -> dict:
    rep = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "parameters": parameters,
        "input_digest": input_digest,
    }
    rep.update(sections)
    rep["timing"] = {"seconds": round(seconds, 3)}
    return rep


def dumps_report(rep: dict) -> str:
    return json.dumps(rep, indent=2) + "\n"


def strip_timing(text: str) -> dict:
    """A parsed report without its timing field, for determinism checks."""
    rep = json.loads(text)
    rep.pop("timing", None)
    return rep


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _corpus(args, F: FieldSpec) -> list[LieAlgebra]:
    spec = CorpusSpec(
        F,
        ambient_matrix_size=max(2, args.max_dim),
        generator_count=3,
        seed=args.seed,
        max_dim=args.max_dim,
        target_count=args.target_count,
        attempt_budget=args.budget,
    )
    return generate_corpus(spec)


def _corpus_listing(corpus) -> list[dict]:
    return [
        {"id": f"{L.field}#{i}", "dim": L.dim, "provenance": L.provenance} for i, L in enumerate(corpus)
    ]


# --- commands ----------------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    L = load_algebra(args.path or args.input)
    problems = validate(L)
    if problems:
        for p in problems:
            print(f"violation: {p}", file=sys.stderr)
        print(f"{len(problems)} violation(s) in {L}")
        return 1
    print(f"ok: {L.field} Lie algebra of dimension {L.dim}")
    return 0


def cmd_analyze(args) -> int:
    path = args.path or args.input
    L = load_algebra(path)
    problems = validate(L)
    if problems:
        for p in problems:
            print(f"violation: {p}", file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    if args.enumerate:
        if not L.field.is_finite:
            raise CapabilityError("--enumerate needs a finite field; pass --maximal rows over Q")
        maxs = maximal_subalgebras(L, args.budget)
    else:
        maxs = []
        for text in args.maximal:
            M = parse_rows(text, L.field, L.dim)
            if M.dim >= L.dim or not is_subalgebra(L, M):
                raise FormatError(f"{text!r} does not span a proper subalgebra")
            cert = certify_maximal(L, M, args.budget)
            if cert.verdict == Verdict.NO:
                raise FormatError(f"{text!r} is not maximal: {cert.reason}")
            if cert.verdict == Verdict.UNKNOWN:
                raise CapabilityError(f"maximality of {text!r} is unconfirmed: {cert.reason}")
            maxs.append(M)
    reports = [analyze_maximal(L, M, certified=True).as_dict() for M in maxs]
    params = {"enumerate": bool(args.enumerate), "maximal": list(args.maximal or [])}
    rep = make_report("analyze", params, digest(dumps_algebra(L)), time.perf_counter() - t0, maximal_reports=reports)
    _emit(dumps_report(rep), args.out)
    return 0


def cmd_catalog(args) -> int:
    F = FIELDS[args.field]
    e = catalog(args.name, *args.params, field=F)
    _emit(dumps_algebra(e.algebra), args.out)
    return 0


def _suite(text: str) -> list[str]:
    if text == "all":
        return list(CLAIMS)
    ids = [c for c in re.split(r"[,\s]+", text) if c]
    unknown = [c for c in ids if c not in CLAIMS]
    if unknown:
        raise FormatError(f"unknown claim ids {unknown}; known: {', '.join(CLAIMS)}")
    return ids


def cmd_verify(args) -> int:
    claims = _suite(args.suite)
    F = FIELDS[args.field]
    t0 = time.perf_counter()
    if F.is_finite:
        corpus = _corpus(args, F)
        entries = []
    else:
        corpus = []
        entries = [catalog(name) for name in RATIONAL_CATALOG]
    outcomes = verify(claims, corpus, entries, jobs=args.jobs)
    texts = [dumps_algebra(L) for L in corpus] + [dumps_algebra(e.algebra) for e in entries]
    params = {
        "suite": claims,
        "field": args.field,
        "max_dim": args.max_dim,
        "seed": args.seed,
        "target_count": args.target_count,
        "budget": args.budget,
    }
    rep = make_report(
        "verify",
        params,
        digest(*texts),
        time.perf_counter() - t0,
        corpus=_corpus_listing(corpus) + [{"id": e.name, "dim": e.algebra.dim, "provenance": "catalog"} for e in entries],
        claims=[o.as_dict() for o in outcomes],
    )
    _emit(dumps_report(rep), args.out)
    for o in outcomes:
        print(f"{o.claim_id}: {o.status} ({o.instances_checked} instances)", file=sys.stderr)
    return 1 if any(o.status == "fail" for o in outcomes) else 0


def cmd_search(args) -> int:
    F = FIELDS[args.field]
    if not F.is_finite:
        raise CapabilityError("search enumerates maximal subalgebras and needs a finite field")
    t0 = time.perf_counter()
    corpus = _corpus(args, F)
    findings = search_counterexample(corpus)
    params = {
        "field": args.field,
        "max_dim": args.max_dim,
        "seed": args.seed,
        "target_count": args.target_count,
        "budget": args.budget,
    }
    rep = make_report(
        "search",
        params,
        digest(*(dumps_algebra(L) for L in corpus)),
        time.perf_counter() - t0,
        corpus=_corpus_listing(corpus),
        findings=findings,
    )
    _emit(dumps_report(rep), args.out)
    return 0


# --- argument parsing ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liesec", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the Jacobi identity of an algebra file")
    p.add_argument("path", nargs="?")
    p.add_argument("--input")
    p.set_defaults(func=cmd_validate, needs_input=True)

    p = sub.add_parser("analyze", help="report cores, sections and indices of maximal subalgebras")
    p.add_argument("path", nargs="?")
    p.add_argument("--input")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--maximal", action="append", help='basis rows, e.g. "1 0 0; 0 1 0" (repeatable)')
    g.add_argument("--enumerate", action="store_true", help="every maximal subalgebra (finite fields)")
    p.add_argument("--budget", type=int, default=10**6, help="subspace enumeration budget")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze, needs_input=True)

    p = sub.add_parser("catalog", help="write a named algebra as JSON")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--field", choices=sorted(FIELDS), default="q")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog, needs_input=False)

    for name, func, helptext in (
        ("verify", cmd_verify, "run claims over a seeded corpus or the rational catalog"),
        ("search", cmd_search, "list non-solvable algebras with a trivial c-section"),
    ):
        p = sub.add_parser(name, help=helptext)
        if name == "verify":
            p.add_argument("--suite", default="all", help="comma-separated claim ids or 'all'")
            p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--field", choices=sorted(FIELDS), default="gf2")
        p.add_argument("--max-dim", type=int, default=4)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--target-count", type=int, default=100)
        p.add_argument("--budget", type=int, default=4000, help="corpus sampling attempts")
        p.add_argument("--out")
        p.set_defaults(func=func, needs_input=False)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.needs_input and not (args.path or args.input):
        print("error: an input algebra file is required", file=sys.stderr)
        return 2
    if getattr(args, "max_dim", 1) < 1 or getattr(args, "jobs", 1) < 1:
        print("error: --max-dim and --jobs must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except AnomalyError as e:
        print(f"anomaly: {e}", file=sys.stderr)
        return 1
    except (CapabilityError, BudgetExceeded, InfiniteFieldError) as e:
        print(f"capability error: {e}", file=sys.stderr)
        return 2
    except (FormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
