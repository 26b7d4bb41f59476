"""Running registry entries and congruence scans, and serialising the reports."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources
from typing import List, Optional, Sequence

from .. import bailey
from ..exactring import cyclotomic
from ..series import InsufficientTruncation, compare_to_depth
from .evaluate import EvaluationError, Evaluator, cosets_of, summands
from .registry import TheoremSpec, find, load_registry, select

# "past q^N" is read as: every exponent <= N, plus this many more
MARGIN = 5
# entries deeper than this are skipped unless explicitly allowed
DEPTH_CAP = 400
PROFILES = ("quick", "certificate")

PASSING = {"pass", "xfail", "skipped"}


@dataclass
class VerificationReport:
    id: str
    depth: str
    outcome: str
    ms: int = 0
    witness: Optional[dict] = None
    coefficients: int = 0
    expected: str = "pass"
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.outcome in PASSING

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None or k == "witness"}


def comparison_order(depth) -> Fraction:
    return Fraction(depth) + MARGIN + 1


def _classify(passed: bool, expect: str) -> str:
    if expect == "fail":
        return "xpass" if passed else "xfail"
    return "pass" if passed else "fail"


def _coset_problem(ev: Evaluator, spec: TheoremSpec, order: Fraction) -> Optional[str]:
    seen = {}
    for side, node in (("lhs", spec.lhs), ("rhs", spec.rhs)):
        for k, piece in enumerate(summands(node)):
            cs = cosets_of(ev.value(piece, order), order)
            if len(cs) > 1:
                return f"{side} summand {k} spans several exponent cosets {sorted(map(str, cs))}"
            for c in cs:
                seen.setdefault(c, f"{side} summand {k}")
    if len(seen) > 1:
        return "summands live on different exponent cosets: " + ", ".join(
            f"{v} has {k}" for k, v in sorted(seen.items()))
    return None


def verify_spec(spec: TheoremSpec, depth=None, profile: str = "quick") -> VerificationReport:
    """Expand both sides of one entry and compare every coefficient through ``depth + MARGIN``."""
    n = Fraction(depth) if depth is not None else spec.depth_for(profile)
    order = comparison_order(n)
    t0 = time.perf_counter()
    rep = VerificationReport(spec.id, str(n), "error", expected=spec.expect)
    try:
        ev = Evaluator(spec.ell)
        lhs = ev.series(spec.lhs, order)
        rhs = ev.series(spec.rhs, order)
        if spec.coset:
            problem = _coset_problem(ev, spec, order)
            if problem:
                rep.message = problem
                rep.outcome = _classify(False, spec.expect)
                rep.witness = {"exponent": "coset", "lhs": problem, "rhs": ""}
                return rep
        if spec.ell is not None:
            ring = cyclotomic(spec.ell)
            lhs, rhs = lhs.to_ring(ring), rhs.to_ring(ring)
        out = compare_to_depth(lhs, rhs, order)
        rep.outcome = _classify(out.passed, spec.expect)
        rep.witness = out.witness()
        rep.coefficients = out.compared
    except (EvaluationError, InsufficientTruncation, ArithmeticError, ValueError) as exc:
        rep.outcome = "error"
        rep.message = f"{type(exc).__name__}: {exc}"
    finally:
        rep.ms = int((time.perf_counter() - t0) * 1000)
    return rep


def verify_theorem(theorem_id: str, depth=None, registry: Optional[Sequence[TheoremSpec]] = None,
                   profile: str = "quick") -> VerificationReport:
    entries = load_registry() if registry is None else registry
    return verify_spec(find(entries, theorem_id), depth, profile)


def _skip_reason(spec: TheoremSpec, n: Fraction, allow_expensive: bool, include_opt_in: bool) -> Optional[str]:
    if spec.opt_in and not include_opt_in:
        return "opt-in entry"
    if n > DEPTH_CAP and not allow_expensive:
        return f"depth {n} exceeds the cap {DEPTH_CAP}; pass allow_expensive to run it"
    return None


def _worker(args):
    path, theorem_id, depth, profile = args
    return verify_spec(find(load_registry(path), theorem_id), depth, profile)


def run_all(profile: str = "quick", pattern: Optional[str] = None, depth=None, jobs: int = 1,
            allow_expensive: bool = False, include_opt_in: bool = False,
            registry_path=None, registry: Optional[Sequence[TheoremSpec]] = None) -> List[VerificationReport]:
    """Verify every selected entry; failures are collected, never raised."""
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    entries = select(load_registry(registry_path) if registry is None else registry, pattern)
    reports: List[VerificationReport] = []
    todo = []
    for spec in entries:
        n = Fraction(depth) if depth is not None else spec.depth_for(profile)
        why = _skip_reason(spec, n, allow_expensive, include_opt_in)
        if why:
            reports.append(VerificationReport(spec.id, str(n), "skipped", expected=spec.expect, message=why))
        else:
            todo.append((spec, n))
    if jobs > 1 and registry is None and len(todo) > 1:
        # the longest entries first keeps the pool busy
        order = sorted(todo, key=lambda t: -t[1])
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(registry_path, s.id, n, profile) for s, n in order]
            reports += list(pool.map(_worker, args))
    else:
        reports += [verify_spec(s, n, profile) for s, n in todo]
    return sorted(reports, key=lambda r: r.id)


# ---------------------------------------------------------------------------
# congruences

CONGRUENCES = ((1, 3, 0), (2, 3, 1), (2, 5, 1), (3, 5, 4), (3, 7, 1), (4, 5, 4))


@dataclass
class CongruenceRow:
    i: int
    ell: int
    r: int
    n: int
    pp: int
    residue: int


def congruence_rows(i: int, ell: int, r: int, n_max: int) -> List[CongruenceRow]:
    """``pp_i(ell m + r)`` and its residue mod ``ell`` for every argument up to ``n_max``."""
    if n_max < 0:
        return []
    pp = bailey.pp_series(i, n_max + 1)
    rows = []
    n = r % ell
    while n <= n_max:
        c = int(pp.coefficient(n))
        rows.append(CongruenceRow(i, ell, r, n, c, c % ell))
        n += ell
    return rows


def congruence_scan(i: int, ell: int, r: int, n_max: int) -> VerificationReport:
    t0 = time.perf_counter()
    rid = f"congruence-PP{i}-{ell}n+{r}"
    rows = congruence_rows(i, ell, r, n_max)
    rep = VerificationReport(rid, str(n_max), "pass", coefficients=len(rows))
    bad = next((row for row in rows if row.residue), None)
    if bad is not None:
        rep.outcome = "fail"
        rep.witness = {"exponent": str(bad.n), "lhs": str(bad.pp), "rhs": f"0 mod {ell}"}
    elif (i, ell) in bailey.SUPPORTED and n_max >= 0:
        at_root = bailey.pp_uv_at_root(i, ell, n_max + 1)
        for row in rows:
            c = at_root.coefficient(row.n)
            if c != 0:
                rep.outcome = "fail"
                rep.witness = {"exponent": str(row.n), "lhs": str(c), "rhs": "0"}
                rep.message = "coefficient of PP at the root of unity does not vanish"
                break
        rep.coefficients += len(rows)
    rep.ms = int((time.perf_counter() - t0) * 1000)
    return rep


def equal_class_evidence(i: int, ell: int, r: int, n_max: int) -> List[dict]:
    """``M_i(k, ell, n)`` for each class k, read off the symbolic-z series."""
    biv = bailey.pp_direct_bivariate(i, n_max + 1)
    out = []
    n = r % ell
    while n <= n_max:
        classes = [0] * ell
        for m, c in biv.coefficient(n).items():
            classes[m % ell] += int(c)
        out.append({"n": n, "classes": classes, "equal": len(set(classes)) == 1})
        n += ell
    return out


# ---------------------------------------------------------------------------
# report files


def report_schema() -> dict:
    path = resources.files("sptpairs") / "data" / "report.schema.json"
    return json.loads(path.read_text())


def reports_to_json(reports: Sequence[VerificationReport]) -> list:
    return [r.to_json() for r in reports]


def validate_reports(doc) -> None:
    import jsonschema

    jsonschema.validate(doc, report_schema())


def reports_from_json(doc) -> List[VerificationReport]:
    validate_reports(doc)
    return [VerificationReport(**item) for item in doc]
