"""``sptpairs`` command line: verify registry entries, scan congruences, tabulate cranks.

Exit status: 0 when everything holds, 1 on a mathematical mismatch, 2 on a
usage or configuration problem (bad flags, unknown ids, unreadable registry,
entries that cannot be evaluated).
"""
from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

import click

from . import bailey, combinatorics
from .verify import engine
from .verify.registry import UnknownTheorem, load_registry, select
from .verify.sexpr import RegistrySyntaxError

OK, MISMATCH, USAGE = 0, 1, 2
FORMATS = ("text", "json", "csv")
REPORT_COLUMNS = ("id", "depth", "outcome", "expected", "coefficients", "ms", "exponent", "lhs", "rhs", "message")
CONGRUENCE_COLUMNS = ("i", "ell", "r", "n", "pp_i", "residue")


class _Depth(click.ParamType):
    name = "depth"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            d = Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a number", param, ctx)
        if d <= 0:
            self.fail("depth must be positive", param, ctx)
        return d


def _emit(text: str, output: Optional[str]) -> None:
    with click.open_file(output or "-", "w") as fh:
        fh.write(text)


def _exit_code(reports) -> int:
    outcomes = {r.outcome for r in reports}
    if outcomes & {"fail", "xpass"}:
        return MISMATCH
    if "error" in outcomes:
        return USAGE
    return OK


def _text_report(r: engine.VerificationReport) -> str:
    line = f"{r.outcome.upper():8} {r.id}  depth={r.depth} coefficients={r.coefficients} {r.ms}ms"
    w = r.witness
    if w and w["exponent"] == "coset":
        line += f"\n         {w['lhs']}"
    elif w:
        line += f"\n         first mismatch at q^{w['exponent']}: lhs={w['lhs']} rhs={w['rhs']}"
    if r.message and not (w and w["exponent"] == "coset"):
        line += f"\n         {r.message}"
    return line


def format_reports(reports, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(engine.reports_to_json(reports), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(REPORT_COLUMNS)
        for r in reports:
            w = r.witness or {}
            out.writerow([r.id, r.depth, r.outcome, r.expected, r.coefficients, r.ms,
                          w.get("exponent", ""), w.get("lhs", ""), w.get("rhs", ""), r.message or ""])
        return buf.getvalue()
    lines = [_text_report(r) for r in reports]
    counts: dict = {}
    for r in reports:
        counts[r.outcome] = counts.get(r.outcome, 0) + 1
    lines.append(", ".join(f"{v} {k}" for k, v in sorted(counts.items())) or "nothing ran")
    return "\n".join(lines) + "\n"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact", prog_name="sptpairs")
def cli():
    """Exact q-series checks for spt-type partition pairs."""


@cli.command()
@click.option("--id", "theorem_id", metavar="ID", help="Entry id, id prefix before '/', or glob.")
@click.option("--all", "run_every", is_flag=True, help="Run every registry entry.")
@click.option("--profile", type=click.Choice(engine.PROFILES), default="quick", show_default=True,
              envvar="SPTPAIRS_PROFILE", help="Depth profile (env SPTPAIRS_PROFILE).")
@click.option("--depth", type=_Depth(), help="Override every entry's depth.")
@click.option("--allow-expensive", is_flag=True, help=f"Run entries deeper than q^{engine.DEPTH_CAP}.")
@click.option("--include-opt-in", is_flag=True, help="Also run entries marked opt-in.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False),
              help="Use another registry file.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, writable=True), help="Write here instead of stdout.")
def verify(theorem_id, run_every, profile, depth, allow_expensive, include_opt_in, jobs,
           registry_path, fmt, output):
    """Expand registry entries and compare them coefficient by coefficient."""
    if bool(theorem_id) == run_every:
        raise click.UsageError("give exactly one of --id or --all")
    try:
        entries = load_registry(registry_path)
        if theorem_id and not select(entries, theorem_id):
            raise UnknownTheorem(theorem_id)
        reports = engine.run_all(profile, pattern=theorem_id, depth=depth, jobs=jobs,
                                 allow_expensive=allow_expensive, include_opt_in=include_opt_in,
                                 registry_path=registry_path)
    except UnknownTheorem as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(USAGE)
    except (RegistrySyntaxError, OSError) as exc:
        click.echo(f"error: cannot load registry: {exc}", err=True)
        sys.exit(USAGE)
    _emit(format_reports(reports, fmt), output)
    sys.exit(_exit_code(reports))


@cli.command("list")
@click.option("--id", "theorem_id", metavar="ID")
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False))
def list_entries(theorem_id, registry_path):
    """Print registry ids with their depths."""
    try:
        entries = select(load_registry(registry_path), theorem_id)
    except (RegistrySyntaxError, OSError) as exc:
        click.echo(f"error: cannot load registry: {exc}", err=True)
        sys.exit(USAGE)
    for t in entries:
        flags = [f for f, on in (("opt-in", t.opt_in), ("expect-fail", t.expect == "fail")) if on]
        cert = "" if t.certificate_depth is None else f" certificate={t.certificate_depth}"
        click.echo(f"{t.id}  depth={t.default_depth}{cert}" + (f"  [{', '.join(flags)}]" if flags else ""))
    sys.exit(OK if entries else USAGE)


@cli.command()
@click.option("--n-max", type=click.IntRange(min=1), default=100, show_default=True,
              help="Largest argument of pp_i checked.")
@click.option("--evidence/--no-evidence", default=True, show_default=True,
              help="Include the equal-class counts M_i(k, l, n).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, writable=True))
def congruences(n_max, evidence, fmt, output):
    """Check pp_i(l n + r) = 0 mod l for the six supported congruences."""
    scans = [engine.congruence_scan(i, ell, r, n_max) for i, ell, r in engine.CONGRUENCES]
    rows = {c: engine.congruence_rows(*c, n_max) for c in engine.CONGRUENCES}
    classes = {c: engine.equal_class_evidence(*c, n_max) for c in engine.CONGRUENCES} if evidence else {}
    if fmt == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(CONGRUENCE_COLUMNS)
        for c in engine.CONGRUENCES:
            for row in rows[c]:
                out.writerow([row.i, row.ell, row.r, row.n, row.pp, row.residue])
        text = buf.getvalue()
    elif fmt == "json":
        doc = {
            "reports": engine.reports_to_json(scans),
            "rows": [vars(row) for c in engine.CONGRUENCES for row in rows[c]],
        }
        if evidence:
            doc["classes"] = [{"i": c[0], "ell": c[1], "r": c[2], **e} for c in engine.CONGRUENCES for e in classes[c]]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [_text_report(r) for r in scans]
        for c in classes:
            bad = [e["n"] for e in classes[c] if not e["equal"]]
            i, ell, r = c
            status = "equal" if not bad else f"unequal at n = {bad}"
            lines.append(f"classes  M_{i}(k, {ell}, {ell}n+{r}) for {len(classes[c])} arguments: {status}")
        text = "\n".join(lines) + "\n"
    _emit(text, output)
    bad_classes = any(not e["equal"] for c in classes for e in classes[c])
    sys.exit(MISMATCH if bad_classes or _exit_code(scans) else OK)


@cli.command()
@click.option("--family", type=click.IntRange(1, 4), required=True)
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--cap", type=click.IntRange(min=0), default=combinatorics.ENUMERATION_CAP, show_default=True,
              help="Refuse to enumerate above this n.")
@click.option("--format", "fmt", type=click.Choice(("text", "json")), default="text", show_default=True)
def cranks(family, n, cap, fmt):
    """Paircrank histogram by enumeration, next to the series coefficients M_i(m, n)."""
    try:
        hist = combinatorics.crank_histogram(family, n, cap=cap)
    except combinatorics.CapExceeded as exc:
        click.echo(f"error: {exc}; raise --cap to go further", err=True)
        sys.exit(USAGE)
    series = {}
    if n >= 1:
        series = {m: int(c) for m, c in bailey.pp_direct_bivariate(family, n + 1).coefficient(n).items() if c}
    series = dict(sorted(series.items()))
    agree = hist == series
    if fmt == "json":
        click.echo(json.dumps({"family": family, "n": n, "histogram": {str(k): v for k, v in hist.items()},
                               "series": {str(k): v for k, v in series.items()}, "agree": agree}))
    else:
        ms = sorted(set(hist) | set(series))
        click.echo(f"family {family}, n = {n}")
        if not ms:
            click.echo("  (no pairs)")
        for m in ms:
            mark = "" if hist.get(m, 0) == series.get(m, 0) else "  <- differs"
            click.echo(f"  m = {m:3d}: enumeration {hist.get(m, 0)}, series {series.get(m, 0)}{mark}")
        click.echo("agreement: yes" if agree else "agreement: NO")
    sys.exit(OK if agree else MISMATCH)


def main(argv: Optional[List[str]] = None) -> None:
    cli.main(args=argv, prog_name="sptpairs")


if __name__ == "__main__":
    main()
