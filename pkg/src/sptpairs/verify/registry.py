"""Loading identity entries from the declarative registry file.

An entry looks like::

    (identity crank-dissection-5
      (ring cyclotomic 5)
      (depth 150)
      (lhs (crank 5))
      (rhs ...))

Optional fields: ``(certificate N)``, ``(opt-in)``, ``(expect fail)``,
``(coset)``, ``(group NAME)``, ``(note "...")`` and
``(instances ((ell 5) (b 0)) ...)``.  Top-level ``(define NAME body)`` and
``(define (NAME p ...) body)`` forms are macros expanded at load time, and
``(sum k lo hi body)`` unrolls into a finite sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .sexpr import Node, RegistrySyntaxError, Text, dump, read_all

ARITH = {"+", "-", "*", "/", "^"}
FIELDS = {"ring", "depth", "certificate", "opt-in", "expect", "coset", "group", "note", "instances", "lhs", "rhs"}


class UnknownTheorem(KeyError):
    def __str__(self):
        return f"no registry entry matches {self.args[0]!r}"


@dataclass(frozen=True)
class TheoremSpec:
    id: str
    lhs: Node
    rhs: Node
    ring: str = "integer"
    ell: Optional[int] = None
    default_depth: Fraction = Fraction(40)
    certificate_depth: Optional[Fraction] = None
    opt_in: bool = False
    expect: str = "pass"
    coset: bool = False
    group: str = "misc"
    notes: Tuple[str, ...] = ()
    params: Tuple[Tuple[str, object], ...] = ()

    def depth_for(self, profile: str) -> Fraction:
        if profile == "certificate" and self.certificate_depth is not None:
            return self.certificate_depth
        return self.default_depth

    def describe(self) -> dict:
        return {
            "id": self.id,
            "ring": self.ring,
            "default_depth": str(self.default_depth),
            "certificate_depth": None if self.certificate_depth is None else str(self.certificate_depth),
            "opt_in": self.opt_in,
            "expect": self.expect,
            "group": self.group,
            "notes": list(self.notes),
            "lhs": dump(self.lhs),
            "rhs": dump(self.rhs),
        }


def _is_num(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _fold(head: str, args: Sequence) -> object:
    if head == "+":
        return _tidy(sum((Fraction(a) for a in args), Fraction(0)))
    if head == "-":
        if len(args) == 1:
            return _tidy(-Fraction(args[0]))
        return _tidy(Fraction(args[0]) - sum((Fraction(a) for a in args[1:]), Fraction(0)))
    if head == "*":
        out = Fraction(1)
        for a in args:
            out *= a
        return _tidy(out)
    if head == "/":
        out = Fraction(args[0])
        for a in args[1:]:
            out /= a
        return _tidy(out)
    base, e = args
    if Fraction(e).denominator != 1:
        raise RegistrySyntaxError("rational powers of numbers are not folded")
    return _tidy(Fraction(base) ** int(e))


class _Expander:
    def __init__(self, macros: Dict[str, Tuple[Tuple[str, ...], Node]]):
        self.macros = macros

    def __call__(self, node: Node, env: Dict[str, object], depth: int = 0) -> Node:
        if depth > 200:
            raise RegistrySyntaxError("macro expansion does not terminate")
        if isinstance(node, Text) or _is_num(node):
            return node
        if isinstance(node, str):
            if node in env:
                return env[node]
            if node in self.macros and not self.macros[node][0]:
                return self(self.macros[node][1], {}, depth + 1)
            return node
        if not node:
            raise RegistrySyntaxError("empty expression")
        head = node[0]
        if head == "sum":
            if len(node) != 5 or not isinstance(node[1], str):
                raise RegistrySyntaxError("sum takes (sum var lo hi body)")
            lo, hi = self(node[2], env, depth), self(node[3], env, depth)
            if not (_is_num(lo) and _is_num(hi)):
                raise RegistrySyntaxError(f"sum bounds must be numbers, got {dump(node[2])}, {dump(node[3])}")
            terms = [self(node[4], {**env, node[1]: k}, depth) for k in range(int(lo), int(hi) + 1)]
            if not terms:
                return 0
            return terms[0] if len(terms) == 1 else ("+",) + tuple(terms)
        if isinstance(head, str) and head in self.macros and (self.macros[head][0] or len(node) == 1):
            params, body = self.macros[head]
            args = [self(a, env, depth) for a in node[1:]]
            if len(args) != len(params):
                raise RegistrySyntaxError(f"{head} takes {len(params)} arguments, got {len(args)}")
            return self(body, dict(zip(params, args)), depth + 1)
        args = tuple(self(a, env, depth) for a in node[1:])
        if head in ARITH and args and all(_is_num(a) for a in args):
            return _fold(head, args)
        return (head,) + args


def _fields(form: Node) -> Dict[str, list]:
    out: Dict[str, list] = {}
    for f in form[2:]:
        if not isinstance(f, tuple) or not f or f[0] not in FIELDS:
            raise RegistrySyntaxError(f"entry {form[1]}: unknown field {dump(f)}")
        out.setdefault(f[0], []).append(f[1:])
    for required in ("lhs", "rhs"):
        if required not in out:
            raise RegistrySyntaxError(f"entry {form[1]}: missing {required}")
    return out


def _instance_env(spec: Node) -> Dict[str, object]:
    env = {}
    for pair in spec:
        if not isinstance(pair, tuple) or len(pair) != 2 or not isinstance(pair[0], str):
            raise RegistrySyntaxError(f"bad instance binding {dump(pair)}")
        env[pair[0]] = pair[1]
    return env


def _number(x, what: str) -> Fraction:
    if not _is_num(x):
        raise RegistrySyntaxError(f"{what} must be a number, got {dump(x)}")
    return Fraction(x)


def _build(name: str, fields: Dict[str, list], env: Dict[str, object], expand: _Expander) -> TheoremSpec:
    ev = lambda node: expand(node, env)
    ring, ell = "integer", None
    if "ring" in fields:
        r = [ev(x) for x in fields["ring"][0]]
        if r[0] == "cyclotomic":
            ell = int(_number(r[1], "cyclotomic order"))
            ring = f"cyclotomic-{ell}"
        elif r[0] in ("integer", "rational"):
            ring = r[0]
        else:
            raise RegistrySyntaxError(f"entry {name}: unknown ring {r}")
    kw = dict(ring=ring, ell=ell)
    if "depth" in fields:
        kw["default_depth"] = _number(ev(fields["depth"][0][0]), "depth")
    if "certificate" in fields:
        kw["certificate_depth"] = _number(ev(fields["certificate"][0][0]), "certificate depth")
    kw["opt_in"] = "opt-in" in fields
    kw["coset"] = "coset" in fields
    if "expect" in fields:
        kw["expect"] = str(fields["expect"][0][0])
        if kw["expect"] not in ("pass", "fail"):
            raise RegistrySyntaxError(f"entry {name}: expect must be pass or fail")
    if "group" in fields:
        kw["group"] = str(fields["group"][0][0])
    kw["notes"] = tuple(str(n[0]) for n in fields.get("note", ()))
    kw["params"] = tuple(env.items())
    return TheoremSpec(id=name, lhs=ev(fields["lhs"][0][0]), rhs=ev(fields["rhs"][0][0]), **kw)


def parse_registry(text: str) -> List[TheoremSpec]:
    macros: Dict[str, Tuple[Tuple[str, ...], Node]] = {}
    expand = _Expander(macros)
    entries: List[TheoremSpec] = []
    seen = set()
    for form in read_all(text):
        if not isinstance(form, tuple) or not form:
            raise RegistrySyntaxError(f"unexpected top-level atom {form!r}")
        if form[0] == "define":
            target = form[1]
            if isinstance(target, tuple):
                macros[target[0]] = (tuple(target[1:]), form[2])
            else:
                macros[target] = ((), form[2])
            continue
        if form[0] != "identity" or len(form) < 3:
            raise RegistrySyntaxError(f"unexpected form {dump(form)[:60]}")
        name = str(form[1])
        fields = _fields(form)
        instances = fields.get("instances", [[()]])[0] if "instances" in fields else [()]
        for inst in instances:
            env = _instance_env(inst)
            full = name if not env else name + "/" + ",".join(f"{k}={v}" for k, v in env.items())
            if full in seen:
                raise RegistrySyntaxError(f"duplicate identity id {full}")
            seen.add(full)
            entries.append(_build(full, fields, env, expand))
    return sorted(entries, key=lambda t: t.id)


def default_registry_path() -> Path:
    return Path(str(resources.files("sptpairs") / "data" / "identities.txt"))


_CACHE: Dict[str, List[TheoremSpec]] = {}


def load_registry(path=None) -> List[TheoremSpec]:
    p = str(path or default_registry_path())
    if p not in _CACHE:
        _CACHE[p] = parse_registry(Path(p).read_text())
    return list(_CACHE[p])


def select(entries: Sequence[TheoremSpec], pattern: Optional[str] = None) -> List[TheoremSpec]:
    """Entries whose id equals ``pattern`` or, failing that, matches it as a glob."""
    from fnmatch import fnmatchcase

    if pattern is None:
        return list(entries)
    exact = [t for t in entries if t.id == pattern]
    if exact:
        return exact
    prefix = [t for t in entries if t.id.startswith(pattern + "/")]
    if prefix:
        return prefix
    return [t for t in entries if fnmatchcase(t.id, pattern)]


def find(entries: Sequence[TheoremSpec], theorem_id: str) -> TheoremSpec:
    for t in entries:
        if t.id == theorem_id:
            return t
    raise UnknownTheorem(theorem_id)
