"""A small reader for the parenthesised prefix notation used by the identity registry.

Atoms are integers, rationals written ``a/b``, double-quoted strings and
bare symbols. ``;`` starts a comment that runs to the end of the line.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple, Union


class RegistrySyntaxError(ValueError):
    pass


class Text(str):
    """A quoted string atom, kept distinct from symbols."""


Atom = Union[int, Fraction, str, Text]
Node = Union[Atom, Tuple["Node", ...]]

_TOKEN = re.compile(r'\s+|;[^\n]*|"(?:[^"\\]|\\.)*"|[()]|[^\s()";]+')
_INT = re.compile(r"[+-]?\d+$")
_RAT = re.compile(r"[+-]?\d+/\d+$")


def _atom(tok: str) -> Atom:
    if tok.startswith('"'):
        return Text(tok[1:-1].replace('\\"', '"'))
    if _INT.match(tok):
        return int(tok)
    if _RAT.match(tok):
        return Fraction(tok)
    return tok


def _tokens(text: str):
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RegistrySyntaxError(f"line {line}: cannot read {text[pos:pos + 20]!r}")
        tok = m.group()
        if not (tok[0].isspace() or tok[0] == ";"):
            yield tok, line
        line += tok.count("\n")
        pos = m.end()


def read_all(text: str) -> List[Node]:
    """Parse every top-level form in ``text``."""
    stack: List[list] = [[]]
    opened: List[int] = []
    for tok, line in _tokens(text):
        if tok == "(":
            stack.append([])
            opened.append(line)
        elif tok == ")":
            if len(stack) == 1:
                raise RegistrySyntaxError(f"line {line}: unbalanced ')'")
            done = tuple(stack.pop())
            opened.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(_atom(tok))
    if len(stack) != 1:
        raise RegistrySyntaxError(f"unclosed '(' opened on line {opened[-1]}")
    return stack[0]


def dump(node: Node) -> str:
    """Inverse of the reader, up to whitespace."""
    if isinstance(node, tuple):
        return "(" + " ".join(dump(x) for x in node) + ")"
    if isinstance(node, Text):
        return '"' + node.replace('"', '\\"') + '"'
    return str(node)
