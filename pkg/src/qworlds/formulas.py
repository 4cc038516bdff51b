"""Formulas of the language of set theory: AST, recursive-descent parser, printer.

Grammar, loosest binding first::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := disj ("->" imp)?                 right associative
    disj    := conj ("or" conj)*
    conj    := unary ("and" unary)*
    unary   := "not" unary
             | "(" ("forall"|"exists") var ["in" var] ")" unary
             | ("forall"|"exists") var ["in" var] unary
             | "(" formula ")"
             | var ("=" | "in") var

Unicode connectives (¬ ∧ ∨ → ↔ ∀ ∃ ∈) are accepted as synonyms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundVariable(NameError):
    pass


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Mem:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForallIn:
    var: str
    bound: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsIn:
    var: str
    bound: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Eq, Mem, Not, And, Or, Implies, Iff, ForallIn, ExistsIn, Forall, Exists]

_BINARY = {And: "and", Or: "or", Implies: "->", Iff: "<->"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow><->|↔|->|→)
  | (?P<sym>[()=∈¬∧∨∀∃])
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_SYNONYMS = {"↔": "<->", "→": "->", "∈": "in", "¬": "not", "∧": "and", "∨": "or",
             "∀": "forall", "∃": "exists"}
_KEYWORDS = {"not", "and", "or", "in", "forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tok = m.group()
            out.append((_SYNONYMS.get(tok, tok), pos))
        pos = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0) -> str:
        return self.toks[min(self.i + offset, len(self.toks) - 1)][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def var(self) -> str:
        tok = self.peek()
        if tok in _KEYWORDS or not re.match(r"[A-Za-z_]", tok):
            raise FormulaSyntaxError(f"expected a variable, found {tok!r}", self.pos())
        return self.take()

    def formula(self) -> Formula:
        left = self.imp()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "or":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "and":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "not":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            return self.quantifier(parens=False)
        if tok == "(":
            if self.peek(1) in ("forall", "exists"):
                return self.quantifier(parens=True)
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        left = self.var()
        op = self.peek()
        if op == "=":
            self.take()
            return Eq(left, self.var())
        if op == "in":
            self.take()
            return Mem(left, self.var())
        raise FormulaSyntaxError(f"expected '=' or 'in', found {op!r}", self.pos())

    def quantifier(self, parens: bool) -> Formula:
        if parens:
            self.take("(")
        kind = self.take()
        v = self.var()
        bound = None
        if self.peek() == "in":
            self.take()
            bound = self.var()
        if parens:
            self.take(")")
        body = self.unary()
        if kind == "forall":
            return Forall(v, body) if bound is None else ForallIn(v, bound, body)
        return Exists(v, body) if bound is None else ExistsIn(v, bound, body)


def parse(text: str, variables: Iterable[str] | None = None) -> Formula:
    """Parse ``text``; when ``variables`` is given every free variable must be in it."""
    p = _Parser(text)
    if p.peek() == "<end>":
        raise FormulaSyntaxError("empty formula", 0)
    phi = p.formula()
    if p.peek() != "<end>":
        raise FormulaSyntaxError(f"trailing input {p.peek()!r}", p.pos())
    if variables is not None:
        unbound = free_vars(phi) - set(variables)
        if unbound:
            raise UnboundVariable(f"unbound variables: {', '.join(sorted(unbound))}")
    return phi


def to_text(phi: Formula) -> str:
    """Fully parenthesised rendering; ``parse(to_text(phi)) == phi``."""
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Mem):
        return f"{phi.left} in {phi.right}"
    if isinstance(phi, Not):
        return f"not ({to_text(phi.body)})"
    if type(phi) in _BINARY:
        return f"({to_text(phi.left)}) {_BINARY[type(phi)]} ({to_text(phi.right)})"
    if isinstance(phi, ForallIn):
        return f"(forall {phi.var} in {phi.bound}) ({to_text(phi.body)})"
    if isinstance(phi, ExistsIn):
        return f"(exists {phi.var} in {phi.bound}) ({to_text(phi.body)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var}) ({to_text(phi.body)})"
    if isinstance(phi, Exists):
        return f"(exists {phi.var}) ({to_text(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")


@lru_cache(maxsize=None)
def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Eq, Mem)):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if type(phi) in _BINARY:
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (ForallIn, ExistsIn)):
        return (free_vars(phi.body) - {phi.var}) | {phi.bound}
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def subformulas(phi: Formula):
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif type(phi) in _BINARY:
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (ForallIn, ExistsIn, Forall, Exists)):
        yield from subformulas(phi.body)


def is_delta0(phi: Formula) -> bool:
    return not any(isinstance(s, (Forall, Exists)) for s in subformulas(phi))


def is_negation_free(phi: Formula) -> bool:
    """Built from atoms by ``and``, ``or`` and bounded quantifiers only."""
    return all(isinstance(s, (Eq, Mem, And, Or, ForallIn, ExistsIn)) for s in subformulas(phi))
