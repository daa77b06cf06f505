"""Object-language formulas and sequents: AST, parser, printer.

Grammar (ASCII, Unicode aliases in brackets)::

    sequent  := formula? '|-' formula        ['⊢'];  an empty left side means t
    formula  := binary (('->' | '<-') formula)?    right-associative  ['→' '⊸' '←' '⟜']
    binary   := product (('&' | '|') product)*     left-associative   ['∧' '∨']
    product  := atom ('*' atom)*                   left-associative   ['∘']
    atom     := VAR | 'top' | 'bot' | 't' | '(' formula ')'   ['⊤' '⊥']

``a <- b`` is the left implication: it holds of x when every b-point
composed on the right of x lands in a.  Negation is not primitive;
write ``p -> bot``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import ParseError


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Unit:
    """The truth constant t."""


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    """left -> right"""
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class LImp:
    """left <- right (the consequent is written first)"""
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Prod:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Top, Bot, Unit, And, Or, Imp, LImp, Prod]
BINARY = (And, Or, Imp, LImp, Prod)


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self) -> str:
        return f"{format_formula(self.lhs)} |- {format_formula(self.rhs)}"


def variables(phi: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(f):
        if isinstance(f, Var):
            seen.setdefault(f.name)
        elif isinstance(f, BINARY):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return list(seen)


def sequent_variables(seq: Sequent) -> list[str]:
    return list(dict.fromkeys(variables(seq.lhs) + variables(seq.rhs)))


def depth(phi: Formula) -> int:
    if isinstance(phi, BINARY):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 0


def uses(phi: Formula, kind: type) -> bool:
    if isinstance(phi, kind):
        return True
    if isinstance(phi, BINARY):
        return uses(phi.left, kind) or uses(phi.right, kind)
    return False


# -- printing -----------------------------------------------------------------

_LEVEL = {Imp: 0, LImp: 0, And: 1, Or: 1, Prod: 2}
_SYMBOL = {Imp: "->", LImp: "<-", And: "&", Or: "|", Prod: "*"}


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Top):
        return "top"
    if isinstance(phi, Bot):
        return "bot"
    if isinstance(phi, Unit):
        return "t"
    level = _LEVEL[type(phi)]
    left, right = format_formula(phi.left), format_formula(phi.right)
    lk, rk = _LEVEL.get(type(phi.left), 3), _LEVEL.get(type(phi.right), 3)
    if level == 0:  # right-associative
        if lk <= level:
            left = f"({left})"
        if rk < level:
            right = f"({right})"
    else:  # left-associative
        if lk < level:
            left = f"({left})"
        if rk <= level:
            right = f"({right})"
    return f"{left} {_SYMBOL[type(phi)]} {right}"


# -- parsing --------------------------------------------------------------------

_ALIASES = {"⊢": "|-", "→": "->", "⊸": "->", "←": "<-", "⟜": "<-", "∧": "&", "∨": "|",
            "∘": "*", "⊤": "top", "⊥": "bot"}
_TOKEN = re.compile(r"\s*(\|-|->|<-|[&|*()]|[⊢→⊸←⟜∧∨∘⊤⊥]|[A-Za-z_][A-Za-z0-9_]*)")
_KEYWORDS = {"top", "bot", "t"}


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:].lstrip()
            if not rest:
                return
            bad = len(text) - len(rest)
            raise ParseError(f"unexpected character {text[bad]!r}", position=bad)
        tok = m.group(1)
        yield _ALIASES.get(tok, tok), m.start(1)
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def where(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = f"{expected!r}" if expected else "a token"
            raise ParseError(f"expected {want}, found {tok!r}", position=self.where())
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.binary()
        op = self.peek()
        if op in ("->", "<-"):
            self.take()
            right = self.formula()
            return Imp(left, right) if op == "->" else LImp(left, right)
        return left

    def binary(self) -> Formula:
        f = self.product()
        while self.peek() in ("&", "|"):
            op = self.take()
            g = self.product()
            f = And(f, g) if op == "&" else Or(f, g)
        return f

    def product(self) -> Formula:
        f = self.atom()
        while self.peek() == "*":
            self.take()
            f = Prod(f, self.atom())
        return f

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected a formula, found {tok!r}", position=self.where())
        self.take()
        if tok == "top":
            return Top()
        if tok == "bot":
            return Bot()
        if tok == "t":
            return Unit()
        if not tok[0].islower():
            raise ParseError(f"variables start with a lower-case letter: {tok!r}",
                             position=self.toks[self.i - 1][1])
        return Var(tok)

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", position=self.where())


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    if p.peek() == "|-":
        p.take()
        lhs: Formula = Unit()
    else:
        lhs = p.formula()
        p.take("|-")
    rhs = p.formula()
    p.done()
    return Sequent(lhs, rhs)
