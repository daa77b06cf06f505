"""The two-sorted modal companion language.

Sort 1 terms denote subsets of W1, sort d terms subsets of Wd.  ``Prime``
is the Galois map and flips the sort; the binary operators are the image
operators of the frame relations (``Odot`` for R, ``Tright`` for T,
``Tleft`` for S) together with the two residuals of ``Odot``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from ..errors import ParseError
from ..frames import SORT1, SORTD, other
from . import objects as ob


class SortError(ValueError):
    pass


@dataclass(frozen=True)
class PVar:
    name: str
    sort: str = SORT1


@dataclass(frozen=True)
class MTop:
    sort: str = SORT1


@dataclass(frozen=True)
class MBot:
    sort: str = SORT1


@dataclass(frozen=True)
class UConst:
    sort: str = field(default=SORT1, init=False)


@dataclass(frozen=True)
class Meet:
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortError(f"∩ of sorts {self.left.sort} and {self.right.sort}")
        object.__setattr__(self, "sort", self.left.sort)


@dataclass(frozen=True)
class Join:
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortError(f"∪ of sorts {self.left.sort} and {self.right.sort}")
        object.__setattr__(self, "sort", self.left.sort)


@dataclass(frozen=True)
class Prime:
    arg: "Modal"
    sort: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sort", other(self.arg.sort))


def _typed(name: str, out: str, *args: str):
    def post_init(self):
        got = (self.left.sort, self.right.sort)
        if got != args:
            raise SortError(f"{name} expects argument sorts {args}, got {got}")
        object.__setattr__(self, "sort", out)
    return post_init


@dataclass(frozen=True)
class Odot:
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)
    __post_init__ = _typed("⊙", SORT1, SORT1, SORT1)


@dataclass(frozen=True)
class Tright:
    """left ▷ right with left of sort 1 and right of sort d"""
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)
    __post_init__ = _typed("▷", SORTD, SORT1, SORTD)


@dataclass(frozen=True)
class Tleft:
    """left ◁ right with left of sort d and right of sort 1"""
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)
    __post_init__ = _typed("◁", SORTD, SORTD, SORT1)


@dataclass(frozen=True)
class RSpoon:
    """left ⊸ right: the right residual of ⊙"""
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)
    __post_init__ = _typed("⊸", SORT1, SORT1, SORT1)


@dataclass(frozen=True)
class LSpoon:
    """left ⟜ right: the left residual of ⊙ (consequent on the left)"""
    left: "Modal"
    right: "Modal"
    sort: str = field(init=False)
    __post_init__ = _typed("⟜", SORT1, SORT1, SORT1)


Modal = Union[PVar, MTop, MBot, UConst, Meet, Join, Prime, Odot, Tright, Tleft, RSpoon, LSpoon]
BINARY = (Meet, Join, Odot, Tright, Tleft, RSpoon, LSpoon)
DIAMONDS = (Odot, Tright, Tleft)
SPOONS = (RSpoon, LSpoon)

# output sort and argument sorts; None means "same as the output"
_SIGNATURE: dict[type, tuple[str | None, tuple[str | None, ...]]] = {
    Meet: (None, (None, None)),
    Join: (None, (None, None)),
    Odot: (SORT1, (SORT1, SORT1)),
    Tright: (SORTD, (SORT1, SORTD)),
    Tleft: (SORTD, (SORTD, SORT1)),
    RSpoon: (SORT1, (SORT1, SORT1)),
    LSpoon: (SORT1, (SORT1, SORT1)),
}


def sort_of(m: Modal) -> str:
    """Independent sort checker: recomputes the sort from the signature
    table without trusting the cached ``sort`` fields."""
    if isinstance(m, (PVar, MTop, MBot)):
        return m.sort
    if isinstance(m, UConst):
        return SORT1
    if isinstance(m, Prime):
        return other(sort_of(m.arg))
    out, args = _SIGNATURE[type(m)]
    got = (sort_of(m.left), sort_of(m.right))
    if out is None:
        if got[0] != got[1]:
            raise SortError(f"{type(m).__name__} mixes sorts {got}")
        return got[0]
    if got != args:
        raise SortError(f"{type(m).__name__} expects {args}, got {got}")
    return out


def pp(m: Modal) -> Modal:
    return Prime(Prime(m))


def children(m: Modal) -> tuple[Modal, ...]:
    if isinstance(m, Prime):
        return (m.arg,)
    if isinstance(m, BINARY):
        return (m.left, m.right)
    return ()


def rebuild(m: Modal, kids: tuple[Modal, ...]) -> Modal:
    if isinstance(m, Prime):
        return Prime(kids[0])
    if isinstance(m, BINARY):
        return type(m)(kids[0], kids[1])
    return m


def subterm(m: Modal, path: tuple[int, ...]) -> Modal:
    for i in path:
        m = children(m)[i]
    return m


def replace_at(m: Modal, path: tuple[int, ...], new: Modal) -> Modal:
    if not path:
        return new
    kids = list(children(m))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return rebuild(m, tuple(kids))


def positions(m: Modal, prefix: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Modal]]:
    """Pre-order walk yielding (path, subterm)."""
    yield prefix, m
    for i, k in enumerate(children(m)):
        yield from positions(k, prefix + (i,))


def transform(m: Modal, fn: Callable[[Modal], Modal | None]) -> Modal:
    """Bottom-up rewrite; ``fn`` returns a replacement or None."""
    kids = tuple(transform(k, fn) for k in children(m))
    m = rebuild(m, kids) if kids else m
    out = fn(m)
    return m if out is None else out


def pvars(m: Modal) -> dict[str, str]:
    """name -> sort for every variable, in order of first occurrence."""
    out: dict[str, str] = {}
    for _, s in positions(m):
        if isinstance(s, PVar):
            if out.setdefault(s.name, s.sort) != s.sort:
                raise SortError(f"variable {s.name} used at both sorts")
    return out


# -- printing ---------------------------------------------------------------------

_SYMBOL = {Meet: "∩", Join: "∪", Odot: "⊙", Tright: "▷", Tleft: "◁", RSpoon: "⊸", LSpoon: "⟜"}


def format_modal(m: Modal) -> str:
    """Fully parenthesised binary nodes; primes are postfix apostrophes."""
    if isinstance(m, PVar):
        return m.name
    if isinstance(m, MTop):
        return "⊤"
    if isinstance(m, MBot):
        return "⊥"
    if isinstance(m, UConst):
        return "u"
    if isinstance(m, Prime):
        return format_modal(m.arg) + "'"
    return f"({format_modal(m.left)} {_SYMBOL[type(m)]} {format_modal(m.right)})"


def format_top(m: Modal) -> str:
    """As :func:`format_modal` but without the outermost parentheses."""
    s = format_modal(m)
    if isinstance(m, BINARY):
        return s[1:-1]
    return s


# -- parsing (tests and CLI convenience) ------------------------------------------

_MTOKEN = re.compile(r"\s*(\|>|<\||-o|o-|[&|*()']|[∩∪⊙▷◁⊸⟜⊤⊥′]|[A-Za-z_][A-Za-z0-9_]*)")
_MALIAS = {"&": "∩", "|": "∪", "*": "⊙", "|>": "▷", "<|": "◁", "-o": "⊸", "o-": "⟜",
           "top": "⊤", "bot": "⊥", "′": "'"}
_MOPS = {"∩": Meet, "∪": Join, "⊙": Odot, "▷": Tright, "◁": Tleft, "⊸": RSpoon, "⟜": LSpoon}


def parse_modal(text: str, sort: str = SORT1, sorts: dict[str, str] | None = None) -> Modal:
    """Parse a modal term.  Binary operators need parentheses unless the
    term is a chain of the same operator; variable sorts are inferred
    top-down from the operator signatures (``sorts`` may pin them)."""
    toks: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        mt = _MTOKEN.match(text, pos)
        if not mt:
            if not text[pos:].strip():
                break
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", position=bad)
        toks.append((_MALIAS.get(mt.group(1), mt.group(1)), mt.start(1)))
        pos = mt.end()
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected and tok != expected):
            where = toks[i][1] if i < len(toks) else len(text)
            raise ParseError(f"expected {expected or 'a term'}, found {tok!r}", position=where)
        i += 1
        return tok

    # untyped tree: (op, children) / ("var", name) / ("const", symbol)
    def expr():
        left = postfix()
        op = peek()
        if op in _MOPS:
            while peek() == op:
                take()
                left = (op, [left, postfix()])
        return left

    def postfix():
        t = primary()
        while peek() == "'":
            take()
            t = ("'", [t])
        return t

    def primary():
        tok = take()
        if tok == "(":
            t = expr()
            take(")")
            return t
        if tok in ("⊤", "⊥", "u"):
            return ("const", tok)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return ("var", tok)
        raise ParseError(f"unexpected token {tok!r}", position=toks[i - 1][1])

    tree = expr()
    if peek() is not None:
        raise ParseError(f"trailing input {peek()!r}", position=toks[i][1])
    pinned = dict(sorts or {})

    def build(t, want: str) -> Modal:
        kind = t[0]
        if kind == "var":
            have = pinned.setdefault(t[1], want)
            if have != want:
                raise ParseError(f"variable {t[1]} used at both sorts")
            return PVar(t[1], want)
        if kind == "const":
            if t[1] == "u":
                if want != SORT1:
                    raise ParseError("u has sort 1")
                return UConst()
            return MTop(want) if t[1] == "⊤" else MBot(want)
        if kind == "'":
            return Prime(build(t[1][0], other(want)))
        cls = _MOPS[kind]
        out, args = _SIGNATURE[cls]
        if out is not None and out != want:
            raise ParseError(f"{kind} has sort {out}, expected {want}")
        a, b = (want if s is None else s for s in args)
        return cls(build(t[1][0], a), build(t[1][1], b))

    return build(tree, sort)


# -- translation of object formulas -----------------------------------------------

def modal_name(name: str) -> str:
    return name[0].upper() + name[1:]


def translate(phi: ob.Formula, implication: str = "diamond") -> tuple[Modal, Modal]:
    """(bullet, circ): the translation (sort 1) and co-translation (sort d).

    ``implication="rspoon"`` translates both implications with the residuals
    of ⊙ instead of the primed diamond terms.
    """
    if implication not in ("diamond", "rspoon"):
        raise ValueError(f"unknown implication style {implication!r}")
    spoon = implication == "rspoon"

    def tr(f: ob.Formula) -> tuple[Modal, Modal]:
        if isinstance(f, ob.Var):
            p = PVar(modal_name(f.name))
            return pp(p), Prime(p)
        if isinstance(f, ob.Top):
            return MTop(SORT1), pp(MBot(SORTD))
        if isinstance(f, ob.Bot):
            return pp(MBot(SORT1)), MTop(SORTD)
        if isinstance(f, ob.Unit):
            return UConst(), Prime(UConst())
        a, ac = tr(f.left)
        b, bc = tr(f.right)
        if isinstance(f, ob.And):
            return Meet(a, b), pp(Join(ac, bc))
        if isinstance(f, ob.Or):
            return pp(Join(a, b)), Meet(ac, bc)
        if isinstance(f, ob.Prod):
            d = Odot(a, b)
            return pp(d), Prime(d)
        if isinstance(f, ob.Imp):
            if spoon:
                s = RSpoon(a, b)
                return s, Prime(s)
            d = Tright(a, bc)
            return Prime(d), pp(d)
        if isinstance(f, ob.LImp):
            # left <- right: consequent a, antecedent b
            if spoon:
                s = LSpoon(a, b)
                return s, Prime(s)
            d = Tleft(ac, b)
            return Prime(d), pp(d)
        raise TypeError(f"not an object formula: {f!r}")

    return tr(phi)
