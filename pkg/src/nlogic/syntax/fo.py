"""Two-sorted first- and second-order frame language.

Relation atoms list the output point first, matching the frame tuples:
``R(u,x,z)`` is uRxz, ``T(y,x,v)`` is yTxv, ``S(y,v,x)`` is ySvx.  The
primed atoms are membership in the Galois dual sections: ``T'(z,x,v)``
says z ∈ (Txv)', ``R'(v,x,z)`` says v ∈ (Rxz)', ``S'(x,v,z)`` says
x ∈ (Svz)'.  ``I(x,y)`` has its sort-1 point first.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import ParseError
from ..frames import SIGNATURES, SORT1, SORTD, other
from . import modal as md

RELATION_SORTS: dict[str, tuple[str, ...]] = {
    "I": (SORT1, SORTD),
    "U": (SORT1,),
    **{n: (out,) + args for n, (out, args) in SIGNATURES.items()},
    # primed atoms: first argument is in the opposite sort of the output
    **{n + "'": (other(out),) + args for n, (out, args) in SIGNATURES.items()},
}


@dataclass(frozen=True)
class FVar:
    name: str
    sort: str = SORT1

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[FVar, ...]


@dataclass(frozen=True)
class PApp:
    pred: str
    sort: str
    arg: FVar


@dataclass(frozen=True)
class Leq:
    left: FVar
    right: FVar


@dataclass(frozen=True)
class Eq:
    left: FVar
    right: FVar


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "FO"


@dataclass(frozen=True)
class And:
    args: tuple["FO", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["FO", ...]


@dataclass(frozen=True)
class Implies:
    left: "FO"
    right: "FO"


@dataclass(frozen=True)
class Iff:
    left: "FO"
    right: "FO"


@dataclass(frozen=True)
class Forall:
    var: FVar
    body: "FO"


@dataclass(frozen=True)
class Exists:
    var: FVar
    body: "FO"


@dataclass(frozen=True)
class SOForall:
    pred: str
    sort: str
    body: "FO"


@dataclass(frozen=True)
class TInv:
    """Guard saying the predicate denotes a Galois stable (co-stable) set."""
    pred: str
    sort: str


FO = Union[Atom, PApp, Leq, Eq, Const, Not, And, Or, Implies, Iff, Forall, Exists, SOForall, TInv]
TRUE, FALSE = Const(True), Const(False)


def conj(*fs: FO) -> FO:
    parts = []
    for f in fs:
        if isinstance(f, And):
            parts.extend(f.args)
        elif f != TRUE:
            parts.append(f)
    if FALSE in parts:
        return FALSE
    return parts[0] if len(parts) == 1 else (And(tuple(parts)) if parts else TRUE)


def disj(*fs: FO) -> FO:
    parts = []
    for f in fs:
        if isinstance(f, Or):
            parts.extend(f.args)
        elif f != FALSE:
            parts.append(f)
    if TRUE in parts:
        return TRUE
    return parts[0] if len(parts) == 1 else (Or(tuple(parts)) if parts else FALSE)


def forall(vs, body: FO) -> FO:
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


def exists(vs, body: FO) -> FO:
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


# -- traversal ---------------------------------------------------------------------

def fo_children(f: FO) -> tuple[FO, ...]:
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (Forall, Exists, SOForall)):
        return (f.body,)
    return ()


def term_vars(f: FO) -> tuple[FVar, ...]:
    if isinstance(f, Atom):
        return f.args
    if isinstance(f, PApp):
        return (f.arg,)
    if isinstance(f, (Leq, Eq)):
        return (f.left, f.right)
    return ()


def free_vars(f: FO) -> set[FVar]:
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    out = set(term_vars(f))
    for k in fo_children(f):
        out |= free_vars(k)
    return out


def predicates(f: FO) -> dict[str, str]:
    out: dict[str, str] = {}

    def walk(g):
        if isinstance(g, (PApp, TInv)):
            out.setdefault(g.pred, g.sort)
        elif isinstance(g, SOForall):
            out.setdefault(g.pred, g.sort)
        for k in fo_children(g):
            walk(k)

    walk(f)
    return out


def relations(f: FO) -> set[str]:
    out = set()

    def walk(g):
        if isinstance(g, Atom):
            out.add(g.rel.rstrip("'"))
        if isinstance(g, TInv):
            out.add("I")
        for k in fo_children(g):
            walk(k)

    walk(f)
    return out


def is_first_order(f: FO) -> bool:
    return not predicates(f)


def substitute(f: FO, mapping: dict[FVar, FVar]) -> FO:
    """Capture-naive renaming of free variables (bound names are kept unique
    by the callers)."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, PApp):
        return PApp(f.pred, f.sort, mapping.get(f.arg, f.arg))
    if isinstance(f, Leq):
        return Leq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    return _map_children(f, lambda g: substitute(g, mapping))


def _map_children(f: FO, fn) -> FO:
    if isinstance(f, And):
        return And(tuple(fn(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(fn(a) for a in f.args))
    if isinstance(f, Implies):
        return Implies(fn(f.left), fn(f.right))
    if isinstance(f, Iff):
        return Iff(fn(f.left), fn(f.right))
    if isinstance(f, Not):
        return Not(fn(f.arg))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, fn(f.body))
    if isinstance(f, SOForall):
        return SOForall(f.pred, f.sort, fn(f.body))
    return f


def check_sorts(f: FO) -> None:
    """Raise ``SortError`` if any atom is applied to ill-sorted variables."""
    for g in walk(f):
        if isinstance(g, Atom):
            want = RELATION_SORTS[g.rel]
            got = tuple(a.sort for a in g.args)
            if want != got:
                raise md.SortError(f"{g.rel} expects sorts {want}, got {got}")
        elif isinstance(g, PApp) and g.arg.sort != g.sort:
            raise md.SortError(f"{g.pred} has sort {g.sort} but is applied to {g.arg}")
        elif isinstance(g, (Leq, Eq)) and g.left.sort != g.right.sort:
            raise md.SortError(f"comparison of {g.left} and {g.right} across sorts")


def walk(f: FO) -> Iterator[FO]:
    yield f
    for k in fo_children(f):
        yield from walk(k)


# -- standard translation -----------------------------------------------------------

class Fresh:
    """Supplies unused variable names: z1, z2, ... (sort 1), v1, v2, ... (sort d)."""

    def __init__(self, taken=()):
        self.taken = {v.name if isinstance(v, FVar) else v for v in taken}
        self.counter = itertools.count(1)

    def __call__(self, sort: str, stem: str | None = None) -> FVar:
        stem = stem or ("z" if sort == SORT1 else "v")
        while True:
            name = f"{stem}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return FVar(name, sort)


def standard_translation(m: md.Modal, var: FVar, fresh: Fresh | None = None) -> FO:
    """ST_var(m); sort-1 terms need a sort-1 variable and vice versa."""
    if var.sort != m.sort:
        raise md.SortError(f"cannot translate a sort-{m.sort} term at {var}")
    fresh = fresh or Fresh([var])
    st = lambda t, v: standard_translation(t, v, fresh)  # noqa: E731
    if isinstance(m, md.PVar):
        return PApp(m.name, m.sort, var)
    if isinstance(m, md.MTop):
        return TRUE
    if isinstance(m, md.MBot):
        return FALSE
    if isinstance(m, md.UConst):
        return Atom("U", (var,))
    if isinstance(m, md.Meet):
        return conj(st(m.left, var), st(m.right, var))
    if isinstance(m, md.Join):
        return disj(st(m.left, var), st(m.right, var))
    if isinstance(m, md.Prime):
        w = fresh(m.arg.sort)
        link = Atom("I", (var, w) if var.sort == SORT1 else (w, var))
        return Forall(w, Implies(link, Not(st(m.arg, w))))
    if isinstance(m, md.Odot):
        a, b = fresh(SORT1), fresh(SORT1)
        return exists([a, b], conj(Atom("R", (var, a, b)), st(m.left, a), st(m.right, b)))
    if isinstance(m, md.Tright):
        a, b = fresh(SORT1), fresh(SORTD)
        return exists([a, b], conj(Atom("T", (var, a, b)), st(m.left, a), st(m.right, b)))
    if isinstance(m, md.Tleft):
        a, b = fresh(SORTD), fresh(SORT1)
        return exists([a, b], conj(Atom("S", (var, a, b)), st(m.left, a), st(m.right, b)))
    if isinstance(m, md.RSpoon):
        a, z = fresh(SORT1), fresh(SORT1)
        return forall([a, z], Implies(conj(st(m.left, a), Atom("R", (z, a, var))), st(m.right, z)))
    if isinstance(m, md.LSpoon):
        a, z = fresh(SORT1), fresh(SORT1)
        return forall([a, z], Implies(conj(st(m.right, a), Atom("R", (z, var, a))), st(m.left, z)))
    raise TypeError(f"not a modal term: {m!r}")


def second_order_translation(m: md.Modal) -> FO:
    var = FVar("x" if m.sort == SORT1 else "y", m.sort)
    body = Forall(var, standard_translation(m, var))
    for name, sort in reversed(list(md.pvars(m).items())):
        body = SOForall(name, sort, body)
    return body


def tinv_expansion(pred: str, sort: str, fresh: Fresh | None = None) -> FO:
    """∀w(ST_w(P'') → P(w)): the predicate contains its own closure."""
    fresh = fresh or Fresh()
    w = fresh(sort, "w")
    return Forall(w, Implies(standard_translation(md.pp(md.PVar(pred, sort)), w, fresh),
                             PApp(pred, sort, w)))


# -- printing -------------------------------------------------------------------------

def _needs_parens(f: FO) -> bool:
    return isinstance(f, (And, Or, Implies, Iff))


def format_fo(f: FO) -> str:
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(a.name for a in f.args)})"
    if isinstance(f, PApp):
        return f"{f.pred}({f.arg.name})"
    if isinstance(f, Leq):
        return f"{f.left.name}≤{f.right.name}"
    if isinstance(f, Eq):
        return f"{f.left.name}={f.right.name}"
    if isinstance(f, Const):
        return "⊤" if f.value else "⊥"
    if isinstance(f, TInv):
        return f"t-INV({f.pred})"
    if isinstance(f, Not):
        inner = format_fo(f.arg)
        return f"¬({inner})" if _needs_parens(f.arg) else f"¬{inner}"
    if isinstance(f, (Forall, Exists, SOForall)):
        prefix, body = "", f
        while isinstance(body, (Forall, Exists, SOForall)):
            if isinstance(body, SOForall):
                prefix += f"∀{body.pred}"
            else:
                prefix += ("∀" if isinstance(body, Forall) else "∃") + body.var.name
            body = body.body
        inner = format_fo(body)
        return f"{prefix}({inner})" if _needs_parens(body) else f"{prefix} {inner}"

    def part(g, loose):
        s = format_fo(g)
        return f"({s})" if isinstance(g, loose) else s

    if isinstance(f, And):
        return " ∧ ".join(part(a, (Or, Implies, Iff)) for a in f.args)
    if isinstance(f, Or):
        return " ∨ ".join(part(a, (And, Implies, Iff)) for a in f.args)
    if isinstance(f, Implies):
        return f"{part(f.left, (Implies, Iff))} → {part(f.right, (Implies, Iff))}"
    if isinstance(f, Iff):
        return f"{part(f.left, (Implies, Iff))} ↔ {part(f.right, (Implies, Iff))}"
    raise TypeError(f"not a formula: {f!r}")


# -- parsing --------------------------------------------------------------------------

_FTOKEN = re.compile(
    r"\s*(<->|->|<=|!=|[~¬&|()=,.:∧∨→↔≤⊤⊥]|∀|∃|[A-Za-z_][A-Za-z0-9_]*'?|\d+)")
_FALIAS = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "≤": "<=", "∀": "forall",
           "∃": "exists", "⊤": "true", "⊥": "false"}


@dataclass
class _Binder:
    name: str
    sort: str | None
    uid: int


def parse_fo(text: str) -> FO:
    """Parse a first-order frame formula.

    Connectives: ``~ & | -> <->`` (or ``¬ ∧ ∨ → ↔``), quantifiers
    ``forall x z.`` / ``exists y:d.`` (or ``∀ ∃``).  After a dot the scope
    runs as far right as possible; without one it covers the next unary
    formula, usually a parenthesised one.  Variable sorts come from annotations, otherwise
    from the relation positions they fill; unconstrained variables are
    sort 1 unless their name starts with ``y`` or ``v``.  Lower-case names
    are individual variables; ``I T R S U`` and primed variants are frame
    relations; other capitalised names are predicate variables.
    """
    toks: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        mt = _FTOKEN.match(text, pos)
        if not mt:
            if not text[pos:].strip():
                break
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", position=bad)
        toks.append((_FALIAS.get(mt.group(1), mt.group(1)), mt.start(1)))
        pos = mt.end()
    i = 0
    binders: list[_Binder] = []
    scope: list[_Binder] = []
    uses: dict[int, set[str]] = {}
    pred_sorts: dict[str, str] = {}
    same: list[tuple[int, int]] = []

    def peek(k=0):
        return toks[i + k][0] if i + k < len(toks) else None

    def where():
        return toks[i][1] if i < len(toks) else len(text)

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, found {tok!r}", position=where())
        i += 1
        return tok

    def lookup(name: str) -> _Binder:
        for b in reversed(scope):
            if b.name == name:
                return b
        # free variable: bind implicitly at the outermost level
        b = _Binder(name, None, len(binders))
        binders.append(b)
        scope.insert(0, b)
        return b

    def iff():
        f = imp()
        if peek() == "<->":
            take()
            return ("iff", f, imp())
        return f

    def imp():
        f = orr()
        if peek() == "->":
            take()
            return ("imp", f, imp())
        return f

    def orr():
        parts = [andd()]
        while peek() == "|":
            take()
            parts.append(andd())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def andd():
        parts = [unary()]
        while peek() == "&":
            take()
            parts.append(unary())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def is_var(tok):
        return tok is not None and re.fullmatch(r"[a-z_][A-Za-z0-9_]*", tok) \
            and tok not in ("forall", "exists", "true", "false")

    def unary():
        tok = peek()
        if tok == "~":
            take()
            return ("not", unary())
        if tok in ("forall", "exists"):
            take()
            new = []
            while is_var(peek()):
                name = take()
                sort = None
                if peek() == ":":
                    take()
                    s = take()
                    if s not in ("1", "d", "∂"):
                        raise ParseError(f"unknown sort {s!r}", position=where())
                    sort = SORT1 if s == "1" else SORTD
                b = _Binder(name, sort, len(binders))
                binders.append(b)
                new.append(b)
                if peek() == ",":
                    take()
            if not new:
                raise ParseError("quantifier without variables", position=where())
            dotted = peek() == "."
            if dotted:
                take()
            scope.extend(new)
            # a dot extends the scope as far right as possible
            body = iff() if dotted else unary()
            del scope[len(scope) - len(new):]
            return (tok, new, body)
        if tok == "(":
            take()
            f = iff()
            take(")")
            return f
        if tok in ("true", "false"):
            take()
            return ("const", tok == "true")
        return atom()

    def atom():
        tok = take()
        if is_var(tok):
            a = lookup(tok)
            op = take()
            if op not in ("<=", "=", "!="):
                raise ParseError(f"expected a comparison after {tok}", position=where())
            b = lookup(take())
            same.append((a.uid, b.uid))
            return (op, a, b)
        if tok and re.fullmatch(r"[A-Z][A-Za-z0-9_]*'?", tok):
            take("(")
            args = [lookup(take())]
            while peek() == ",":
                take()
                args.append(lookup(take()))
            take(")")
            if tok in RELATION_SORTS:
                want = RELATION_SORTS[tok]
                if len(want) != len(args):
                    raise ParseError(f"{tok} takes {len(want)} arguments", position=where())
                for b, s in zip(args, want):
                    uses.setdefault(b.uid, set()).add(s)
                return ("atom", tok, args)
            if len(args) != 1:
                raise ParseError(f"predicate {tok} is unary", position=where())
            return ("papp", tok, args[0])
        raise ParseError(f"unexpected token {tok!r}", position=where())

    tree = iff()
    if peek() is not None:
        raise ParseError(f"trailing input {peek()!r}", position=where())

    # sort inference: annotations and relation positions, propagated through
    # comparisons and predicate applications
    sort: dict[int, str] = {b.uid: b.sort for b in binders if b.sort}
    for uid, ss in uses.items():
        if len(ss) > 1:
            raise ParseError(f"variable {binders[uid].name} used at both sorts")
        s = next(iter(ss))
        if sort.setdefault(uid, s) != s:
            raise ParseError(f"variable {binders[uid].name} annotated against its use")
    changed = True
    while changed:
        changed = False
        for a, b in same:
            for p, q in ((a, b), (b, a)):
                if p in sort and q not in sort:
                    sort[q] = sort[p]
                    changed = True
                elif p in sort and sort[p] != sort[q]:
                    raise ParseError("comparison across sorts")
    for b in binders:
        sort.setdefault(b.uid, SORTD if b.name[0] in "yv" else SORT1)

    def var(b: _Binder) -> FVar:
        return FVar(b.name, sort[b.uid])

    def build(t) -> FO:
        kind = t[0]
        if kind == "iff":
            return Iff(build(t[1]), build(t[2]))
        if kind == "imp":
            return Implies(build(t[1]), build(t[2]))
        if kind == "or":
            return Or(tuple(build(a) for a in t[1]))
        if kind == "and":
            return And(tuple(build(a) for a in t[1]))
        if kind == "not":
            return Not(build(t[1]))
        if kind == "const":
            return Const(t[1])
        if kind in ("forall", "exists"):
            body = build(t[2])
            q = Forall if kind == "forall" else Exists
            for b in reversed(t[1]):
                body = q(var(b), body)
            return body
        if kind == "<=":
            return Leq(var(t[1]), var(t[2]))
        if kind == "=":
            return Eq(var(t[1]), var(t[2]))
        if kind == "!=":
            return Not(Eq(var(t[1]), var(t[2])))
        if kind == "atom":
            return Atom(t[1], tuple(var(b) for b in t[2]))
        if kind == "papp":
            v = var(t[2])
            s = pred_sorts.setdefault(t[1], v.sort)
            if s != v.sort:
                raise ParseError(f"predicate {t[1]} applied at both sorts")
            return PApp(t[1], s, v)
        raise AssertionError(kind)

    return build(tree)


# -- normalisation ----------------------------------------------------------------------

def simplify(f: FO) -> FO:
    """Constant folding, flattening, double negation, trivial comparisons and
    vacuous quantifiers."""
    if isinstance(f, (Leq, Eq)):
        return TRUE if f.left == f.right else f
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, Const):
            return Const(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, And):
        return conj(*(simplify(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(simplify(a) for a in f.args))
    if isinstance(f, Implies):
        a, b = simplify(f.left), simplify(f.right)
        if a == TRUE:
            return b
        if a == FALSE or b == TRUE:
            return TRUE
        if b == FALSE:
            return simplify(Not(a))
        return Implies(a, b)
    if isinstance(f, Iff):
        a, b = simplify(f.left), simplify(f.right)
        if a == b:
            return TRUE
        return Iff(a, b)
    if isinstance(f, (Forall, Exists)):
        body = simplify(f.body)
        if isinstance(body, Const) or f.var not in free_vars(body):
            return body
        return type(f)(f.var, body)
    if isinstance(f, SOForall):
        return SOForall(f.pred, f.sort, simplify(f.body))
    return f


def rename_apart(f: FO, fresh: Fresh | None = None) -> FO:
    """Give every bound variable a distinct name."""
    fresh = fresh or Fresh(v for v in free_vars(f))

    def go(g: FO) -> FO:
        if isinstance(g, (Forall, Exists)):
            new = fresh(g.var.sort, "b")
            return type(g)(new, go(substitute(g.body, {g.var: new})))
        return _map_children(g, go)

    return go(f)


def _split_exists(f: FO) -> tuple[list[FVar], FO]:
    vs = []
    while isinstance(f, Exists):
        vs.append(f.var)
        f = f.body
    return vs, f


def _pull_conj_exists(f: FO) -> tuple[list[FVar], FO]:
    """Existentials at the top of a conjunction tree, with the matrix."""
    if isinstance(f, Exists):
        vs, body = _split_exists(f)
        more, body = _pull_conj_exists(body)
        return vs + more, body
    if isinstance(f, And):
        vs, parts = [], []
        for a in f.args:
            more, body = _pull_conj_exists(a)
            vs += more
            parts.append(body)
        return vs, conj(*parts)
    return [], f


def prenex(f: FO) -> FO:
    """Local prenexing used by the normal form (assumes bound names unique):
    existentials in the antecedent of an implication under a universal block
    become universals, and existentials are pulled out of conjunctions."""
    if isinstance(f, Forall):
        vs = []
        while isinstance(f, Forall):
            vs.append(f.var)
            f = f.body
        f = prenex(f)
        if isinstance(f, Implies):
            more, ante = _pull_conj_exists(f.left)
            if more:
                vs += more
                f = Implies(ante, f.right)
        while isinstance(f, Forall):
            vs.append(f.var)
            f = f.body
        return forall(vs, f)
    if isinstance(f, Implies):
        left, right = prenex(f.left), prenex(f.right)
        more, ante = _pull_conj_exists(left)
        if more:
            return forall(more, Implies(ante, right))
        return Implies(left, right)
    if isinstance(f, Exists) or isinstance(f, And):
        g = _map_children(f, prenex)
        vs, body = _pull_conj_exists(g)
        return exists(vs, body)
    return _map_children(f, prenex)


def _render(f: FO, env: dict[FVar, str], counts: tuple[int, int]) -> tuple[str, FO]:
    """Canonical string and renamed formula.  Bound variables get names
    from their binding depth; commutative children are sorted; each
    quantifier block takes the variable order with the least rendering."""
    def name(v: FVar) -> FVar:
        return FVar(env.get(v, v.name), v.sort)

    if isinstance(f, (Atom, PApp, Leq, Eq)):
        if isinstance(f, Atom):
            g: FO = Atom(f.rel, tuple(name(a) for a in f.args))
        elif isinstance(f, PApp):
            g = PApp(f.pred, f.sort, name(f.arg))
        else:
            a, b = name(f.left), name(f.right)
            if isinstance(f, Eq) and b.name < a.name:
                a, b = b, a
            g = type(f)(a, b)
        return format_fo(g), g
    if isinstance(f, (Const, TInv)):
        return format_fo(f), f
    if isinstance(f, Not):
        _, a = _render(f.arg, env, counts)
        g = Not(a)
        return format_fo(g), g
    if isinstance(f, (And, Or)):
        parts = sorted((_render(a, env, counts) for a in f.args), key=lambda p: p[0])
        g = type(f)(tuple(p[1] for p in parts))
        return format_fo(g), g
    if isinstance(f, Iff):
        parts = sorted((_render(a, env, counts) for a in (f.left, f.right)), key=lambda p: p[0])
        g = Iff(parts[0][1], parts[1][1])
        return format_fo(g), g
    if isinstance(f, Implies):
        g = Implies(_render(f.left, env, counts)[1], _render(f.right, env, counts)[1])
        return format_fo(g), g
    if isinstance(f, SOForall):
        _, b = _render(f.body, env, counts)
        g = SOForall(f.pred, f.sort, b)
        return format_fo(g), g
    # quantifier block
    q = type(f)
    block = []
    body = f
    while isinstance(body, q):
        block.append(body.var)
        body = body.body
    best: tuple[str, FO] | None = None
    orders = itertools.permutations(block) if len(block) <= 6 else [tuple(block)]
    for order in orders:
        n1, nd = counts
        local = dict(env)
        new_vars = []
        for v in order:
            if v.sort == SORT1:
                nm, n1 = f"x{n1}", n1 + 1
            else:
                nm, nd = f"y{nd}", nd + 1
            local[v] = nm
            new_vars.append(FVar(nm, v.sort))
        _, b = _render(body, local, (n1, nd))
        g = b
        for v in reversed(new_vars):
            g = q(v, g)
        text = format_fo(g)
        if best is None or text < best[0]:
            best = (text, g)
    assert best is not None
    return best


def normalize(f: FO) -> FO:
    """Documented normal form used for comparing correspondents:
    simplify, rename bound variables apart, prenex (antecedent existentials
    become universals, existentials leave conjunctions), then canonical
    variable names x0.. / y0.. with sorted commutative arguments."""
    g = simplify(prenex(rename_apart(simplify(f))))
    return _render(g, {}, (0, 0))[1]


def normal_string(f: FO) -> str:
    return format_fo(normalize(f))


def equivalent_by_normal_form(f: FO, g: FO) -> bool:
    return normal_string(f) == normal_string(g)


