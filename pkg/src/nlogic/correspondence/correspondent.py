"""From a canonical system to a first-order frame condition.

The guarded second-order translation quantifies over every predicate of
the system; the first-order correspondent is obtained by pulling the
antecedent existentials into the universal prefix, instantiating each
predicate minimally, and simplifying.
"""

from __future__ import annotations

from ..axioms import MONOTONE, STRENGTHENED
from ..errors import NotInCanonicalForm
from ..frames import SORT1, SORTD
from ..syntax import fo
from ..syntax import modal as md
from .rules import canonical_problems, reduce_sequent
from .system import System


def _point(sort: str) -> fo.FVar:
    return fo.FVar("x" if sort == SORT1 else "y", sort)


def guarded_translation(sys: System) -> fo.FO:
    """∀P..∀x(t-INV ∧ ST_x(lhs) → ST_x(rhs)) with a t-INV conjunct per guard."""
    x = _point(sys.sort)
    fresh = fo.Fresh([x])
    guards = [fo.TInv(g.name, g.sort) for g in sys.stb] + [fo.TInv(c.name, c.sort) for c in sys.cvc]
    body = fo.Implies(fo.conj(*guards, fo.standard_translation(sys.lhs, x, fresh)),
                      fo.standard_translation(sys.rhs, x, fresh))
    preds = dict(sys.main_vars())
    preds.update(sys.guarded())
    out: fo.FO = fo.Forall(x, body)
    for name in sorted(preds, reverse=True):
        out = fo.SOForall(name, preds[name], out)
    return out


def strengthen(m: md.Modal) -> md.Modal:
    """Drop the closure around every diamond term."""
    def step(t: md.Modal):
        if isinstance(t, md.Prime) and isinstance(t.arg, md.Prime) and isinstance(t.arg.arg, md.DIAMONDS):
            return t.arg.arg
        return None

    return md.transform(m, step)


def _flatten(f: fo.FO) -> tuple[list[fo.FVar], list[fo.FO]]:
    """Existential prefix and conjuncts of an existential-conjunctive formula."""
    if isinstance(f, fo.Exists):
        vs, atoms = _flatten(f.body)
        return [f.var] + vs, atoms
    if isinstance(f, fo.And):
        vs, atoms = [], []
        for a in f.args:
            v, at = _flatten(a)
            vs += v
            atoms += at
        return vs, atoms
    return [], [f]


def _closure_of(points: list[fo.FVar], t: fo.FVar, fresh: fo.Fresh) -> fo.FO:
    """t belongs to the Galois closure of the given points of t's sort."""
    if t.sort == SORT1:
        y = fresh(SORTD, "v")
        return fo.Forall(y, fo.Implies(fo.Atom("I", (t, y)),
                                       fo.disj(*(fo.Atom("I", (s, y)) for s in points))))
    x = fresh(SORT1, "w")
    return fo.Forall(x, fo.Implies(fo.Atom("I", (x, t)),
                                   fo.disj(*(fo.Atom("I", (x, s)) for s in points))))


def minimal_instance(pred: str, sort: str, points: list[fo.FVar], guarded: bool,
                     t: fo.FVar, fresh: fo.Fresh) -> fo.FO:
    """λ(P)(t) for a predicate whose antecedent occurrences sit at ``points``.

    Guarded predicates denote stable sets, so the least one containing the
    points is their closure (a principal upset for one point); unguarded
    predicates take exactly the points.
    """
    if not guarded:
        return fo.disj(*(fo.Eq(t, s) for s in points))
    if len(points) == 1:
        return fo.Leq(points[0], t)
    return _closure_of(points, t, fresh)


def _substitute_preds(f: fo.FO, lam) -> fo.FO:
    if isinstance(f, fo.PApp):
        return lam(f.pred, f.arg)
    if isinstance(f, (fo.Atom, fo.Leq, fo.Eq, fo.Const, fo.TInv)):
        return f
    return fo._map_children(f, lambda g: _substitute_preds(g, lam))


# -- monotonicity absorption -------------------------------------------------------

def _antitone_in(f: fo.FO, w: fo.FVar, positive: bool = True) -> bool:
    """Every occurrence of ``w`` in ``f`` makes f antitone in w under (M):
    positive occurrences in decreasing atoms, negative ones in increasing
    atoms."""
    if isinstance(f, fo.Atom):
        if w not in f.args:
            return True
        if f.rel in ("R", "T", "S"):
            return positive and f.args[0] != w
        if f.rel == "I":
            return positive
        if f.rel == "U":
            return not positive
        return False
    if isinstance(f, fo.Leq):
        if f.left == f.right or w not in (f.left, f.right):
            return True
        return positive if f.left == w else not positive
    if isinstance(f, (fo.Eq, fo.PApp)):
        return w not in fo.term_vars(f)
    if isinstance(f, (fo.Const, fo.TInv)):
        return True
    if isinstance(f, fo.Not):
        return _antitone_in(f.arg, w, not positive)
    if isinstance(f, fo.Implies):
        return _antitone_in(f.left, w, not positive) and _antitone_in(f.right, w, positive)
    if isinstance(f, fo.Iff):
        return w not in fo.free_vars(f)
    return all(_antitone_in(k, w, positive) for k in fo.fo_children(f))


def absorb(f: fo.FO) -> fo.FO:
    """∃w(a≤w ∧ φ(w)) ↦ φ(a) whenever φ is antitone in w."""
    f = fo._map_children(f, absorb)
    if not isinstance(f, fo.Exists):
        return f
    block, body = [], f
    while isinstance(body, fo.Exists):
        block.append(body.var)
        body = body.body
    changed = True
    while changed:
        changed = False
        conjuncts = list(body.args) if isinstance(body, fo.And) else [body]
        for w in block:
            for i, c in enumerate(conjuncts):
                if isinstance(c, fo.Leq) and c.right == w and c.left != w:
                    rest = fo.conj(*(conjuncts[:i] + conjuncts[i + 1:]))
                    if _antitone_in(rest, w):
                        body = fo.simplify(fo.substitute(rest, {w: c.left}))
                        block.remove(w)
                        changed = True
                        break
            if changed:
                break
    return fo.exists(block, body)


# -- correspondents ------------------------------------------------------------------

def compute_correspondent(sys: System, frame_class: str | None = None) -> fo.FO:
    """First-order local correspondent of a canonical system.

    Classes with stable images (the starred ones) drop the closures around
    diamond terms on the right; classes assuming (M) absorb the order
    witnesses introduced by the minimal instances.
    """
    problems = canonical_problems(sys)
    if problems:
        raise NotInCanonicalForm("; ".join(problems))
    x = _point(sys.sort)
    fresh = fo.Fresh([x])
    rhs = strengthen(sys.rhs) if frame_class in STRENGTHENED else sys.rhs
    ante = fo.standard_translation(sys.lhs, x, fresh)
    cons = fo.standard_translation(rhs, x, fresh)
    prefix, atoms = _flatten(ante)

    occurrences: dict[str, list[fo.FVar]] = {}
    kept = []
    for a in atoms:
        if isinstance(a, fo.PApp):
            occurrences.setdefault(a.pred, []).append(a.arg)
        else:
            kept.append(a)
    guarded = sys.guarded()
    sorts = dict(sys.main_vars())

    def lam(pred: str, t: fo.FVar) -> fo.FO:
        return minimal_instance(pred, sorts[pred], occurrences.get(pred, []),
                                pred in guarded, t, fresh)

    body = fo.Implies(fo.conj(*kept), _substitute_preds(cons, lam))
    out = fo.simplify(fo.forall([x] + prefix, body))
    if frame_class in MONOTONE:
        out = fo.simplify(absorb(out))
    return out


def correspondent_of(seq, frame_class: str | None = None, mode: str = "auto",
                     translation: str = "auto"):
    """Reduce a sequent and compute its correspondent: (formula, SequentReduction)."""
    red = reduce_sequent(seq, frame_class, mode, translation)
    return compute_correspondent(red.reduction.system, frame_class), red


__all__ = ["guarded_translation", "strengthen", "minimal_instance", "absorb",
           "compute_correspondent", "correspondent_of"]
