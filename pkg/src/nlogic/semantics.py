"""Evaluation of object formulas and sorted modal terms over finite frames.

Object models assign each variable a stable subset of W1; the co-extent of
a formula is always the Galois image of its extent.  Sorted models assign
each modal variable an arbitrary subset of its sort.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .duality import Report
from .errors import NlogicError, ParseError, SearchSpaceTooLarge
from .frames import SORT1, SORTD, GaloisSet, SortedFrame, bits
from .syntax import modal as md
from .syntax import objects as ob

IMPLICATIONS = ("galois", "residual", "routley-meyer")
DEFAULT_BOUND = 10**6


class ValuationError(NlogicError):
    pass


@dataclass(frozen=True)
class Model:
    """An object model: every variable denotes a stable subset of W1."""
    frame: SortedFrame
    valuation: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, mask in self.valuation.items():
            if not self.frame.is_stable(SORT1, mask):
                raise ValuationError(f"V({name}) is not a stable set")


@dataclass(frozen=True)
class SortedModel:
    """A sorted model: modal variables denote arbitrary subsets of their sort
    (the sort comes from the term being evaluated)."""
    frame: SortedFrame
    valuation: Mapping[str, int] = field(default_factory=dict)


def _meet_all(full: int, masks) -> int:
    out = full
    for m in masks:
        out &= m
    return out


def _lookup(valuation: Mapping[str, int], name: str) -> int:
    try:
        return valuation[name]
    except KeyError:
        raise ValuationError(f"no value for variable {name}") from None


# -- object language --------------------------------------------------------------

def _rm_closure(frame: SortedFrame, good: int) -> int:
    """Points all of whose upper neighbours (specialisation order) are good."""
    out = 0
    for x in range(frame.size(SORT1)):
        if all(good >> w & 1 for w in bits(frame.gamma(SORT1, x))):
            out |= 1 << x
    return out


def _residual_right(frame: SortedFrame, a: int, c: int) -> int:
    """{x : every z with zRux for some u in a lies in c}"""
    out = 0
    for x in range(frame.size(SORT1)):
        if all(not frame.section("R", (u, x)) & ~c for u in bits(a)):
            out |= 1 << x
    return out


def _residual_left(frame: SortedFrame, c: int, a: int) -> int:
    """{x : every z with zRxu for some u in a lies in c}"""
    out = 0
    for x in range(frame.size(SORT1)):
        if all(not frame.section("R", (x, u)) & ~c for u in bits(a)):
            out |= 1 << x
    return out


def _extent(model: Model, phi: ob.Formula, implication: str) -> int:
    fr = model.frame
    ext = lambda f: _extent(model, f, implication)  # noqa: E731
    co = lambda f: fr.prime(SORT1, ext(f))  # noqa: E731
    if isinstance(phi, ob.Var):
        return _lookup(model.valuation, phi.name)
    if isinstance(phi, ob.Top):
        return fr.full(SORT1)
    if isinstance(phi, ob.Bot):
        return fr.close(SORT1, 0)
    if isinstance(phi, ob.Unit):
        return fr.require_unit()
    if isinstance(phi, ob.And):
        return ext(phi.left) & ext(phi.right)
    if isinstance(phi, ob.Or):
        return fr.prime(SORTD, co(phi.left) & co(phi.right))
    if isinstance(phi, ob.Prod):
        a, b = ext(phi.left), ext(phi.right)
        dual = _meet_all(fr.full(SORTD), (fr.dual_section("R", (x, z))
                                          for x in bits(a) for z in bits(b)))
        return fr.prime(SORTD, dual)
    if isinstance(phi, ob.Imp):
        if implication == "galois":
            a, cv = ext(phi.left), co(phi.right)
            return _meet_all(fr.full(SORT1), (fr.dual_section("T", (x, v))
                                              for x in bits(a) for v in bits(cv)))
        res = _residual_right(fr, ext(phi.left), ext(phi.right))
        return _rm_closure(fr, res) if implication == "routley-meyer" else res
    if isinstance(phi, ob.LImp):
        if implication == "galois":
            cv, a = co(phi.left), ext(phi.right)
            return _meet_all(fr.full(SORT1), (fr.dual_section("S", (v, z))
                                              for v in bits(cv) for z in bits(a)))
        res = _residual_left(fr, ext(phi.left), ext(phi.right))
        return _rm_closure(fr, res) if implication == "routley-meyer" else res
    raise TypeError(f"not an object formula: {phi!r}")


def eval_object(model: Model, phi: ob.Formula,
                implication: str = "galois") -> tuple[GaloisSet, GaloisSet]:
    """(extent, co-extent) of ``phi``.

    ``implication`` picks the clause for both implications: ``galois`` uses
    the dual sections of T and S, ``residual`` the residuals of the image
    operator of R, and ``routley-meyer`` the residual clause quantified
    over every point above the evaluation point.
    """
    if implication not in IMPLICATIONS:
        raise ValueError(f"implication must be one of {IMPLICATIONS}")
    fr = model.frame
    e = _extent(model, phi, implication)
    return fr.subset(SORT1, e), fr.subset(SORTD, fr.prime(SORT1, e))


# -- sorted modal language --------------------------------------------------------------

def eval_sorted(model: SortedModel | Model, m: md.Modal) -> int:
    """Extent of a sorted term, a subset (mask) of the term's sort."""
    fr = model.frame
    ev = lambda t: eval_sorted(model, t)  # noqa: E731
    if isinstance(m, md.PVar):
        return _lookup(model.valuation, m.name)
    if isinstance(m, md.MTop):
        return fr.full(m.sort)
    if isinstance(m, md.MBot):
        return 0
    if isinstance(m, md.UConst):
        return fr.require_unit()
    if isinstance(m, md.Meet):
        return ev(m.left) & ev(m.right)
    if isinstance(m, md.Join):
        return ev(m.left) | ev(m.right)
    if isinstance(m, md.Prime):
        return fr.prime(m.arg.sort, ev(m.arg))
    if isinstance(m, md.Odot):
        return fr.image("R", (ev(m.left), ev(m.right)))
    if isinstance(m, md.Tright):
        return fr.image("T", (ev(m.left), ev(m.right)))
    if isinstance(m, md.Tleft):
        return fr.image("S", (ev(m.left), ev(m.right)))
    if isinstance(m, md.RSpoon):
        return _residual_right(fr, ev(m.left), ev(m.right))
    if isinstance(m, md.LSpoon):
        return _residual_left(fr, ev(m.left), ev(m.right))
    raise TypeError(f"not a sorted term: {m!r}")


# -- sequents ---------------------------------------------------------------------

@dataclass(frozen=True)
class SequentResult:
    holds: bool
    witness: str | None = None  # a W1 point in the antecedent but not the consequent

    def __bool__(self) -> bool:
        return self.holds


def check_sequent(model: Model, seq: ob.Sequent, implication: str = "galois") -> SequentResult:
    a = eval_object(model, seq.lhs, implication)[0].mask
    c = eval_object(model, seq.rhs, implication)[0].mask
    bad = a & ~c
    if not bad:
        return SequentResult(True)
    return SequentResult(False, model.frame.w1[next(bits(bad))])


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    counter_valuation: dict[str, list[str]] | None = None
    witness: str | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


def check_validity(frame: SortedFrame, seq: ob.Sequent, varbound: int | None = None,
                   bound: int = DEFAULT_BOUND, implication: str = "galois") -> ValidityResult:
    """Check ``seq`` under every assignment of stable sets to its variables."""
    names = ob.sequent_variables(seq)
    if varbound is not None and len(names) > varbound:
        raise SearchSpaceTooLarge(f"{len(names)} variables exceed the bound {varbound}")
    stable = frame.stable_sets(SORT1)
    total = len(stable) ** len(names)
    if total > bound:
        raise SearchSpaceTooLarge(f"{total} valuations exceed the bound {bound}")
    count = 0
    for values in itertools.product(stable, repeat=len(names)):
        count += 1
        model = Model(frame, dict(zip(names, values)))
        res = check_sequent(model, seq, implication)
        if not res.holds:
            counter = {n: frame.name_set(SORT1, m) for n, m in zip(names, values)}
            return ValidityResult(False, counter, res.witness, count)
    return ValidityResult(True, None, None, count)


# -- full abstraction ---------------------------------------------------------------

def induced_model(frame: SortedFrame, sorted_valuation: Mapping[str, int],
                  variables: list[str]) -> Model:
    """Object model with V(p) = V(P)'' for the modal variable P of p."""
    return Model(frame, {p: frame.close(SORT1, sorted_valuation.get(md.modal_name(p), 0))
                         for p in variables})


def check_full_abstraction(frame: SortedFrame, phi: ob.Formula,
                           sorted_valuation: Mapping[str, int],
                           translation: str = "diamond") -> Report:
    """Compare the extents of the translation, the primed co-translation and
    the formula itself, and the corresponding co-extents."""
    implication = "galois" if translation == "diamond" else "residual"
    bullet, circ = md.translate(phi, translation)
    smodel = SortedModel(frame, dict(sorted_valuation))
    omodel = induced_model(frame, sorted_valuation, ob.variables(phi))
    ext, co = eval_object(omodel, phi, implication)
    b, c = eval_sorted(smodel, bullet), eval_sorted(smodel, circ)
    b_prime, c_prime = frame.prime(SORT1, b), frame.prime(SORTD, c)
    report = Report(f"full abstraction for {ob.format_formula(phi)}")

    def names(sort, mask):
        return " ".join(frame.name_set(sort, mask)) or "∅"

    def add(id_, sort, got, want):
        report.add(id_, got == want, {"got": names(sort, got), "expected": names(sort, want)})

    add("bullet = extent", SORT1, b, ext.mask)
    add("circ' = extent", SORT1, c_prime, ext.mask)
    add("circ = co-extent", SORTD, c, co.mask)
    add("bullet' = co-extent", SORTD, b_prime, co.mask)
    return report


# -- valuation files ------------------------------------------------------------------

def parse_valuation(text: str, frame: SortedFrame, sorted_: bool = False,
                    sorts: Mapping[str, str] | None = None) -> dict[str, int]:
    """Read lines ``name: point point ...``.

    Object valuations (the default) are closed to stable sets, with a
    warning when the closure changes the input.  Sorted valuations keep the
    sets as given; a variable's sort comes from ``sorts`` and otherwise
    from the sort its points belong to.
    """
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'name: points'", line=lineno)
        name, rest = (s.strip() for s in line.split(":", 1))
        if not name or not name.replace("_", "a").isalnum():
            raise ParseError(f"bad variable name {name!r}", line=lineno)
        if name in out:
            raise ParseError(f"variable {name} given twice", line=lineno)
        points = rest.split()
        sort = (sorts or {}).get(name)
        if sort is None:
            sort = SORT1
            if sorted_ and points and all(p in frame.wd for p in points) \
                    and not all(p in frame.w1 for p in points):
                sort = SORTD
        mask = 0
        for p in points:
            if p not in frame.names(sort):
                raise ParseError(f"unknown point {p!r} for {name}", line=lineno)
            mask |= 1 << frame.names(sort).index(p)
        if not sorted_:
            closed = frame.close(SORT1, mask)
            if closed != mask:
                warnings.warn(f"V({name}) closed to {{{', '.join(frame.name_set(SORT1, closed))}}}",
                              stacklevel=2)
            mask = closed
        out[name] = mask
    return out


__all__ = ["Model", "SortedModel", "ValuationError", "eval_object", "eval_sorted",
           "SequentResult", "check_sequent", "ValidityResult", "check_validity",
           "induced_model", "check_full_abstraction", "parse_valuation", "IMPLICATIONS"]
