"""Dual (canonical) frames of finite algebras and the checks that they
really represent the algebra they came from."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import axioms
from .axioms import CheckRecord, ClassReport
from .errors import SignatureMismatch
from .frames import SORT1, SORTD, SortedFrame, bits, build_frame
from .order import (OrderedAlgebra, enumerate_filters, enumerate_ideals, point_arrow,
                    point_product)

SIGNATURES = ("poset", "semilattice", "lattice", "lambek")


@dataclass(frozen=True)
class CanonicalFrame:
    frame: SortedFrame
    alg: OrderedAlgebra
    signature: str
    filters: tuple[frozenset[str], ...]
    ideals: tuple[frozenset[str], ...]
    unit_source: str  # "unit" or "top"

    def filter_index(self, members: frozenset[str]) -> int:
        return self.filters.index(frozenset(members))

    def ideal_index(self, members: frozenset[str]) -> int:
        return self.ideals.index(frozenset(members))

    def sidecar(self) -> str:
        """Point id -> member list table, one point per line."""
        lines = []
        for name, members in zip(self.frame.w1, self.filters):
            lines.append(f"{name}: {' '.join(a for a in self.alg.carrier if a in members)}")
        for name, members in zip(self.frame.wd, self.ideals):
            lines.append(f"{name}: {' '.join(a for a in self.alg.carrier if a in members)}")
        return "\n".join(lines) + "\n"


def _point_name(prefix: str, gen: str | None) -> str:
    return f"{prefix}_{gen}" if gen is not None else f"{prefix}_empty"


def canonical_frame(alg: OrderedAlgebra, signature: str | None = None,
                    allow_empty: bool = False) -> CanonicalFrame:
    """Filters as sort 1, ideals as sort d, I = disjointness.

    T, and for the Lambek signature also R and S, are read off the operation
    tables: y T x v iff a->b in y for all a in x, b in v; u R x z iff a*b in u
    for all a in x, b in z; y S v x iff b<-a in y for all a in x, b in v.
    """
    signature = signature or default_signature(alg)
    if signature not in SIGNATURES:
        raise SignatureMismatch(f"unknown signature {signature!r}")
    if signature == "lambek" and (alg.prod is None or alg.limp is None or alg.unit is None):
        raise SignatureMismatch("lambek signature needs prod, limp and unit")
    need = {"semilattice": ("meet-semilattice", "lattice"), "lattice": ("lattice",)}
    if signature in need and alg.kind not in need[signature]:
        raise SignatureMismatch(f"{signature} signature needs a {signature}, algebra is a {alg.kind}")

    fs = enumerate_filters(alg, allow_empty)
    ids = enumerate_ideals(alg, allow_empty)
    filters = tuple(m.elements for m in fs.members)
    ideals = tuple(m.elements for m in ids.members)
    w1 = [_point_name("x", m.generator) for m in fs.members]
    wd = [_point_name("y", m.generator) for m in ids.members]
    incidence = [(i, j) for i, x in enumerate(filters) for j, y in enumerate(ideals) if not x & y]

    if alg.unit is not None:
        e, source = alg.unit, "unit"
    elif alg.top is not None:
        e, source = alg.top, "top"
    else:
        raise SignatureMismatch("algebra has neither a unit nor a top element")
    unit = [i for i, x in enumerate(filters) if e in x]

    imp = alg.imp
    t = [(k, i, j) for i, x in enumerate(filters) for j, v in enumerate(ideals)
         for k, y in enumerate(ideals) if all(imp[a, b] in y for a in x for b in v)]
    relations = {"T": t}
    if signature == "lambek":
        prod, limp = alg.prod, alg.limp
        relations["R"] = [(k, i, j) for i, x in enumerate(filters) for j, z in enumerate(filters)
                          for k, u in enumerate(filters)
                          if all(prod[a, b] in u for a in x for b in z)]
        relations["S"] = [(k, j, i) for i, x in enumerate(filters) for j, v in enumerate(ideals)
                          for k, y in enumerate(ideals)
                          if all(limp[b, a] in y for a in x for b in v)]
    frame = build_frame(w1, wd, incidence, unit, relations)
    return CanonicalFrame(frame, alg, signature, filters, ideals, source)


def default_signature(alg: OrderedAlgebra) -> str:
    if alg.prod is not None and alg.limp is not None and alg.unit is not None:
        return "lambek"
    return {"poset": "poset", "meet-semilattice": "semilattice", "lattice": "lattice"}[alg.kind]


# ---------------------------------------------------------------------------
# representation maps

@dataclass(frozen=True)
class Representation:
    alpha: dict[str, int]  # element -> stable set of filters
    eta: dict[str, int]    # element -> co-stable set of ideals


def representation(cf: CanonicalFrame) -> Representation:
    alpha = {a: sum(1 << i for i, x in enumerate(cf.filters) if a in x) for a in cf.alg.carrier}
    eta = {a: sum(1 << j for j, y in enumerate(cf.ideals) if a in y) for a in cf.alg.carrier}
    return Representation(alpha, eta)


@dataclass
class Report:
    title: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, id: str, ok: bool, witness: dict | None = None, detail: str = "") -> None:
        self.records.append(CheckRecord(id, ok, None if ok else witness, "" if ok else detail))

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


def _join(frame: SortedFrame, *masks: int) -> int:
    out = 0
    for m in masks:
        out |= m
    return frame.close(SORT1, out)


def verify_embedding(cf: CanonicalFrame) -> Report:
    """alpha is an order embedding preserving every operation present."""
    alg, fr = cf.alg, cf.frame
    rep = representation(cf)
    al = rep.alpha
    report = Report("embedding")
    for a in alg.carrier:
        report.add("alpha-stable", fr.is_stable(SORT1, al[a]), {"a": a})
        report.add("alpha-prime-eta", fr.prime(SORT1, al[a]) == rep.eta[a], {"a": a})
    for a, b in itertools.product(alg.carrier, repeat=2):
        w = {"a": a, "b": b}
        report.add("order", alg.le(a, b) == (al[a] & ~al[b] == 0), w,
                   "a<=b disagrees with alpha(a)⊆alpha(b)")
        report.add("imp", al[alg.imp[a, b]] == _implies(fr, al[a], al[b]), w,
                   "alpha(a->b) != alpha(a)=>alpha(b)")
        if alg.kind in ("meet-semilattice", "lattice"):
            report.add("meet", al[alg.meet(a, b)] == al[a] & al[b], w)
        if alg.kind == "lattice":
            report.add("join", al[alg.join(a, b)] == _join(fr, al[a], al[b]), w)
        if cf.signature == "lambek":
            report.add("prod", al[alg.prod[a, b]] == _product(fr, al[a], al[b]), w,
                       "alpha(a*b) != closure(alpha(a)⊙alpha(b))")
            report.add("limp", al[alg.limp[b, a]] == _limplies(fr, al[b], al[a]), w,
                       "alpha(b<-a) != alpha(b)<=alpha(a)")
    if alg.unit is not None:
        report.add("unit", al[alg.unit] == fr.unit, {"e": alg.unit})
    return report


def _implies(fr: SortedFrame, a: int, c: int) -> int:
    """A => C by its membership clause: u in A=>C iff uT'xv for x in A, v in C'."""
    out = fr.full(SORT1)
    cp = fr.prime(SORT1, c)
    for x in bits(a):
        for v in bits(cp):
            out &= fr.dual_section("T", (x, v))
    return out


def _product(fr: SortedFrame, a: int, f: int) -> int:
    return fr.close(SORT1, fr.image("R", (a, f)))


def _limplies(fr: SortedFrame, c: int, a: int) -> int:
    return fr.prime(SORTD, fr.image("S", (fr.prime(SORT1, c), a)))


def verify_canonical_extension(cf: CanonicalFrame) -> Report:
    """Delta1-density and compactness of the stable-set lattice."""
    fr = cf.frame
    report = Report("canonical-extension")
    rep = representation(cf)
    for a in fr.stable_sets(SORT1):
        union = 0
        for x in bits(a):
            union |= fr.gamma(SORT1, x)
        meet = fr.full(SORT1)
        for y in bits(fr.prime(SORT1, a)):
            meet &= fr.perp(SORTD, y)
        members = " ".join(fr.name_set(SORT1, a))
        report.add("join-dense", union == a, {"A": members})
        report.add("meet-dense", meet == a, {"A": members})
    for i, x in enumerate(cf.filters):
        meet = fr.full(SORT1)
        for a in x:
            meet &= rep.alpha[a]
        report.add("filter-is-meet-of-alpha", meet == fr.gamma(SORT1, i), {"x": fr.w1[i]})
    for j, y in enumerate(cf.ideals):
        report.add("ideal-is-join-of-alpha",
                   _join(fr, *(rep.alpha[a] for a in y)) == fr.perp(SORTD, j), {"y": fr.wd[j]})
    for i, x in enumerate(cf.filters):
        for j, y in enumerate(cf.ideals):
            below = fr.gamma(SORT1, i) & ~fr.perp(SORTD, j) == 0
            report.add("compactness", below == bool(x & y), {"x": fr.w1[i], "y": fr.wd[j]},
                       f"Γx⊆{{y}}′ is {below} but x∩y≠∅ is {bool(x & y)}")
    return report


def pi_closed_open(cf: CanonicalFrame, i: int, j: int) -> int:
    """Γx ->π {y}': the join of alpha(a->b) over a in x, b in y."""
    rep = representation(cf)
    alg = cf.alg
    return _join(cf.frame, *(rep.alpha[alg.imp[a, b]] for a in cf.filters[i] for b in cf.ideals[j]))


def verify_pi_extension(cf: CanonicalFrame) -> Report:
    fr, alg = cf.frame, cf.alg
    report = Report("pi-extension")
    table = {}
    for i, x in enumerate(cf.filters):
        for j, y in enumerate(cf.ideals):
            pi = pi_closed_open(cf, i, j)
            table[i, j] = pi
            w = {"x": fr.w1[i], "y": fr.wd[j]}
            k = cf.ideal_index(point_arrow(alg, x, y))
            report.add("pi-closed-open", pi == fr.perp(SORTD, k), w, "join differs from {x⊳y}′")
            report.add("pi-dual-section", pi == fr.dual_section("T", (i, j)), w)
            report.add("pi-operator", pi == _implies(fr, fr.gamma(SORT1, i), fr.perp(SORTD, j)), w)
    for a, c in itertools.product(fr.stable_sets(SORT1), repeat=2):
        meet = fr.full(SORT1)
        for i in bits(a):
            for j in bits(fr.prime(SORT1, c)):
                meet &= table[i, j]
        report.add("pi-stable-pair", meet == _implies(fr, a, c),
                   {"A": " ".join(fr.name_set(SORT1, a)), "C": " ".join(fr.name_set(SORT1, c))})
    return report


def class_for(cf: CanonicalFrame) -> str:
    return {"poset": "PU", "semilattice": "S", "lattice": "L", "lambek": "LK_*"}[cf.signature]


def verify_canonical_class(cf: CanonicalFrame, class_id: str | None = None) -> ClassReport:
    """Run the class axioms on the canonical frame, adding the structural
    frame conditions whose algebraic counterparts hold in the algebra."""
    class_id = class_id or class_for(cf)
    ids = axioms.CLASSES[class_id]
    if class_id in ("S", "L") and cf.alg.unit is not None and cf.alg.unit != cf.alg.top:
        # non-integral case: the unit axiom replaces the integral (F2)
        ids = tuple("U" if a == "F2" else a for a in ids)
    report = axioms.check_frame_class(cf.frame, class_id, ids)
    if cf.signature == "lambek":
        report.records.extend(structural_checks(cf))
    return report


def structural_checks(cf: CanonicalFrame) -> list[CheckRecord]:
    alg, fr = cf.alg, cf.frame
    c, prod, le = alg.carrier, alg.prod, alg.le
    r = fr.rel("R").tuples
    w1 = range(len(fr.w1))
    out = []

    def first(cond_iter):
        for wit in cond_iter:
            return {k: fr.w1[v] for k, v in wit.items()}
        return None

    if all(prod[a, b] == prod[b, a] for a in c for b in c):
        bad = first({"x": x, "u": u, "z": z} for x, u, z in r if (x, z, u) not in r)
        out.append(CheckRecord("exchange", bad is None, bad))
    if all(le(a, prod[a, a]) for a in c):
        bad = first({"x": x} for x in w1 if (x, x, x) not in r)
        out.append(CheckRecord("contraction", bad is None, bad))
    if all(le(prod[a, b], b) for a in c for b in c):
        bad = first({"x": x, "u": u, "z": z} for x, u, z in r if not fr.le(SORT1, z, x))
        out.append(CheckRecord("weakening", bad is None, bad))
    if all(prod[a, prod[b, d]] == prod[prod[a, b], d] for a in c for b in c for d in c):
        fs = cf.filters

        def assoc(u, x, z):
            return (point_product(alg, fs[u], point_product(alg, fs[x], fs[z]))
                    == point_product(alg, point_product(alg, fs[u], fs[x]), fs[z]))

        bad = first({"u": u, "x": x, "z": z} for u, x, z in itertools.product(w1, repeat=3)
                    if not assoc(u, x, z))
        out.append(CheckRecord("point-association", bad is None, bad))
    return out
