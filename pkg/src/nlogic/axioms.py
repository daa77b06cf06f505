"""Frame-class axiom checkers.

Each checker returns a :class:`CheckRecord`; on failure the witness names
the points that break the axiom.  Classes are lists of axiom ids, see
:data:`CLASSES`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .errors import MissingRelation
from .frames import SORT1, SORTD, SortedFrame, bits

CLASSES: dict[str, tuple[str, ...]] = {
    "PU": ("F1", "U"),
    "PUl": ("F1", "U", "U1", "U2"),
    "PUl*": ("F1", "U", "U1", "U*2"),
    "PUl_*": ("F1", "M", "U", "U1", "U_*2"),
    "LK": ("F1", "RES", "U*", "F2.1", "F2.2", "F3.1", "F3.2"),
    "LK*": ("F1", "RES", "U*", "F2.1", "F2.2", "F3*.1", "F3*.2"),
    "LK_*": ("F1", "M", "RES", "U*", "F2.1", "F2.2", "F3_*.1", "F3_*.2"),
    "S": ("F1", "F2", "F3"),
    "L": ("F1", "F2", "F3a", "F3b"),
    "classical": ("classical",),
    "distributive": ("distributive",),
    "quasi-serial": ("quasi-serial",),
}

# relations a class declares; (F1) and (M) range over these
CLASS_RELATIONS: dict[str, tuple[str, ...]] = {
    "PU": ("T",), "PUl": ("T",), "PUl*": ("T",), "PUl_*": ("T",),
    "LK": ("T", "R", "S"), "LK*": ("T", "R", "S"), "LK_*": ("T", "R", "S"),
    "S": ("T",), "L": ("T",),
}

# classes whose correspondents drop closures (stable-set strengthening) and
# classes assuming the monotonicity axiom (M)
STRENGTHENED = frozenset({"PUl*", "PUl_*", "LK*", "LK_*"})
MONOTONE = frozenset({"PUl_*", "LK_*"})


@dataclass
class CheckRecord:
    id: str
    passed: bool
    witness: dict[str, str] | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"id": self.id, "pass": self.passed, "witness": self.witness, "detail": self.detail}


@dataclass
class ClassReport:
    frame_class: str
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


def _w(frame: SortedFrame, **points: tuple[str, int]) -> dict[str, str]:
    return {k: frame.names(s)[i] for k, (s, i) in points.items()}


def _range(frame: SortedFrame, sort: str) -> range:
    return range(frame.size(sort))


# -- individual axioms ----------------------------------------------------------

def check_f1(frame: SortedFrame, relations: tuple[str, ...]) -> CheckRecord:
    for name in relations:
        rel = frame.rel(name)
        for args, sec in frame.sections(name).items():
            if not frame.is_stable(rel.out, sec):
                wit = {f"arg{k}": frame.names(s)[a] for k, (s, a) in enumerate(zip(rel.args, args), 1)}
                wit["relation"] = name
                return CheckRecord("F1", False, wit, f"section {name}{args} is not Galois")
    return CheckRecord("F1", True)


def check_m(frame: SortedFrame, relations: tuple[str, ...]) -> CheckRecord:
    """Relations are decreasing (in the specialisation order) in every argument."""
    for name in relations:
        rel = frame.rel(name)
        for t in sorted(rel.tuples):
            for k, s in enumerate(rel.args, 1):
                for b in bits(frame.below(s, t[k])):
                    t2 = t[:k] + (b,) + t[k + 1:]
                    if t2 not in rel.tuples:
                        wit = {"relation": name}
                        wit.update({f"p{j}": frame.names(ss)[i]
                                    for j, (ss, i) in enumerate(zip((rel.out,) + rel.args, t))})
                        wit["lowered"] = frame.names(s)[b]
                        wit["place"] = str(k)
                        return CheckRecord("M", False, wit, f"{name} not decreasing in place {k}")
    return CheckRecord("M", True)


def _unit_galois(frame: SortedFrame, units: int, axiom: str) -> CheckRecord:
    for x in _range(frame, SORT1):
        for v in _range(frame, SORTD):
            perp = not frame.incident(x, v)
            rhs = all(u_in(frame, u, x, v) for u in bits(units))
            if perp != rhs:
                return CheckRecord(axiom, False, _w(frame, x=(SORT1, x), v=(SORTD, v)),
                                   f"x⫫v is {perp} but ∀u∈U uT′xv is {rhs}")
    return CheckRecord(axiom, True)


def u_in(frame: SortedFrame, u: int, x: int, v: int) -> bool:
    return bool(frame.dual_section("T", (x, v)) >> u & 1)


def check_u(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    if not frame.is_stable(SORT1, units):
        return CheckRecord("U", False, {"U": " ".join(frame.name_set(SORT1, units))},
                           "U is not a Galois set")
    return _unit_galois(frame, units, "U")


def check_u_star(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    if not frame.is_stable(SORT1, units):
        return CheckRecord("U*", False, {"U": " ".join(frame.name_set(SORT1, units))},
                           "U is not a Galois set")
    return CheckRecord("U*", True)


def check_f2(frame: SortedFrame) -> CheckRecord:
    return _unit_galois(frame, frame.full(SORT1), "F2")


def check_u1(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    for y, x, v in sorted(frame.rel("T").tuples):
        if units >> x & 1 and not frame.le(SORTD, v, y):
            return CheckRecord("U1", False, _w(frame, y=(SORTD, y), x=(SORT1, x), v=(SORTD, v)),
                               "yTxv with x∈U but v≰y")
    return CheckRecord("U1", True)


def check_u2(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    t = frame.rel("T").tuples
    for y in _range(frame, SORTD):
        for x in _range(frame, SORT1):
            if not frame.incident(x, y):
                continue
            ok = any(frame.incident(x, v) and (v, x1, v1) in t and frame.le(SORTD, y, v1)
                     for v in _range(frame, SORTD) for x1 in bits(units)
                     for v1 in _range(frame, SORTD))
            if not ok:
                return CheckRecord("U2", False, _w(frame, y=(SORTD, y), x=(SORT1, x)))
    return CheckRecord("U2", True)


def check_u_star2(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    t = frame.rel("T").tuples
    for y in _range(frame, SORTD):
        if not any((y, x, v) in t and frame.le(SORTD, y, v)
                   for x in bits(units) for v in _range(frame, SORTD)):
            return CheckRecord("U*2", False, _w(frame, y=(SORTD, y)))
    return CheckRecord("U*2", True)


def check_u_lower_star2(frame: SortedFrame) -> CheckRecord:
    units = frame.require_unit()
    t = frame.rel("T").tuples
    for y in _range(frame, SORTD):
        if not any((y, x, y) in t for x in bits(units)):
            return CheckRecord("U_*2", False, _w(frame, y=(SORTD, y)))
    return CheckRecord("U_*2", True)


def check_res(frame: SortedFrame) -> CheckRecord:
    for x, z in itertools.product(_range(frame, SORT1), repeat=2):
        for v in _range(frame, SORTD):
            a = bool(frame.dual_section("S", (v, z)) >> x & 1)
            b = bool(frame.dual_section("R", (x, z)) >> v & 1)
            c = bool(frame.dual_section("T", (x, v)) >> z & 1)
            if not a == b == c:
                return CheckRecord("RES", False, _w(frame, x=(SORT1, x), z=(SORT1, z), v=(SORTD, v)),
                                   f"xS′vz={a} vR′xz={b} zT′xv={c}")
    return CheckRecord("RES", True)


def check_f2_unit(frame: SortedFrame, place: int) -> CheckRecord:
    """(F2.1) place=1: xRz1z2 and z1∈U give z2≤x; (F2.2) symmetric."""
    units = frame.require_unit()
    axiom = f"F2.{place}"
    for x, z1, z2 in sorted(frame.rel("R").tuples):
        u, other_ = (z1, z2) if place == 1 else (z2, z1)
        if units >> u & 1 and not frame.le(SORT1, other_, x):
            return CheckRecord(axiom, False, _w(frame, x=(SORT1, x), z1=(SORT1, z1), z2=(SORT1, z2)))
    return CheckRecord(axiom, True)


def check_f3_unit(frame: SortedFrame, place: int) -> CheckRecord:
    """(F3.1)/(F3.2): x is in the closure of the unit products reaching above x."""
    units = frame.require_unit()
    r = frame.rel("R").tuples
    axiom = f"F3.{place}"
    n = _range(frame, SORT1)
    for x in n:
        # set of z with ∃z1,z2 (z1∈U ∧ zRz1z2 ∧ x≤z2)
        zs = 0
        for z, z1, z2 in r:
            u, o = (z1, z2) if place == 1 else (z2, z1)
            if units >> u & 1 and frame.le(SORT1, x, o):
                zs |= 1 << z
        for y in _range(frame, SORTD):
            if frame.incident(x, y) and not any(frame.incident(z, y) for z in bits(zs)):
                return CheckRecord(axiom, False, _w(frame, x=(SORT1, x), y=(SORTD, y)))
    return CheckRecord(axiom, True)


def check_f3_star_unit(frame: SortedFrame, place: int) -> CheckRecord:
    units = frame.require_unit()
    r = frame.rel("R").tuples
    axiom = f"F3*.{place}"
    for x in _range(frame, SORT1):
        ok = False
        for xx, z1, z2 in r:
            if xx != x:
                continue
            u, o = (z1, z2) if place == 1 else (z2, z1)
            if units >> u & 1 and frame.le(SORT1, x, o):
                ok = True
                break
        if not ok:
            return CheckRecord(axiom, False, _w(frame, x=(SORT1, x)))
    return CheckRecord(axiom, True)


def check_f3_lower_star_unit(frame: SortedFrame, place: int) -> CheckRecord:
    units = frame.require_unit()
    r = frame.rel("R").tuples
    axiom = f"F3_*.{place}"
    for x in _range(frame, SORT1):
        if place == 1:
            ok = any((x, z, x) in r for z in bits(units))
        else:
            ok = any((x, x, z) in r for z in bits(units))
        if not ok:
            return CheckRecord(axiom, False, _w(frame, x=(SORT1, x)))
    return CheckRecord(axiom, True)


def check_f3_semilattice(frame: SortedFrame, axiom: str = "F3") -> CheckRecord:
    """For all x, z the set {y : x T′ z y} is co-stable."""
    for x, z in itertools.product(_range(frame, SORT1), repeat=2):
        ys = 0
        for y in _range(frame, SORTD):
            if frame.dual_section("T", (z, y)) >> x & 1:
                ys |= 1 << y
        if not frame.is_stable(SORTD, ys):
            return CheckRecord(axiom, False, _w(frame, x=(SORT1, x), z=(SORT1, z)))
    return CheckRecord(axiom, True)


def check_f3b(frame: SortedFrame) -> CheckRecord:
    """For all x, v the set {z : x T′ z v} is stable."""
    for x in _range(frame, SORT1):
        for v in _range(frame, SORTD):
            zs = 0
            for z in _range(frame, SORT1):
                if frame.dual_section("T", (z, v)) >> x & 1:
                    zs |= 1 << z
            if not frame.is_stable(SORT1, zs):
                return CheckRecord("F3b", False, _w(frame, x=(SORT1, x), v=(SORTD, v)))
    return CheckRecord("F3b", True)


def check_quasi_serial(frame: SortedFrame) -> CheckRecord:
    rows, cols = frame._rows
    for x, row in enumerate(rows):
        if not row:
            return CheckRecord("quasi-serial", False, _w(frame, x=(SORT1, x)))
    for y, col in enumerate(cols):
        if not col:
            return CheckRecord("quasi-serial", False, _w(frame, y=(SORTD, y)))
    return CheckRecord("quasi-serial", True)


def check_classical(frame: SortedFrame) -> CheckRecord:
    if frame.w1 != frame.wd:
        return CheckRecord("classical", False, None, "W1 and W∂ differ")
    ident = frozenset((i, i) for i in range(len(frame.w1)))
    extra = sorted(frame.incidence ^ ident)
    if extra:
        x, y = extra[0]
        return CheckRecord("classical", False, _w(frame, x=(SORT1, x), y=(SORTD, y)),
                           "I is not the identity")
    return CheckRecord("classical", True)


def upper_bound_dual(frame: SortedFrame, x: int, z: int) -> int:
    """(R≤ x z)′ where u R≤ x z iff x≤u and z≤u, i.e. (Γx ∩ Γz)′."""
    return frame.prime(SORT1, frame.gamma(SORT1, x) & frame.gamma(SORT1, z))


def check_distributive(frame: SortedFrame) -> CheckRecord:
    """Every section y R′≤ x [ ] of the dual upper-bound relation is stable."""
    n = _range(frame, SORT1)
    for y in _range(frame, SORTD):
        for x in n:
            zs = 0
            for z in n:
                if upper_bound_dual(frame, x, z) >> y & 1:
                    zs |= 1 << z
            if not frame.is_stable(SORT1, zs):
                return CheckRecord("distributive", False, _w(frame, y=(SORTD, y), x=(SORT1, x)))
    return CheckRecord("distributive", True)


_CHECKERS: dict[str, Callable[[SortedFrame, tuple[str, ...]], CheckRecord]] = {
    "F1": check_f1,
    "M": check_m,
    "U": lambda f, r: check_u(f),
    "U*": lambda f, r: check_u_star(f),
    "U1": lambda f, r: check_u1(f),
    "U2": lambda f, r: check_u2(f),
    "U*2": lambda f, r: check_u_star2(f),
    "U_*2": lambda f, r: check_u_lower_star2(f),
    "RES": lambda f, r: check_res(f),
    "F2": lambda f, r: check_f2(f),
    "F2.1": lambda f, r: check_f2_unit(f, 1),
    "F2.2": lambda f, r: check_f2_unit(f, 2),
    "F3.1": lambda f, r: check_f3_unit(f, 1),
    "F3.2": lambda f, r: check_f3_unit(f, 2),
    "F3*.1": lambda f, r: check_f3_star_unit(f, 1),
    "F3*.2": lambda f, r: check_f3_star_unit(f, 2),
    "F3_*.1": lambda f, r: check_f3_lower_star_unit(f, 1),
    "F3_*.2": lambda f, r: check_f3_lower_star_unit(f, 2),
    "F3": lambda f, r: check_f3_semilattice(f, "F3"),
    "F3a": lambda f, r: check_f3_semilattice(f, "F3a"),
    "F3b": lambda f, r: check_f3b(f),
    "quasi-serial": lambda f, r: check_quasi_serial(f),
    "classical": lambda f, r: check_classical(f),
    "distributive": lambda f, r: check_distributive(f),
}

AXIOMS = tuple(_CHECKERS)


def check_axiom(frame: SortedFrame, axiom: str, relations: tuple[str, ...] = ("T",)) -> CheckRecord:
    return _CHECKERS[axiom](frame, relations)


def check_frame_class(frame: SortedFrame, class_id: str,
                      axioms: tuple[str, ...] | None = None,
                      stop_on_failure: bool = False) -> ClassReport:
    """Check every axiom of ``class_id`` (or the explicit ``axioms`` list).

    Raises :class:`MissingRelation` if the frame lacks a relation or U that
    the class mentions.
    """
    if class_id not in CLASSES and axioms is None:
        raise KeyError(f"unknown frame class {class_id!r}; known: {', '.join(CLASSES)}")
    ids = axioms if axioms is not None else CLASSES[class_id]
    relations = CLASS_RELATIONS.get(class_id, ("T",) if frame.has("T") else ())
    for name in CLASS_RELATIONS.get(class_id, ()):
        if not frame.has(name):
            raise MissingRelation(f"class {class_id} needs relation {name}")
    report = ClassReport(class_id)
    for a in ids:
        rec = check_axiom(frame, a, relations)
        report.records.append(rec)
        if stop_on_failure and not rec.passed:
            break
    return report


def satisfies(frame: SortedFrame, class_id: str) -> bool:
    try:
        return check_frame_class(frame, class_id, stop_on_failure=True).passed
    except MissingRelation:
        return False

