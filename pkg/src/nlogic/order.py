"""Finite ordered algebras with an implication, and their filters and ideals.

Elements are plain strings.  Subsets of the carrier are ``frozenset`` of
element names; everything here is small (the carrier is capped, see
:func:`max_carrier`) so clarity wins over speed.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    AlgebraError,
    AntisymmetryViolation,
    CarrierTooLarge,
    KindViolation,
    NotAFilter,
    NotAnIdeal,
    OperatorTypeViolation,
    ParseError,
    ResiduationViolation,
    UnitAxiomViolation,
)

KINDS = ("poset", "meet-semilattice", "lattice")
_KIND_ALIASES = {"poset": "poset", "semilattice": "meet-semilattice",
                 "meet-semilattice": "meet-semilattice", "lattice": "lattice"}

Table = Mapping[tuple[str, str], str]


def max_carrier() -> int:
    """Soft bound on carrier size, overridable through ``NLOGIC_MAX_CARRIER``."""
    return int(os.environ.get("NLOGIC_MAX_CARRIER", "12"))


@dataclass(frozen=True, eq=False)
class OrderedAlgebra:
    carrier: tuple[str, ...]
    leq: frozenset[tuple[str, str]]
    kind: str
    imp: Table
    unit: str | None = None
    prod: Table | None = None
    limp: Table | None = None
    declared_kind: str | None = None
    _up: dict = field(default_factory=dict, repr=False)

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def up(self, a: str) -> frozenset[str]:
        if ("u", a) not in self._up:
            self._up[("u", a)] = frozenset(b for b in self.carrier if self.le(a, b))
        return self._up[("u", a)]

    def down(self, a: str) -> frozenset[str]:
        if ("d", a) not in self._up:
            self._up[("d", a)] = frozenset(b for b in self.carrier if self.le(b, a))
        return self._up[("d", a)]

    def upclose(self, s: Iterable[str]) -> frozenset[str]:
        return frozenset().union(*(self.up(a) for a in s)) if s else frozenset()

    def downclose(self, s: Iterable[str]) -> frozenset[str]:
        return frozenset().union(*(self.down(a) for a in s)) if s else frozenset()

    @property
    def top(self) -> str | None:
        tops = [a for a in self.carrier if all(self.le(b, a) for b in self.carrier)]
        return tops[0] if tops else None

    @property
    def bottom(self) -> str | None:
        bots = [a for a in self.carrier if all(self.le(a, b) for b in self.carrier)]
        return bots[0] if bots else None

    def meet(self, a: str, b: str) -> str | None:
        return _greatest(self, self.down(a) & self.down(b))

    def join(self, a: str, b: str) -> str | None:
        return _least(self, self.up(a) & self.up(b))

    @property
    def integral(self) -> bool:
        return self.unit is not None and self.unit == self.top

    def index(self, a: str) -> int:
        return self.carrier.index(a)

    def sort_key(self, s: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.carrier.index(a) for a in s))


def _greatest(alg: OrderedAlgebra, s: frozenset[str]) -> str | None:
    for a in s:
        if all(alg.le(b, a) for b in s):
            return a
    return None


def _least(alg: OrderedAlgebra, s: frozenset[str]) -> str | None:
    for a in s:
        if all(alg.le(a, b) for b in s):
            return a
    return None


# ---------------------------------------------------------------------------
# validation

def _closure(carrier: tuple[str, ...], pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {(a, a) for a in carrier} | set(pairs)
    for k in carrier:  # Warshall
        for i in carrier:
            if (i, k) in rel:
                for j in carrier:
                    if (k, j) in rel:
                        rel.add((i, j))
    return rel


def _actual_kind(alg: OrderedAlgebra) -> str:
    pairs = list(itertools.product(alg.carrier, repeat=2))
    if any(alg.meet(a, b) is None for a, b in pairs):
        return "poset"
    if any(alg.join(a, b) is None for a, b in pairs):
        return "meet-semilattice"
    return "lattice"


def _check_table(name: str, table: Mapping, carrier: tuple[str, ...]) -> dict:
    cset = set(carrier)
    out = {}
    for (a, b), c in table.items():
        if a not in cset or b not in cset or c not in cset:
            raise AlgebraError(f"{name} table mentions unknown element in ({a},{b})={c}")
        out[(a, b)] = c
    missing = [p for p in itertools.product(carrier, repeat=2) if p not in out]
    if missing:
        a, b = missing[0]
        raise AlgebraError(f"{name} table is partial: no entry for ({a},{b})",
                           {"a": a, "b": b})
    return out


def validate_algebra(raw: Mapping) -> OrderedAlgebra:
    """Normalise and check an algebra description.

    ``raw`` has keys ``elements`` (sequence of names), ``order`` (pairs
    ``(a, b)`` meaning a <= b, typically a cover relation), optional
    ``kind``, ``unit``, and the operation tables ``imp``, ``prod``, ``limp``
    as dicts from pairs to elements.
    """
    carrier = tuple(raw["elements"])
    if len(set(carrier)) != len(carrier):
        raise AlgebraError("element names must be distinct")
    if not carrier:
        raise AlgebraError("carrier is empty")
    if len(carrier) > max_carrier():
        raise CarrierTooLarge(f"{len(carrier)} elements exceeds limit {max_carrier()} "
                              "(set NLOGIC_MAX_CARRIER to raise it)")
    cset = set(carrier)
    for a, b in raw.get("order", ()):
        if a not in cset or b not in cset:
            raise AlgebraError(f"order pair {a}<={b} references an undeclared element")
    leq = _closure(carrier, raw.get("order", ()))
    for a, b in itertools.combinations(carrier, 2):
        if (a, b) in leq and (b, a) in leq:
            raise AntisymmetryViolation(f"{a}<={b} and {b}<={a} with {a}!={b}", {"a": a, "b": b})

    unit = raw.get("unit")
    if unit is not None and unit not in cset:
        raise AlgebraError(f"unit {unit} is not an element")
    if "imp" not in raw or raw["imp"] is None:
        raise AlgebraError("an implication table (imp) is required")
    imp = _check_table("imp", raw["imp"], carrier)
    prod = _check_table("prod", raw["prod"], carrier) if raw.get("prod") is not None else None
    limp = _check_table("limp", raw["limp"], carrier) if raw.get("limp") is not None else None

    declared = raw.get("kind")
    if declared is not None:
        if declared not in _KIND_ALIASES:
            raise AlgebraError(f"unknown kind {declared!r}")
        declared = _KIND_ALIASES[declared]
    alg = OrderedAlgebra(carrier, frozenset(leq), "poset", imp, unit, prod, limp)
    actual = _actual_kind(alg)
    if declared is not None and KINDS.index(declared) > KINDS.index(actual):
        raise KindViolation(f"declared kind {declared} but the order is only a {actual}")
    kind = declared or actual
    alg = OrderedAlgebra(carrier, frozenset(leq), kind, imp, unit, prod, limp, declared)
    _check_operators(alg)
    return alg


def _check_operators(alg: OrderedAlgebra) -> None:
    c, le, imp = alg.carrier, alg.le, alg.imp
    # delta(->) = (1, d; d): antitone in the first place, monotone in the second
    for a, a2, b in itertools.product(c, repeat=3):
        if le(a, a2) and not le(imp[a2, b], imp[a, b]):
            raise OperatorTypeViolation(
                f"imp not antitone in argument 1: {a}<={a2} but {a2}->{b} !<= {a}->{b}",
                "imp-antitone", {"a": a, "a'": a2, "b": b})
        if le(a, a2) and not le(imp[b, a], imp[b, a2]):
            raise OperatorTypeViolation(
                f"imp not monotone in argument 2: {a}<={a2} but {b}->{a} !<= {b}->{a2}",
                "imp-monotone", {"a": a, "a'": a2, "b": b})
    if alg.unit is not None:
        e = alg.unit
        for a, b in itertools.product(c, repeat=2):
            if le(a, b) != le(e, imp[a, b]):
                raise UnitAxiomViolation(
                    f"unit axiom fails: {a}<={b} is {le(a, b)} but {e}<={a}->{b} is "
                    f"{le(e, imp[a, b])}", {"a": a, "b": b})
    if alg.prod is not None:
        prod = alg.prod
        for a, a2, b in itertools.product(c, repeat=3):
            if le(a, a2) and not (le(prod[a, b], prod[a2, b]) and le(prod[b, a], prod[b, a2])):
                raise OperatorTypeViolation(f"prod not monotone at {a}<={a2}, {b}",
                                            "prod-monotone", {"a": a, "a'": a2, "b": b})
        for a, b, d in itertools.product(c, repeat=3):
            if le(prod[a, b], d) != le(b, imp[a, d]):
                raise ResiduationViolation(
                    f"{a}*{b}<={d} disagrees with {b}<={a}->{d}", {"a": a, "b": b, "c": d})
            if alg.limp is not None and le(prod[a, b], d) != le(a, alg.limp[d, b]):
                raise ResiduationViolation(
                    f"{a}*{b}<={d} disagrees with {a}<={d}<-{b}", {"a": a, "b": b, "c": d})
        if alg.unit is not None:
            e = alg.unit
            for a in c:
                if prod[a, e] != a or prod[e, a] != a:
                    raise UnitAxiomViolation(f"{e} is not a two-sided unit for * at {a}", {"a": a})
    elif alg.limp is not None:
        raise AlgebraError("limp given without prod")
    if alg.kind in ("meet-semilattice", "lattice"):
        for a, b, d in itertools.product(c, repeat=3):
            if imp[a, alg.meet(b, d)] != alg.meet(imp[a, b], imp[a, d]):
                raise OperatorTypeViolation(
                    f"{a}->({b}&{d}) differs from ({a}->{b})&({a}->{d})",
                    "meet-distribution", {"a": a, "b": b, "c": d})
    if alg.kind == "lattice":
        for a, b, d in itertools.product(c, repeat=3):
            if imp[alg.join(a, d), b] != alg.meet(imp[a, b], imp[d, b]):
                raise OperatorTypeViolation(
                    f"({a}|{d})->{b} differs from ({a}->{b})&({d}->{b})",
                    "join-distribution", {"a": a, "b": b, "c": d})


# ---------------------------------------------------------------------------
# filters and ideals

@dataclass(frozen=True)
class Member:
    elements: frozenset[str]
    generator: str | None  # None for non-principal members (only the empty set here)

    @property
    def principal(self) -> bool:
        return self.generator is not None


@dataclass(frozen=True)
class FilterSet:
    kind: str  # "filter" or "ideal"
    members: tuple[Member, ...]

    @property
    def sets(self) -> list[frozenset[str]]:
        return [m.elements for m in self.members]

    def __len__(self) -> int:
        return len(self.members)


def enumerate_filters(alg: OrderedAlgebra, allow_empty: bool = False) -> FilterSet:
    """All nonempty down-directed upsets.

    In a finite poset a directed set contains a lower bound of all its
    elements, so every filter is principal and one pass over the carrier
    finds them all.
    """
    members = [Member(alg.up(a), a) for a in alg.carrier]
    members.sort(key=lambda m: alg.sort_key(m.elements))
    if allow_empty:
        members.insert(0, Member(frozenset(), None))
    return FilterSet("filter", tuple(members))


def enumerate_ideals(alg: OrderedAlgebra, allow_empty: bool = False) -> FilterSet:
    members = [Member(alg.down(a), a) for a in alg.carrier]
    members.sort(key=lambda m: alg.sort_key(m.elements))
    if allow_empty:
        members.insert(0, Member(frozenset(), None))
    return FilterSet("ideal", tuple(members))


def is_filter(alg: OrderedAlgebra, s: Iterable[str]) -> bool:
    s = frozenset(s)
    if not s or alg.upclose(s) != s:
        return False
    return all(any(alg.le(c, a) and alg.le(c, b) for c in s) for a in s for b in s)


def is_ideal(alg: OrderedAlgebra, s: Iterable[str]) -> bool:
    s = frozenset(s)
    if not s or alg.downclose(s) != s:
        return False
    return all(any(alg.le(a, c) and alg.le(b, c) for c in s) for a in s for b in s)


def _need_filter(alg, x):
    if not is_filter(alg, x):
        raise NotAFilter(f"{sorted(x)} is not a filter")


def _need_ideal(alg, v):
    if not is_ideal(alg, v):
        raise NotAnIdeal(f"{sorted(v)} is not an ideal")


def point_arrow(alg: OrderedAlgebra, x: frozenset[str], v: frozenset[str]) -> frozenset[str]:
    """x |> v: the down-closure of {a->b : a in x, b in v}."""
    _need_filter(alg, x)
    _need_ideal(alg, v)
    return alg.downclose({alg.imp[a, b] for a in x for b in v})


def point_larrow(alg: OrderedAlgebra, v: frozenset[str], x: frozenset[str]) -> frozenset[str]:
    """v <| x: the down-closure of {b<-a : a in x, b in v}."""
    if alg.limp is None:
        raise AlgebraError("algebra has no left implication")
    _need_filter(alg, x)
    _need_ideal(alg, v)
    return alg.downclose({alg.limp[b, a] for a in x for b in v})


def point_product(alg: OrderedAlgebra, x: frozenset[str], z: frozenset[str]) -> frozenset[str]:
    """x * z: the up-closure of {a*b : a in x, b in z}."""
    if alg.prod is None:
        raise AlgebraError("algebra has no product")
    _need_filter(alg, x)
    _need_filter(alg, z)
    return alg.upclose({alg.prod[a, b] for a in x for b in z})


# ---------------------------------------------------------------------------
# text format

_KEYS = ("elements", "order", "kind", "unit", "imp", "prod", "limp")
_ENTRY = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*=\s*([^\s()]+)")
_ORDER = re.compile(r"^([^<=\s]+)<=([^<=\s]+)$")


def parse_algebra_text(text: str) -> dict:
    """Parse the line-oriented algebra format into a raw description."""
    raw: dict = {"order": []}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", line=lineno)
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key == "elements":
            raw["elements"] = raw.get("elements", []) + value.split()
        elif key == "order":
            for tok in value.split():
                m = _ORDER.match(tok)
                if not m:
                    raise ParseError(f"bad order pair {tok!r}", line=lineno)
                raw["order"].append((m.group(1), m.group(2)))
        elif key in ("kind", "unit"):
            if len(value.split()) != 1:
                raise ParseError(f"{key} takes one value", line=lineno)
            raw[key] = value
        else:
            table = raw.setdefault(key, {})
            pos = 0
            rest = value
            for m in _ENTRY.finditer(value):
                if value[pos:m.start()].strip():
                    raise ParseError(f"junk in {key} table: {value[pos:m.start()]!r}",
                                     position=pos, line=lineno)
                pair = (m.group(1), m.group(2))
                if pair in table and table[pair] != m.group(3):
                    raise ParseError(f"{key} entry {pair} given twice", line=lineno)
                table[pair] = m.group(3)
                pos = m.end()
            rest = value[pos:]
            if rest.strip():
                raise ParseError(f"junk in {key} table: {rest!r}", position=pos, line=lineno)
    if "elements" not in raw:
        raise ParseError("missing 'elements:' line")
    return raw


def parse_algebra(text: str) -> OrderedAlgebra:
    return validate_algebra(parse_algebra_text(text))


def format_algebra(alg: OrderedAlgebra) -> str:
    covers = [(a, b) for a, b in sorted(alg.leq, key=lambda p: (alg.index(p[0]), alg.index(p[1])))
              if a != b and not any(c not in (a, b) and alg.le(a, c) and alg.le(c, b)
                                    for c in alg.carrier)]
    lines = [f"elements: {' '.join(alg.carrier)}",
             f"order: {' '.join(f'{a}<={b}' for a, b in covers)}".rstrip(),
             f"kind: {alg.kind}"]
    if alg.unit is not None:
        lines.append(f"unit: {alg.unit}")
    for name in ("imp", "prod", "limp"):
        table = getattr(alg, name)
        if table is not None:
            cells = " ".join(f"({a},{b})={table[a, b]}"
                             for a, b in itertools.product(alg.carrier, repeat=2))
            lines.append(f"{name}: {cells}")
    return "\n".join(lines) + "\n"
