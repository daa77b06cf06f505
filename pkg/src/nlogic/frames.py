"""Two-sorted frames: polarity, Galois closure, stable sets, image operators.

Points of each sort are numbered ``0..n-1`` and carry display names.  A
subset of a sort is an ``int`` bitmask over those numbers; this keeps the
brute-force checks (which quantify over every stable set and section) fast
enough for exhaustive runs.  Sorts are the strings ``"1"`` and ``"d"``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CarrierTooLarge, FrameError, MissingRelation, ParseError

SORT1 = "1"
SORTD = "d"
SORTS = (SORT1, SORTD)

# name -> (output sort, argument sorts)
SIGNATURES: dict[str, tuple[str, tuple[str, ...]]] = {
    "T": (SORTD, (SORT1, SORTD)),
    "R": (SORT1, (SORT1, SORT1)),
    "S": (SORTD, (SORTD, SORT1)),
}

STABLE_BOUND = 14


def other(sort: str) -> str:
    return SORTD if sort == SORT1 else SORT1


def sort_label(sort: str) -> str:
    return "1" if sort == SORT1 else "∂"


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def to_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def mask_key(mask: int) -> tuple[int, ...]:
    """Sort key giving the lexicographic order on sorted member lists."""
    return tuple(bits(mask))


@dataclass(frozen=True)
class Relation:
    name: str
    out: str
    args: tuple[str, ...]
    tuples: frozenset[tuple[int, ...]]  # (output point, arg1, ..., argn)


@dataclass(frozen=True)
class GaloisSet:
    sort: str
    mask: int
    stable: bool

    def members(self) -> list[int]:
        return list(bits(self.mask))


@dataclass(frozen=True)
class SortedFrame:
    w1: tuple[str, ...]
    wd: tuple[str, ...]
    incidence: frozenset[tuple[int, int]]
    unit: int | None = None
    relations: tuple[Relation, ...] = ()
    class_tag: str | None = None

    def __post_init__(self):
        if not self.w1 or not self.wd:
            raise FrameError("both carriers must be nonempty")
        if len(set(self.w1)) != len(self.w1) or len(set(self.wd)) != len(self.wd):
            raise FrameError("point names must be distinct within a sort")
        for x, y in self.incidence:
            if not (0 <= x < len(self.w1) and 0 <= y < len(self.wd)):
                raise FrameError(f"incidence pair ({x},{y}) out of range")
        if self.unit is not None and self.unit >> len(self.w1):
            raise FrameError("U mentions points outside W1")
        seen = set()
        for rel in self.relations:
            if rel.name in seen:
                raise FrameError(f"relation {rel.name} given twice")
            seen.add(rel.name)
            sorts = (rel.out,) + rel.args
            for t in rel.tuples:
                if len(t) != len(sorts):
                    raise FrameError(f"{rel.name} tuple {t} has wrong arity")
                for s, i in zip(sorts, t):
                    if not 0 <= i < self.size(s):
                        raise FrameError(f"{rel.name} tuple {t} is ill-sorted")

    # -- basics --------------------------------------------------------------
    def size(self, sort: str) -> int:
        return len(self.w1) if sort == SORT1 else len(self.wd)

    def names(self, sort: str) -> tuple[str, ...]:
        return self.w1 if sort == SORT1 else self.wd

    def full(self, sort: str) -> int:
        return (1 << self.size(sort)) - 1

    def name_set(self, sort: str, mask: int) -> list[str]:
        names = self.names(sort)
        return [names[i] for i in bits(mask)]

    def has(self, name: str) -> bool:
        return any(r.name == name for r in self.relations)

    def rel(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise MissingRelation(f"frame has no relation {name}")

    def require_unit(self) -> int:
        if self.unit is None:
            raise MissingRelation("frame has no U")
        return self.unit

    # -- polarity --------------------------------------------------------------
    @cached_property
    def _rows(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        rows = [0] * len(self.w1)
        cols = [0] * len(self.wd)
        for x, y in self.incidence:
            rows[x] |= 1 << y
            cols[y] |= 1 << x
        return tuple(rows), tuple(cols)

    def incident(self, x: int, y: int) -> bool:
        return bool(self._rows[0][x] >> y & 1)

    def prime(self, sort: str, mask: int) -> int:
        """Galois map: points of the other sort unrelated by I to every member."""
        rows, cols = self._rows
        lookup = cols if sort == SORT1 else rows
        out = 0
        for j, line in enumerate(lookup):
            if not line & mask:
                out |= 1 << j
        return out

    def close(self, sort: str, mask: int) -> int:
        return self.prime(other(sort), self.prime(sort, mask))

    def is_stable(self, sort: str, mask: int) -> bool:
        return self.close(sort, mask) == mask

    @cached_property
    def _perp(self) -> dict[str, tuple[int, ...]]:
        return {s: tuple(self.prime(s, 1 << i) for i in range(self.size(s))) for s in SORTS}

    def perp(self, sort: str, i: int) -> int:
        """{i}' as a mask over the other sort."""
        return self._perp[sort][i]

    @cached_property
    def _gamma(self) -> dict[str, tuple[int, ...]]:
        return {s: tuple(self.prime(other(s), self._perp[s][i]) for i in range(self.size(s)))
                for s in SORTS}

    def gamma(self, sort: str, i: int) -> int:
        """Closed element {i}'' (the principal upset of i)."""
        return self._gamma[sort][i]

    def le(self, sort: str, i: int, j: int) -> bool:
        """Specialisation order: i <= j iff {i}' is contained in {j}'."""
        return not self._perp[sort][i] & ~self._perp[sort][j]

    @cached_property
    def _down(self) -> dict[str, tuple[int, ...]]:
        return {s: tuple(to_mask(j for j in range(self.size(s)) if self.le(s, j, i))
                         for i in range(self.size(s))) for s in SORTS}

    def below(self, sort: str, i: int) -> int:
        return self._down[sort][i]

    def stable_sets(self, sort: str) -> tuple[int, ...]:
        return self._stable[sort]

    @cached_property
    def _stable(self) -> dict[str, tuple[int, ...]]:
        out = {}
        for s in SORTS:
            # every stable set is an image of the opposite Galois map, so scan
            # whichever carrier is smaller
            o = other(s)
            if self.size(o) <= self.size(s):
                found = {self.prime(o, m) for m in range(1 << self.size(o))}
            else:
                found = {self.close(s, m) for m in range(1 << self.size(s))}
            out[s] = tuple(sorted(found, key=mask_key))
        return out

    # -- relations ---------------------------------------------------------------
    @cached_property
    def _sections(self) -> dict[str, dict[tuple[int, ...], int]]:
        out = {}
        for rel in self.relations:
            table = {args: 0 for args in itertools.product(*(range(self.size(s)) for s in rel.args))}
            for t in rel.tuples:
                table[t[1:]] |= 1 << t[0]
            out[rel.name] = table
        return out

    def section(self, name: str, args: tuple[int, ...]) -> int:
        if name not in self._sections:
            raise MissingRelation(f"frame has no relation {name}")
        return self._sections[name][args]

    def sections(self, name: str) -> Mapping[tuple[int, ...], int]:
        if name not in self._sections:
            raise MissingRelation(f"frame has no relation {name}")
        return self._sections[name]

    @cached_property
    def _dual_sections(self) -> dict[str, dict[tuple[int, ...], int]]:
        return {rel.name: {a: self.prime(rel.out, m) for a, m in self._sections[rel.name].items()}
                for rel in self.relations}

    def dual_section(self, name: str, args: tuple[int, ...]) -> int:
        """R'(args) = (R args)', a subset of the sort opposite to R's output."""
        if name not in self._dual_sections:
            raise MissingRelation(f"frame has no relation {name}")
        return self._dual_sections[name][args]

    def image(self, name: str, masks: Sequence[int]) -> int:
        """Sorted image operator: union of sections over all argument tuples."""
        table = self.sections(name)
        out = 0
        for args in itertools.product(*(tuple(bits(m)) for m in masks)):
            out |= table[args]
        return out

    # -- convenience ---------------------------------------------------------------
    def subset(self, sort: str, mask: int) -> GaloisSet:
        return GaloisSet(sort, mask, self.is_stable(sort, mask))

    def point(self, sort: str, name: str) -> int:
        try:
            return self.names(sort).index(name)
        except ValueError:
            raise FrameError(f"no point {name!r} in sort {sort_label(sort)}") from None


def make_relation(name: str, tuples: Iterable[tuple[int, ...]],
                  signature: tuple[str, tuple[str, ...]] | None = None) -> Relation:
    out, args = signature or SIGNATURES[name]
    return Relation(name, out, tuple(args), frozenset(tuple(t) for t in tuples))


def build_frame(w1: Sequence[str], wd: Sequence[str], incidence: Iterable[tuple[int, int]],
                unit: Iterable[int] | int | None = None,
                relations: Mapping[str, Iterable[tuple[int, ...]]] | None = None,
                class_tag: str | None = None) -> SortedFrame:
    """Friendly constructor taking index tuples for every relation."""
    if unit is not None and not isinstance(unit, int):
        unit = to_mask(unit)
    rels = tuple(make_relation(n, ts) for n, ts in sorted((relations or {}).items()))
    return SortedFrame(tuple(w1), tuple(wd), frozenset(map(tuple, incidence)), unit, rels,
                       class_tag)


def classical_frame(points: Sequence[str], unit: Iterable[int] | None = None,
                    relations: Mapping[str, Iterable[tuple[int, ...]]] | None = None) -> SortedFrame:
    """W1 = W_d with I the identity, so the Galois map is complementation."""
    n = len(points)
    return build_frame(points, points, [(i, i) for i in range(n)], unit, relations)


def replace(frame: SortedFrame, **changes) -> SortedFrame:
    fields = dict(w1=frame.w1, wd=frame.wd, incidence=frame.incidence, unit=frame.unit,
                  relations=frame.relations, class_tag=frame.class_tag)
    fields.update(changes)
    return SortedFrame(**fields)


# ---------------------------------------------------------------------------
# module-level operations on GaloisSet values

def galois_map(frame: SortedFrame, x: GaloisSet) -> GaloisSet:
    return frame.subset(other(x.sort), frame.prime(x.sort, x.mask))


def closure(frame: SortedFrame, x: GaloisSet) -> GaloisSet:
    return GaloisSet(x.sort, frame.close(x.sort, x.mask), True)


def specialization_order(frame: SortedFrame, sort: str) -> list[list[bool]]:
    n = frame.size(sort)
    return [[frame.le(sort, i, j) for j in range(n)] for i in range(n)]


def separated(frame: SortedFrame) -> bool:
    return all(not (frame.le(s, i, j) and frame.le(s, j, i))
               for s in SORTS for i, j in itertools.combinations(range(frame.size(s)), 2))


def enumerate_stable_sets(frame: SortedFrame, sort: str, bound: int = STABLE_BOUND) -> list[GaloisSet]:
    if min(frame.size(sort), frame.size(other(sort))) > bound:
        raise CarrierTooLarge(f"stable-set enumeration limited to carriers of {bound} points")
    return [GaloisSet(sort, m, True) for m in frame.stable_sets(sort)]


def galois_dual_relation(frame: SortedFrame, name: str) -> dict[tuple[int, ...], int]:
    rel = frame.rel(name)
    return {args: frame.dual_section(name, args) for args in frame.sections(rel.name)}


def image_operator(frame: SortedFrame, name: str, args: Sequence[int]) -> int:
    return frame.image(name, args)


def closed_operator(frame: SortedFrame, name: str, args: Sequence[int]) -> GaloisSet:
    rel = frame.rel(name)
    return GaloisSet(rel.out, frame.close(rel.out, frame.image(name, args)), True)


def single_sorted(frame: SortedFrame, name: str, args: Sequence[int]) -> GaloisSet:
    """Single-sorted operator on stable sets of sort 1.

    Arguments whose place has sort d are first sent through the Galois map;
    an output of sort d is sent back.  For T this is the implication
    A => C = (A |> C')', for R the closed product and for S the left
    implication C <= A = (C' <| A)'.
    """
    rel = frame.rel(name)
    moved = [m if s == SORT1 else frame.prime(SORT1, m) for m, s in zip(args, rel.args)]
    img = frame.image(name, moved)
    if rel.out == SORT1:
        return GaloisSet(SORT1, frame.close(SORT1, img), True)
    return GaloisSet(SORT1, frame.prime(SORTD, img), True)


def implication(frame: SortedFrame, a: int, c: int) -> int:
    return single_sorted(frame, "T", (a, c)).mask


def product(frame: SortedFrame, a: int, f: int) -> int:
    return single_sorted(frame, "R", (a, f)).mask


def left_implication(frame: SortedFrame, c: int, a: int) -> int:
    return single_sorted(frame, "S", (c, a)).mask


# ---------------------------------------------------------------------------
# text format

_TUPLE = re.compile(r"\(\s*([^|,()\s]+)\s*\|\s*([^|,()\s]+)\s*,\s*([^|,()\s]+)\s*\)")
_PAIR = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")
_FRAME_KEYS = {"sort1", "sortD", "sort∂", "I", "U", "T", "R", "S", "class"}


def _scan(pattern: re.Pattern, value: str, lineno: int) -> list[tuple[str, ...]]:
    out, pos = [], 0
    for m in pattern.finditer(value):
        if value[pos:m.start()].strip():
            raise ParseError(f"unexpected text {value[pos:m.start()]!r}", position=pos, line=lineno)
        out.append(m.groups())
        pos = m.end()
    if value[pos:].strip():
        raise ParseError(f"unexpected text {value[pos:]!r}", position=pos, line=lineno)
    return out


def parse_frame(text: str) -> SortedFrame:
    """Parse the frame text format (see README for the grammar)."""
    fields: dict[str, list[tuple[int, str]]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in _FRAME_KEYS:
            raise ParseError(f"unknown or malformed line {line!r}", line=lineno)
        if key == "sort∂":
            key = "sortD"
        fields.setdefault(key, []).append((lineno, value.strip()))
    if "sort1" not in fields or "sortD" not in fields:
        raise ParseError("frame needs 'sort1:' and 'sortD:' lines")
    w1 = [n for _, v in fields["sort1"] for n in v.split()]
    wd = [n for _, v in fields["sortD"] for n in v.split()]

    def idx(sort: str, name: str, lineno: int) -> int:
        names = w1 if sort == SORT1 else wd
        if name not in names:
            raise ParseError(f"unknown point {name!r} for sort {sort_label(sort)}", line=lineno)
        return names.index(name)

    incidence = []
    for lineno, v in fields.get("I", []):
        for a, b in _scan(_PAIR, v, lineno):
            incidence.append((idx(SORT1, a, lineno), idx(SORTD, b, lineno)))
    unit = None
    for lineno, v in fields.get("U", []):
        unit = unit or 0
        if v.strip() == "all":
            unit = (1 << len(w1)) - 1
        else:
            unit |= to_mask(idx(SORT1, n, lineno) for n in v.split())
    relations = {}
    for name in ("T", "R", "S"):
        if name not in fields:
            continue
        out, args = SIGNATURES[name]
        sorts = (out,) + args
        tuples = []
        for lineno, v in fields[name]:
            for triple in _scan(_TUPLE, v, lineno):
                tuples.append(tuple(idx(s, n, lineno) for s, n in zip(sorts, triple)))
        relations[name] = tuples
    tag = fields["class"][-1][1] if "class" in fields else None
    try:
        return build_frame(w1, wd, incidence, unit, relations, tag)
    except FrameError as exc:
        raise ParseError(str(exc)) from exc


def format_frame(frame: SortedFrame) -> str:
    lines = [f"sort1: {' '.join(frame.w1)}", f"sortD: {' '.join(frame.wd)}"]
    pairs = sorted(frame.incidence)
    lines.append("I: " + " ".join(f"({frame.w1[x]},{frame.wd[y]})" for x, y in pairs))
    if frame.unit is not None:
        lines.append("U: " + " ".join(frame.name_set(SORT1, frame.unit)))
    for rel in frame.relations:
        sorts = (rel.out,) + rel.args
        cells = []
        for t in sorted(rel.tuples, key=lambda t: (t[1:], t[0])):
            n = [frame.names(s)[i] for s, i in zip(sorts, t)]
            cells.append(f"({n[0]}|{','.join(n[1:])})")
        lines.append(f"{rel.name}: " + " ".join(cells))
    if frame.class_tag:
        lines.append(f"class: {frame.class_tag}")
    return "\n".join(line.rstrip() for line in lines) + "\n"
