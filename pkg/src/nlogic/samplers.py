"""Seeded frame families used by the cross-checks.

* random classical frames (I the identity) with R, T, S tied together by
  residuation and a unit set U, filtered through the class checker;
* canonical frames of every residuated unital groupoid on a bounded-above
  poset with at most three elements;
* copies of those frames with one point duplicated;
* exhaustive enumeration of small frames up to point renaming.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .axioms import satisfies
from .duality import canonical_frame
from .errors import AlgebraError
from .frames import (SIGNATURES, SORT1, SORTD, SortedFrame, bits, build_frame, make_relation,
                     other)
from .order import OrderedAlgebra, validate_algebra
from .syntax import objects as ob

DEFAULT_SEED = 20240611


# -- residuation-linked relations ---------------------------------------------------------

def relations_from_r(n1: int, nd: int, incidence: Iterable[tuple[int, int]],
                     r: Iterable[tuple[int, int, int]]) -> dict[str, list[tuple[int, ...]]]:
    """T and S determined by R through the dual sections:
    z ∈ (Txv)' iff v ∈ (Rxz)' iff x ∈ (Svz)'."""
    inc = set(map(tuple, incidence))
    sections: dict[tuple[int, int], int] = {}
    for u, x, z in r:
        sections[x, z] = sections.get((x, z), 0) | 1 << u

    def dual_r(x: int, z: int) -> int:  # (Rxz)' over W_d
        sec = sections.get((x, z), 0)
        return sum(1 << v for v in range(nd) if not any((u, v) in inc for u in bits(sec)))

    def prime_1(mask: int) -> int:  # subset of W1 -> subset of W_d
        return sum(1 << v for v in range(nd) if not any((x, v) in inc for x in bits(mask)))

    dual = {(x, z): dual_r(x, z) for x in range(n1) for z in range(n1)}
    t, s = [], []
    for x in range(n1):
        for v in range(nd):
            t_dual = sum(1 << z for z in range(n1) if dual[x, z] >> v & 1)
            t += [(y, x, v) for y in bits(prime_1(t_dual))]
            s_dual = sum(1 << z for z in range(n1) if dual[z, x] >> v & 1)
            s += [(y, v, x) for y in bits(prime_1(s_dual))]
    return {"R": sorted(r), "T": t, "S": s}


# -- random classical frames ----------------------------------------------------------------

def random_classical_lk(rng: random.Random, n: int, density: float = 0.4) -> SortedFrame:
    """A classical frame on n points whose unit set acts as a two-sided
    identity for R; T and S follow from R by residuation."""
    points = list(range(n))
    unit = {p for p in points if rng.random() < 0.5} or {rng.choice(points)}
    r = set()
    for x in points:
        if x in unit:
            r.add((x, x, x))
        else:
            u = rng.choice(sorted(unit))
            r.add((x, u, x))
            r.add((x, x, rng.choice(sorted(unit))))
    for x, a, b in itertools.product(points, repeat=3):
        if a in unit or b in unit:
            continue
        if rng.random() < density:
            r.add((x, a, b))
    names1 = [f"x{i}" for i in points]
    namesd = [f"y{i}" for i in points]
    inc = [(i, i) for i in points]
    rels = relations_from_r(n, n, inc, r)
    return build_frame(names1, namesd, inc, unit, rels, class_tag="LK_*")


def random_lk_frames(count: int, seed: int = DEFAULT_SEED, max_points: int = 3,
                     frame_class: str = "LK_*") -> list[SortedFrame]:
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("sampler cannot find enough frames of the class")
        fr = random_classical_lk(rng, rng.randint(1, max_points))
        if satisfies(fr, frame_class):
            out.append(fr)
    return out


# -- random frames with stable sections --------------------------------------------------

def random_stable_frame(rng: random.Random, max_points: int = 4, density: float = 0.5,
                        relations: Sequence[str] = ("T", "R", "S")) -> SortedFrame:
    """Random polarity with every relation section a Galois set (axiom F1)
    and a stable unit set."""
    n1, nd = rng.randint(1, max_points), rng.randint(1, max_points)
    inc = [(x, y) for x in range(n1) for y in range(nd) if rng.random() < density]
    base = build_frame([f"x{i}" for i in range(n1)], [f"y{j}" for j in range(nd)], inc)
    rels = {}
    for name in relations:
        out, args = SIGNATURES[name]
        tuples = []
        for a in itertools.product(*(range(base.size(s)) for s in args)):
            sec = sum(1 << i for i in range(base.size(out)) if rng.random() < density / 2)
            tuples += [(p,) + a for p in bits(base.close(out, sec))]
        rels[name] = tuples
    unit = base.close(SORT1, sum(1 << i for i in range(n1) if rng.random() < density))
    return build_frame(base.w1, base.wd, inc, unit, rels)


def random_formula(rng: random.Random, depth: int, names: Sequence[str] = ("p", "q")) -> ob.Formula:
    """Random object formula of depth at most ``depth`` over every connective."""
    if depth == 0 or rng.random() < 0.25:
        leaf = rng.randrange(len(names) + 3)
        if leaf < len(names):
            return ob.Var(names[leaf])
        return (ob.Top(), ob.Bot(), ob.Unit())[leaf - len(names)]
    op = rng.choice((ob.And, ob.Or, ob.Imp, ob.LImp, ob.Prod))
    return op(random_formula(rng, depth - 1, names), random_formula(rng, depth - 1, names))


def random_sorted_valuation(rng: random.Random, frame: SortedFrame,
                            names: Sequence[str] = ("P", "Q")) -> dict[str, int]:
    """Arbitrary (not necessarily stable) subsets of W1."""
    return {n: rng.randrange(1 << frame.size(SORT1)) for n in names}


# -- canonical frames of small residuated groupoids -------------------------------------------

def _bounded_posets(n: int) -> list[tuple[tuple[str, ...], list[tuple[str, str]]]]:
    """Posets on n labelled points with a top, up to isomorphism (n <= 3)."""
    names = tuple("abc"[:n - 1]) + ("1",)
    if n == 1:
        return [(("1",), [])]
    if n == 2:
        return [(names, [("a", "1")])]
    return [(names, [("a", "b"), ("b", "1")]), (names, [("a", "1"), ("b", "1")])]


def _residual(carrier, le, prod, a, d, left: bool):
    """max{b : a*b <= d} (or max{b : b*a <= d} when ``left``) if it exists."""
    cands = [b for b in carrier if le(prod[(b, a) if left else (a, b)], d)]
    tops = [b for b in cands if all(le(c, b) for c in cands)]
    return tops[0] if tops else None


@lru_cache(maxsize=None)
def residuated_groupoids(max_size: int = 3) -> tuple[OrderedAlgebra, ...]:
    """Every unital residuated groupoid (non-associative) on a bounded-above
    poset with at most ``max_size`` elements, one per product table."""
    out = []
    for n in range(1, max_size + 1):
        for carrier, cover in _bounded_posets(n):
            order = set(cover) | {(a, a) for a in carrier}
            changed = True
            while changed:
                changed = False
                for (a, b), (c, d) in itertools.product(list(order), repeat=2):
                    if b == c and (a, d) not in order:
                        order.add((a, d))
                        changed = True

            def le(a, b):
                return (a, b) in order

            for e in carrier:
                free = [(a, b) for a in carrier for b in carrier if e not in (a, b)]
                for values in itertools.product(carrier, repeat=len(free)):
                    prod = {(a, e): a for a in carrier}
                    prod.update({(e, a): a for a in carrier})
                    prod.update(zip(free, values))
                    imp, limp = {}, {}
                    ok = True
                    for a, d in itertools.product(carrier, repeat=2):
                        r = _residual(carrier, le, prod, a, d, left=False)
                        lft = _residual(carrier, le, prod, a, d, left=True)
                        if r is None or lft is None:
                            ok = False
                            break
                        imp[a, d] = r
                        limp[d, a] = lft
                    if not ok:
                        continue
                    raw = {"elements": carrier, "order": sorted(cover), "unit": e,
                           "imp": imp, "prod": prod, "limp": limp}
                    try:
                        out.append(validate_algebra(raw))
                    except AlgebraError:
                        continue
    return tuple(out)


@lru_cache(maxsize=None)
def canonical_lambek_frames(max_size: int = 3) -> tuple[SortedFrame, ...]:
    return tuple(canonical_frame(a, "lambek").frame for a in residuated_groupoids(max_size))


def duplicate_point(frame: SortedFrame, sort: str, index: int) -> SortedFrame:
    """Add a copy of a point: same incidences and the same role in every relation."""
    n = frame.size(sort)
    names = list(frame.names(sort))
    base = names[index] + "'"
    while base in names:
        base += "'"
    names.append(base)

    def images(i: int, s: str) -> list[int]:
        return [i, n] if s == sort and i == index else [i]

    inc = set()
    for x, y in frame.incidence:
        for a in images(x, SORT1):
            for b in images(y, SORTD):
                inc.add((a, b))
    rels = {}
    for rel in frame.relations:
        sorts = (rel.out,) + rel.args
        tuples = set()
        for t in rel.tuples:
            for combo in itertools.product(*(images(i, s) for i, s in zip(t, sorts))):
                tuples.add(combo)
        rels[rel.name] = tuples
    unit = frame.unit
    if unit is not None and sort == SORT1 and unit >> index & 1:
        unit |= 1 << n
    w1 = names if sort == SORT1 else list(frame.w1)
    wd = names if sort == SORTD else list(frame.wd)
    return build_frame(w1, wd, inc, unit, rels, frame.class_tag)


def lk_family(count: int = 200, seed: int = DEFAULT_SEED, frame_class: str = "LK_*",
              max_points: int = 3) -> list[SortedFrame]:
    """At least ``count`` seeded frames of the class with at most
    ``max_points`` points per sort: canonical frames, their one-point
    duplicates, then random classical frames."""
    family = [f for f in canonical_lambek_frames() if max(f.size(SORT1), f.size(SORTD)) <= max_points
              and satisfies(f, frame_class)]
    for f in list(family):
        for s in (SORT1, SORTD):
            if f.size(s) < max_points:
                for i in range(f.size(s)):
                    g = duplicate_point(f, s, i)
                    if satisfies(g, frame_class):
                        family.append(g)
    need = max(0, count - len(family))
    family += random_lk_frames(need, seed, max_points, frame_class)
    return family


# -- exhaustive enumeration --------------------------------------------------------------------

def _canonical_under_renaming(n1: int, nd: int, inc: frozenset, unit: int | None,
                              rels: dict[str, frozenset]) -> bool:
    """True when this frame is the lexicographically least among its renamings."""
    def encode(p1: Sequence[int], pd: Sequence[int]):
        perm = {SORT1: p1, SORTD: pd}
        e_inc = tuple(sorted((p1[x], pd[y]) for x, y in inc))
        e_unit = None if unit is None else tuple(sorted(p1[i] for i in bits(unit)))
        e_rels = tuple(
            tuple(sorted(tuple(perm[s][i] for i, s in zip(t, (SIGNATURES[n][0],) + SIGNATURES[n][1]))
                         for t in rels[n]))
            for n in sorted(rels))
        return (e_inc, e_unit, e_rels)

    ident = encode(range(n1), range(nd))
    for p1 in itertools.permutations(range(n1)):
        for pd in itertools.permutations(range(nd)):
            if encode(p1, pd) < ident:
                return False
    return True


def enumerate_frames(relations: Iterable[str], with_unit: bool, max1: int = 2, maxd: int = 2,
                     derive_from_r: bool = False) -> Iterator[SortedFrame]:
    """Every frame with at most max1 + maxd points carrying the given
    relations (and U if asked), one per renaming class.  With
    ``derive_from_r`` only I, R, U are enumerated and T, S are computed by
    residuation."""
    relations = sorted(set(relations))
    for n1 in range(1, max1 + 1):
        for nd in range(1, maxd + 1):
            pairs = [(x, y) for x in range(n1) for y in range(nd)]
            slots = {}
            for name in (["R"] if derive_from_r else relations):
                out, args = SIGNATURES[name]
                slots[name] = list(itertools.product(*(range(n1 if s == SORT1 else nd)
                                                       for s in (out,) + args)))
            units = range(1 << n1) if with_unit else [None]
            for inc_mask in range(1 << len(pairs)):
                inc = frozenset(p for i, p in enumerate(pairs) if inc_mask >> i & 1)
                choice_lists = [range(1 << len(slots[n])) for n in slots]
                for unit in units:
                    for masks in itertools.product(*choice_lists):
                        rels = {n: frozenset(t for i, t in enumerate(slots[n]) if m >> i & 1)
                                for n, m in zip(slots, masks)}
                        if not _canonical_under_renaming(n1, nd, inc, unit, rels):
                            continue
                        if derive_from_r:
                            full = relations_from_r(n1, nd, inc, rels["R"])
                            rel_map = {n: full[n] for n in set(relations) | {"R"}}
                        else:
                            rel_map = {n: sorted(ts) for n, ts in rels.items()}
                        yield build_frame([f"x{i}" for i in range(n1)], [f"y{j}" for j in range(nd)],
                                          inc, unit, rel_map)


__all__ = ["DEFAULT_SEED", "relations_from_r", "random_classical_lk", "random_lk_frames",
           "random_stable_frame", "random_formula",
           "random_sorted_valuation", "residuated_groupoids", "canonical_lambek_frames", "duplicate_point", "lk_family",
           "enumerate_frames", "make_relation", "other"]
