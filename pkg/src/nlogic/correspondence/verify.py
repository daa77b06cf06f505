"""Semantic cross-checks for the correspondence engine.

* :func:`verify_correspondence` compares the computed correspondent with
  brute-force sequent validity frame by frame;
* :func:`check_rule_instances` re-checks logged rule applications by
  comparing the validity of the systems before and after each step on
  every small frame.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from ..axioms import CheckRecord, satisfies
from ..frames import SORT1, SortedFrame, bits
from ..samplers import enumerate_frames
from ..semantics import check_validity
from ..syntax import fo
from ..syntax import modal as md
from ..syntax.objects import Sequent
from .correspondent import correspondent_of
from .modelcheck import fo_model_check
from .rules import Step
from .system import System, valuations


@dataclass
class VerifyReport:
    title: str
    correspondent: str = ""
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def divergences(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


def _frame_label(i: int, frame: SortedFrame) -> str:
    return f"frame {i} ({frame.size(SORT1)}+{frame.size('d')})"


def verify_correspondence(frames: Sequence[SortedFrame], seq: Sequent, frame_class: str,
                          mode: str = "auto", translation: str = "auto",
                          correspondent: fo.FO | None = None, workers: int = 1) -> VerifyReport:
    """On each frame: the correspondent holds iff the sequent is valid.

    Frames are checked concurrently when ``workers`` > 1; records keep the
    order of ``frames``.
    """
    if correspondent is None:
        correspondent, _ = correspondent_of(seq, frame_class, mode, translation)
    report = VerifyReport(f"{seq} on {len(frames)} {frame_class} frames",
                          fo.normal_string(correspondent))

    def one(item: tuple[int, SortedFrame]) -> CheckRecord:
        i, fr = item
        fo_side = fo_model_check(fr, correspondent)
        valid = check_validity(fr, seq)
        ok = fo_side.holds == valid.valid
        detail = "" if ok else f"correspondent {fo_side.holds}, sequent {valid.valid}"
        witness = None
        if not ok:
            witness = fo_side.witness if not fo_side.holds else {
                k: " ".join(v) for k, v in (valid.counter_valuation or {}).items()}
        return CheckRecord(_frame_label(i, fr), ok, witness, detail)

    items = list(enumerate(frames))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            report.records = list(pool.map(one, items))
    else:
        report.records = [one(it) for it in items]
    return report


# -- compiled evaluation of sorted terms ----------------------------------------------

class _Tables:
    """Per-frame memo of the operations a term needs."""

    def __init__(self, frame: SortedFrame):
        self.frame = frame
        self.memo: dict[tuple, int] = {}

    def prime(self, sort: str, m: int) -> int:
        key = ("'", sort, m)
        if key not in self.memo:
            self.memo[key] = self.frame.prime(sort, m)
        return self.memo[key]

    def image(self, rel: str, a: int, b: int) -> int:
        key = (rel, a, b)
        if key not in self.memo:
            self.memo[key] = self.frame.image(rel, (a, b))
        return self.memo[key]

    def residual(self, right: bool, a: int, c: int) -> int:
        """Right spoon {x : R(a, x) ⊆ c} or left spoon {x : R(x, a) ⊆ c}."""
        key = ("r" if right else "l", a, c)
        if key not in self.memo:
            fr = self.frame
            out = 0
            for x in range(fr.size(SORT1)):
                args = ((u, x) if right else (x, u) for u in bits(a))
                if all(not fr.section("R", t) & ~c for t in args):
                    out |= 1 << x
            self.memo[key] = out
        return self.memo[key]


Compiled = Callable[[dict, _Tables], int]


def compile_term(m: md.Modal) -> Compiled:
    if isinstance(m, md.PVar):
        name = m.name
        return lambda env, tb: env[name]
    if isinstance(m, md.MTop):
        s = m.sort
        return lambda env, tb: tb.frame.full(s)
    if isinstance(m, md.MBot):
        return lambda env, tb: 0
    if isinstance(m, md.UConst):
        return lambda env, tb: tb.frame.require_unit()
    if isinstance(m, md.Prime):
        s, f = m.arg.sort, compile_term(m.arg)
        return lambda env, tb: tb.prime(s, f(env, tb))
    f, g = compile_term(m.left), compile_term(m.right)
    if isinstance(m, md.Meet):
        return lambda env, tb: f(env, tb) & g(env, tb)
    if isinstance(m, md.Join):
        return lambda env, tb: f(env, tb) | g(env, tb)
    rel = {md.Odot: "R", md.Tright: "T", md.Tleft: "S"}.get(type(m))
    if rel is not None:
        return lambda env, tb: tb.image(rel, f(env, tb), g(env, tb))
    if isinstance(m, md.RSpoon):
        return lambda env, tb: tb.residual(True, f(env, tb), g(env, tb))
    if isinstance(m, md.LSpoon):
        # LSpoon(consequent, antecedent)
        return lambda env, tb: tb.residual(False, g(env, tb), f(env, tb))
    raise TypeError(f"not a sorted term: {m!r}")


def system_relations(sys: System) -> tuple[frozenset[str], bool]:
    """Relations the system's terms read, and whether it mentions the unit."""
    rels, unit = set(), False
    for side in (sys.lhs, sys.rhs):
        for _, t in md.positions(side):
            if isinstance(t, (md.Odot, md.RSpoon, md.LSpoon)):
                rels.add("R")
            elif isinstance(t, md.Tright):
                rels.add("T")
            elif isinstance(t, md.Tleft):
                rels.add("S")
            elif isinstance(t, md.UConst):
                unit = True
    return frozenset(rels), unit


class SystemChecker:
    """Memoised frame validity of systems, keyed by system and frame."""

    def __init__(self):
        self.compiled: dict[tuple, tuple[Compiled, Compiled]] = {}
        self.tables: dict[int, _Tables] = {}
        self.results: dict[tuple, bool] = {}

    def valid(self, frame: SortedFrame, sys: System) -> bool:
        key = (sys.key(), id(frame))
        if key in self.results:
            return self.results[key]
        if sys.key() not in self.compiled:
            self.compiled[sys.key()] = (compile_term(sys.lhs), compile_term(sys.rhs))
        lhs, rhs = self.compiled[sys.key()]
        tb = self.tables.get(id(frame))
        if tb is None or tb.frame is not frame:
            tb = self.tables[id(frame)] = _Tables(frame)
        ok = all(not lhs(v, tb) & ~rhs(v, tb) for v in valuations(frame, sys))
        self.results[key] = ok
        return ok


@lru_cache(maxsize=None)
def small_frames(relations: frozenset[str], unit: bool, max1: int = 2,
                 maxd: int = 2) -> tuple[SortedFrame, ...]:
    """All frames up to renaming carrying exactly these relations."""
    return tuple(enumerate_frames(relations, unit, max1, maxd))


@lru_cache(maxsize=None)
def small_class_frames(frame_class: str, max1: int = 2, maxd: int = 2) -> tuple[SortedFrame, ...]:
    """Frames of a Lambek class: I, R, U enumerated, T and S derived."""
    return tuple(f for f in enumerate_frames(("R", "S", "T"), True, max1, maxd, derive_from_r=True)
                 if satisfies(f, frame_class))


@dataclass
class SoundnessReport:
    records: list[CheckRecord] = field(default_factory=list)
    frames_checked: int = 0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def divergences(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


def check_rule_instances(steps: Iterable[Step], frame_class: str | None = None,
                         max1: int = 2, maxd: int = 2,
                         checker: SystemChecker | None = None) -> SoundnessReport:
    """Each step's systems must agree on every frame with at most max1 +
    maxd points.  Steps whose side condition relied on the frame class are
    checked on that class's frames; the rest on all frames."""
    checker = checker or SystemChecker()
    report = SoundnessReport()
    seen = set()
    for st in steps:
        key = (st.before.key(), st.after.key(), st.class_dependent)
        if key in seen:
            continue
        seen.add(key)
        if st.class_dependent:
            family = small_class_frames(frame_class or "LK_*", max1, maxd)
        else:
            r1, u1 = system_relations(st.before)
            r2, u2 = system_relations(st.after)
            family = small_frames(r1 | r2, u1 or u2, max1, maxd)
        bad = None
        for i, fr in enumerate(family):
            if checker.valid(fr, st.before) != checker.valid(fr, st.after):
                bad = (i, fr)
                break
        report.frames_checked += len(family)
        label = f"{st.rule}: {st.before} ⇒ {st.after}"
        witness = None if bad is None else {"frame": str(bad[0])}
        report.records.append(CheckRecord(label, bad is None, witness,
                                          "" if bad is None else "validity differs"))
    return report


__all__ = ["VerifyReport", "verify_correspondence", "compile_term", "system_relations",
           "SystemChecker", "small_frames", "small_class_frames", "SoundnessReport",
           "check_rule_instances"]
