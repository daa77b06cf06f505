"""Inequality systems: a main inequality between sorted terms plus
stability guards (``P'' ≤ P``) and change-of-variable constraints
(``Q = P'``).  A frame validates a system when the main inequality holds
under every valuation satisfying the constraints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from ..frames import SORT1, SORTD, SortedFrame, other, sort_label
from ..semantics import SortedModel, eval_sorted
from ..syntax import modal as md
from ..syntax import objects as ob

MODES = ("translate", "cotranslate", "auto")


@dataclass(frozen=True)
class Stb:
    """Stability guard P'' ≤ P: P ranges over stable sets of its sort."""
    name: str
    sort: str

    def __str__(self) -> str:
        return f"{self.name}'' ≤{sort_label(self.sort)} {self.name}"


@dataclass(frozen=True)
class Cvc:
    """Change of variables Q = P': ``name`` is Q (sort ``sort``), ``source`` is P."""
    name: str
    sort: str
    source: str

    @property
    def source_sort(self) -> str:
        return other(self.sort)

    def __str__(self) -> str:
        return f"{self.name} ={sort_label(self.sort)} {self.source}'"


@dataclass(frozen=True)
class System:
    lhs: md.Modal
    rhs: md.Modal
    stb: tuple[Stb, ...] = ()
    cvc: tuple[Cvc, ...] = ()
    sort: str = field(default=SORT1)

    def __post_init__(self):
        if self.lhs.sort != self.sort or self.rhs.sort != self.sort:
            raise md.SortError("main inequality sides must have the system's sort")

    # -- variables ---------------------------------------------------------------
    def main_vars(self) -> dict[str, str]:
        out = md.pvars(self.lhs)
        for k, s in md.pvars(self.rhs).items():
            if out.setdefault(k, s) != s:
                raise md.SortError(f"variable {k} used at both sorts")
        return out

    def guarded(self) -> dict[str, str]:
        """Constrained variables (both kinds) with their sorts."""
        out = {g.name: g.sort for g in self.stb}
        out.update({c.name: c.sort for c in self.cvc})
        return out

    def all_names(self) -> set[str]:
        return set(self.main_vars()) | set(self.guarded()) | {c.source for c in self.cvc}

    def __str__(self) -> str:
        guards = [str(g) for g in self.stb] + [str(c) for c in self.cvc]
        main = f"{md.format_top(self.lhs)} ≤{sort_label(self.sort)} {md.format_top(self.rhs)}"
        return f"⟨{', '.join(guards)} | {main}⟩" if guards else f"⟨{main}⟩"

    def key(self) -> tuple:
        """Order-insensitive identity used by the search's visited set."""
        return (self.lhs, self.rhs, frozenset(self.stb), frozenset(self.cvc), self.sort)


def to_system(seq: ob.Sequent, mode: str = "translate", translation: str = "diamond") -> System:
    """The main inequality for a sequent: φ• ≤1 ψ• or ψ∘ ≤∂ φ∘.

    ``auto`` is resolved by the search (see :func:`reduce_sequent`); here it
    means the translation.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    lb, lc = md.translate(seq.lhs, translation)
    rb, rc = md.translate(seq.rhs, translation)
    if mode == "cotranslate":
        return System(rc, lc, sort=SORTD)
    return System(lb, rb, sort=SORT1)


# -- semantics ---------------------------------------------------------------------

def _ranges(frame: SortedFrame, sys: System) -> tuple[list[str], list[tuple[int, ...]]]:
    """Free variables (everything except cvc targets) and their value ranges."""
    guarded = {g.name for g in sys.stb}
    cvc_names = {c.name for c in sys.cvc}
    sorts = dict(sys.main_vars())
    sorts.update({g.name: g.sort for g in sys.stb})
    sorts.update({c.source: c.source_sort for c in sys.cvc})
    free = sorted(n for n in sorts if n not in cvc_names)
    ranges = []
    for n in free:
        s = sorts[n]
        if n in guarded:
            ranges.append(frame.stable_sets(s))
        else:
            ranges.append(tuple(range(1 << frame.size(s))))
    return free, ranges


def valuations(frame: SortedFrame, sys: System) -> Iterator[dict[str, int]]:
    """Every valuation of the system's variables satisfying its constraints,
    restricted to the variables of the main inequality (duplicates dropped)."""
    free, ranges = _ranges(frame, sys)
    main = set(sys.main_vars())
    seen = set()
    for values in itertools.product(*ranges):
        val = dict(zip(free, values))
        for c in sys.cvc:
            val[c.name] = frame.prime(c.source_sort, val[c.source])
        restricted = tuple(sorted((k, v) for k, v in val.items() if k in main))
        if restricted in seen:
            continue
        seen.add(restricted)
        yield dict(restricted)


def holds_under(frame: SortedFrame, sys: System, valuation: dict[str, int]) -> bool:
    model = SortedModel(frame, valuation)
    return not eval_sorted(model, sys.lhs) & ~eval_sorted(model, sys.rhs)


def system_valid(frame: SortedFrame, sys: System) -> tuple[bool, dict[str, int] | None]:
    """Whether ``frame`` validates ``sys``; on failure a counter-valuation."""
    for val in valuations(frame, sys):
        if not holds_under(frame, sys, val):
            return False, val
    return True, None
