"""Reduction rules on inequality systems and the backtracking search that
drives a system to canonical form.

Rule ids: R1 (drop a guard of an absent variable), R2/R3 (strip a double
prime from the left side against a stable right side), R4 (turn a
uniformly double-primed variable into a guarded one), R5.1-R5.6 (local
rewrites), R6 (change of variables for a uniformly single-primed
variable), R7 (residuation against a spoon on the right).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..axioms import CLASSES
from ..errors import NotSahlqvist, RuleNotApplicable
from ..frames import SORT1, other
from ..syntax import modal as md
from .system import MODES, Cvc, Stb, System, to_system

RULES = ("R1", "R2", "R3", "R4", "R5.1", "R5.2", "R5.3", "R5.4", "R5.5", "R5.6", "R6", "R7")
SAFE_REWRITES = ("R5.1", "R5.2")
DEFAULT_DEPTH = 64

# classes where spoons with stable consequents denote stable sets
SPOON_STABLE = frozenset({"LK", "LK*", "LK_*"})
# classes where a spoon between constrained variables equals its primed-diamond form
SPOON_UNFOLD = frozenset({"LK_*"})


def _in_lk(frame_class: str | None, allowed: frozenset[str]) -> bool:
    return frame_class in allowed


@dataclass(frozen=True)
class Step:
    """One logged rule instance."""
    rule: str
    position: object
    before: System
    after: System
    class_dependent: bool = False

    def describe(self) -> str:
        pos = "" if self.position is None else f" @ {_pos_text(self.position)}"
        tag = " [class]" if self.class_dependent else ""
        return f"{self.rule}{pos}{tag}: {self.after}"


def _pos_text(position) -> str:
    if isinstance(position, tuple) and position and position[0] in ("lhs", "rhs"):
        side, path = position
        return f"{side}{''.join('.' + str(i) for i in path)}"
    return str(position)


@dataclass
class Trace:
    steps: list[Step] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [s.describe() for s in self.steps]


# -- syntactic predicates ------------------------------------------------------------

def stable_term(m: md.Modal, sys: System, frame_class: str | None) -> tuple[bool, bool]:
    """(denotes a stable set for every admissible valuation, relied on the class)."""
    if isinstance(m, (md.Prime, md.MTop)):
        return True, False
    if isinstance(m, md.PVar):
        return m.name in sys.guarded(), False
    if isinstance(m, md.Meet):
        a, ca = stable_term(m.left, sys, frame_class)
        b, cb = stable_term(m.right, sys, frame_class)
        return a and b, ca or cb
    if isinstance(m, (md.RSpoon, md.LSpoon)) and _in_lk(frame_class, SPOON_STABLE):
        consequent = m.right if isinstance(m, md.RSpoon) else m.left
        ok, _ = stable_term(consequent, sys, frame_class)
        return ok, True
    return False, False


def occurrence_contexts(m: md.Modal, name: str) -> list[int]:
    """For each occurrence of variable ``name``, the number of primes
    stacked directly on top of it."""
    out: list[int] = []

    def walk(t: md.Modal, stack: int):
        if isinstance(t, md.PVar):
            if t.name == name:
                out.append(stack)
            return
        if isinstance(t, md.Prime):
            walk(t.arg, stack + 1)
            return
        for k in md.children(t):
            walk(k, 0)

    walk(m, 0)
    return out


def _replace_var_context(m: md.Modal, name: str, depth: int, new: md.Modal) -> md.Modal:
    """Replace each ``depth``-fold primed occurrence of ``name`` by ``new``."""
    def match(t: md.Modal) -> bool:
        for _ in range(depth):
            if not isinstance(t, md.Prime):
                return False
            t = t.arg
        return isinstance(t, md.PVar) and t.name == name

    def go(t: md.Modal) -> md.Modal:
        if match(t):
            return new
        kids = md.children(t)
        return md.rebuild(t, tuple(go(k) for k in kids)) if kids else t

    return go(m)


def fresh_name(sys: System, stem: str = "Q") -> str:
    taken = sys.all_names()
    if stem not in taken:
        return stem
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


# -- local rewrites (R5) ------------------------------------------------------------------

def _rewrite_at(rule: str, t: md.Modal, sys: System, frame_class: str | None,
                associative: bool) -> tuple[md.Modal, bool] | None:
    """The R5 rewrite of term ``t`` (the redex itself) or None."""
    if rule == "R5.1":
        if isinstance(t, md.Prime) and isinstance(t.arg, md.Prime) and isinstance(t.arg.arg, md.Prime):
            return t.arg.arg, False
        return None
    if rule == "R5.2":
        if isinstance(t, md.Prime) and isinstance(t.arg, md.Join):
            j = t.arg
            return md.Meet(md.Prime(j.left), md.Prime(j.right)), False
        if isinstance(t, md.Prime) and isinstance(t.arg, md.Prime) and isinstance(t.arg.arg, md.Meet):
            a, b = t.arg.arg.left, t.arg.arg.right
            sa, ca = stable_term(a, sys, frame_class)
            sb, cb = stable_term(b, sys, frame_class)
            if sa and sb:
                return md.Meet(md.pp(a), md.pp(b)), ca or cb
        return None
    guarded = sys.guarded()

    def constrained(x):
        return isinstance(x, md.PVar) and x.name in guarded

    if rule == "R5.3":
        if isinstance(t, md.RSpoon) and constrained(t.left) and constrained(t.right) \
                and _in_lk(frame_class, SPOON_UNFOLD):
            return md.Prime(md.Tright(t.left, md.Prime(t.right))), True
        return None
    if rule == "R5.5":
        if isinstance(t, md.LSpoon) and constrained(t.left) and constrained(t.right) \
                and _in_lk(frame_class, SPOON_UNFOLD):
            return md.Prime(md.Tleft(md.Prime(t.left), t.right)), True
        return None
    if rule == "R5.4":
        if associative and isinstance(t, md.RSpoon) and isinstance(t.right, md.RSpoon):
            p2, p1, q = t.left, t.right.left, t.right.right
            if all(isinstance(x, md.PVar) for x in (p1, p2, q)):
                return md.RSpoon(md.Odot(p1, p2), q), True
        return None
    if rule == "R5.6":
        if associative and isinstance(t, md.LSpoon) and isinstance(t.left, md.LSpoon):
            q, p2, p1 = t.left.left, t.left.right, t.right
            if all(isinstance(x, md.PVar) for x in (p1, p2, q)):
                return md.LSpoon(q, md.Odot(p1, p2)), True
        return None
    raise ValueError(f"unknown rewrite {rule}")


def rewrite_sites(sys: System, rule: str, frame_class: str | None = None,
                  associative: bool = False) -> list[tuple[str, tuple[int, ...]]]:
    out = []
    for side in ("lhs", "rhs"):
        for path, t in md.positions(getattr(sys, side)):
            if _rewrite_at(rule, t, sys, frame_class, associative) is not None:
                out.append((side, path))
    return out


# -- rule application --------------------------------------------------------------------

def apply_rule(sys: System, rule: str, position=None, frame_class: str | None = None,
               associative: bool = False) -> tuple[System, bool]:
    """Apply one rule instance.  Returns the new system and whether the
    instance relied on the frame class.  Raises RuleNotApplicable."""
    if frame_class is not None and frame_class not in CLASSES:
        raise ValueError(f"unknown frame class {frame_class!r}")
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    main = sys.main_vars()

    if rule == "R1":
        if position in main:
            raise RuleNotApplicable(f"R1: {position} occurs in the main inequality")
        stb = tuple(g for g in sys.stb if g.name != position)
        cvc = tuple(c for c in sys.cvc if c.name != position)
        if len(stb) == len(sys.stb) and len(cvc) == len(sys.cvc):
            raise RuleNotApplicable(f"R1: no guard for {position}")
        return replace(sys, stb=stb, cvc=cvc), False

    if rule in ("R2", "R3"):
        if not (isinstance(sys.lhs, md.Prime) and isinstance(sys.lhs.arg, md.Prime)):
            raise RuleNotApplicable(f"{rule}: left side is not double-primed")
        doubled = isinstance(sys.rhs, md.Prime) and isinstance(sys.rhs.arg, md.Prime)
        if rule == "R3":
            if not doubled:
                raise RuleNotApplicable("R3: right side is not double-primed")
            return replace(sys, lhs=sys.lhs.arg.arg), False
        if doubled:
            raise RuleNotApplicable("R2: right side is double-primed (use R3)")
        ok, dep = stable_term(sys.rhs, sys, frame_class)
        if not ok:
            raise RuleNotApplicable("R2: right side is not a meet of stable terms")
        return replace(sys, lhs=sys.lhs.arg.arg), dep

    if rule == "R4":
        name = position
        if name not in main:
            raise RuleNotApplicable(f"R4: {name} does not occur")
        if name in sys.guarded():
            raise RuleNotApplicable(f"R4: {name} is already constrained")
        ctx = occurrence_contexts(sys.lhs, name) + occurrence_contexts(sys.rhs, name)
        if any(c != 2 for c in ctx):
            raise RuleNotApplicable(f"R4: not every occurrence of {name} is double-primed")
        s = main[name]
        v = md.PVar(name, s)
        lhs = _replace_var_context(sys.lhs, name, 2, v)
        rhs = _replace_var_context(sys.rhs, name, 2, v)
        return replace(sys, lhs=lhs, rhs=rhs, stb=sys.stb + (Stb(name, s),)), False

    if rule == "R6":
        name = position
        if name not in main:
            raise RuleNotApplicable(f"R6: {name} does not occur")
        if name in {c.name for c in sys.cvc}:
            raise RuleNotApplicable(f"R6: {name} is a change-of-variable target")
        ctx = occurrence_contexts(sys.lhs, name) + occurrence_contexts(sys.rhs, name)
        if any(c != 1 for c in ctx):
            raise RuleNotApplicable(f"R6: {name} does not occur only single-primed")
        s = main[name]
        q = fresh_name(sys)
        new = md.PVar(q, other(s))
        lhs = _replace_var_context(sys.lhs, name, 1, new)
        rhs = _replace_var_context(sys.rhs, name, 1, new)
        return replace(sys, lhs=lhs, rhs=rhs, cvc=sys.cvc + (Cvc(q, other(s), name),)), False

    if rule == "R7":
        if sys.sort != SORT1:
            raise RuleNotApplicable("R7: residuation applies to sort-1 inequalities")
        if isinstance(sys.rhs, md.RSpoon):
            return replace(sys, lhs=md.Odot(sys.rhs.left, sys.lhs), rhs=sys.rhs.right), False
        if isinstance(sys.rhs, md.LSpoon):
            return replace(sys, lhs=md.Odot(sys.lhs, sys.rhs.right), rhs=sys.rhs.left), False
        raise RuleNotApplicable("R7: right side is not a spoon")

    # R5 family: position = (side, path)
    try:
        side, path = position
        term = md.subterm(getattr(sys, side), tuple(path))
    except (TypeError, ValueError, IndexError, AttributeError):
        raise RuleNotApplicable(f"{rule}: bad position {position!r}") from None
    res = _rewrite_at(rule, term, sys, frame_class, associative)
    if res is None:
        raise RuleNotApplicable(f"{rule}: no redex at {_pos_text(position)}")
    new, dep = res
    updated = md.replace_at(getattr(sys, side), tuple(path), new)
    return replace(sys, **{side: updated}), dep


# -- canonical form ------------------------------------------------------------------------

_LHS_OK = (md.PVar, md.MTop, md.MBot, md.UConst, md.Meet, md.Odot, md.Tright, md.Tleft)


def _lhs_simple(m: md.Modal) -> bool:
    if not isinstance(m, _LHS_OK):
        return False
    return all(_lhs_simple(k) for k in md.children(m))


def _positive(m: md.Modal, flips: int = 0) -> bool:
    """Every variable occurs under an even number of polarity flips (primes,
    and the antecedent place of a spoon)."""
    if isinstance(m, md.PVar):
        return flips % 2 == 0
    if isinstance(m, md.Prime):
        return _positive(m.arg, flips + 1)
    if isinstance(m, md.RSpoon):
        return _positive(m.left, flips + 1) and _positive(m.right, flips)
    if isinstance(m, md.LSpoon):
        return _positive(m.left, flips) and _positive(m.right, flips + 1)
    return all(_positive(k, flips) for k in md.children(m))


def canonical_problems(sys: System) -> list[str]:
    problems = []
    if not _lhs_simple(sys.lhs):
        problems.append("left side uses primes, joins or spoons")
    if not _positive(sys.rhs):
        problems.append("right side is not positive")
    for name in sys.guarded():
        for side in (sys.lhs, sys.rhs):
            if any(c > 0 for c in occurrence_contexts(side, name)):
                problems.append(f"constrained variable {name} occurs primed")
                break
    return problems


def is_canonical_form(sys: System) -> bool:
    return not canonical_problems(sys)


# -- search ---------------------------------------------------------------------------------

def _safe_closure(sys: System, frame_class: str | None, log: list[Step]) -> System:
    """Apply R5.1 and R5.2 until none applies."""
    changed = True
    while changed:
        changed = False
        for rule in SAFE_REWRITES:
            sites = rewrite_sites(sys, rule, frame_class)
            if sites:
                new, dep = apply_rule(sys, rule, sites[0], frame_class)
                log.append(Step(rule, sites[0], sys, new, dep))
                sys = new
                changed = True
                break
    return sys


def candidate_moves(sys: System, frame_class: str | None, associative: bool) -> list[tuple[str, object]]:
    main = sorted(sys.main_vars())
    moves: list[tuple[str, object]] = [("R7", None)]
    moves += [("R4", n) for n in main]
    moves += [("R2", None), ("R3", None)]
    moves += [("R6", n) for n in main]
    moves += [("R1", n) for n in sorted(sys.guarded()) if n not in main]
    for rule in ("R5.3", "R5.5"):
        moves += [(rule, p) for p in rewrite_sites(sys, rule, frame_class)]
    if associative:
        for rule in ("R5.4", "R5.6"):
            moves += [(rule, p) for p in rewrite_sites(sys, rule, frame_class, True)]
    return moves


@dataclass
class Reduction:
    system: System
    trace: Trace
    start: System

    @property
    def instances(self) -> list[Step]:
        return self.trace.steps


def reduce(sys: System, frame_class: str | None = None, depth: int = DEFAULT_DEPTH,
           associative: bool = False) -> Reduction:
    """Search for a rule sequence reaching canonical form.

    Safe rewrites (R5.1, R5.2) are applied eagerly after every step; the
    other rules are tried in the order R7, R4, R2, R3, R6, R1, R5.3, R5.5
    with backtracking.  Guards of absent variables are dropped at the end.
    """
    start = sys
    visited: set = set()
    best: list[Step] = []

    def dfs(current: System, path: list[Step]) -> list[Step] | None:
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        if is_canonical_form(current):
            return path
        if len(path) >= depth or current.key() in visited:
            return None
        visited.add(current.key())
        for rule, pos in candidate_moves(current, frame_class, associative):
            try:
                nxt, dep = apply_rule(current, rule, pos, frame_class, associative)
            except RuleNotApplicable:
                continue
            steps = [Step(rule, pos, current, nxt, dep)]
            nxt = _safe_closure(nxt, frame_class, steps)
            found = dfs(nxt, path + steps)
            if found is not None:
                return found
        return None

    first: list[Step] = []
    sys = _safe_closure(sys, frame_class, first)
    found = dfs(sys, first)
    if found is None:
        trace = Trace(best)
        raise NotSahlqvist(f"no reduction to canonical form for {start}", trace=trace.lines())
    final = found[-1].after if found else sys
    for name in sorted(final.guarded()):
        if name not in final.main_vars():
            nxt, dep = apply_rule(final, "R1", name, frame_class)
            found.append(Step("R1", name, final, nxt, dep))
            final = nxt
    return Reduction(final, Trace(found), start)


@dataclass
class SequentReduction:
    mode: str
    translation: str
    reduction: Reduction
    attempts: list[tuple[str, str, str]] = field(default_factory=list)  # (mode, translation, outcome)


def attempt_order(mode: str, translation: str, frame_class: str | None) -> list[tuple[str, str]]:
    modes = ["translate", "cotranslate"] if mode == "auto" else [mode]
    if translation == "auto":
        lk = frame_class in SPOON_STABLE
        translations = ["rspoon", "diamond"] if lk else ["diamond"]
    else:
        translations = [translation]
    out = []
    for m in modes:
        for t in translations:
            if (m, t) not in out and not (m == "cotranslate" and t == "rspoon"):
                out.append((m, t))
    return out or [(modes[0], translations[0])]


def reduce_sequent(seq, frame_class: str | None = None, mode: str = "auto",
                   translation: str = "auto", depth: int = DEFAULT_DEPTH,
                   associative: bool = False) -> SequentReduction:
    """Step 1 with a fixed policy: translation before co-translation, and for
    Lambek classes the spoon translation of implications before the
    primed-diamond one."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    attempts = []
    last: NotSahlqvist | None = None
    for m, t in attempt_order(mode, translation, frame_class):
        sys = to_system(seq, m, t)
        try:
            red = reduce(sys, frame_class, depth, associative)
        except NotSahlqvist as exc:
            attempts.append((m, t, "failed"))
            last = exc
            continue
        attempts.append((m, t, "reduced"))
        return SequentReduction(m, t, red, attempts)
    assert last is not None
    raise NotSahlqvist(f"{seq}: neither translation reduces to canonical form", trace=last.trace)
