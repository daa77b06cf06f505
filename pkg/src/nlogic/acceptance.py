"""The bundled acceptance suite: eleven end-to-end checks over the fixture
algebras and seeded frame families, each with a time budget."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from . import samplers
from .axioms import check_axiom
from .correspondence.catalogue import ROWS, check_catalogue, compute_row, row
from .correspondence.modelcheck import fo_model_check
from .correspondence.verify import SystemChecker, check_rule_instances, verify_correspondence
from .duality import (canonical_frame, verify_canonical_class, verify_canonical_extension,
                      verify_embedding, verify_pi_extension)
from .errors import MissingRelation
from .frames import SORT1, SORTD, SortedFrame, classical_frame, implication, left_implication, product
from .order import OrderedAlgebra, parse_algebra
from .semantics import check_full_abstraction
from .syntax.objects import parse_sequent

FIXTURE_ALGEBRAS = ("bool2", "chain3", "diamond", "vposet", "bool2_lambek", "chain3_lambek", "n5")
DISTRIBUTIVE = ("bool2", "chain3", "diamond")
CROSS_CHECKED = ("exchange", "contraction", "weakening", "Visser",
                 "left unit elimination", "left unit introduction")


def fixture_text(name: str) -> str:
    return (resources.files("nlogic") / "fixtures" / name).read_text()


def load_algebra(name: str) -> OrderedAlgebra:
    return parse_algebra(fixture_text(f"{name}.alg"))


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    budget: float
    detail: str = ""

    @property
    def within_budget(self) -> bool:
        return self.seconds < self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} criterion {self.number:2d} {self.title} [{self.seconds:.2f}s / {self.budget:g}s]{extra}"


def _collect(fails: list[str], name: str, ok: bool) -> None:
    if not ok:
        fails.append(name)


def _summary(fails: list[str], total: int) -> tuple[bool, str]:
    if fails:
        return False, f"{len(fails)} of {total} failed: " + ", ".join(fails[:5])
    return True, f"{total} checks"


# -- individual criteria ----------------------------------------------------------------

def embedding() -> tuple[bool, str]:
    fails = []
    for name in FIXTURE_ALGEBRAS:
        _collect(fails, name, verify_embedding(canonical_frame(load_algebra(name))).passed)
    return _summary(fails, len(FIXTURE_ALGEBRAS))


def canonical_extension() -> tuple[bool, str]:
    fails = []
    for name in FIXTURE_ALGEBRAS:
        _collect(fails, name,
                 verify_canonical_extension(canonical_frame(load_algebra(name))).passed)
    return _summary(fails, len(FIXTURE_ALGEBRAS))


def pi_extension() -> tuple[bool, str]:
    fails = []
    for name in ("chain3", "diamond"):
        _collect(fails, name, verify_pi_extension(canonical_frame(load_algebra(name))).passed)
    return _summary(fails, 2)


def canonical_class() -> tuple[bool, str]:
    fails = []
    n = 0
    for name in FIXTURE_ALGEBRAS:
        alg = load_algebra(name)
        cf = canonical_frame(alg)
        classes = ("LK", "LK*", "LK_*") if cf.signature == "lambek" else (None,)
        for cls in classes:
            n += 1
            _collect(fails, f"{name}/{cls or 'default'}", verify_canonical_class(cf, cls).passed)
    return _summary(fails, n)


def golden_set() -> tuple[bool, str]:
    results = check_catalogue()
    fails = [r.row.name for r in results if not r.matches]
    # template rows must also agree with the axiom checker they stand for
    frames = [canonical_frame(load_algebra(n)).frame for n in ("bool2_lambek", "chain3_lambek")]
    frames += samplers.lk_family(60)
    for r in ROWS:
        if r.is_template:
            f, _ = compute_row(r)
            for fr in frames:
                if fo_model_check(fr, f).holds != check_axiom(fr, r.axiom).passed:
                    fails.append(f"{r.name} template")
                    break
    return _summary(fails, len(results))


def cross_verification(count: int = 200) -> tuple[bool, str]:
    frames = samplers.lk_family(count)
    fails = []
    for name in CROSS_CHECKED:
        r = row(name)
        rep = verify_correspondence(frames, parse_sequent(r.sequent), r.frame_class, r.mode,
                                    r.translation)
        _collect(fails, f"{name} ({len(rep.divergences())} divergences)", rep.passed)
    ok, detail = _summary(fails, len(CROSS_CHECKED))
    return ok, f"{detail} over {len(frames)} frames"


def rule_soundness() -> tuple[bool, str]:
    checker = SystemChecker()
    fails, n = [], 0
    for res in check_catalogue():
        if res.reduction is None:
            continue
        rep = check_rule_instances(res.reduction.reduction.instances, res.row.frame_class,
                                   checker=checker)
        n += len(rep.records)
        fails += [f"{res.row.name}: {d.id}" for d in rep.divergences()]
    return _summary(fails, n)


def full_abstraction(count: int = 100, seed: int = samplers.DEFAULT_SEED) -> tuple[bool, str]:
    rng = random.Random(seed)
    fails = []
    for i in range(count):
        fr = samplers.random_stable_frame(rng)
        phi = samplers.random_formula(rng, 3)
        val = samplers.random_sorted_valuation(rng, fr)
        _collect(fails, f"triple {i}", check_full_abstraction(fr, phi, val).passed)
    return _summary(fails, count)


def residuation_bridge_holds(fr: SortedFrame) -> bool:
    """A ⊙̄ F ⊆ C iff F ⊆ A ⇒ C iff A ⊆ C ⇐ F over all stable triples."""
    st = fr.stable_sets(SORT1)
    for a, f, c in itertools.product(st, repeat=3):
        one = not product(fr, a, f) & ~c
        two = not f & ~implication(fr, a, c)
        three = not a & ~left_implication(fr, c, f)
        if not one == two == three:
            return False
    return True


def residuation_bridge() -> tuple[bool, str]:
    fails, n = [], 0
    for name in FIXTURE_ALGEBRAS:
        fr = canonical_frame(load_algebra(name)).frame
        try:
            if not check_axiom(fr, "RES").passed:
                continue
        except MissingRelation:
            continue
        n += 1
        _collect(fails, name, residuation_bridge_holds(fr))
    if n == 0:
        return False, "no fixture frame satisfies RES"
    return _summary(fails, n)


def association_conditions() -> tuple:
    return tuple(compute_row(row(n))[0] for n in ("association", "converse association"))


def associativity_conditions(fr: SortedFrame, conditions: tuple | None = None) -> tuple[bool, bool, bool]:
    """(frame condition, powerset ⊙ associative, closed ⊙̄ associative on stable sets).

    The image operator preserves unions in each argument, so powerset
    associativity is decided on singletons."""
    conditions = conditions or association_conditions()
    frame_cond = all(fo_model_check(fr, f).holds for f in conditions)
    pts = [1 << i for i in range(fr.size(SORT1))]
    powerset = all(fr.image("R", (fr.image("R", (a, b)), c)) == fr.image("R", (a, fr.image("R", (b, c))))
                   for a, b, c in itertools.product(pts, repeat=3))
    st = fr.stable_sets(SORT1)
    closed = all(product(fr, product(fr, a, b), c) == product(fr, a, product(fr, b, c))
                 for a, b, c in itertools.product(st, repeat=3))
    return frame_cond, powerset, closed


def associativity(count: int = 200) -> tuple[bool, str]:
    frames = samplers.lk_family(count)
    fails = []
    tally = {True: 0, False: 0}
    conditions = association_conditions()
    for i, fr in enumerate(frames):
        conds = associativity_conditions(fr, conditions)
        tally[conds[0]] += 1
        _collect(fails, f"frame {i} {conds}", len(set(conds)) == 1)
    ok, detail = _summary(fails, len(frames))
    return ok, f"{detail}; associative on {tally[True]}, not on {tally[False]}"


def stable_lattice_distributive(fr: SortedFrame) -> bool:
    st = fr.stable_sets(SORT1)

    def join(a, b):
        return fr.close(SORT1, a | b)

    return all(a & join(b, c) == join(a & b, a & c) for a, b, c in itertools.product(st, repeat=3))


def distributive_classical() -> tuple[bool, str]:
    fails = []
    cl = classical_frame(["a", "b"])
    full = cl.full(SORT1)
    _collect(fails, "classical all stable", set(cl.stable_sets(SORT1)) == set(range(full + 1)))
    _collect(fails, "classical prime is complement",
             all(cl.prime(s, m) == full & ~m for s in (SORT1, SORTD) for m in range(full + 1)))
    _collect(fails, "classical predicate", check_axiom(cl, "classical").passed)
    for name in DISTRIBUTIVE:
        fr = canonical_frame(load_algebra(name)).frame
        _collect(fails, f"{name} upper-bound sections", check_axiom(fr, "distributive").passed)
        _collect(fails, f"{name} stable lattice", stable_lattice_distributive(fr))
    # the pentagon is not distributive: both tests must say so
    n5 = canonical_frame(load_algebra("n5")).frame
    _collect(fails, "n5 rejected", not check_axiom(n5, "distributive").passed
             and not stable_lattice_distributive(n5))
    return _summary(fails, 4 + 2 * len(DISTRIBUTIVE))


# -- runner -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    budget: float
    run: Callable[[], tuple[bool, str]]


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "representation embedding", 5, embedding),
    Criterion(2, "canonical extension", 5, canonical_extension),
    Criterion(3, "pi-extension", 5, pi_extension),
    Criterion(4, "canonical frame class membership", 10, canonical_class),
    Criterion(5, "correspondence golden set", 5, golden_set),
    Criterion(6, "semantic cross-verification", 60, cross_verification),
    Criterion(7, "rule soundness", 60, rule_soundness),
    Criterion(8, "full abstraction", 30, full_abstraction),
    Criterion(9, "residuation bridge", 30, residuation_bridge),
    Criterion(10, "associativity equivalence", 60, associativity),
    Criterion(11, "distributive and classical predicates", 10, distributive_classical),
)


def run_criterion(c: Criterion) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = c.run()
    except Exception as exc:  # a crash is a failure of that criterion only
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(c.number, c.title, passed, time.perf_counter() - start, c.budget, detail)


def run_all(numbers: list[int] | None = None) -> list[CriterionResult]:
    return [run_criterion(c) for c in CRITERIA if numbers is None or c.number in numbers]


__all__ = ["CRITERIA", "Criterion", "CriterionResult", "run_all", "run_criterion",
           "load_algebra", "fixture_text", "residuation_bridge_holds",
           "associativity_conditions", "stable_lattice_distributive"]
