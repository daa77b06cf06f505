import itertools
import random

import pytest

from nlogic import samplers
from nlogic.axioms import check_axiom, satisfies
from nlogic.frames import SORT1, SORTD, format_frame
from nlogic.semantics import check_validity
from nlogic.syntax import objects as ob


def test_random_stable_frame_is_f1():
    rng = random.Random(1)
    for _ in range(50):
        fr = samplers.random_stable_frame(rng)
        assert check_axiom(fr, "F1").passed
        assert fr.is_stable(SORT1, fr.unit)


def test_random_stable_frame_is_seeded():
    a = samplers.random_stable_frame(random.Random(5))
    b = samplers.random_stable_frame(random.Random(5))
    assert format_frame(a) == format_frame(b)


def test_random_formula_depth():
    rng = random.Random(2)
    for _ in range(100):
        assert ob.depth(samplers.random_formula(rng, 3)) <= 3


def test_groupoids_are_residuated():
    algs = samplers.residuated_groupoids()
    assert algs
    for a in algs:
        c, le = a.carrier, a.le
        for x, y, z in itertools.product(c, repeat=3):
            one = le(a.prod[x, y], z)
            assert one == le(y, a.imp[x, z]) == le(x, a.limp[z, y])
        assert all(a.prod[a.unit, x] == x == a.prod[x, a.unit] for x in c)


def test_canonical_lambek_frames_are_in_class():
    for fr in samplers.canonical_lambek_frames():
        assert satisfies(fr, "LK_*")


def test_duplicate_point_keeps_validity():
    seqs = [ob.parse_sequent(s) for s in ("p * q |- q * p", "p |- p * p", "p |- q -> p",
                                          "t * p |- p")]
    for fr in samplers.canonical_lambek_frames()[:4]:
        for sort in (SORT1, SORTD):
            dup = samplers.duplicate_point(fr, sort, 0)
            assert dup.size(sort) == fr.size(sort) + 1
            assert len(dup.stable_sets(SORT1)) == len(fr.stable_sets(SORT1))
            assert satisfies(dup, "LK_*")
            for s in seqs:
                assert check_validity(dup, s).valid == check_validity(fr, s).valid


@pytest.mark.parametrize("count", [10, 200])
def test_lk_family(count):
    fam = samplers.lk_family(count)
    assert len(fam) >= count
    for fr in fam:
        assert max(fr.size(SORT1), fr.size(SORTD)) <= 3
        assert satisfies(fr, "LK_*")
    again = samplers.lk_family(count)
    assert [format_frame(f) for f in fam] == [format_frame(f) for f in again]


def test_random_lk_frames_in_class():
    for fr in samplers.random_lk_frames(10):
        assert satisfies(fr, "LK_*")


def test_enumerated_frames_are_distinct():
    frames = samplers.enumerate_frames(("T",), False, 2, 1)
    texts = [format_frame(f) for f in frames]
    assert len(set(texts)) == len(texts)


def test_derived_relations_are_residuated():
    # residuation holds exactly when the sets R determines are stable
    seen = set()
    for fr in samplers.enumerate_frames(("R", "S", "T"), True, 2, 2, derive_from_r=True):
        n1, nd = fr.size(SORT1), fr.size(SORTD)

        def target(x, v, right):
            pairs = ((x, z) if right else (z, x) for z in range(n1))
            return sum(1 << z for z, pr in enumerate(pairs) if fr.dual_section("R", pr) >> v & 1)

        stable = all(fr.is_stable(SORT1, target(x, v, side))
                     for x in range(n1) for v in range(nd) for side in (True, False))
        assert check_axiom(fr, "RES").passed == stable
        seen.add(stable)
    assert seen == {True, False}
