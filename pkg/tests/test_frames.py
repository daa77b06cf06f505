import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nlogic.axioms import check_axiom, check_frame_class, satisfies
from nlogic.errors import FrameError, MissingRelation, ParseError
from nlogic.frames import (SORT1, SORTD, bits, build_frame, classical_frame, closed_operator,
                           enumerate_stable_sets, format_frame, galois_dual_relation, implication,
                           left_implication, other, parse_frame, product, separated,
                           single_sorted, specialization_order)

from strategies import frame_and_masks, frames

SORTS = (SORT1, SORTD)


def brute_prime(frame, sort, mask):
    """Oracle straight from the incidence pairs."""
    out = set(range(frame.size(other(sort))))
    for a, b in frame.incidence:
        x, y = (a, b) if sort == SORT1 else (b, a)
        if mask >> x & 1:
            out.discard(y)
    return sum(1 << i for i in out)


@settings(max_examples=60, deadline=None)
@given(frames(), st.sampled_from(SORTS), st.data())
def test_galois_pair_laws(fr, sort, data):
    m = data.draw(st.integers(0, (1 << fr.size(sort)) - 1))
    p = fr.prime(sort, m)
    assert p == brute_prime(fr, sort, m)
    assert m & ~fr.close(sort, m) == 0
    assert fr.prime(sort, fr.close(sort, m)) == p  # X''' = X'


@settings(max_examples=40, deadline=None)
@given(frames(), st.sampled_from(SORTS))
def test_stable_sets_are_fixpoints_and_meet_closed(fr, sort):
    brute = {m for m in range(1 << fr.size(sort)) if brute_prime(fr, other(sort), brute_prime(fr, sort, m)) == m}
    assert set(fr.stable_sets(sort)) == brute
    for a, b in itertools.product(brute, repeat=2):
        assert a & b in brute
    assert fr.full(sort) in brute


@settings(max_examples=40, deadline=None)
@given(frames(), st.sampled_from(SORTS))
def test_stable_sets_are_upsets(fr, sort):
    for m in fr.stable_sets(sort):
        for i in bits(m):
            for j in range(fr.size(sort)):
                if fr.le(sort, i, j):
                    assert m >> j & 1


@settings(max_examples=40, deadline=None)
@given(frames(), st.sampled_from(SORTS))
def test_specialisation_order_oracle(fr, sort):
    # i <= j iff every stable set containing i contains j
    st_ = fr.stable_sets(sort)
    for i, j in itertools.product(range(fr.size(sort)), repeat=2):
        expected = all(m >> j & 1 for m in st_ if m >> i & 1)
        assert fr.le(sort, i, j) == expected
    order = specialization_order(fr, sort)
    assert all(order[i][i] for i in range(fr.size(sort)))


@settings(max_examples=40, deadline=None)
@given(frame_and_masks(count=3, relations=("R",)))
def test_image_distributes_over_unions(data):
    fr, (a, b, c) = data
    assert fr.image("R", (a | b, c)) == fr.image("R", (a, c)) | fr.image("R", (b, c))
    assert fr.image("R", (c, a | b)) == fr.image("R", (c, a)) | fr.image("R", (c, b))
    assert fr.image("R", (0, c)) == 0


@settings(max_examples=30, deadline=None)
@given(frames())
def test_format_parse_round_trip(fr):
    assert parse_frame(format_frame(fr)) == fr


def test_classical_frame_basics():
    cl = classical_frame(["a", "b"])
    assert set(cl.stable_sets(SORT1)) == set(range(4))
    assert all(cl.prime(SORT1, m) == 3 & ~m for m in range(4))
    assert separated(cl)
    assert check_axiom(cl, "classical").passed


def test_non_classical_detected():
    fr = build_frame(["a", "b"], ["a", "b"], [(0, 0), (0, 1), (1, 1)])
    rec = check_axiom(fr, "classical")
    assert not rec.passed and rec.witness == {"x": "a", "y": "b"}


def test_bad_frame_fails_unit_law(bad_frame):
    rep = check_frame_class(bad_frame, "PU")
    fails = rep.failures()
    assert [r.id for r in fails] == ["U"]
    assert fails[0].witness == {"x": "w", "v": "w"}


def test_missing_unit_raises():
    fr = classical_frame(["a"], relations={"T": []})
    with pytest.raises(MissingRelation):
        check_frame_class(fr, "PU")
    assert not satisfies(fr, "PU")


def test_monotonicity_counterexample():
    # x1 <= x0 in the specialisation order; R holds with argument x0 only
    fr = build_frame(["x0", "x1"], ["y0", "y1"], [(1, 0), (1, 1), (0, 0)], 3,
                     {"R": [(0, 0, 0)], "T": [], "S": []})
    assert fr.le(SORT1, 1, 0) and not fr.le(SORT1, 0, 1)
    rec = check_axiom(fr, "M", ("R",))
    assert not rec.passed and rec.witness["relation"] == "R"


def test_f1_failure_witness():
    # two unrelated points of sort d: {y0} is not a Galois set when both
    # y0 and y1 see the same sort-1 points
    fr = build_frame(["x0"], ["y0", "y1"], [(0, 0), (0, 1)], 1, {"T": [(0, 0, 0)]})
    rec = check_axiom(fr, "F1", ("T",))
    assert not rec.passed and rec.witness["relation"] == "T"


def test_parse_frame_errors():
    with pytest.raises(ParseError):
        parse_frame("sort1: a\n")
    with pytest.raises(ParseError):
        parse_frame("sort1: a\nsortD: b\nI: (a,c)\n")
    with pytest.raises(ParseError):
        parse_frame("sort1: a\nsortD: b\nX: 1\n")
    with pytest.raises(ParseError):
        parse_frame("sort1: a\nsortD: b\nT: (b|a)\n")


def test_frame_validation():
    with pytest.raises(FrameError):
        build_frame([], ["y"], [])
    with pytest.raises(FrameError):
        build_frame(["a", "a"], ["y"], [])


def test_unit_all_keyword():
    fr = parse_frame("sort1: a b\nsort∂: c\nU: all\n")
    assert fr.unit == 3


def test_dual_relation_and_closed_operator(canon):
    fr = canon("chain3").frame
    dual = galois_dual_relation(fr, "T")
    for args, m in dual.items():
        assert m == fr.prime(SORTD, fr.section("T", args))
    st_ = fr.stable_sets(SORT1)
    for a, c in itertools.product(st_, repeat=2):
        g = closed_operator(fr, "T", (a, fr.prime(SORT1, c)))
        assert g.mask == fr.close(SORTD, fr.image("T", (a, fr.prime(SORT1, c))))
        assert single_sorted(fr, "T", (a, c)).mask == implication(fr, a, c)


def test_enumerate_stable_sets_objects():
    cl = classical_frame(["a", "b", "c"])
    sets = enumerate_stable_sets(cl, SORT1)
    assert len(sets) == 8 and all(s.stable for s in sets)


@pytest.mark.parametrize("name", ["bool2_lambek", "chain3_lambek"])
def test_residuation_on_stable_triples(canon, name):
    fr = canon(name).frame
    assert check_axiom(fr, "RES").passed
    st_ = fr.stable_sets(SORT1)
    for a, f, c in itertools.product(st_, repeat=3):
        one = not product(fr, a, f) & ~c
        assert one == (not f & ~implication(fr, a, c)) == (not a & ~left_implication(fr, c, f))


def _imp_laws(fr):
    st_ = fr.stable_sets(SORT1)
    return st_, (lambda a, c: implication(fr, a, c))


@pytest.mark.parametrize("name", ["chain3", "diamond", "bool2"])
def test_semilattice_implication_distributes_over_meets(canon, name):
    cf = canon(name, "semilattice")
    fr = cf.frame
    assert check_axiom(fr, "F3").passed
    st_, imp = _imp_laws(fr)
    for a, c1, c2 in itertools.product(st_, repeat=3):
        assert imp(a, c1 & c2) == imp(a, c1) & imp(a, c2)


@pytest.mark.parametrize("name", ["chain3", "diamond", "n5"])
def test_lattice_implication_turns_joins_into_meets(canon, name):
    fr = canon(name, "lattice").frame
    assert check_axiom(fr, "F3b").passed
    st_, imp = _imp_laws(fr)
    for a1, a2, c in itertools.product(st_, repeat=3):
        join = fr.close(SORT1, a1 | a2)
        assert imp(join, c) == imp(a1, c) & imp(a2, c)


@settings(max_examples=60, deadline=None)
@given(frames(relations=("T",)))
def test_f3_frames_distribute(fr):
    assume(check_axiom(fr, "F1", ("T",)).passed and check_axiom(fr, "F3").passed)
    st_, imp = _imp_laws(fr)
    for a, c1, c2 in itertools.product(st_, repeat=3):
        assert imp(a, c1 & c2) == imp(a, c1) & imp(a, c2)


@pytest.mark.parametrize("name,expected", [("bool2", True), ("chain3", True),
                                           ("diamond", True), ("n5", False)])
def test_distributivity_predicate(canon, name, expected):
    assert check_axiom(canon(name).frame, "distributive").passed is expected
