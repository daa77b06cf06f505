import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlogic import samplers
from nlogic.axioms import satisfies
from nlogic.correspondence.modelcheck import fo_model_check
from nlogic.errors import ParseError, SearchSpaceTooLarge
from nlogic.frames import SORT1, SORTD, bits, build_frame, classical_frame
from nlogic.semantics import (Model, SortedModel, ValuationError, check_full_abstraction,
                              check_sequent, check_validity, eval_object, eval_sorted,
                              parse_valuation)
from nlogic.syntax import fo
from nlogic.syntax import modal as md
from nlogic.syntax import objects as ob
from strategies import frames, object_formulas

F = ob.parse_formula
Q = ob.parse_sequent


# -- an independent evaluator over explicit point sets ----------------------------------

def oracle_extent(frame, val, phi):
    """Satisfaction computed from the incidence and relation tuples as sets."""
    w1, wd = set(range(frame.size(SORT1))), set(range(frame.size(SORTD)))
    inc = frame.incidence

    def prime1(a):
        return {y for y in wd if not any((x, y) in inc for x in a)}

    def primed(b):
        return {x for x in w1 if not any((x, y) in inc for y in b)}

    def image(rel, a, b):
        return {t[0] for t in frame.rel(rel).tuples if t[1] in a and t[2] in b}

    def ext(f):
        if isinstance(f, ob.Var):
            return set(bits(val[f.name]))
        if isinstance(f, ob.Top):
            return set(w1)
        if isinstance(f, ob.Bot):
            return primed(prime1(set()))
        if isinstance(f, ob.Unit):
            return set(bits(frame.unit))
        a, b = ext(f.left), ext(f.right)
        if isinstance(f, ob.And):
            return a & b
        if isinstance(f, ob.Or):
            return primed(prime1(a | b))
        if isinstance(f, ob.Prod):
            return primed(prime1(image("R", a, b)))
        if isinstance(f, ob.Imp):
            return primed(image("T", a, prime1(b)))
        if isinstance(f, ob.LImp):  # consequent on the left
            return primed(image("S", prime1(a), b))
        raise TypeError(f)

    return sum(1 << i for i in ext(phi))


def stable_valuation(draw, frame, names=("p", "q", "r")):
    stable = frame.stable_sets(SORT1)
    return {n: draw(st.sampled_from(stable)) for n in names}


@st.composite
def models(draw):
    fr = draw(frames(max_points=3, unit=False))
    unit = draw(st.sampled_from(fr.stable_sets(SORT1)))
    fr = build_frame(fr.w1, fr.wd, fr.incidence, unit,
                     {r.name: r.tuples for r in fr.relations})
    return Model(fr, stable_valuation(draw, fr))


@given(models(), object_formulas())
@settings(max_examples=300, deadline=None)
def test_extent_matches_oracle(model, phi):
    ext, _ = eval_object(model, phi)
    assert ext.mask == oracle_extent(model.frame, model.valuation, phi)


@given(models(), object_formulas())
@settings(max_examples=200, deadline=None)
def test_co_extent_is_galois_image(model, phi):
    ext, co = eval_object(model, phi)
    assert co.mask == model.frame.prime(SORT1, ext.mask)


@given(models(), object_formulas())
@settings(max_examples=200, deadline=None)
def test_extents_stable_and_upward_closed(model, phi):
    fr = model.frame
    ext, _ = eval_object(model, phi)
    assert fr.is_stable(SORT1, ext.mask)
    for x in bits(ext.mask):
        for w in range(fr.size(SORT1)):
            if fr.le(SORT1, x, w):
                assert ext.mask >> w & 1


def positive_in(phi, name, polarity=True):
    """p occurs only positively: antecedents of implications flip polarity."""
    if isinstance(phi, ob.Var):
        return polarity or phi.name != name
    if isinstance(phi, (ob.Top, ob.Bot, ob.Unit)):
        return True
    if isinstance(phi, ob.Imp):
        return positive_in(phi.left, name, not polarity) and positive_in(phi.right, name, polarity)
    if isinstance(phi, ob.LImp):
        return positive_in(phi.left, name, polarity) and positive_in(phi.right, name, not polarity)
    return positive_in(phi.left, name, polarity) and positive_in(phi.right, name, polarity)


@given(models(), object_formulas(), st.data())
@settings(max_examples=300, deadline=None)
def test_positive_variables_are_monotone(model, phi, data):
    if not positive_in(phi, "p"):
        return
    fr = model.frame
    small = model.valuation["p"]
    bigger = [s for s in fr.stable_sets(SORT1) if not small & ~s]
    big = data.draw(st.sampled_from(bigger))
    lo = eval_object(model, phi)[0].mask
    hi = eval_object(Model(fr, {**model.valuation, "p": big}), phi)[0].mask
    assert not lo & ~hi


# -- worked examples ----------------------------------------------------------------------

def boolean_frame():
    # T on the diagonal makes the Galois clause the Boolean one
    return classical_frame(["a", "b", "c"], relations={"T": [(i, i, i) for i in range(3)]})


def test_classical_implication_is_boolean():
    fr = boolean_frame()
    for a, c in itertools.product(range(8), repeat=2):
        ext, _ = eval_object(Model(fr, {"p": a, "q": c}), F("p -> q"))
        assert ext.mask == (~a & 7) | c


def test_unit_implies_unit_is_everything(canon):
    fr = canon("bool2").frame
    assert eval_object(Model(fr), F("t -> t"))[0].mask == fr.full(SORT1)


def test_bottom_extent_is_closure_of_empty(canon):
    fr = canon("chain3").frame
    assert eval_object(Model(fr), ob.Bot())[0].mask == fr.close(SORT1, 0)


def test_sorted_prime_in_classical_frame():
    fr = classical_frame(["a", "b", "c"])
    for m in range(8):
        assert eval_sorted(SortedModel(fr, {"P": m}), md.Prime(md.PVar("P"))) == 7 & ~m


def test_sorted_unit(canon):
    fr = canon("chain3").frame
    assert eval_sorted(SortedModel(fr), md.UConst()) == fr.unit


def test_sorted_double_prime_is_closure(canon):
    fr = canon("diamond").frame
    for m in range(1 << fr.size(SORT1)):
        assert eval_sorted(SortedModel(fr, {"P": m}), md.pp(md.PVar("P"))) == fr.close(SORT1, m)


def test_sorted_spoon_clause(canon):
    # x satisfies A -o C iff every z with zRux and u in A lies in C
    fr = canon("chain3_lambek").frame
    r = fr.rel("R").tuples
    n = fr.size(SORT1)
    for a, c in itertools.product(range(1 << n), repeat=2):
        got = eval_sorted(SortedModel(fr, {"A": a, "C": c}), md.parse_modal("A -o C"))
        want = {x for x in range(n)
                if all(c >> z & 1 for z, u, y in r if y == x and a >> u & 1)}
        assert got == sum(1 << x for x in want)


def test_missing_valuation():
    with pytest.raises(ValuationError):
        eval_object(Model(boolean_frame()), F("p"))


def test_non_stable_valuation_rejected(canon):
    fr = canon("chain3").frame
    bad = next(m for m in range(1 << fr.size(SORT1)) if not fr.is_stable(SORT1, m))
    with pytest.raises(ValuationError):
        Model(fr, {"p": bad})


def test_unknown_implication_style():
    with pytest.raises(ValueError):
        eval_object(Model(boolean_frame(), {"p": 1}), F("p"), "other")


# -- sequents ---------------------------------------------------------------------------

@given(models(), object_formulas())
@settings(max_examples=100, deadline=None)
def test_identity_sequent(model, phi):
    assert check_sequent(model, ob.Sequent(phi, phi))


def test_weakening_on_boolean_lambek(canon):
    assert check_validity(canon("bool2_lambek").frame, Q("p |- q -> p")).valid


def test_exchange_fails_on_asymmetric_r():
    fr = classical_frame(["a", "b"], relations={"R": [(0, 0, 1)]})
    res = check_sequent(Model(fr, {"p": 1, "q": 2}), Q("p * q |- q * p"))
    assert not res.holds and res.witness == "a"


def test_top_sequents_valid():
    for fr in samplers.lk_family(20):
        assert check_validity(fr, Q("top |- top")).valid
        assert check_validity(fr, Q("p |- top")).valid


def test_p_entails_q_invalid():
    fr = boolean_frame()
    res = check_validity(fr, Q("p |- q"))
    assert not res.valid
    assert res.counter_valuation is not None and res.witness is not None


def test_contraction_iff_reflexive_r():
    cond = fo.parse_fo("forall x. R(x,x,x)")
    frames_ = samplers.lk_family(80)
    seen = set()
    for fr in frames_:
        valid = check_validity(fr, Q("p |- p * p")).valid
        assert valid == fo_model_check(fr, cond).holds
        seen.add(valid)
    assert seen == {True, False}


def test_validity_matches_oracle():
    rng = random.Random(7)
    for _ in range(40):
        fr = samplers.random_stable_frame(rng, max_points=3)
        seq = ob.Sequent(samplers.random_formula(rng, 2), samplers.random_formula(rng, 2))
        stable = fr.stable_sets(SORT1)
        names = ob.sequent_variables(seq)
        want = all(not oracle_extent(fr, dict(zip(names, vs)), seq.lhs)
                   & ~oracle_extent(fr, dict(zip(names, vs)), seq.rhs)
                   for vs in itertools.product(stable, repeat=len(names)))
        assert check_validity(fr, seq).valid == want


def test_search_space_bound(canon):
    fr = canon("diamond").frame
    with pytest.raises(SearchSpaceTooLarge):
        check_validity(fr, Q("p * q |- q * r"), varbound=2)
    with pytest.raises(SearchSpaceTooLarge):
        check_validity(fr, Q("p * q |- q * r"), bound=10)


# -- full abstraction -------------------------------------------------------------------

def test_full_abstraction_variable(canon):
    fr = canon("chain3").frame
    for m in range(1 << fr.size(SORT1)):
        assert check_full_abstraction(fr, F("p"), {"P": m}).passed


def test_full_abstraction_implication_on_chain(canon):
    fr = canon("chain3").frame
    rng = random.Random(3)
    for _ in range(30):
        val = samplers.random_sorted_valuation(rng, fr)
        assert check_full_abstraction(fr, F("p -> q"), val).passed


def test_full_abstraction_sequent_form():
    rng = random.Random(samplers.DEFAULT_SEED)
    for _ in range(50):
        fr = samplers.random_stable_frame(rng)
        phi, psi = samplers.random_formula(rng, 3), samplers.random_formula(rng, 3)
        val = samplers.random_sorted_valuation(rng, fr)
        b1, _ = md.translate(phi)
        b2, _ = md.translate(psi)
        sm = SortedModel(fr, val)
        modal_side = not eval_sorted(sm, b1) & ~eval_sorted(sm, b2)
        names = sorted(set(ob.variables(phi)) | set(ob.variables(psi)))
        om = Model(fr, {p: fr.close(SORT1, val.get(md.modal_name(p), 0)) for p in names})
        assert modal_side == check_sequent(om, ob.Sequent(phi, psi)).holds


def test_residual_clauses_agree_under_res_and_m():
    rng = random.Random(11)
    family = [f for f in samplers.lk_family(60) if satisfies(f, "LK_*")]
    for fr in family:
        stable = fr.stable_sets(SORT1)
        for _ in range(5):
            phi = samplers.random_formula(rng, 3)
            model = Model(fr, {n: rng.choice(stable) for n in ob.variables(phi)})
            galois = eval_object(model, phi, "galois")[0].mask
            assert eval_object(model, phi, "routley-meyer")[0].mask == galois
            assert eval_object(model, phi, "residual")[0].mask == galois


# -- valuation files --------------------------------------------------------------------

def test_parse_valuation_closes_with_warning(canon):
    fr = canon("chain3").frame
    bad = next(m for m in range(1 << fr.size(SORT1)) if not fr.is_stable(SORT1, m))
    text = "p: " + " ".join(fr.name_set(SORT1, bad)) + "  # comment\n"
    with pytest.warns(UserWarning):
        val = parse_valuation(text, fr)
    assert val == {"p": fr.close(SORT1, bad)}


def test_parse_sorted_valuation_keeps_sets():
    fr = build_frame(["x0", "x1"], ["y0"], [(0, 0)])
    val = parse_valuation("P: x1\nQ: y0\n", fr, sorted_=True)
    assert val == {"P": 2, "Q": 1}


@pytest.mark.parametrize("text", ["p x0", "p: nowhere", "p: x0\np: x0", "p q: x0"])
def test_parse_valuation_errors(text):
    with pytest.raises(ParseError):
        parse_valuation(text, build_frame(["x0"], ["y0"], []))
