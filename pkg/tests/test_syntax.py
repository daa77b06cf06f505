import pytest
from hypothesis import given, settings

from nlogic.errors import ParseError
from nlogic.frames import SORT1, SORTD
from nlogic.syntax import fo
from nlogic.syntax import modal as md
from nlogic.syntax import objects as ob
from strategies import object_formulas

P1, P2, P3 = ob.Var("p1"), ob.Var("p2"), ob.Var("p3")

# -- object language ------------------------------------------------------------------


def test_parse_implication():
    assert ob.parse_formula("p1 -> p1") == ob.Imp(P1, P1)


def test_parse_association_sequent():
    seq = ob.parse_sequent("p1 * (p2 * p3) |- (p1 * p2) * p3")
    assert seq.lhs == ob.Prod(P1, ob.Prod(P2, P3))
    assert seq.rhs == ob.Prod(ob.Prod(P1, P2), P3)


def test_parse_unit_sequent():
    seq = ob.parse_sequent("p |- t -> p")
    assert seq.lhs == ob.Var("p") and seq.rhs == ob.Imp(ob.Unit(), ob.Var("p"))


def test_empty_antecedent_is_unit():
    assert ob.parse_sequent("|- p").lhs == ob.Unit()


@pytest.mark.parametrize("text,tree", [
    ("p1 * p2 & p3", ob.And(ob.Prod(P1, P2), P3)),
    ("p1 & p2 -> p3", ob.Imp(ob.And(P1, P2), P3)),
    ("p1 -> p2 -> p3", ob.Imp(P1, ob.Imp(P2, P3))),
    ("p1 <- p2 <- p3", ob.LImp(P1, ob.LImp(P2, P3))),
    ("p1 * p2 * p3", ob.Prod(ob.Prod(P1, P2), P3)),
    ("p1 | p2 & p3", ob.And(ob.Or(P1, P2), P3)),
])
def test_precedence(text, tree):
    assert ob.parse_formula(text) == tree


def test_unicode_aliases():
    assert ob.parse_sequent("p1 ∘ p2 ⊢ p1 ⊸ ⊤") == ob.parse_sequent("p1 * p2 |- p1 -> top")
    assert ob.parse_formula("p1 ⟜ p2") == ob.LImp(P1, P2)


@pytest.mark.parametrize("text,pos", [("p -> ", 5), ("(p & q", 6), ("p $ q", 2), ("p q", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        ob.parse_formula(text)
    assert err.value.position == pos


def test_print_implication():
    s = ob.format_formula(ob.Imp(P1, P2))
    assert s == "p1 -> p2" and ob.parse_formula(s) == ob.Imp(P1, P2)


@given(object_formulas())
@settings(max_examples=300, deadline=None)
def test_round_trip(phi):
    assert ob.parse_formula(ob.format_formula(phi)) == phi


# -- translation ----------------------------------------------------------------------


def test_translate_unit():
    assert md.translate(ob.Unit()) == (md.UConst(), md.Prime(md.UConst()))


def test_translate_implication():
    b, c = md.translate(ob.parse_formula("p1 -> p2"))
    body = md.Tright(md.pp(md.PVar("P1")), md.Prime(md.PVar("P2")))
    assert b == md.Prime(body) and c == md.pp(body)
    assert md.format_modal(b) == "(P1'' ▷ P2')'"


def test_translate_top():
    assert md.translate(ob.Top()) == (md.MTop(SORT1), md.pp(md.MBot(SORTD)))


def test_translate_spoon():
    b, c = md.translate(ob.parse_formula("p1 -> p2"), "rspoon")
    assert b == md.RSpoon(md.pp(md.PVar("P1")), md.pp(md.PVar("P2")))
    assert c == md.Prime(b)


def test_translate_left_implication():
    b, _ = md.translate(ob.parse_formula("p1 <- p2"))
    assert b == md.Prime(md.Tleft(md.Prime(md.PVar("P1")), md.pp(md.PVar("P2"))))


def test_unknown_translation():
    with pytest.raises(ValueError):
        md.translate(P1, "other")


SIGNATURE = {md.Odot: ("1", "1", "1"), md.RSpoon: ("1", "1", "1"), md.LSpoon: ("1", "1", "1"),
             md.Tright: ("d", "1", "d"), md.Tleft: ("d", "d", "1")}


def modal_sort(m):
    """Sort checker written independently of the constructors."""
    if isinstance(m, md.PVar):
        return m.sort
    if isinstance(m, (md.MTop, md.MBot)):
        return m.sort
    if isinstance(m, md.UConst):
        return "1"
    if isinstance(m, md.Prime):
        return {"1": "d", "d": "1"}[modal_sort(m.arg)]
    a, b = modal_sort(m.left), modal_sort(m.right)
    if isinstance(m, (md.Meet, md.Join)):
        assert a == b
        return a
    out, sa, sb = SIGNATURE[type(m)]
    assert (a, b) == (sa, sb)
    return out


def double_primed(m, depth=0):
    """Every variable sits under at least one prime."""
    if isinstance(m, md.PVar):
        return depth >= 1
    if isinstance(m, md.Prime):
        return double_primed(m.arg, depth + 1)
    return all(double_primed(k, depth) for k in md.children(m))


@given(object_formulas(), object_formulas())
@settings(max_examples=200, deadline=None)
def test_translation_sorts(phi, psi):
    for style in ("diamond", "rspoon"):
        b, c = md.translate(ob.Imp(phi, psi), style)
        assert modal_sort(b) == "1" and modal_sort(c) == "d"


@given(object_formulas())
@settings(max_examples=200, deadline=None)
def test_double_prime_discipline(phi):
    b, _ = md.translate(phi)
    for _, t in md.positions(b):
        if isinstance(t, md.PVar):
            assert t.sort == SORT1
    # variables appear only as P'' or inside a primed context
    assert double_primed(b)


def test_variable_occurrences_are_double_primed():
    b, _ = md.translate(ob.parse_formula("(p -> q) & p * q"))
    parents = [t for _, t in md.positions(b) if isinstance(t, md.Prime) and isinstance(t.arg, md.Prime)
               and isinstance(t.arg.arg, md.PVar)]
    assert {t.arg.arg.name for t in parents} == {"P", "Q"}


def test_parse_modal_infers_sorts():
    m = md.parse_modal("(P'' |> Q')'")
    assert m == md.Prime(md.Tright(md.pp(md.PVar("P")), md.Prime(md.PVar("Q"))))
    assert md.parse_modal("Q", SORTD) == md.PVar("Q", SORTD)


def test_parse_modal_sort_clash():
    with pytest.raises(ParseError):
        md.parse_modal("P | P'")


def test_constructor_rejects_bad_sorts():
    with pytest.raises(md.SortError):
        md.Odot(md.PVar("P", SORTD), md.PVar("Q"))


# -- first-order language -------------------------------------------------------------

U = fo.FVar("u", SORT1)
V = fo.FVar("v", SORTD)


def test_st_unit():
    assert fo.standard_translation(md.UConst(), U) == fo.Atom("U", (U,))


def test_st_bottom_is_false():
    assert fo.standard_translation(md.MBot(SORTD), V) == fo.Const(False)


def test_st_double_prime_unfolds_twice():
    got = fo.standard_translation(md.pp(md.PVar("P")), U)
    v1, z2 = fo.FVar("v1", SORTD), fo.FVar("z2", SORT1)
    inner = fo.Forall(z2, fo.Implies(fo.Atom("I", (z2, v1)), fo.Not(fo.PApp("P", SORT1, z2))))
    assert got == fo.Forall(v1, fo.Implies(fo.Atom("I", (U, v1)), fo.Not(inner)))


def test_st_wrong_variable_sort():
    with pytest.raises(md.SortError):
        fo.standard_translation(md.UConst(), V)


def test_second_order_closes_predicates():
    f = fo.second_order_translation(md.pp(md.PVar("P")))
    assert isinstance(f, fo.SOForall) and f.pred == "P"
    assert isinstance(f.body, fo.Forall) and not fo.free_vars(f)


FO_SORTS = {"I": ("1", "d"), "U": ("1",), "R": ("1", "1", "1"), "T": ("d", "1", "d"),
            "S": ("d", "d", "1"), "R'": ("d", "1", "1"), "T'": ("1", "1", "d"),
            "S'": ("1", "d", "1")}


def fo_sorts_ok(f):
    for g in fo.walk(f):
        if isinstance(g, fo.Atom):
            assert tuple(a.sort for a in g.args) == FO_SORTS[g.rel], g
        elif isinstance(g, (fo.Leq, fo.Eq)):
            assert g.left.sort == g.right.sort
    return True


@given(object_formulas())
@settings(max_examples=100, deadline=None)
def test_standard_translation_sorts(phi):
    for style in ("diamond", "rspoon"):
        b, c = md.translate(phi, style)
        assert fo_sorts_ok(fo.standard_translation(b, fo.FVar("x", SORT1)))
        assert fo_sorts_ok(fo.standard_translation(c, fo.FVar("y", SORTD)))


def test_parse_fo_unicode_and_ascii_agree():
    a = fo.parse_fo("forall x. exists y. (I(x,y) & ~(x = x))")
    b = fo.parse_fo("∀x∃y(I(x,y) ∧ ¬x=x)")
    assert a == b
    assert fo.format_fo(a) == "∀x∃y(I(x,y) ∧ ¬x=x)"


def test_parse_fo_sort_inference():
    f = fo.parse_fo("forall x v. T'(x,x,v)")
    used = {v for g in fo.walk(f) for v in fo.term_vars(g)}
    assert used == {fo.FVar("x", SORT1), fo.FVar("v", SORTD)}


def test_parse_fo_sort_clash():
    with pytest.raises(ParseError):
        fo.parse_fo("forall x. I(x,x)")


def test_parse_fo_annotation():
    f = fo.parse_fo("exists w:d. w <= w")
    assert f.var == fo.FVar("w", SORTD)


def test_exchange_normal_form():
    f = fo.parse_fo("forall x u z. (R(x,u,z) -> R(x,z,u))")
    assert fo.normal_string(f) == "∀x0∀x1∀x2(R(x0,x1,x2) → R(x0,x2,x1))"


def test_normal_form_ignores_bound_names():
    a = fo.parse_fo("forall a b c. (R(a,b,c) -> c <= a)")
    b = fo.parse_fo("forall x u z. (R(x,u,z) -> z <= x)")
    assert fo.equivalent_by_normal_form(a, b)


def test_normal_form_pulls_existentials_out_of_antecedents():
    a = fo.parse_fo("forall x. ((exists u. R(x,u,u)) -> x <= x)")
    b = fo.parse_fo("forall x u. (R(x,u,u) -> x <= x)")
    assert fo.equivalent_by_normal_form(a, b)


def test_check_sorts_accepts_translations():
    b, _ = md.translate(ob.parse_formula("p * q -> p"))
    fo.check_sorts(fo.standard_translation(b, fo.FVar("x", SORT1)))


@pytest.mark.parametrize("parse,text,pos", [(md.parse_modal, "P  $", 3),
                                            (fo.parse_fo, "forall x. x <= x  $", 18)])
def test_other_parsers_report_the_bad_character(parse, text, pos):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.position == pos
