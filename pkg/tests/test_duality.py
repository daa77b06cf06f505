import itertools

import pytest

from nlogic.acceptance import FIXTURE_ALGEBRAS, load_algebra
from nlogic.axioms import check_axiom
from nlogic.duality import (canonical_frame, class_for, pi_closed_open, representation,
                            verify_canonical_class, verify_canonical_extension,
                            verify_embedding, verify_pi_extension)
from nlogic.errors import SignatureMismatch
from nlogic.frames import SORT1, SORTD, bits, implication, product
from nlogic.order import point_arrow, point_product


def members(cf, sort, i):
    return cf.filters[i] if sort == SORT1 else cf.ideals[i]


def test_two_chain_incidence(canon):
    cf = canon("bool2")
    fr = cf.frame
    assert fr.size(SORT1) == fr.size(SORTD) == 2
    pairs = {(frozenset(cf.filters[x]), frozenset(cf.ideals[y])) for x, y in fr.incidence}
    assert pairs == {(frozenset({"1"}), frozenset({"0"}))}


@pytest.mark.parametrize("name", FIXTURE_ALGEBRAS)
def test_incidence_is_disjointness(canon, name):
    cf = canon(name)
    for x, y in itertools.product(range(len(cf.filters)), range(len(cf.ideals))):
        assert cf.frame.incident(x, y) == (not cf.filters[x] & cf.ideals[y])


@pytest.mark.parametrize("name", FIXTURE_ALGEBRAS)
def test_t_is_point_arrow(canon, name):
    # yTxv iff x |> v is contained in y, by double enumeration
    cf = canon(name)
    alg, t = cf.alg, cf.frame.rel("T").tuples
    for y, x, v in itertools.product(range(len(cf.ideals)), range(len(cf.filters)),
                                     range(len(cf.ideals))):
        inside = point_arrow(alg, cf.filters[x], cf.ideals[v]) <= cf.ideals[y]
        assert ((y, x, v) in t) == inside


@pytest.mark.parametrize("name", ["bool2_lambek", "chain3_lambek"])
def test_r_is_point_product(canon, name):
    cf = canon(name)
    r = cf.frame.rel("R").tuples
    for u, x, z in itertools.product(range(len(cf.filters)), repeat=3):
        inside = point_product(cf.alg, cf.filters[x], cf.filters[z]) <= cf.filters[u]
        assert ((u, x, z) in r) == inside


@pytest.mark.parametrize("name", ["bool2_lambek", "chain3_lambek"])
def test_closed_product_of_closed_elements(canon, name):
    fr = canon(name).frame
    for x, z in itertools.product(range(fr.size(SORT1)), repeat=2):
        assert product(fr, fr.gamma(SORT1, x), fr.gamma(SORT1, z)) == fr.section("R", (x, z))


@pytest.mark.parametrize("name", ["bool2_lambek", "chain3_lambek"])
def test_res_in_canonical_lambek_frames(canon, name):
    assert check_axiom(canon(name).frame, "RES").passed


def test_unit_is_filters_containing_unit(canon):
    cf = canon("chain3")
    expected = sum(1 << i for i, f in enumerate(cf.filters) if "1" in f)
    assert cf.frame.unit == expected


def test_lambek_signature_needs_product(alg):
    with pytest.raises(SignatureMismatch):
        canonical_frame(alg("chain3"), "lambek")


def test_lattice_signature_needs_lattice(alg):
    with pytest.raises(SignatureMismatch):
        canonical_frame(alg("vposet"), "lattice")


@pytest.mark.parametrize("name", FIXTURE_ALGEBRAS)
def test_representation_maps(canon, name):
    cf = canon(name)
    fr, a = cf.frame, cf.alg
    rep = representation(cf)
    assert rep.alpha[a.top] == fr.full(SORT1)
    for e in a.carrier:
        assert fr.is_stable(SORT1, rep.alpha[e]) and fr.is_stable(SORTD, rep.eta[e])
        assert fr.prime(SORT1, rep.alpha[e]) == rep.eta[e]
        # alpha(a) is the set of filters containing a, the principal upset of x_a
        assert rep.alpha[e] == sum(1 << i for i, f in enumerate(cf.filters) if e in f)
        assert rep.alpha[e] == fr.gamma(SORT1, cf.filter_index(a.up(e)))


def test_three_chain_alpha(canon):
    cf = canon("chain3")
    rep = representation(cf)
    names = set(cf.frame.name_set(SORT1, rep.alpha["a"]))
    contents = {frozenset(cf.filters[cf.frame.w1.index(n)]) for n in names}
    assert contents == {frozenset({"a", "1"}), frozenset({"0", "a", "1"})}
    assert rep.alpha[cf.alg.imp["a", "0"]] == rep.alpha["0"]


def test_two_chain_alpha_zero(canon):
    cf = canon("bool2")
    rep = representation(cf)
    whole = cf.filter_index(frozenset({"0", "1"}))
    assert rep.alpha["0"] == 1 << whole
    assert rep.alpha[cf.alg.imp["1", "0"]] == rep.alpha["0"]


@pytest.mark.parametrize("name", FIXTURE_ALGEBRAS)
def test_embedding(canon, name):
    rep = verify_embedding(canon(name))
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("name", FIXTURE_ALGEBRAS)
def test_canonical_extension(canon, name):
    rep = verify_canonical_extension(canon(name))
    assert rep.passed, rep.failures()


def test_compactness_example(canon):
    cf = canon("chain3")
    fr = cf.frame
    x = cf.filter_index(frozenset({"a", "1"}))
    y = cf.ideal_index(frozenset({"0"}))
    assert not cf.filters[x] & cf.ideals[y]
    # Γx is not below the open element of y
    assert fr.gamma(SORT1, x) & ~fr.prime(SORTD, 1 << y)


@pytest.mark.parametrize("name", ["chain3", "diamond", "bool2", "vposet"])
def test_pi_extension(canon, name):
    rep = verify_pi_extension(canon(name))
    assert rep.passed, rep.failures()


def test_pi_principal_pairs(canon):
    cf = canon("chain3")
    a = cf.alg
    rep = representation(cf)
    for p, q in itertools.product(a.carrier, repeat=2):
        i, j = cf.filter_index(a.up(p)), cf.ideal_index(a.down(q))
        assert pi_closed_open(cf, i, j) == rep.alpha[a.imp[p, q]]


def test_pi_full_table(canon):
    cf = canon("chain3")
    fr = cf.frame
    for a_, c in itertools.product(fr.stable_sets(SORT1), repeat=2):
        meet = fr.full(SORT1)
        for x in bits(a_):
            for y in bits(fr.prime(SORT1, c)):
                meet &= pi_closed_open(cf, x, y)
        assert meet == implication(fr, a_, c)


@pytest.mark.parametrize("name,expected", [("vposet", "PU"), ("chain3", "L"), ("bool2_lambek", "LK_*")])
def test_class_for(canon, name, expected):
    assert class_for(canon(name)) == expected


@pytest.mark.parametrize("name,sig,cls", [("chain3", "semilattice", "S"),
                                          ("diamond", "lattice", "L"),
                                          ("vposet", "poset", "PU"),
                                          ("chain3", "poset", "PUl_*"),
                                          ("bool2_lambek", "lambek", "LK"),
                                          ("bool2_lambek", "lambek", "LK*"),
                                          ("chain3_lambek", "lambek", "LK_*")])
def test_canonical_class(canon, name, sig, cls):
    rep = verify_canonical_class(canon(name, sig), cls)
    assert rep.passed, rep.failures()


def test_structural_axioms_on_boolean_lambek(canon):
    cf = canon("bool2_lambek")
    rep = verify_canonical_class(cf)
    ids = {r.id for r in rep.records}
    assert {"exchange", "contraction", "weakening", "point-association"} <= ids
    fr = cf.frame
    r = fr.rel("R").tuples
    assert all((x, x, x) in r for x in range(fr.size(SORT1)))
    assert all(fr.le(SORT1, z, x) for x, u, z in r)
    assert all((x, z, u) in r for x, u, z in r)


def test_sidecar_lists_every_point(canon):
    cf = canon("diamond")
    lines = cf.sidecar().splitlines()
    assert len(lines) == cf.frame.size(SORT1) + cf.frame.size(SORTD)
