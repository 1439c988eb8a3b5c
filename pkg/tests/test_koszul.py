import json

import pytest

from dgtannaka.coalg import check_coalgebra, coalgebra_from_json
from dgtannaka.dgcat import DgCategory, category_from_json, validate_category
from dgtannaka.examples import a2_quiver, dual_numbers, one_arrow
from dgtannaka.gradedlinalg import QQ, check_complex, cohomology
from dgtannaka.koszul import (KoszulError, bar_beta, bar_map, beta_star_to_json, beta_to_json, check_algebra_map,
                              check_conilpotent, cobar_beta_star, conilpotent_coalgebra, counit_check, counit_map,
                              counit_naturality, positive_algebra, reduced_part, tangent_space, unit_check,
                              unit_map, unit_naturality)
from dgtannaka.tannaka import tannakian_dual
from oracles import composable_strings


def one_cogenerator(deg: int = 1):
    return conilpotent_coalgebra(QQ, ["*"], [("x", "*", "*", deg)], {}, {}, name="kx")


def a2_dual_positive_part():
    b = a2_quiver()
    C = tannakian_dual(b.category, b.functor, relative=True, nilpotence=True)
    g = {X: next(x for x in C.labels() if x[0] == 0 and x[1][0] == (X,)) for X in ("X", "Y")}
    return reduced_part(C, g)


# ---------------------------------------------------------------- the bar construction


@pytest.mark.parametrize("build", [lambda: one_arrow().category, lambda: one_arrow(square=True).category,
                                   lambda: a2_quiver().category])
def test_bar_counts_strings_by_weight(build):
    A = build()
    P = positive_algebra(A)
    B = bar_beta(P, 5)
    assert check_conilpotent(B) == []
    assert check_complex(B.complex) == []
    arrows = [(a, A.src(a), A.tgt(a)) for a in P.positive()]
    want = 0
    for n in range(1, 6):
        want += sum(1 for s in composable_strings(arrows, n) if sum(P.weight[a[0]] for a in s) <= 5)
    assert len(B.labels()) == want


def test_tangent_spaces():
    B = bar_beta(positive_algebra(one_arrow(square=True).category), 5)
    assert sorted(B.render(x) for v in tangent_space(B) for x in v) == ["[s]", "[t]"]
    B = bar_beta(positive_algebra(a2_quiver().category), 3)
    assert [{B.render(x): c for x, c in v.items()} for v in tangent_space(B)] == [{"[f]": 1}]


def test_bar_of_the_exterior_algebra_is_cofree():
    # beta(k[t]/t^2), |t| = 1: one string [t|..|t] of degree 0 per length, d = 0
    B = bar_beta(positive_algebra(one_arrow().category), 5)
    assert B.complex.dims() == {0: 6}
    assert not any(B.complex.d_of(x) for x in B.labels())


def test_positive_algebra_rejections():
    with pytest.raises(KoszulError, match="degree 0"):
        positive_algebra(dual_numbers().category)
    with pytest.raises(KoszulError, match="weights"):
        positive_algebra(one_arrow(square=True).category, {"t": 1, "s": 1})
    with pytest.raises(KoszulError):
        conilpotent_coalgebra(QQ, ["*"], [("x", "*", "*", 1), ("y", "*", "*", 2)], {},
                              {"y": {("x", "x"): QQ(1)}})
    # weights on a category with d != 0 are required
    A = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("a", "*", "*", 1), ("b", "*", "*", 2)], {"a": {"b": 1}}, {},
                   {"*": "1"})
    with pytest.raises(KoszulError, match="weight grading"):
        positive_algebra(A)
    P = positive_algebra(A, {"a": 1, "b": 1})
    assert check_conilpotent(bar_beta(P, 3)) == []


# ---------------------------------------------------------------- cobar


def test_cobar_is_a_dg_category():
    for C in (one_cogenerator(), bar_beta(positive_algebra(one_arrow(square=True).category), 4),
              a2_dual_positive_part()):
        Bc = cobar_beta_star(C, 4)
        assert validate_category(Bc.cat) == []
        doc = json.loads(json.dumps(beta_star_to_json(Bc)))
        assert validate_category(category_from_json(doc)) == []


def test_cobar_of_one_cogenerator_is_polynomial():
    Bc = cobar_beta_star(one_cogenerator(), 4)
    assert {m: Bc.cat.deg(m) for m in Bc.cat.mor} == {"1_*": 0, "[x]": 2, "[x|x]": 4, "[x|x|x]": 6,
                                                      "[x|x|x|x]": 8}


# ---------------------------------------------------------------- unit and counit


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_unit_on_one_cogenerator(L):
    f, _, _ = unit_map(one_cogenerator(), L)
    assert f.check() == []
    cert = unit_check(one_cogenerator(), L, (0, 3))
    assert cert.ok and cert.dims_source == {0: 0, 1: 1, 2: 0, 3: 0}


@pytest.mark.parametrize("build", [lambda: one_arrow().category, lambda: one_arrow(square=True).category,
                                   lambda: a2_quiver().category])
def test_counit_certified(build):
    P = positive_algebra(build())
    f, _, _ = counit_map(P, 4)
    assert f.check() == []
    assert counit_check(P, 4, (0, 4)).ok


def test_unit_on_bar_constructions_and_a2_dual():
    for C in (bar_beta(positive_algebra(one_arrow(square=True).category), 5),
              bar_beta(positive_algebra(one_arrow().category), 4), a2_dual_positive_part()):
        assert check_conilpotent(C) == []
        assert unit_check(C, 4, (0, 3)).ok


def test_a2_dual_positive_part():
    C = a2_dual_positive_part()
    assert [C.render(x) for x in C.labels()] == ["1:X>Y|x*|f|y"]
    assert C.pairs[C.labels()[0]] == ("Y", "X")
    assert C.weight == {C.labels()[0]: 1}


def test_sign_flip_breaks_the_unit():
    C = bar_beta(positive_algebra(one_arrow(square=True).category), 4)
    s = next(x for x in C.labels() if C.render(x) == "[t|t]")
    C.coalg.delta[s] = {k: -c if k[0] in C.pairs and k[1] in C.pairs else c for k, c in C.coalg.delta[s].items()}
    assert check_conilpotent(C)
    f, _, _ = unit_map(C, 4)
    assert f.check()


def test_weight_cutoff_below_one():
    with pytest.raises(KoszulError, match="empty"):
        unit_check(one_cogenerator(), 0)
    with pytest.raises(KoszulError, match="empty"):
        counit_check(positive_algebra(one_arrow().category), 0)


# ---------------------------------------------------------------- functoriality


def test_naturality_of_the_counit():
    P = positive_algebra(one_arrow(square=True).category)
    Q = positive_algebra(one_arrow().category)
    f = {"t": {"t": QQ(1)}, "s": {}}
    assert check_algebra_map(P, Q, f) == []
    assert counit_naturality(P, Q, f, 4) == []
    scale = {"t": {"t": QQ(2)}, "s": {"s": QQ(4)}}
    assert check_algebra_map(P, P, scale) == []
    assert counit_naturality(P, P, scale, 4) == []
    assert check_algebra_map(P, P, {"t": {"t": QQ(2)}, "s": {"s": QQ(1)}})
    assert bar_map(bar_beta(P, 4), bar_beta(Q, 4), f).check() == []


def test_naturality_of_the_unit():
    C = one_cogenerator(0)
    D = bar_beta(positive_algebra(one_arrow().category), 4)
    t = next(x for x in D.labels() if D.render(x) == "[t]")
    assert unit_naturality(C, D, {"x": {t: QQ(1)}}, 4) == []


# ---------------------------------------------------------------- serialization


def test_beta_json_round_trip():
    B = bar_beta(positive_algebra(one_arrow(square=True).category), 4)
    doc = json.loads(json.dumps(beta_to_json(B)))
    C = coalgebra_from_json(doc)
    assert check_coalgebra(C) == []
    assert C.complex.dims() == B.complex.dims()
    assert cohomology(C.complex, range(0, 4)).dims == cohomology(B.complex, range(0, 4)).dims
