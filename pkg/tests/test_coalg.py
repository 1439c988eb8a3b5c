import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dgtannaka.coalg import (CoalgebraError, Comodule, DgCoalgebra, antipode_report, certify_resolution,
                             check_bialgebra, check_coalgebra, check_comodule, coalgebra_from_json,
                             coalgebra_to_json, cobar_coresolution, cofree_comodule, cofree_hom_complex, cofree_left,
                             comodule_hom_complex, cotensor, shuffles, trivial_comodule)
from dgtannaka.examples import BUNDLED, dual_numbers
from dgtannaka.gradedlinalg import QQ, Complex, check_complex, cohomology
from dgtannaka.tannaka import (check_involution, coalgebra_from_bar, compare_cyclic_and_bar, involution,
                               monoidal_bialgebra, tannakian_dual)
from oracles import gaussian_binomial_at_minus_one, shuffle_sign, signed_shuffle_count

GOOD = [n for n in BUNDLED if n != "corrupted"]


def divided(N: int, deg: int = -1) -> DgCoalgebra:
    """x_0..x_N with delta x_n = sum x_i (x) x_{n-i}, |x_n| = n deg."""
    basis: dict = {}
    for n in range(N + 1):
        basis.setdefault(n * deg, []).append(("x", n))
    delta = {("x", n): {(("x", i), ("x", n - i)): QQ(1) for i in range(n + 1)} for n in range(N + 1)}
    return DgCoalgebra(Complex(QQ, basis, {}), delta, {("x", 0): QQ(1)}, "div")


# ---------------------------------------------------------------- axioms


@pytest.mark.parametrize("deg", [-1, 0, 2])
def test_divided_power_coalgebra(deg):
    assert check_coalgebra(divided(4, deg)) == []


def test_sign_flip_is_detected():
    C = divided(3)
    C.delta[("x", 3)][(("x", 1), ("x", 2))] = QQ(-1)
    rep = check_coalgebra(C)
    assert any("coassociativity" in r for r in rep)


def test_counit_and_chain_map_failures():
    C = divided(2)
    C.counit[("x", 1)] = QQ(1)
    assert any("counit" in r for r in check_coalgebra(C))
    # d x_1 = x_0 with delta untouched is not a coderivation
    cx = Complex(QQ, {0: [("x", 0)], -1: [("x", 1)], -2: [("x", 2)]}, {("x", 1): {("x", 0): QQ(1)}})
    C = DgCoalgebra(cx, divided(2).delta, {("x", 0): QQ(1)})
    assert any("chain map" in r for r in check_coalgebra(C))


@pytest.mark.parametrize("name", GOOD)
@pytest.mark.parametrize("relative", [False, True])
def test_tannakian_duals_are_coalgebras(name, relative):
    b = BUNDLED[name]()
    C = tannakian_dual(b.category, b.functor, 3, relative=relative)
    assert check_complex(C.complex) == []
    assert check_coalgebra(C) == []


@pytest.mark.parametrize("name", GOOD)
def test_cyclic_and_bar_forms_agree(name):
    b = BUNDLED[name]()
    C = tannakian_dual(b.category, b.functor, 3)
    Cbar = coalgebra_from_bar(C.model, b.functor)
    assert check_coalgebra(Cbar) == []
    assert compare_cyclic_and_bar(C, Cbar, b.category, b.functor) == []


def test_json_round_trip():
    C = divided(3)
    doc = json.loads(json.dumps(coalgebra_to_json(C, render=lambda x: f"x{x[1]}")))
    C2 = coalgebra_from_json(doc)
    assert check_coalgebra(C2) == []
    assert C2.complex.dims() == C.complex.dims()


# ---------------------------------------------------------------- comodules


def test_comodules_and_cotensor():
    C = divided(4)
    k = trivial_comodule(C, ("x", 0))
    for M in (k, cofree_comodule(C), cofree_left(C), trivial_comodule(C, ("x", 0), "left")):
        assert check_comodule(M) == []
    # N cotensor C = N
    assert cotensor(k, cofree_left(C)).dims() == {0: 1}
    assert cotensor(cofree_comodule(C), cofree_left(C)).dims() == C.complex.dims()
    with pytest.raises(CoalgebraError):
        cotensor(cofree_left(C), cofree_left(C))
    with pytest.raises(CoalgebraError):
        Comodule(C.complex, C, {}, "middle")


def test_broken_coaction_is_detected():
    C = divided(2)
    mu = {("x", n): {(("x", 0), ("x", n)): QQ(1)} for n in range(3)}
    assert check_comodule(Comodule(C.complex, C, mu, "right"))


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_cobar_coresolution_certified_below_depth(depth):
    C = divided(3, 0)
    for M in (trivial_comodule(C, ("x", 0)), cofree_comodule(C)):
        R = cobar_coresolution(M, depth)
        assert check_complex(R.comodule.complex) == []
        assert check_comodule(R.comodule) == []
        assert R.inclusion.check() == []
        cert = certify_resolution(R, (0, depth))
        assert all(cert.verdict[j] for j in range(depth))
        assert not cert.verdict[depth]
    with pytest.raises(CoalgebraError):
        cobar_coresolution(cofree_left(C), 1)


def test_comodule_homs():
    C = divided(4)
    k = trivial_comodule(C, ("x", 0))
    assert comodule_hom_complex(k, k, (-2, 2)).dims() == {0: 1}
    # comodule endomorphisms of the cofree comodule are C^dual
    assert comodule_hom_complex(cofree_comodule(C), cofree_comodule(C), (-1, 5)).dims() == {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}
    # Ext over the dual of k[t]/t^5 is one-dimensional in every degree, exact below the depth
    C = divided(4, 0)
    k = trivial_comodule(C, ("x", 0))
    H = cofree_hom_complex(k, cobar_coresolution(k, 3))
    assert check_complex(H) == []
    assert cohomology(H, [-1, 0, 1, 2]).dims == {-1: 0, 0: 1, 1: 1, 2: 1}


# ---------------------------------------------------------------- shuffles


@given(st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=25, deadline=None)
def test_shuffles_against_enumeration(p, q):
    sh = list(shuffles(p, q))
    assert len(sh) == comb(p + q, p)
    assert sum(s for _, _, s in sh) == signed_shuffle_count(p, q)
    for mu, nu, s in sh:
        perm = tuple(sorted(range(p + q), key=lambda a: (mu + nu)[a]))
        assert s == shuffle_sign([True] * (p + q), perm)


def test_oracles_agree_on_odd_shuffles():
    for n in range(7):
        for i in range(n + 1):
            assert signed_shuffle_count(i, n - i) == gaussian_binomial_at_minus_one(n, i)


def test_bialgebra_of_dual_numbers():
    b = dual_numbers()
    B = monoidal_bialgebra(b.category, b.functor, b.monoidal, 4)
    assert check_bialgebra(B) == []
    assert check_bialgebra(divided(2)) == ["no product"]


def test_broken_product_sign_is_detected():
    b = dual_numbers()
    B = monoidal_bialgebra(b.category, b.functor, b.monoidal, 3,
                           extra_sign=lambda u, v: -1 if len(u[0]) == 2 else 1)
    assert check_bialgebra(B)


def test_antipode_on_dual_numbers():
    b = dual_numbers()
    B = monoidal_bialgebra(b.category, b.functor, b.monoidal, 5)
    rho = involution(B, b.monoidal, b.functor)
    assert check_involution(B, rho) == []
    r = antipode_report(B, rho)
    assert r["h0_ok"] and r["h0_dim"] == 1
