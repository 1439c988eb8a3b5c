import pytest

from dgtannaka.coalg import check_coalgebra, check_comodule, cofree_comodule, trivial_comodule
from dgtannaka.dgcat import DgCategory, validate_category, validate_module
from dgtannaka.examples import BUNDLED, a2_quiver, dual_numbers, one_arrow, truncated_poly, z2_group
from dgtannaka.gradedlinalg import QQ, check_complex, cohomology
from dgtannaka.tannaka import (FiniteModule, HomModule, TannakaError, TiltingLeftModule, box_finite, cech_dims,
                               check_universal_comonoid, compact_subcoalgebra, compare_models, cone,
                               counit_check, counit_contraction_check, keller_contraction_check, keller_model,
                               lax_structure_map, level_dims, module_hom_complex, predual, representable,
                               string_closure, tannakian_dual, tensor_finite, tensor_with_P, tilting_module,
                               universal_coalgebra)

GOOD = [n for n in BUNDLED if n != "corrupted"]


def mixed_category():
    """X, Y with a degree-0 arrow z: X -> Y and degree-1 arrows, so A0 is not semisimple."""
    mors = [("idX", "X", "X", 0), ("idY", "Y", "Y", 0), ("z", "X", "Y", 0), ("f", "Y", "X", 1),
            ("g", "X", "X", 1), ("h", "Y", "Y", 1), ("k", "X", "Y", 1)]
    prods = {("f", "z"): {"g": 1}, ("z", "f"): {"h": 1}, ("z", "g"): {"k": 1}, ("h", "z"): {"k": 1}}
    return DgCategory(QQ, ["X", "Y"], mors, {}, prods, {"X": "idX", "Y": "idY"}, 2, "mixed")


# ---------------------------------------------------------------- the dual and the tilting module


def test_dual_numbers_dual_is_cofree_on_one_generator():
    b = dual_numbers()
    C = tannakian_dual(b.category, b.functor, 6)
    degs = list(range(-6, 1))
    assert C.complex.dims() == {j: 1 for j in degs}
    assert all(not C.complex.d_of(x) for x in C.labels())
    assert cohomology(C.complex, degs).dims == {j: 1 for j in degs}
    # Delta xi^n = sum xi^i (x) xi^(n-i), each with coefficient +-1
    for x in C.labels():
        n = x[0]
        assert sorted((y[0], z[0]) for y, z in C.delta_of(x)) == [(i, n - i) for i in range(n + 1)]
        assert all(abs(c) == 1 for c in C.delta_of(x).values())


@pytest.mark.parametrize("name", GOOD)
def test_tilting_module_comodules_and_certificates(name):
    b = BUNDLED[name]()
    A = b.category
    nil = name in ("a2_quiver",)
    t = tilting_module(A, b.functor, None if nil else 4, nilpotence=nil)
    assert check_comodule(t.P) == [] and check_comodule(t.Q) == []
    assert validate_module(TiltingLeftModule(t)) == []
    for key, cert in t.certificates.items():
        assert cert.ok, (key, cert.to_json())


def test_tilting_windows():
    b = dual_numbers()
    t = tilting_module(b.category, b.functor, 4)
    assert t.certificates[("P", "*")].window == (-3, 1)
    t = tilting_module(b.category, b.functor, 4, window=(-2, 0))
    assert t.certificates[("P", "*")].window == (-2, 0)


def test_a2_needs_nilpotence_for_an_exact_model():
    b = a2_quiver()
    C = tannakian_dual(b.category, b.functor, None, nilpotence=True)
    assert C.complex.dims() == {0: 3}
    assert check_coalgebra(C) == []
    Crel = tannakian_dual(b.category, b.functor, relative=True, nilpotence=True)
    assert sorted(Crel.render(x) for x in Crel.labels()) == ["0:X|x*||x", "0:Y|y*||y", "1:X>Y|x*|f|y"]


# ---------------------------------------------------------------- the hand-built model for k[e]


def test_keller_model():
    b = dual_numbers()
    K = keller_model(b.category, b.functor, 3)
    assert check_complex(K.D) == []
    assert K.D.dims() == {0: 4, -1: 4, -2: 4, -3: 4}
    # d xi = e (x) 1 - 1 (x) e
    assert K.D.d_of(("1", 1, "1")) == {("e", 0, "1"): 1, ("1", 0, "e"): -1}
    assert check_coalgebra(K.C) == [] and check_comodule(K.P) == []
    assert K.P.complex.d_of(("1", 1, "1")) == {("e", 0, "1"): 1}
    xi = lambda n: ("1", n, "1")
    assert K.C.delta_of(xi(3)) == {(xi(i), xi(3 - i)): 1 for i in range(4)}
    assert keller_contraction_check(K, b.category)["ok"]
    with pytest.raises(TannakaError):
        keller_model(z2_group().category, z2_group().functor, 2)


def test_keller_model_against_hochschild():
    b = dual_numbers()
    K = keller_model(b.category, b.functor, 5)
    t = tilting_module(b.category, b.functor, 5)
    cert = compare_models(K, t, (-6, 2))
    assert cert.ok and cert.window == (-6, 2)
    assert cert.dims_source == {-4: 1, -3: 1, -2: 1, -1: 1, 0: 1, 1: 0, 2: 0}


# ---------------------------------------------------------------- the universal coalgebra D


@pytest.mark.parametrize("name", GOOD)
def test_contraction_and_comonoid(name):
    A = BUNDLED[name]().category
    D = universal_coalgebra(A, 4)
    r = counit_contraction_check(D)
    assert r["ok"] and r["verified_levels"] == [0, 3] and r["checked"] > 0
    assert check_universal_comonoid(D) == []


@pytest.mark.parametrize("relative", [False, True])
def test_comonoid_over_a_non_semisimple_degree_zero_part(relative):
    A = mixed_category()
    assert validate_category(A) == []
    D = universal_coalgebra(A, 4, relative=relative)
    assert counit_contraction_check(D)["ok"]
    assert check_universal_comonoid(D) == []


@pytest.mark.parametrize("build", [lambda: a2_quiver().category, lambda: truncated_poly(3).category,
                                   lambda: dual_numbers().category, mixed_category])
def test_relative_levels_match_cech_count(build):
    A = build()
    nil = A.name == "A2"
    D = universal_coalgebra(A, None if nil else 3, relative=True, nilpotence=nil)
    for n in range(min(3, D.model.cutoff) + 1):
        assert level_dims(D, n) == {g: c for g, c in cech_dims(A, n).items() if c}


def test_compact_subcoalgebras():
    A = dual_numbers().category
    D = universal_coalgebra(A, 4)
    V = {("*", "*"): ["e"]}
    assert string_closure(A, V, 1, ["*"]) == {("*", "*"): [{"e": 1}]}
    subs = [compact_subcoalgebra(D, ["*"], n, V) for n in range(4)]
    for n, c in enumerate(subs):
        assert c.ok and c.dims == {i: 4 for i in range(n + 1)}
    assert subs[3].contains_all(subs[2]) and not subs[2].contains_all(subs[3])
    B = a2_quiver().category
    D = universal_coalgebra(B, None, nilpotence=True)
    assert compact_subcoalgebra(D, ["X", "Y"], 2, {("Y", "X"): ["f"]}).dims == {0: 4, 1: 1}
    assert compact_subcoalgebra(D, ["X"], 2, {("Y", "X"): ["f"]}).dims == {0: 2, 1: 0}
    with pytest.raises(TannakaError):
        compact_subcoalgebra(D, ["X"], 2, {("X", "Y"): ["f"]})


# ---------------------------------------------------------------- finite modules


def test_finite_modules_and_preduals():
    b = dual_numbers()
    A, om = b.category, b.functor
    t = tilting_module(A, om, 4)
    for M, h in ((representable(A, "*"), {0: 1}), (cone(A, "*", "*", "e"), {-1: 1, 0: 1}),
                 (FiniteModule(A, [], {}), {})):
        assert validate_module(M.module()) == []
        Q = tensor_with_P(M, t)
        assert check_comodule(Q) == []
        degs = range(-3, 2)
        want = {j: h.get(j, 0) for j in degs}
        assert cohomology(Q.complex, degs).dims == want
        assert cohomology(tensor_finite(M, om), degs).dims == want
        K = predual(M)
        assert K.side == "left" and validate_module(K.module()) == []
        assert cohomology(module_hom_complex(K.module(), om, range(-3, 3)), degs).dims == want


def test_predual_pairing_on_a2_with_shifts():
    b = a2_quiver()
    A, om = b.category, b.functor
    for n in (1, 2, -1):
        M = FiniteModule(A, [("a", "Y", n), ("b", "X", n), ("c", "Y", n + 3)], {("b", "a"): {"f": 1}})
        assert validate_module(M.module()) == []
        H = module_hom_complex(predual(M).module(), om, range(-8, 8))
        assert cohomology(H, range(-8, 8)).dims == cohomology(tensor_finite(M, om), range(-8, 8)).dims


# ---------------------------------------------------------------- counit check


@pytest.mark.parametrize("kind", ["k", "C"])
def test_counit_check_on_dual_numbers(kind):
    b = dual_numbers()
    t = tilting_module(b.category, b.functor, 3)
    N = trivial_comodule(t.C, [x for x in t.C.labels() if x[0] == 0][0]) if kind == "k" else cofree_comodule(t.C)
    r = counit_check(N, t, 2, (-2, 2))
    assert r.certificate.ok
    assert r.certificate.window == (-2, 0)
    assert r.certificate.notes and "requested [-2, 2]" in r.certificate.notes[0]
    assert r.map.check() == []
    assert validate_module(HomModule(r.hom, TiltingLeftModule(t))) == []


def test_counit_check_refuses_unbounded_weights():
    b = one_arrow()
    t = tilting_module(b.category, b.functor, 3)
    N = trivial_comodule(t.C, [x for x in t.C.labels() if x[0] == 0][0])
    with pytest.raises(TannakaError, match="weight"):
        counit_check(N, t, 2, (-2, 2))
    b = dual_numbers()
    t = tilting_module(b.category, b.functor, 3)
    N = cofree_comodule(t.C)
    with pytest.raises(TannakaError, match="empty"):
        counit_check(N, t, 1, (3, 4))
    with pytest.raises(TannakaError, match="not pure"):
        counit_check(N, t, 2, (-2, 2), weights={"e": 3})


def test_counit_check_on_a2_via_nilpotence():
    b = a2_quiver()
    t = tilting_module(b.category, b.functor, None, nilpotence=True)
    N = cofree_comodule(t.C)
    r = counit_check(N, t, 2, (-2, 2))
    assert r.certificate.ok


# ---------------------------------------------------------------- monoidal structure


def test_lax_structure_maps():
    b = dual_numbers()
    A, om, mon = b.category, b.functor, b.monoidal
    t = tilting_module(A, om, 4)
    c = cone(A, "*", "*", "e")
    for M1, M2, dims in ((representable(A, "*"), representable(A, "*"), {0: 1}),
                         (c, representable(A, "*"), {-1: 1, 0: 1}), (c, c, {-2: 1, -1: 2, 0: 1})):
        assert validate_module(box_finite(M1, M2, mon).module()) == []
        f, cert = lax_structure_map(t, mon, M1, M2, (-3, 2))
        assert f.check() == []
        assert cert.ok
        assert {j: v for j, v in cert.dims_target.items() if v} == dims
    b = z2_group()
    t = tilting_module(b.category, b.functor, 4)
    f, cert = lax_structure_map(t, b.monoidal, representable(b.category, "s"), representable(b.category, "s"))
    assert cert.ok
