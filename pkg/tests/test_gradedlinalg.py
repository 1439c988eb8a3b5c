from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgtannaka.gradedlinalg import (GF, QQ, ChainMap, Complex, ComplexError, Echelon, FieldError, FieldSpec, Matrix,
                                    Mod, check_complex, cohomology, complex_from_json, complex_to_json, direct_sum,
                                    identity_map, induced_map_on_cohomology, kernel_of_map, rank, rref,
                                    tensor_complexes)
from dgtannaka.gradedlinalg.bicomplex import Bicomplex, LevelSupport, TrustedWindow, total_complex
from oracles import complex_cohomology, dense_rank, dense_rank_mod

small = st.integers(-3, 3)


def matrices(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


# ---------------------------------------------------------------- fields


def test_mod_arithmetic():
    F = GF(7)
    a, b = F(3), F(5)
    assert a + b == 1
    assert a * b == 1
    assert a / b == 3 * 3
    assert -a == 4
    assert F(Fraction(1, 2)) * 2 == 1
    with pytest.raises(ZeroDivisionError):
        a / F(0)


def test_field_specs():
    assert FieldSpec.from_json("Q") == QQ
    assert FieldSpec.from_json({"Fp": 5}) == GF(5)
    assert FieldSpec.from_json("Fp:11").p == 11
    with pytest.raises(FieldError):
        GF(9)
    with pytest.raises(FieldError):
        FieldSpec.from_json("R")
    with pytest.raises(FieldError):
        Mod(1, 5) + Mod(1, 7)
    assert QQ.fmt(Fraction(-3, 4)) == "-3/4"


# ---------------------------------------------------------------- elimination


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_matches_dense_oracle(rows):
    m = Matrix.from_dense(rows, QQ)
    assert rank(m, QQ) == dense_rank(rows)


@given(matrices(), st.sampled_from([2, 3, 5]))
@settings(max_examples=60, deadline=None)
def test_rank_mod_p_matches_oracle(rows, p):
    m = Matrix.from_dense(rows, GF(p))
    assert rank(m, GF(p)) == dense_rank_mod(rows, p)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_are_killed_and_independent(rows):
    m = Matrix.from_dense(rows, QQ)
    r = rref(m, QQ)
    assert len(r.kernel) == m.ncols - r.rank
    for v in r.kernel:
        for row in rows:
            assert sum(Fraction(row[j]) * c for j, c in v.items()) == 0
    dense = [[v.get(j, 0) for j in range(m.ncols)] for v in r.kernel]
    assert dense_rank(dense) == len(r.kernel) if dense else True


def test_kernel_of_map_columns():
    cols = [{"a": 1}, {"a": 2}, {"b": 1}]
    ker = kernel_of_map(cols, None, QQ)
    assert len(ker) == 1
    v = ker[0]
    assert v.get(0, 0) + 2 * v.get(1, 0) == 0 and v.get(2, 0) == 0


def test_echelon_tracking():
    e = Echelon(track=True)
    assert e.add({"x": Fraction(1), "y": Fraction(1)})
    assert e.add({"y": Fraction(1)})
    assert not e.add({"x": Fraction(2), "y": Fraction(3)})
    coeffs = e.express({"x": Fraction(1)})
    assert coeffs == {0: 1, 1: -1}
    assert e.express({"z": Fraction(1)}) is None


# ---------------------------------------------------------------- complexes


def two_term(rows):
    basis = {0: [("s", j) for j in range(len(rows[0]))], 1: [("t", i) for i in range(len(rows))]}
    d = {}
    for j in range(len(rows[0])):
        img = {("t", i): QQ(rows[i][j]) for i in range(len(rows)) if rows[i][j]}
        if img:
            d[("s", j)] = img
    return Complex(QQ, basis, d)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_cohomology_matches_oracle(rows):
    c = two_term(rows)
    assert cohomology(c, [-1, 0, 1, 2]).dims == complex_cohomology(c, [-1, 0, 1, 2])


@given(matrices(4, 4), matrices(4, 4))
@settings(max_examples=40, deadline=None)
def test_kunneth_and_euler(r1, r2):
    a, b = two_term(r1), two_term(r2)
    t = tensor_complexes(a, b)
    assert check_complex(t) == []
    ha, hb = cohomology(a, [0, 1]).dims, cohomology(b, [0, 1]).dims
    ht = cohomology(t, [0, 1, 2]).dims
    for n in (0, 1, 2):
        assert ht[n] == sum(ha[i] * hb[n - i] for i in (0, 1) if n - i in (0, 1))
    assert t.euler_characteristic() == a.euler_characteristic() * b.euler_characteristic()


def test_shift_and_sum():
    c = two_term([[1, 0], [0, 0]])
    s = c.shift(1)
    assert s.dims() == {-1: 2, 0: 2}
    assert check_complex(s) == []
    assert cohomology(s, [-1, 0]).dims == {-1: 1, 0: 1}
    ds = direct_sum([c, c], QQ)
    assert cohomology(ds, [0, 1]).dims == {0: 2, 1: 2}


def test_bad_complexes_rejected():
    with pytest.raises(ComplexError):
        Complex(QQ, {0: ["a"], 1: ["a"]})
    with pytest.raises(ComplexError):
        Complex(QQ, {0: ["a"], 2: ["b"]}, {"a": {"b": 1}})
    c = Complex(QQ, {0: ["a"], 1: ["b"], 2: ["c"]}, {"a": {"b": QQ(1)}, "b": {"c": QQ(1)}})
    assert [r["label"] for r in check_complex(c)] == ["a"]


def test_chain_maps_and_certificates():
    c = two_term([[1, 0], [0, 0]])
    f = identity_map(c)
    assert f.check() == []
    cert = induced_map_on_cohomology(f, [0, 1])
    assert cert.ok and cert.induced_ranks == {0: 1, 1: 1}
    zero = ChainMap(c, c, {})
    assert not induced_map_on_cohomology(zero, [0, 1]).ok
    # a map that is not a chain map is reported
    g = ChainMap(c, c, {("s", 1): {("s", 0): QQ(1)}})
    assert g.check() == [("s", 1)]
    doc = cert.to_json()
    assert doc["window"] == [0, 1] and doc["scope"] == "window-local verdict"


def test_complex_json_round_trip():
    c = Complex(QQ, {0: ["a", "b"], 1: ["c"]}, {"a": {"c": QQ(Fraction(2, 3))}})
    doc = complex_to_json(c)
    c2 = complex_from_json(doc)
    assert c2.dims() == c.dims() and c2.d == c.d
    with pytest.raises(ComplexError):
        complex_from_json({"basis": 3})


# ---------------------------------------------------------------- bicomplexes


def test_total_complex_of_a_bicomplex():
    # level 0: k.a in degree 0; level 1: k.b in degree 0 mapping to a
    l0 = Complex(QQ, {0: ["a"]})
    l1 = Complex(QQ, {0: ["b"]})
    b = Bicomplex(QQ, [l0, l1], [{}, {"b": {"a": QQ(1)}}], LevelSupport(0, 0, 0, 0))
    assert b.check() == []
    tot, win = total_complex(b)
    assert tot.dims() == {-1: 1, 0: 1}
    assert cohomology(tot, [-1, 0]).dims == {-1: 0, 0: 0}
    assert -1 not in win and 0 in win
    with pytest.raises(ComplexError):
        total_complex(b, 5)


def test_trusted_windows():
    w = TrustedWindow(-3, None)
    assert 5 in w and -4 not in w
    assert TrustedWindow(hole=(0, 2)).clip(-1, 3) == [-1, 3]
    assert TrustedWindow(empty=True).to_json() == "empty"
    # levels spread to the left by one per level: cutoff 4 leaves level 5 in degree -5
    sup = LevelSupport(0, 0, 0, 0)
    win = sup.trusted_window(4)
    assert win.lo == -3 and win.hi is None
