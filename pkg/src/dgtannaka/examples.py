"""Small bundled presentations used by the tests, the scripts and the CLI."""

from __future__ import annotations

from .dgcat import Bundle, DgCategory, FibreFunctor, MonoidalData, Morphism, category_to_json, functor_to_json
from .gradedlinalg import QQ, FieldSpec


def _one_object_algebra(name, gens, products, d=None, field=QQ, nilpotence=None):
    """One object '*', basis '1' plus ``gens`` [(name, degree)], products {(g, f): {t: c}}."""
    mors = [Morphism("1", "*", "*", 0)] + [Morphism(g, "*", "*", dg) for g, dg in gens]
    return DgCategory(field, ["*"], mors, d or {}, products, {"*": "1"}, nilpotence, name)


def trivial(field: FieldSpec = QQ) -> Bundle:
    A = _one_object_algebra("k", [], {}, field=field)
    omega = FibreFunctor(A, {"*": [("v", 0)]}, name="omega")
    mon = MonoidalData(A, {("*", "*"): "*"}, {}, "*", True, {("*", "*"): {("v", "v"): {"v": 1}}},
                       {"v": 1}, {"*": "*"}, {}, {"v": {("dual", "v"): 1}})
    return Bundle(A, omega, mon)


def dual_numbers(field: FieldSpec = QQ) -> Bundle:
    """k[e] with |e| = 0, e^2 = 0, augmentation fibre functor, monoidal via the product."""
    A = _one_object_algebra("dual_numbers", [("e", 0)], {}, field=field)
    omega = FibreFunctor(A, {"*": [("v", 0)]}, name="omega")
    mon = MonoidalData(A, {("*", "*"): "*"}, {("e", "1"): {"e": 1}, ("1", "e"): {"e": 1}}, "*", True,
                       {("*", "*"): {("v", "v"): {"v": 1}}}, {"v": 1}, {"*": "*"}, {"e": {"e": 1}},
                       {"v": {("dual", "v"): 1}})
    return Bundle(A, omega, mon)


def truncated_poly(n: int = 3, field: FieldSpec = QQ) -> Bundle:
    """k[x]/x^n with |x| = 0, augmentation, monoidal via the product."""
    gens = [(f"x{i}", 0) for i in range(1, n)]
    prods = {}
    for i in range(1, n):
        for j in range(1, n):
            if i + j < n:
                prods[(f"x{i}", f"x{j}")] = {f"x{i + j}": 1}
    A = _one_object_algebra(f"k[x]/x^{n}", gens, prods, field=field)
    omega = FibreFunctor(A, {"*": [("v", 0)]}, name="omega")
    tm = dict(prods)
    for i in range(1, n):
        tm[(f"x{i}", "1")] = {f"x{i}": 1}
        tm[("1", f"x{i}")] = {f"x{i}": 1}
    mon = MonoidalData(A, {("*", "*"): "*"}, tm, "*", True, {("*", "*"): {("v", "v"): {"v": 1}}}, {"v": 1},
                       {"*": "*"}, {g: {g: 1} for g, _ in gens}, {"v": {("dual", "v"): 1}})
    return Bundle(A, omega, mon)


def a2_quiver(field: FieldSpec = QQ) -> Bundle:
    """Objects X, Y and one degree-1 arrow f: Y -> X; omega(X) = omega(Y) = k.

    Nothing of positive degree leaves X, so bar strings stop at length one.
    """
    mors = [Morphism("idX", "X", "X", 0), Morphism("idY", "Y", "Y", 0), Morphism("f", "Y", "X", 1)]
    A = DgCategory(field, ["X", "Y"], mors, {}, {}, {"X": "idX", "Y": "idY"}, 2, "A2")
    omega = FibreFunctor(A, {"X": [("x", 0)], "Y": [("y", 0)]}, name="omega")
    return Bundle(A, omega)


def one_arrow(field: FieldSpec = QQ, square: bool = False) -> Bundle:
    """k.1 + k.t with |t| = 1; t^2 = 0, or t^2 = s with |s| = 2 when ``square``.

    The exterior algebra (t^2 = 0) is graded commutative, so its product is a
    symmetric monoidal structure; it carries the augmentation fibre functor.
    """
    if square:
        A = _one_object_algebra("one_arrow_sq", [("t", 1), ("s", 2)], {("t", "t"): {"s": 1}}, field=field,
                                nilpotence=3)
        return Bundle(A)
    A = _one_object_algebra("one_arrow", [("t", 1)], {}, field=field, nilpotence=2)
    omega = FibreFunctor(A, {"*": [("v", 0)]}, name="omega")
    mon = MonoidalData(A, {("*", "*"): "*"}, {("t", "1"): {"t": 1}, ("1", "t"): {"t": 1}}, "*", True,
                       {("*", "*"): {("v", "v"): {"v": 1}}}, {"v": 1}, {"*": "*"}, {"t": {"t": 1}},
                       {"v": {("dual", "v"): 1}})
    return Bundle(A, omega, mon)


def z2_group(field: FieldSpec = QQ) -> Bundle:
    """Discrete rigid category of Z/2-graded lines: objects 1, s with s (x) s = 1.

    The Tannakian dual is the group coalgebra k[Z/2] in degree 0.
    """
    mors = [Morphism("id1", "1", "1", 0), Morphism("ids", "s", "s", 0)]
    A = DgCategory(field, ["1", "s"], mors, {}, {}, {"1": "id1", "s": "ids"}, 1, "Z2")
    omega = FibreFunctor(A, {"1": [("u", 0)], "s": [("w", 0)]}, name="omega")
    tobj = {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "1"}
    fib = {("1", "1"): {("u", "u"): {"u": 1}}, ("1", "s"): {("u", "w"): {"w": 1}},
           ("s", "1"): {("w", "u"): {"w": 1}}, ("s", "s"): {("w", "w"): {"u": 1}}}
    mon = MonoidalData(A, tobj, {}, "1", True, fib, {"u": 1}, {"1": "1", "s": "s"}, {},
                       {"u": {("dual", "u"): 1}, "w": {("dual", "w"): 1}})
    return Bundle(A, omega, mon)


def corrupted(field: FieldSpec = QQ) -> Bundle:
    """Dual numbers with the composition table broken to e o e = e while |e| = 0 and de = t."""
    mors = [Morphism("1", "*", "*", 0), Morphism("e", "*", "*", 0), Morphism("t", "*", "*", 1)]
    A = DgCategory(field, ["*"], mors, {"e": {"t": 1}}, {("e", "e"): {"e": 1}}, {"*": "1"}, None, "corrupted")
    return Bundle(A)


BUNDLED = {
    "k": trivial,
    "dual_numbers": dual_numbers,
    "a2_quiver": a2_quiver,
    "truncated_poly": truncated_poly,
    "one_arrow": one_arrow,
    "z2_group": z2_group,
    "corrupted": corrupted,
}


def bundle_to_json(b: Bundle) -> dict:
    doc = category_to_json(b.category)
    if b.functor is not None:
        doc["fibre_functor"] = functor_to_json(b.functor)
    if b.monoidal is not None:
        doc["monoidal"] = monoidal_to_json(b.monoidal)
    return doc


def monoidal_to_json(M: MonoidalData) -> dict:
    F = M.cat.field
    doc = {
        "unit": M.unit,
        "symmetric": M.symmetric,
        "tensor_objects": [[x, y, z] for (x, y), z in M.tensor_obj.items()],
        "tensor_morphisms": [[a, b, t, F.fmt(c)] for (a, b), v in M.tensor_mor.items() for t, c in v.items()],
        "fibre_iso": [[x, y, u, v, t, F.fmt(c)] for (x, y), m in M.fibre_iso.items()
                      for (u, v), img in m.items() for t, c in img.items()],
        "unit_vector": [[t, F.fmt(c)] for t, c in M.unit_vector.items()],
    }
    if M.dual_obj:
        doc["duals"] = {
            "objects": dict(M.dual_obj),
            "morphisms": [[a, t, F.fmt(c)] for a, v in M.dual_mor.items() for t, c in v.items()],
            "fibre": [[lab, list(t) if isinstance(t, tuple) else t, F.fmt(c)]
                      for lab, v in M.dual_iso.items() for t, c in v.items()],
        }
    return doc


__all__ = ["BUNDLED", "bundle_to_json", "trivial", "dual_numbers", "truncated_poly", "a2_quiver",
           "one_arrow", "z2_group", "corrupted"]
