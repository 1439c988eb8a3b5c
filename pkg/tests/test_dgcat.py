import json
import os

import pytest
from hypothesis import given, settings, strategies as st

from dgtannaka.dgcat import (CorepresentableModule, DgCategory, DualModule, IdentityBimodule, MonoidalData,
                             PresentationError, RepresentableModule, TensorBimodule, bundle_from_document,
                             category_from_json, category_to_json, check_nilpotence, content_hash,
                             functor_from_json, functor_to_json, load_bundle, monoidal_from_json,
                             radical_dimension, strictify_degree_zero, validate_bimodule, validate_category,
                             validate_functor, validate_module, validate_monoidal)
from dgtannaka.examples import BUNDLED, a2_quiver, bundle_to_json, dual_numbers, monoidal_to_json, one_arrow
from dgtannaka.gradedlinalg import GF, QQ

GOOD = [n for n in BUNDLED if n != "corrupted"]


@pytest.mark.parametrize("name", GOOD)
def test_bundled_examples_validate(name):
    b = BUNDLED[name]()
    assert validate_category(b.category) == []
    if b.functor is not None:
        assert validate_functor(b.functor) == []
        assert validate_module(DualModule(b.functor)) == []
    if b.monoidal is not None:
        assert validate_monoidal(b.monoidal, b.functor) == []


def test_corrupted_names_the_failing_pair():
    rep = validate_category(BUNDLED["corrupted"]().category)
    assert rep and "(e, e)" in rep[0]


def test_associativity_failure_is_detected():
    C = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("e", "*", "*", 0)], {}, {("e", "e"): {"e": 1}}, {"*": "1"})
    assert validate_category(C) == []
    # e(ee) = ef = e but (ee)e = fe = f
    bad = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("e", "*", "*", 0), ("f", "*", "*", 0)], {},
                     {("e", "e"): {"f": 1}, ("e", "f"): {"e": 1}, ("f", "e"): {"f": 1}}, {"*": "1"})
    assert validate_category(bad)


def test_graded_commutator_sign_flip_is_detected():
    # with |t| = 1 the Leibniz rule for d s = t needs t o t = 0; the flipped product is caught
    ok = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("t", "*", "*", 1), ("s", "*", "*", 0)], {"s": {"t": 1}},
                    {("s", "s"): {"s": 0}}, {"*": "1"})
    assert validate_category(ok) == []
    bad = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("t", "*", "*", 1), ("s", "*", "*", 0)], {"s": {"t": 1}},
                     {("s", "t"): {"t": 1}, ("t", "s"): {"t": 1}}, {"*": "1"})
    assert validate_category(bad)


def test_leibniz_failure_is_detected():
    # d e = u with e o e = e but u o e = -u breaks the graded Leibniz rule at (e, e)
    A = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("e", "*", "*", 0), ("u", "*", "*", 1)], {"e": {"u": 1}},
                   {("e", "e"): {"e": 1}, ("e", "u"): {"u": 1}, ("u", "e"): {"u": -1}}, {"*": "1"})
    assert validate_category(A)


def test_presentation_errors():
    with pytest.raises(PresentationError):
        DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("1", "*", "*", 0)], identities={"*": "1"})
    with pytest.raises(PresentationError):
        DgCategory(QQ, ["*"], [("a", "*", "Y", 0)], identities={"*": "a"})
    with pytest.raises(PresentationError):
        DgCategory(QQ, ["*"], [("a", "*", "*", 0)])
    with pytest.raises(PresentationError):
        category_from_json({"objects": ["*"]})
    with pytest.raises(PresentationError):
        bundle_from_document([1, 2])


@pytest.mark.parametrize("name", list(BUNDLED))
def test_json_round_trip(name, tmp_path):
    b = BUNDLED[name]()
    doc = bundle_to_json(b)
    p = tmp_path / "x.json"
    p.write_text(json.dumps(doc))
    b2 = load_bundle(str(p))
    assert category_to_json(b2.category) == category_to_json(b.category)
    if b.functor is not None:
        assert functor_to_json(b2.functor) == functor_to_json(b.functor)
    if b.monoidal is not None:
        assert monoidal_to_json(b2.monoidal) == monoidal_to_json(b.monoidal)
    assert b2.hashes["category"] == content_hash({k: v for k, v in doc.items()
                                                  if k not in ("fibre_functor", "monoidal")})


def test_functor_file_hash_binding(tmp_path):
    b = dual_numbers()
    cdoc = category_to_json(b.category)
    h = content_hash(cdoc)
    (tmp_path / "c.json").write_text(json.dumps(cdoc))
    (tmp_path / "f.json").write_text(json.dumps(functor_to_json(b.functor, h)))
    b2 = load_bundle(str(tmp_path / "c.json"), str(tmp_path / "f.json"))
    assert validate_functor(b2.functor) == []
    (tmp_path / "g.json").write_text(json.dumps(functor_to_json(b.functor, "0" * 64)))
    with pytest.raises(PresentationError):
        load_bundle(str(tmp_path / "c.json"), str(tmp_path / "g.json"))
    with pytest.raises(PresentationError):
        functor_from_json(b.category, {"spaces": {"Z": [["v", 0]]}})


def test_field_override_in_documents():
    doc = bundle_to_json(dual_numbers())
    doc["field"] = {"Fp": 3}
    b = bundle_from_document(doc)
    assert b.category.field == GF(3)
    assert validate_category(b.category) == []


def test_modules_and_bimodules():
    b = a2_quiver()
    A = b.category
    for X in A.objects:
        assert validate_module(CorepresentableModule(A, X)) == []
        assert validate_module(RepresentableModule(A, X)) == []
    assert validate_bimodule(IdentityBimodule(A)) == []
    assert validate_bimodule(TensorBimodule(b.functor, DualModule(b.functor))) == []


def test_broken_fibre_functor_is_detected():
    b = one_arrow()
    doc = functor_to_json(b.functor)
    # t acting by 1 on a one-dimensional space breaks the degree and t o t = 0
    doc["action"] = [["t", "v", "v", "1"]]
    try:
        om = functor_from_json(b.category, doc)
    except (PresentationError, ValueError):
        return
    assert validate_functor(om)


def test_nilpotence_certificates():
    assert check_nilpotence(a2_quiver().category) == []
    assert check_nilpotence(one_arrow().category) == []


def test_strictify_degree_zero():
    # e idempotent with d e = u: H^0 = k.1, so B^0 = k and the inclusion is a quasi-iso
    A = DgCategory(QQ, ["*"], [("1", "*", "*", 0), ("e", "*", "*", 0), ("u", "*", "*", 1)], {"e": {"u": 1}},
                   {("e", "e"): {"e": 1}, ("e", "u"): {"u": 1}}, {"*": "1"}, None, "idem")
    assert validate_category(A) == []
    S = strictify_degree_zero(A)
    assert S.ok
    assert validate_category(S.category) == []
    assert sum(1 for a in S.category.mor if S.category.deg(a) == 0) == 1
    assert S.radical_dim == 0


def test_radical_dimension():
    A = dual_numbers().category
    assert radical_dimension(A, {("*", "*"): [{"1": 1}, {"e": 1}]}) == 1
    assert radical_dimension(dual_numbers(GF(3)).category, {("*", "*"): [{"1": 1}, {"e": 1}]}) is None


def test_monoidal_negative_control():
    b = dual_numbers()
    M = b.monoidal
    bad = MonoidalData(b.category, M.tensor_obj, {("e", "1"): {"e": 1}, ("1", "e"): {"e": -1}}, M.unit,
                       M.symmetric, M.fibre_iso, M.unit_vector, M.dual_obj, M.dual_mor, M.dual_iso)
    assert validate_monoidal(bad, b.functor)


def test_monoidal_json_round_trip():
    b = dual_numbers()
    M2 = monoidal_from_json(b.category, monoidal_to_json(b.monoidal))
    assert validate_monoidal(M2, b.functor) == []


@given(st.sampled_from(GOOD), st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=20, deadline=None)
def test_examples_valid_over_prime_fields(name, p):
    b = BUNDLED[name](field=GF(p))
    assert validate_category(b.category) == []
    if b.monoidal is not None:
        assert validate_monoidal(b.monoidal, b.functor) == []


def test_presentations_directory_matches_bundled(presentations):
    for name in BUNDLED:
        with open(os.path.join(presentations, name + ".json")) as fh:
            assert json.load(fh) == json.loads(json.dumps(bundle_to_json(BUNDLED[name]())))
