import json
import random

import pytest

from relog.conditions import check_logic_frame
from relog.formula import parse
from relog.proofs import BASE_SCHEMAS
from relog.search import random_models
from relog.structures import (Designation, Model, Structure, check_designation, load_model,
                              model_from_dict, validate_model)
from relog.transform import (PlusError, fresh_ids, induced_lframe, plus_construction,
                             verify_plus)

from conftest import small_models


def test_one_state_image(one_state):
    image = plus_construction(one_state)
    s = image.structure
    assert s.states == ("s", "w", "0", "1")
    assert s.ql_succ["w"] == {"w", "s", "1"}
    assert ("w", "w", "w") in s.R
    assert image.designation == Designation("W", frozenset({"w"}))
    assert image.valuation["p"] == {"s", "1"}
    assert validate_model(image).ok


def test_bound_triples_added(one_state):
    s = plus_construction(one_state).structure
    for a in s.states:
        for b in s.states:
            assert {("0", a, b), (a, "0", b), (a, b, "1")} <= s.R


def test_relations_restrict_to_input():
    for m in small_models("L", per_size=6):
        s, t = m.structure, plus_construction(m).structure
        old = set(s.states)
        assert len(t.states) == len(s.states) + 3
        assert {x for x in t.R if set(x) <= old} == s.R
        assert {x for x in t.leq if set(x) <= old} == s.leq
        assert {x for x in t.Q if set(x) <= old} == s.Q
        assert {x for x in t.QL if set(x) <= old} == s.QL
        assert all(t.star[x] == s.star[x] for x in old)


def test_empty_r_input_is_not_an_l_model(one_state_doc):
    one_state_doc["R"] = []
    with pytest.raises(PlusError, match="L1"):
        plus_construction(model_from_dict(one_state_doc))


def test_w_input_rejected(one_state):
    with pytest.raises(PlusError):
        plus_construction(plus_construction(one_state))
    with pytest.raises(PlusError):
        induced_lframe(one_state)


def test_reserved_names_are_renamed(one_state_doc):
    doc = one_state_doc
    doc["states"] = ["w", "0", "1"]
    doc["leq"] = [[a, a] for a in doc["states"]]
    doc["star"] = {a: a for a in doc["states"]}
    doc["R"] = [[a, a, a] for a in doc["states"]]
    doc["designation"]["set"] = ["w", "0", "1"]
    doc["valuation"] = {"p": ["w"]}
    m = load_model(doc)
    assert fresh_ids(m.states) == ("w_1", "0_1", "1_1")
    image = plus_construction(m)
    assert image.structure.bounds == ("0_1", "1_1")
    assert validate_model(image).ok


def test_induced_lframe_of_image(one_state):
    induced = induced_lframe(plus_construction(one_state))
    assert induced.designation == Designation("L", frozenset({"w", "s", "1"}))
    assert check_designation(induced).ok


def test_world_seeing_only_top(one_state):
    image = plus_construction(one_state)
    s = image.structure
    ql = frozenset(x for x in s.QL if x[0] != "w") | {("w", "w"), ("w", "1")}
    m = Model(Structure(s.states, s.leq, s.star, s.R, s.Q, ql, s.bounds),
              image.designation, image.valuation)
    induced = induced_lframe(m)
    assert induced.designation.set == {"w", "1"}
    # s has no x in {w, 1} with R x s s, so (L1) fails
    assert check_designation(induced).failed("L1")


def test_transfer_with_empty_valuation(one_state_doc):
    one_state_doc["valuation"] = {"p": []}
    m = load_model(one_state_doc)
    rep = verify_plus(m, ["p"])
    assert rep.transfers == [("p", "s")]
    assert not rep.transfer_failures and rep.ok


def test_axiom_shapes_on_random_e_models():
    rng = random.Random(3)
    shapes = [BASE_SCHEMAS[f"a{i}"] for i in range(1, 13)]
    for m in random_models(3, "E.C", "L", ("p", "q", "r"), 10, rng):
        rep = verify_plus(m, shapes, logic="E.C", keep_rows=True)
        assert not rep.mismatches
        assert len(rep.rows) == 3 * 12
        assert rep.logic_applies and rep.logic_check.ok


def test_dw_input_gives_classicized_dw_image():
    for m in random_models(2, "DW.C", "L", ("p",), 10, random.Random(5)):
        image = plus_construction(m)
        assert check_logic_frame(image, "DW.C", classicized=True).ok


def test_logic_check_skipped_when_input_misses_logic(one_state_doc):
    doc = one_state_doc
    doc["states"] = ["a", "b"]
    doc["leq"] = [["a", "a"], ["b", "b"]]
    doc["star"] = {"a": "a", "b": "b"}
    # R b a b without R b b a breaks (Cp)
    doc["R"] = [["a", "a", "a"], ["a", "b", "b"], ["b", "a", "b"]]
    doc["designation"]["set"] = ["a"]
    doc["valuation"] = {"p": ["a"]}
    m = load_model(doc)
    assert not check_logic_frame(m, "DW.C").ok
    rep = verify_plus(m, logic="DW.C")
    assert not rep.logic_applies and rep.logic_check is None
    assert "logic check skipped" in rep.to_text()


def test_default_verification_and_serialisation(one_state):
    rep = verify_plus(one_state, logic="BM.C")
    assert rep.ok
    assert rep.formulas_checked >= 12
    doc = json.loads(rep.to_json())
    assert doc["ok"] and doc["w_model"] and doc["logic_check"]
    assert set(doc["conditions"]) == set(rep.conditions_kept)
    assert rep.to_text().endswith("verdict: ok")


def test_formula_strings_accepted(one_state):
    rep = verify_plus(one_state, ["p -> p", parse("[]p")])
    assert rep.formulas_checked == 2
