import pytest
from hypothesis import given, settings

from relog.formula import BoxL, Imp, Neg, Or, Var, formulas_up_to_depth, parse
from relog.semantics import (DesignationError, HeredityError, denotation_closure,
                             equivalent_in, explain_failure, failing_designated, fuse, interpret,
                             op_imp, op_neg, satisfies, valid)
from relog.structures import Designation, Model, Structure, discrete_order, possible_worlds
from relog.transform import plus_construction

from conftest import formulas, small_models

L_MODELS = small_models("L")
W_MODELS = small_models("W")


def swap_model(kind="none"):
    s = Structure(("a", "b"), discrete_order("ab"), {"a": "b", "b": "a"},
                  frozenset(), frozenset(), frozenset())
    return Model(s, Designation(kind, frozenset()), {"p": frozenset({"a"})})


def test_fuse(one_state):
    s = one_state.structure
    assert fuse(s, {"s"}, {"s"}) == {"s"}
    assert fuse(s, set(), {"s"}) == frozenset()
    image = plus_construction(one_state).structure
    assert "0" in fuse(image, {"0"}, {"1"})


def test_negation_with_swapping_star():
    assert interpret(swap_model(), "~p") == {"a"}


def test_one_state_values(one_state):
    assert interpret(one_state, "p -> p") == {"s"}
    assert satisfies(one_state, "s", "p")
    with pytest.raises(KeyError):
        satisfies(one_state, "nope", "p")


def test_world_satisfies_excluded_middle(one_state):
    assert satisfies(plus_construction(one_state), "w", "p | ~p")


def test_designation_none_has_no_validity():
    with pytest.raises(DesignationError):
        valid(swap_model(), "p")


def test_unlisted_variable_takes_least_value(one_state):
    assert interpret(one_state, "zz") == frozenset()
    assert interpret(plus_construction(one_state), "zz") == {"1"}


def test_heredity_error_on_bad_valuation():
    s = Structure(("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "b")}),
                  {"a": "b", "b": "b"}, frozenset(), frozenset(), frozenset())
    m = Model(s, Designation("none"), {"p": frozenset({"a"})})
    with pytest.raises(HeredityError) as e:
        interpret(m, "p & p")
    assert e.value.witness == ("a", "b")
    assert interpret(m, "p", check_heredity=False) == {"a"}


def test_countermodel_values():
    from relog.search import find_countermodel
    res = find_countermodel("[](p & ~p) -> []q", "BM.C", "L")
    assert not valid(res.model, "[](p & ~p) -> []q")
    assert failing_designated(res.model, "[](p & ~p) -> []q") == [res.witness]
    trace = explain_failure(res.model, res.witness, "[](p & ~p) -> []q")
    assert trace[0].startswith(f"{res.witness} |/= ")


@pytest.mark.parametrize("m", L_MODELS, ids=lambda m: "")
def test_identity_valid_in_l_models(m):
    assert valid(m, "p -> p")


@pytest.mark.parametrize("m", W_MODELS, ids=lambda m: "")
def test_excluded_middle_valid_in_w_models(m):
    assert valid(m, "p | ~p")


@given(formulas(8))
@settings(max_examples=60, deadline=None)
def test_heredity_property(f):
    for m in L_MODELS[::5] + W_MODELS[::5]:
        X = interpret(m, f)
        assert m.structure.is_upset(X)


def test_bounds_hold_for_every_formula():
    fs = formulas_up_to_depth(["p", "q"], 2)
    for m in W_MODELS:
        s = m.structure
        for f in fs:
            X = interpret(m, f)
            assert s.one in X and s.zero not in X


def test_deduction_on_l_models():
    for m in L_MODELS:
        dens = list(denotation_closure([m], ["p", "q"], 2))
        for (X,) in dens:
            for (Y,) in dens:
                imp = op_imp(m.structure, X, Y)
                assert (m.designation.set <= imp) == (X <= Y)


def test_boxl_deduction_on_w_models():
    for m in W_MODELS:
        s = m.structure
        dens = list(denotation_closure([m], ["p", "q"], 2))
        for (X,) in dens:
            for (Y,) in dens:
                box = frozenset(a for a in s.states if s.ql_succ[a] <= op_imp(s, X, Y))
                assert (m.designation.set <= box) == (X <= Y)


def test_classical_connectives_at_worlds():
    for m in W_MODELS:
        s = m.structure
        worlds = possible_worlds(s)
        dens = [k[0] for k in denotation_closure([m], ["p", "q"], 2)]
        for X in dens:
            neg = op_neg(s, X)
            assert all((w in neg) == (w not in X) for w in worlds)
            for Y in dens:
                imp = op_imp(s, X, Y)
                assert all((w in imp) == (w not in X or w in Y) for w in worlds)


def test_closure_matches_brute_force():
    fs = formulas_up_to_depth(["p", "q"], 2)
    for m in L_MODELS[:12] + W_MODELS[:6]:
        brute = {interpret(m, f) for f in fs}
        closure = denotation_closure([m], ["p", "q"], 2)
        assert {k[0] for k in closure} == brute
        for key, f in closure.items():
            assert interpret(m, f) == key[0]


def test_joint_closure_matches_brute_force(one_state):
    image = plus_construction(one_state)
    fs = formulas_up_to_depth(["p"], 2)
    brute = {(interpret(one_state, f), interpret(image, f)) for f in fs}
    assert set(denotation_closure([one_state, image], ["p"], 2)) == brute


def test_equivalent_in(one_state):
    assert equivalent_in(one_state, parse("p & p"), Var("p"))
    image = plus_construction(one_state)
    assert valid(image, BoxL(Imp(Var("p"), Var("p"))))
    assert valid(image, Or(Var("p"), Neg(Var("p"))))
