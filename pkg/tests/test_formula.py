import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relog.formula import (And, Box, BoxL, FormulaSyntaxError, Imp, Neg, Or, Var, children,
                           conj, formulas_up_to_depth, iff, match, parse, rebuild, render,
                           substitute, tokenize)

from conftest import formulas

p, q, r = Var("p"), Var("q"), Var("r")


@pytest.mark.parametrize("text, tree", [
    ("p -> p", Imp(p, p)),
    ("[](p & ~p) -> []q", Imp(Box(And(p, Neg(p))), Box(q))),
    ("[L](p | ~p)", BoxL(Or(p, Neg(p)))),
    ("p & q -> r", Imp(And(p, q), r)),
    ("p -> q -> r", Imp(p, Imp(q, r))),
    ("p | q & r", Or(p, And(q, r))),
    ("p & q & r", And(And(p, q), r)),
    ("~~p", Neg(Neg(p))),
    ("[][L]~p", Box(BoxL(Neg(p)))),
    ("p <-> q", And(Imp(p, q), Imp(q, p))),
    ("(p -> q) -> r", Imp(Imp(p, q), r)),
])
def test_parse(text, tree):
    assert parse(text) == tree


@pytest.mark.parametrize("tree, text", [
    (Imp(p, p), "p -> p"),
    (Box(And(p, Neg(p))), "[](p & ~p)"),
    (BoxL(Imp(p, q)), "[L](p -> q)"),
    (Imp(Imp(p, q), r), "(p -> q) -> r"),
    (Imp(p, Imp(q, r)), "p -> q -> r"),
    (And(p, And(q, r)), "p & (q & r)"),
    (Or(And(p, q), r), "p & q | r"),
])
def test_render(tree, text):
    assert render(tree) == text


@pytest.mark.parametrize("text", ["p ->", "p q", "(p", "p)", "P", "p <-> q <-> r", "", "[X]p",
                                  "p && q"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_error_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p & $")
    assert e.value.pos == 4


def test_tokenize_positions():
    toks = tokenize("[L]p->q")
    assert [(k, v, i) for k, v, i in toks] == [
        ("op", "[L]", 0), ("ident", "p", 3), ("op", "->", 4), ("ident", "q", 6), ("end", "", 7)]


def test_substitute_examples():
    assert substitute(parse("p -> p"), {"p": parse("q & r")}) == parse("(q & r) -> (q & r)")
    f = parse("[]p & []q -> [](p & q)")
    assert substitute(f, {"p": p, "q": p}) == parse("[]p & []p -> [](p & p)")
    assert substitute(p, {"q": r}) == p


def test_helpers():
    assert iff(p, q) == parse("p <-> q")
    assert conj([p, q, r]) == And(And(p, q), r)
    with pytest.raises(ValueError):
        conj([])
    assert match(parse("p -> p"), parse("q & r -> q & r")) == {"p": And(q, r)}
    assert match(parse("p -> p"), parse("q -> r")) is None
    assert parse("[](p & q) -> p").variables() == ["p", "q"]
    assert parse("[](p & q) -> p").depth == 3
    assert parse("[](p & q) -> p").complexity == 6


def test_formulas_up_to_depth_counts():
    # depth 1 over one variable: p, three unary, three binary
    assert len(formulas_up_to_depth(["p"], 1)) == 7
    assert all(f.depth <= 2 for f in formulas_up_to_depth(["p", "q"], 2))


@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f


@given(st.text(alphabet="pq~&|()-> []L", max_size=20))
@settings(max_examples=300)
def test_reparse_of_valid_strings(text):
    try:
        f = parse(text)
    except FormulaSyntaxError:
        return
    assert parse(render(f)) == f


@given(formulas(), st.dictionaries(st.sampled_from(["p", "q", "r"]), formulas(4), max_size=3))
def test_substitute_homomorphism(f, s):
    out = substitute(f, s)
    if isinstance(f, Var):
        assert out == s.get(f.name, f)
    else:
        assert out == rebuild(f, tuple(substitute(c, s) for c in children(f)))


@given(formulas())
def test_substitute_identity(f):
    assert substitute(f, {}) == f
    assert substitute(f, {v: Var(v) for v in f.variables()}) == f
