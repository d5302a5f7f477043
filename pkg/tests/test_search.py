import random
from itertools import chain, combinations, product

import pytest

from relog.conditions import check_logic_frame
from relog.formula import parse
from relog.search import (SearchBudget, build_encoding, enumerate_models, find_countermodel,
                          random_models, resolve_kind, state_names)
from relog.semantics import interpret, valid
from relog.structures import (Designation, Model, Structure, dump_model, model_to_dict,
                              validate_model)

SEPARATIONS = [
    ("[](p & ~p) -> []q", "BM.C", "L"),
    ("[](p -> q) -> ([]~q -> []~p)", "DW.C", "L"),
    ("[](p | ~p)", "C-BM.C", "W"),
]


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


# -- an independent counting oracle for two states ------------------------------

def _orders(a, b):
    refl = {(a, a), (b, b)}
    return [refl, refl | {(a, b)}, refl | {(b, a)}]


def _count_two_state(cp: bool) -> int:
    """Number of 2-state L-models without variables, counted by factoring the
    constraints into independent groups and brute-forcing each group."""
    a, b = "x", "y"
    S = (a, b)
    total = 0
    for leq in _orders(a, b):
        def le(u, v):
            return (u, v) in leq
        stars = [dict(zip(S, img)) for img in product(S, repeat=2)]
        stars = [st for st in stars if all(le(st[v], st[u]) for u, v in leq)]
        pairs = list(product(S, repeat=2))
        triples = list(product(S, repeat=3))

        def binary_ok(rel):
            return all((u2, v2) in rel for u, v in rel for u2 in S for v2 in S
                       if le(u2, u) and le(v, v2))
        n_bin = sum(binary_ok(set(r)) for r in subsets(pairs))
        for st in stars:
            n_rl = 0
            for r in subsets(triples):
                R = set(r)
                if not all((x2, y2, z2) in R for x, y, z in R for x2 in S for y2 in S
                           for z2 in S if le(x2, x) and le(y2, y) and le(z, z2)):
                    continue
                # (Cp): R s t u implies R s u* t*
                if cp and not all((x, st[z], st[y]) in R for x, y, z in R):
                    continue
                for ls in subsets(S):
                    L = set(ls)
                    if any(le(u, v) and v not in L for u in L for v in S):
                        continue
                    if not all(any((x, u, u) in R for x in L) for u in S):
                        continue
                    if all(le(y, z) for x in L for (xx, y, z) in R if xx == x):
                        n_rl += 1
            total += n_rl * n_bin * n_bin
    return total


@pytest.mark.parametrize("logic, cp", [("BM.C", False), ("DW.C", True)])
def test_two_state_count_matches_oracle(logic, cp):
    stream = enumerate_models(2, logic, "L", ())
    assert sum(1 for _ in stream) == _count_two_state(cp)
    assert stream.complete and not stream.truncated


def test_one_state_generate_and_filter():
    """All 32 one-state candidates over p, filtered by the validator."""
    found = set()
    for R, Q, QL, L, V in product([(), (("s",) * 3,)], [(), (("s", "s"),)], [(), (("s", "s"),)],
                                  [(), ("s",)], [(), ("s",)]):
        st = Structure(("s",), frozenset({("s", "s")}), {"s": "s"}, frozenset(R),
                       frozenset(Q), frozenset(QL))
        m = Model(st, Designation("L", frozenset(L)), {"p": frozenset(V)})
        if validate_model(m).ok:
            found.add(dump_model(m))
    stream = list(enumerate_models(1, "BM.C", "L", ("p",)))
    renamed = set()
    for m in stream:
        doc = dump_model(m).replace('"s0"', '"s"')
        renamed.add(doc)
    assert len(found) == 8 and renamed == found


def test_one_state_example():
    ms = list(enumerate_models(1, "BM.C", "L", ("p",)))
    with_l = [m for m in ms if m.designation.set == {"s0"}]
    assert {m.valuation["p"] for m in with_l} == {frozenset(), frozenset({"s0"})}
    assert all(("s0",) * 3 in m.structure.R for m in ms)


@pytest.mark.parametrize("n", [1, 2])
def test_small_w_streams_are_empty(n):
    s = enumerate_models(n, "BM.C", "W", ("p",))
    assert list(s) == [] and s.complete
    assert random_models(n, "C-BM.C") == []


@pytest.mark.parametrize("logic, kind, n", [
    ("BM.C", "L", 2), ("DW.C", "L", 3), ("E.C", "L", 2), ("R.CT", "L", 2),
    ("BM.C", "W", 3), ("R.KT", "W", 4), ("E.C", "W", 4),
])
def test_yielded_models_validate(logic, kind, n):
    ms = list(enumerate_models(n, logic, kind, ("p",), limit=40))
    ms += random_models(n, logic, kind, ("p",), 20, random.Random(n))
    assert ms
    for m in ms:
        assert len(m.states) == n
        assert validate_model(m).ok
        assert check_logic_frame(m, logic, classicized=(kind == "W")).ok


def test_enumeration_is_duplicate_free():
    docs = [dump_model(m) for m in enumerate_models(3, "BM.C", "W", ("p",))]
    assert len(docs) == len(set(docs)) == 280


def test_limit_truncates():
    s = enumerate_models(2, "BM.C", "L", ("p",), limit=5)
    assert len(list(s)) == 5 and s.truncated and not s.complete


def test_time_budget_truncates():
    s = enumerate_models(2, "BM.C", "L", ("p", "q"), max_seconds=0.05)
    n = sum(1 for _ in s)
    assert s.truncated and n < 10 ** 6


def test_state_names():
    assert state_names(2, "L") == ("s0", "s1")
    assert state_names(4, "W") == ("0", "1", "s2", "s3")


def test_resolve_kind():
    assert resolve_kind("C-E.C", None) == ("E.C", "W")
    assert resolve_kind("E.C", None) == ("E.C", "L")
    with pytest.raises(ValueError):
        resolve_kind("C-E.C", "L")
    with pytest.raises(ValueError):
        resolve_kind("E.C", "X")


# -- countermodel search ---------------------------------------------------------

@pytest.mark.parametrize("text, logic, kind", SEPARATIONS)
def test_separations(text, logic, kind):
    res = find_countermodel(text, logic, kind, SearchBudget(max_states=4))
    assert res.found and res.size <= 4
    assert validate_model(res.model).ok
    assert check_logic_frame(res.model, logic).ok
    assert not valid(res.model, text)
    assert res.witness not in interpret(res.model, text)


@pytest.mark.parametrize("text, logic", [("[](p & q) -> []p", "BM.C"), ("p -> p", "BM.C"),
                                         ("p | ~p", "C-BM.C")])
def test_no_countermodel_up_to_bound(text, logic):
    res = find_countermodel(text, logic, budget=SearchBudget(max_states=4))
    assert res.status == "none" and res.exhausted == 4
    assert "up to 4 states" in res.to_text()


def test_excluded_middle_on_all_three_state_w_models():
    assert all(valid(m, "p | ~p") for m in enumerate_models(3, "BM.C", "W", ("p",)))


def test_countermodels_are_smallest():
    """No smaller model refutes the formula: checked by enumeration."""
    for text, logic, kind in SEPARATIONS:
        res = find_countermodel(text, logic, kind)
        f = parse(text)
        lo = 3 if kind == "W" else 1
        for n in range(lo, res.size):
            for m in enumerate_models(n, logic, kind, sorted(f.variables())):
                assert valid(m, f)


def test_lexmin_choice_is_first_in_canonical_order():
    res = find_countermodel("[](p & ~p) -> []q", "BM.C", "L")
    first = next(m for m in enumerate_models(res.size, "BM.C", "L", ("p", "q"))
                 if not valid(m, "[](p & ~p) -> []q"))
    assert dump_model(first) == dump_model(res.model)


@pytest.mark.parametrize("text, logic, kind", SEPARATIONS)
def test_worker_count_does_not_change_the_model(text, logic, kind):
    one = find_countermodel(text, logic, kind, SearchBudget(workers=1))
    many = find_countermodel(text, logic, kind, SearchBudget(workers=8))
    assert dump_model(one.model) == dump_model(many.model)
    assert one.witness == many.witness


def test_extra_variables_are_listed():
    res = find_countermodel("[](p & ~p) -> []q", "BM.C", "L",
                            SearchBudget(variables=["r"]))
    assert set(res.model.valuation) == {"p", "q", "r"}


def test_timeout_status():
    res = find_countermodel("[](p & q) -> []p", "R.KT", "W",
                            SearchBudget(max_states=9, max_seconds=0.2))
    assert res.status == "timeout" and res.exhausted < 9
    assert res.to_text().startswith("timeout")


def test_budget_errors():
    with pytest.raises(ValueError):
        SearchBudget(max_states=0)
    with pytest.raises(ValueError):
        SearchBudget(workers=0)
    with pytest.raises(ValueError):
        find_countermodel("p", "C-BM.C", budget=SearchBudget(max_states=2))


def test_result_serialisation():
    res = find_countermodel("[](p & ~p) -> []q", "BM.C")
    doc = res.to_dict()
    assert doc["status"] == "countermodel" and doc["model"] == model_to_dict(res.model)
    assert doc["witness"] == res.witness


def test_random_models_reproducible():
    a = random_models(3, "E.C", "L", ("p",), 10, random.Random(4))
    b = random_models(3, "E.C", "L", ("p",), 10, random.Random(4))
    assert [dump_model(m) for m in a] == [dump_model(m) for m in b]
    assert len({dump_model(m) for m in a}) == len(a) == 10


def test_refutation_encoding_matches_semantics():
    """Models of the refuting encoding are exactly those where the formula fails."""
    f = parse("[]p -> p")
    enc = build_encoding(2, "BM.C", "L", ["p"], f)
    from relog.search import _Sat
    sat = _Sat(enc, None)
    try:
        hits = 0
        sample = list(enumerate_models(2, "BM.C", "L", ("p",), limit=2000))
        sample += random_models(2, "BM.C", "L", ("p",), 300, random.Random(2))
        for m in sample:
            true = _true_vars(enc, m)
            assign = [v if v in true else -v for v in enc.model_vars]
            refutable = sat.solve(assign) is not None
            assert refutable == (not valid(m, f))
            hits += refutable
        assert hits > 0
    finally:
        sat.close()


def _true_vars(enc, m):
    return {v for v in enc.model_vars if _holds(enc.labels[v], m)}


def _holds(label, m):
    s = m.structure
    name, args = label[0], label[1:]
    st = [m.states[i] if isinstance(i, int) else i for i in args]
    if name == "leq":
        return tuple(st) in s.leq
    if name == "star":
        return s.star[st[0]] == st[1]
    if name in ("R", "Q", "QL"):
        return tuple(st) in getattr(s, name)
    if name == "D":
        return st[0] in m.designation.set
    if name == "V":
        return st[1] in m.valuation[st[0]]
    raise AssertionError(label)
