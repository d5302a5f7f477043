import pytest

from relog.formula import BoxL, Imp, Neg
from relog.search.certify import (CONNECTIVES, P, Q, _base, _decide, _included, _valid,
                                  certify_bounds, certify_classical, certify_deduction,
                                  certify_heredity, certify_plus)
from relog.search.encode import PlusView
from relog.semantics import interpret, valid
from relog.structures import validate_model
from relog.transform import plus_construction


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heredity_l(n):
    certs = certify_heredity(n)
    assert [c.claim for c in certs] == [f"heredity:{k}" for k in CONNECTIVES]
    assert all(c.proved for c in certs), [str(c) for c in certs]


def test_heredity_w():
    assert all(c.proved for c in certify_heredity(3, kind="W"))


@pytest.mark.parametrize("n, kind", [(1, "L"), (2, "L"), (3, "L"), (3, "W")])
def test_deduction(n, kind):
    c = certify_deduction(n, kind=kind)
    assert c.proved and c.claim == ("deduction" if kind == "L" else "boxl-deduction")


def test_bounds_and_classicality():
    assert all(c.proved for c in certify_bounds(3) + certify_classical(3))


def test_w_needs_three_states():
    with pytest.raises(ValueError):
        certify_bounds(2)


@pytest.mark.parametrize("logic", ["BM.C", "DW.C", "E.C", "R.CT"])
def test_plus_construction_n2(logic):
    certs = certify_plus(2, logic)
    assert all(c.proved for c in certs), [str(c) for c in certs if not c.proved]
    claims = {c.claim for c in certs}
    assert {"plus:w-model", "plus:transfer", "plus:logic", "plus:condition:X"} <= claims


def test_certificate_text():
    c = certify_deduction(1)
    assert str(c) == "deduction [BM.C, L, n=1]: proved"


# -- mutations: each wrong claim must come back with a counterexample ----------

def test_reversed_deduction_is_refuted():
    enc = _base(2, "BM.C", "L")
    f = Imp(P, Q)
    X = enc.formula(f)[f]
    bad = enc.neg(enc.iff(_valid(enc, X), _included(enc, "q", "p")))
    c = _decide(enc, bad, "reversed", "BM.C", "L", 2, None)
    assert c.status == "refuted"
    m = c.counterexample
    assert validate_model(m).ok
    assert valid(m, "p -> q") != (m.valuation["q"] <= m.valuation["p"])


def test_negation_is_not_classical_everywhere():
    enc = _base(3, "BM.C", "W")
    f = Neg(P)
    X = enc.formula(f)[f]
    bad = enc.or_(enc.neg(enc.iff(X[i], enc.neg(enc.V("p", i)))) for i in range(3))
    c = _decide(enc, bad, "neg everywhere", "BM.C", "W", 3, None)
    assert c.status == "refuted"
    m = c.counterexample
    neg = interpret(m, "~p")
    assert any((s in neg) == (s in m.valuation["p"]) for s in m.states)


class NoWorldLoop(PlusView):
    def R(self, i, j, k):
        if (i, j, k) == (self.w,) * 3:
            return False
        return super().R(i, j, k)


class NoLogicalStates(PlusView):
    def QL(self, i, j):
        if i == self.w and self._old(j):
            return False
        return super().QL(i, j)


class FixedWorldStar(PlusView):
    def star(self, i, j):
        if i == self.w:
            return j == self.one
        if j == self.w:
            return False
        return super().star(i, j)


@pytest.mark.parametrize("view_cls", [NoWorldLoop, NoLogicalStates, FixedWorldStar])
def test_broken_constructions_are_refuted(view_cls):
    enc = _base(1, "BM.C", "L")
    view = view_cls(enc)
    c = _decide(enc, enc.neg(view.w_model_literal()), "mutant", "BM.C", "L", 1, None)
    assert c.status == "refuted"
    # the genuine construction on the same input is fine
    assert validate_model(plus_construction(c.counterexample)).ok


def test_transfer_fails_without_logical_states():
    enc = _base(2, "BM.C", "L")
    view = NoLogicalStates(enc, free_world_values=True)
    invalid = enc.or_(enc.and_((enc.D(i), enc.neg(enc.V("p", i)))) for i in range(2))
    bad = enc.and_((invalid, view.formula(BoxL(P), hints=False)[BoxL(P)][view.w]))
    assert _decide(enc, bad, "mutant", "BM.C", "L", 2, None).status == "refuted"
