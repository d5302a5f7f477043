"""Exhaustive SAT certificates for connective-level semantic facts.

Each certificate asks the solver for a model with exactly ``n`` states in
which one connective breaks a property.  The variables ``p`` and ``q``
range over every admissible valuation (upsets, and in bounded models upsets
containing the top but not the bottom), so an unsatisfiable query covers
that connective applied to the denotation of *any* formula.  By induction
on formulas, a full set of unsatisfiable queries proves the property for
all formulas over all models of that size, not only those up to some depth.

A satisfiable query yields a concrete counterexample model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..conditions import CONDITION_TABLE, c_variant, logic_conditions
from ..formula import And, Box, BoxL, Formula, Imp, Neg, Or, Var
from ..structures import Model
from . import SearchTimeout, _Sat, build_encoding
from .encode import Encoding, PlusView

P, Q = Var("p"), Var("q")
CONNECTIVES: dict[str, Formula] = {
    "and": And(P, Q), "or": Or(P, Q), "neg": Neg(P), "imp": Imp(P, Q),
    "box": Box(P), "boxl": BoxL(P),
}


@dataclass
class Certificate:
    claim: str
    logic: str
    kind: str
    n: int
    status: str  # "proved", "refuted" or "timeout"
    counterexample: Model | None = None
    seconds: float = 0.0

    @property
    def proved(self) -> bool:
        return self.status == "proved"

    def __str__(self) -> str:
        return f"{self.claim} [{self.logic}, {self.kind}, n={self.n}]: {self.status}"


def _decide(enc: Encoding, violation, claim, logic, kind, n, max_seconds,
            decode_with: Encoding | None = None) -> Certificate:
    start = time.time()
    enc.require(violation)
    deadline = None if max_seconds is None else start + max_seconds
    sat = _Sat(enc, deadline)
    try:
        found = sat.solve()
        status = "proved" if found is None else "refuted"
    except SearchTimeout:
        found, status = None, "timeout"
    finally:
        sat.close()
    model = None if found is None else (decode_with or enc).decode(found)
    return Certificate(claim, logic, kind, n, status, model, time.time() - start)


def _base(n, logic, kind, variables=("p", "q")) -> Encoding:
    if kind == "W" and n < 3:
        raise ValueError("bounded models with a world need at least 3 states")
    return build_encoding(n, logic, kind, variables)


def certify_heredity(n: int, logic: str = "BM.C", kind: str = "L",
                     max_seconds: float | None = None) -> list[Certificate]:
    """Every connective maps upsets to an upset."""
    out = []
    for name, f in CONNECTIVES.items():
        enc = _base(n, logic, kind)
        X = enc.formula(f, hints=False)[f]
        bad = enc.or_(enc.and_((enc.leq(i, j), X[i], enc.neg(X[j])))
                      for i in range(n) for j in range(n) if i != j)
        out.append(_decide(enc, bad, f"heredity:{name}", logic, kind, n, max_seconds))
    return out


def _valid(enc: Encoding, X):
    return enc.and_(enc.implies(enc.D(d), X[d]) for d in range(enc.n))


def _included(enc: Encoding, a: str, b: str):
    return enc.and_(enc.implies(enc.V(a, i), enc.V(b, i)) for i in range(enc.n))


def certify_deduction(n: int, logic: str = "BM.C", kind: str = "L",
                      max_seconds: float | None = None) -> Certificate:
    """``p→q`` valid iff V(p) ⊆ V(q); on W-models the formula is ``□_L(p→q)``."""
    enc = _base(n, logic, kind)
    f = Imp(P, Q) if kind == "L" else BoxL(Imp(P, Q))
    X = enc.formula(f)[f]
    bad = enc.neg(enc.iff(_valid(enc, X), _included(enc, "p", "q")))
    claim = "deduction" if kind == "L" else "boxl-deduction"
    return _decide(enc, bad, claim, logic, kind, n, max_seconds)


def certify_bounds(n: int, logic: str = "BM.C",
                   max_seconds: float | None = None) -> list[Certificate]:
    """In bounded models the top satisfies, and the bottom refutes, every connective."""
    out = []
    for name, f in CONNECTIVES.items():
        enc = _base(n, logic, "W")
        X = enc.formula(f)[f]
        bad = enc.or_((enc.neg(X[enc.one]), X[enc.zero]))
        out.append(_decide(enc, bad, f"bounds:{name}", logic, "W", n, max_seconds))
    return out


def certify_classical(n: int, logic: str = "BM.C",
                      max_seconds: float | None = None) -> list[Certificate]:
    """Negation and implication behave classically at every possible world."""
    out = []
    for name in ("neg", "imp"):
        enc = _base(n, logic, "W")
        f = CONNECTIVES[name]
        X = enc.formula(f)[f]
        bad = []
        for w in range(n):
            if name == "neg":
                classical = enc.neg(enc.V("p", w))
            else:
                classical = enc.or_((enc.neg(enc.V("p", w)), enc.V("q", w)))
            bad.append(enc.and_((enc.world(w), enc.neg(enc.iff(X[w], classical)))))
        out.append(_decide(enc, enc.or_(bad), f"classical:{name}", logic, "W", n, max_seconds))
    return out


def certify_plus(n: int, logic: str = "BM.C", tags=None,
                 max_seconds: float | None = None) -> list[Certificate]:
    """The adjoined-world construction over every ``logic``-model with ``n`` states.

    Checks that the image is a W-model, that every connective agrees with
    the input on old states, that an invalid ``p`` makes ``□_L p`` fail at
    the new world, that each tabled condition of the input survives as its
    C-variant, and that the image passes the classicized frame check.
    """
    out = []

    def run(claim, make):
        enc = _base(n, logic, "L")
        view = PlusView(enc, free_world_values=claim != "plus:w-model")
        bad = make(enc, view)
        out.append(_decide(enc, bad, claim, logic, "L", n, max_seconds))

    run("plus:w-model", lambda enc, view: enc.neg(view.w_model_literal()))
    for name, f in CONNECTIVES.items():
        def preserve(enc, view, f=f):
            a, b = enc.formula(f)[f], view.formula(f, hints=False)[f]
            return enc.or_(enc.neg(enc.iff(a[i], b[i])) for i in range(n))
        run(f"plus:preserve:{name}", preserve)

    def transfer(enc, view):
        invalid = enc.or_(enc.and_((enc.D(i), enc.neg(enc.V("p", i)))) for i in range(n))
        return enc.and_((invalid, view.formula(BoxL(P), hints=False)[BoxL(P)][view.w]))
    run("plus:transfer", transfer)

    for tag in (CONDITION_TABLE if tags is None else tags):
        cond = CONDITION_TABLE[tag].condition

        def keeps(enc, view, cond=cond):
            return enc.and_((enc.condition_literal(cond),
                             enc.neg(view.condition_literal(c_variant(cond)))))
        run(f"plus:condition:{tag}", keeps)

    def logic_check(enc, view):
        conds = logic_conditions(logic, classicized=True).conditions.values()
        return enc.neg(enc.and_(view.condition_literal(c) for c in conds))
    run("plus:logic", logic_check)
    return out


__all__ = ["CONNECTIVES", "Certificate", "certify_bounds", "certify_classical",
           "certify_deduction", "certify_heredity", "certify_plus"]
