"""Interpretation of formulas in finite models.

Every formula denotes an upward closed set of states.  ``interpret`` computes
whole sets bottom up, one connective operation per node, and checks heredity
after each step so that hand-written models that slipped past validation are
caught at the first offending connective.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .formula import And, Box, BoxL, Formula, Imp, Neg, Or, Var, as_formula, iff
from .structures import Model, State, Structure

StateSet = frozenset


class HeredityError(AssertionError):
    def __init__(self, formula, states, witness):
        super().__init__(f"denotation of {formula} is not upward closed: "
                         f"{witness[0]} <= {witness[1]} but only the first satisfies it")
        self.formula = formula
        self.states = states
        self.witness = witness


class DesignationError(ValueError):
    pass


def fuse(s: Structure, X: Iterable[State], Y: Iterable[State]) -> StateSet:
    """``{u | exists a in X, b in Y with R a b u}``."""
    X, Y = set(X), set(Y)
    return frozenset(u for a in X for b, u in s.r_from[a] if b in Y)


def op_neg(s: Structure, X: StateSet) -> StateSet:
    return frozenset(a for a in s.states if s.star[a] not in X)


def op_imp(s: Structure, X: StateSet, Y: StateSet) -> StateSet:
    return frozenset(a for a in s.states
                     if all(u in Y for b, u in s.r_from[a] if b in X))


def op_box(s: Structure, X: StateSet) -> StateSet:
    return frozenset(a for a in s.states if s.q_succ[a] <= X)


def op_boxl(s: Structure, X: StateSet) -> StateSet:
    return frozenset(a for a in s.states if s.ql_succ[a] <= X)


def apply_connective(s: Structure, node: Formula, *args: StateSet) -> StateSet:
    if isinstance(node, And):
        return args[0] & args[1]
    if isinstance(node, Or):
        return args[0] | args[1]
    if isinstance(node, Imp):
        return op_imp(s, args[0], args[1])
    if isinstance(node, Neg):
        return op_neg(s, args[0])
    if isinstance(node, Box):
        return op_box(s, args[0])
    if isinstance(node, BoxL):
        return op_boxl(s, args[0])
    raise TypeError(f"not a connective node: {node!r}")


def interpret(m: Model, f: Formula | str, cache: dict | None = None,
              check_heredity: bool = True) -> StateSet:
    """The set of states satisfying ``f``."""
    f = as_formula(f)
    s = m.structure
    memo = {} if cache is None else cache
    for node in f.subformulas():
        if node in memo:
            continue
        if isinstance(node, Var):
            val = frozenset(m.value(node.name))
        elif isinstance(node, (And, Or, Imp)):
            val = apply_connective(s, node, memo[node.left], memo[node.right])
        else:
            val = apply_connective(s, node, memo[node.inner])
        if check_heredity:
            bad = s.upset_violation(val)
            if bad:
                raise HeredityError(node, val, bad)
        memo[node] = val
    return memo[f]


def satisfies(m: Model, state: State, f: Formula | str) -> bool:
    if state not in m.structure.state_set:
        raise KeyError(f"unknown state {state!r}")
    return state in interpret(m, f)


def designated(m: Model) -> StateSet:
    if m.designation.kind == "none":
        raise DesignationError("validity needs an L- or W-designation")
    return m.designation.set


def valid(m: Model, f: Formula | str) -> bool:
    return designated(m) <= interpret(m, f)


def failing_designated(m: Model, f: Formula | str) -> list[State]:
    bad = designated(m) - interpret(m, f)
    return [x for x in m.states if x in bad]


def explain_failure(m: Model, state: State, f: Formula | str, depth: int = 0,
                    cache: dict | None = None) -> list[str]:
    """Human-readable trace of why ``state`` does not satisfy ``f``.

    One line per step: state, subformula, and the clause that fails.
    """
    f = as_formula(f)
    cache = {} if cache is None else cache
    s = m.structure
    pad = "  " * depth
    den = interpret(m, f, cache)
    if state in den:
        return [f"{pad}{state} |= {f}"]
    head = f"{pad}{state} |/= {f}"
    if isinstance(f, Var):
        return [head + f"  (not in V({f.name}))"]
    if isinstance(f, And):
        sub = f.left if state not in interpret(m, f.left, cache) else f.right
        return [head + "  (conjunct fails)"] + explain_failure(m, state, sub, depth + 1, cache)
    if isinstance(f, Or):
        return ([head + "  (both disjuncts fail)"]
                + explain_failure(m, state, f.left, depth + 1, cache)
                + explain_failure(m, state, f.right, depth + 1, cache))
    if isinstance(f, Neg):
        st = s.star[state]
        return [head + f"  ({state}* = {st} satisfies {f.inner})"]
    if isinstance(f, Imp):
        X = interpret(m, f.left, cache)
        Y = interpret(m, f.right, cache)
        for t, u in s.r_from[state]:
            if t in X and u not in Y:
                return ([head + f"  (R {state} {t} {u}, {t} |= {f.left}, {u} |/= {f.right})"]
                        + explain_failure(m, u, f.right, depth + 1, cache))
    if isinstance(f, (Box, BoxL)):
        succ = s.q_succ[state] if isinstance(f, Box) else s.ql_succ[state]
        rel = "Q" if isinstance(f, Box) else "QL"
        X = interpret(m, f.inner, cache)
        for t in sorted(succ - X, key=m.states.index):
            return ([head + f"  ({rel} {state} {t}, {t} |/= {f.inner})"]
                    + explain_failure(m, t, f.inner, depth + 1, cache))
    return [head]


# -- denotation closure -----------------------------------------------------

def denotation_closure(models: Sequence[Model], variables: Sequence[str], depth: int,
                       connectives: Sequence[type] = (And, Or, Imp, Neg, Box, BoxL),
                       ) -> dict[tuple[StateSet, ...], Formula]:
    """All tuples ``(⟦φ⟧_M1, ..., ⟦φ⟧_Mk)`` for formulas φ of depth <= ``depth``.

    Interpretation is compositional, so the denotations reachable at depth
    ``d + 1`` are exactly the connective operations applied to those reachable
    at depth ``d``.  Each tuple is mapped to one witness formula (the first
    found, so a smallest-depth one).  The models must share variable names.
    """
    def step(node_type, *parts):
        return tuple(apply_connective(m.structure, _proto(node_type), *(p[i] for p in parts))
                     for i, m in enumerate(models))

    known: dict[tuple, Formula] = {}
    for v in variables:
        key = tuple(frozenset(m.value(v)) for m in models)
        known.setdefault(key, Var(v))
    for _ in range(depth):
        current = list(known.items())
        new: dict[tuple, Formula] = {}
        for c in connectives:
            if c in (Neg, Box, BoxL):
                for key, f in current:
                    out = step(c, key)
                    if out not in known and out not in new:
                        new[out] = c(f)
            else:
                for k1, f1 in current:
                    for k2, f2 in current:
                        out = step(c, k1, k2)
                        if out not in known and out not in new:
                            new[out] = c(f1, f2)
        if not new:
            break
        known.update(new)
    return known


_P = Var("p")
_PROTOS = {And: And(_P, _P), Or: Or(_P, _P), Imp: Imp(_P, _P), Neg: Neg(_P),
           Box: Box(_P), BoxL: BoxL(_P)}


def _proto(node_type) -> Formula:
    return _PROTOS[node_type]


def equivalent_in(m: Model, f: Formula, g: Formula) -> bool:
    return valid(m, iff(f, g))
