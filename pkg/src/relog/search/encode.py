"""Propositional encoding of finite models of a fixed size.

Every model with ``n`` states is an assignment to the *model variables*,
listed in a fixed canonical order:

    leq[i][j] (i != j), star[i][j] (one-hot), D[i] (designation),
    V[p][i], R[i][j][k], Q[i][j], QL[i][j]

Structural requirements, designation requirements, frame conditions and
formula satisfaction become clauses over these plus auxiliary gate variables.
Literals may be the Python constants ``True``/``False``; gates fold them.

:class:`PlusView` presents the structure obtained by adjoining a world, a
bottom and a top to a model of an underlying encoding, with every relation
expressed through the underlying variables.  Its requirements are collected
rather than asserted, so they can be negated.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

from ..conditions import (CAnd, COr, Condition, ConditionError, Eq, Exists, Forall, Implies,
                          InL, InW, Leq, expand_macros)
from ..formula import And, Box, Formula, Imp, Neg, Or, Var
from ..structures import Designation, Model, Structure


def state_names(n: int, kind: str) -> tuple[str, ...]:
    if kind == "W":
        return ("0", "1") + tuple(f"s{i}" for i in range(2, n))
    return tuple(f"s{i}" for i in range(n))


class Encoding:
    zero = 0
    one = 1

    def __init__(self, n: int, kind: str, variables: Sequence[str]):
        if kind not in ("L", "W"):
            raise ValueError(f"kind must be L or W, got {kind!r}")
        self.n = n
        self.kind = kind
        self.variables = tuple(variables)
        self.names = state_names(n, kind)
        self.top = 0
        self.clauses: list[list[int]] = []
        self.model_vars: list[int] = []
        self.labels: dict[int, tuple] = {}
        self._gates: dict[tuple, int] = {}
        N = range(n)
        self._leq = {(i, j): self._mvar(("leq", i, j)) for i in N for j in N if i != j}
        self._star = {(i, j): self._mvar(("star", i, j)) for i in N for j in N}
        self._D = {i: self._mvar(("D", i)) for i in N}
        self._V = {(p, i): self._mvar(("V", p, i)) for p in self.variables for i in N}
        self._R = {(i, j, k): self._mvar(("R", i, j, k)) for i in N for j in N for k in N}
        self._Q = {(i, j): self._mvar(("Q", i, j)) for i in N for j in N}
        self._QL = {(i, j): self._mvar(("QL", i, j)) for i in N for j in N}
        self.structure_constraints()
        if kind == "L":
            self.l_designation()
        else:
            self.bounded_constraints()
            self.w_designation()
        self.valuation_constraints()

    # -- variables and gates ------------------------------------------------

    def new_var(self) -> int:
        self.top += 1
        return self.top

    def _mvar(self, label) -> int:
        v = self.new_var()
        self.model_vars.append(v)
        self.labels[v] = label
        return v

    def leq(self, i, j):
        return True if i == j else self._leq[i, j]

    def star(self, i, j):
        return self._star[i, j]

    def D(self, i):
        return self._D[i]

    def V(self, p, i):
        return self._V[p, i]

    def R(self, i, j, k):
        return self._R[i, j, k]

    def Q(self, i, j):
        return self._Q[i, j]

    def QL(self, i, j):
        return self._QL[i, j]

    def clause(self, lits: Iterable) -> None:
        out = []
        for x in lits:
            if x is True:
                return
            if x is False:
                continue
            out.append(x)
        # an empty clause records an unsatisfiable requirement
        self.clauses.append(sorted(set(out), key=abs))

    def require(self, x) -> None:
        self.clause([x])

    @staticmethod
    def neg(x):
        return (not x) if isinstance(x, bool) else -x

    def and_(self, lits: Iterable):
        xs = []
        for x in lits:
            if x is False:
                return False
            if x is True:
                continue
            xs.append(x)
        xs = sorted(set(xs), key=abs)
        if not xs:
            return True
        if len(xs) == 1:
            return xs[0]
        if any(-x in xs for x in xs):
            return False
        key = tuple(xs)
        g = self._gates.get(key)
        if g is None:
            g = self.new_var()
            self._gates[key] = g
            for x in xs:
                self.clauses.append([-g, x])
            self.clauses.append([g] + [-x for x in xs])
        return g

    def or_(self, lits: Iterable):
        return self.neg(self.and_(self.neg(x) for x in lits))

    def implies(self, a, b):
        return self.or_((self.neg(a), b))

    def iff(self, a, b):
        return self.and_((self.implies(a, b), self.implies(b, a)))

    # -- structural constraints -------------------------------------------

    def structure_constraints(self):
        n = range(self.n)
        neg, leq = self.neg, self.leq
        for i, j in product(n, n):
            if i < j:
                self.clause([neg(leq(i, j)), neg(leq(j, i))])
        for i, j, k in product(n, n, n):
            if len({i, j, k}) == 3:
                self.clause([neg(leq(i, j)), neg(leq(j, k)), leq(i, k)])
        for i in n:
            self.clause([self.star(i, j) for j in n])
            for j, k in product(n, n):
                if j < k:
                    self.clause([neg(self.star(i, j)), neg(self.star(i, k))])
        # star antitone
        for i, j in product(n, n):
            if i == j:
                continue
            for a, b in product(n, n):
                if a != b:
                    self.clause([neg(leq(i, j)), neg(self.star(i, a)), neg(self.star(j, b)),
                                 leq(b, a)])
        # R down, down, up; Q and QL down, up
        for i, j, k in product(n, n, n):
            r = neg(self.R(i, j, k))
            for x in n:
                if x != i:
                    self.clause([r, neg(leq(x, i)), self.R(x, j, k)])
                if x != j:
                    self.clause([r, neg(leq(x, j)), self.R(i, x, k)])
                if x != k:
                    self.clause([r, neg(leq(k, x)), self.R(i, j, x)])
        for rel in (self.Q, self.QL):
            for i, j in product(n, n):
                q = neg(rel(i, j))
                for x in n:
                    if x != i:
                        self.clause([q, neg(leq(x, i)), rel(x, j)])
                    if x != j:
                        self.clause([q, neg(leq(j, x)), rel(i, x)])

    def valuation_constraints(self):
        n = range(self.n)
        for p in self.variables:
            for i, j in product(n, n):
                if i != j:
                    self.clause([self.neg(self.V(p, i)), self.neg(self.leq(i, j)), self.V(p, j)])
            if self.kind == "W":
                self.require(self.V(p, self.one))
                self.require(self.neg(self.V(p, self.zero)))

    def l_designation(self):
        n = range(self.n)
        neg = self.neg
        for i, j in product(n, n):
            if i != j:
                self.clause([neg(self.D(i)), neg(self.leq(i, j)), self.D(j)])
        for s in n:
            self.require(self.or_(self.and_((self.D(x), self.R(x, s, s))) for x in n))
        for x, t, u in product(n, n, n):
            if t != u:
                self.clause([neg(self.D(x)), neg(self.R(x, t, u)), self.leq(t, u)])

    def bounded_constraints(self):
        n = range(self.n)
        zero, one, neg = self.zero, self.one, self.neg
        for s in n:
            self.require(self.leq(zero, s))
            self.require(self.leq(s, one))
        self.require(self.star(one, zero))
        self.require(self.star(zero, one))
        self.require(self.Q(zero, zero))
        self.require(self.QL(zero, zero))
        for s in n:
            if s != one:
                self.require(neg(self.Q(one, s)))
                self.require(neg(self.QL(one, s)))
        self.require(self.R(zero, one, zero))
        for s, t in product(n, n):
            if s != zero and t != one:
                self.require(neg(self.R(one, s, t)))

    def world(self, w):
        """Literal: ``w`` is a possible world."""
        n = range(self.n)
        parts = [self.star(w, w), self.R(w, w, w)]
        for s, t in product(n, n):
            r = self.neg(self.R(w, s, t))
            if s != self.zero:
                parts.append(self.or_((r, self.leq(w, t))))
            if t != self.one:
                parts.append(self.or_((r, self.leq(s, w))))
        return self.and_(parts)

    def w_designation(self):
        n = range(self.n)
        neg = self.neg
        for w in n:
            d = neg(self.D(w))
            self.clause([d, self.star(w, w)])
            self.clause([d, self.R(w, w, w)])
            for s, t in product(n, n):
                r = neg(self.R(w, s, t))
                if s != self.zero:
                    self.clause([d, r, self.leq(w, t)])
                if t != self.one:
                    # w* = w for designated w
                    self.clause([d, r, self.leq(s, w)])
            for u, s, t in product(n, n, n):
                if s != t:
                    self.clause([d, neg(self.QL(w, u)), neg(self.R(u, s, t)), self.leq(s, t)])
        for s in n:
            self.require(self.or_(self.and_((self.D(w), self.QL(w, u), self.R(u, s, s)))
                                  for w in n for u in n))

    # -- frame conditions --------------------------------------------------

    def _term_options(self, t, env: Mapping[str, int]) -> list[tuple[tuple, int]]:
        opts = [((), env[t.name])]
        for _ in range(t.stars):
            opts = [(conds + (self.star(v, a),), a) for conds, v in opts for a in range(self.n)]
        return opts

    def _atom(self, c: Condition, env):
        if isinstance(c, (InL, InW)):
            want = "L" if isinstance(c, InL) else "W"
            if self.kind != want:
                raise ConditionError(f"condition mentions {want} but the search designates "
                                     f"{self.kind}")
            terms = (c.a,)
        elif isinstance(c, (Leq, Eq)):
            terms = (c.a, c.b)
        else:
            terms = c.args
        options = [self._term_options(t, env) for t in terms]
        disj = []
        for combo in product(*options):
            conds = tuple(x for cs, _ in combo for x in cs)
            vals = tuple(v for _, v in combo)
            disj.append(self.and_(conds + (self._ground(c, vals),)))
        return self.or_(disj)

    def _ground(self, c: Condition, vals):
        if isinstance(c, (InL, InW)):
            return self.D(vals[0])
        if isinstance(c, Leq):
            return self.leq(*vals)
        if isinstance(c, Eq):
            return vals[0] == vals[1]
        rel = {"R": self.R, "Q": self.Q, "QL": self.QL}[c.rel]
        return rel(*vals)

    def condition(self, c: Condition, env: Mapping[str, int] | None = None):
        """Literal for ``c`` (macros must already be expanded)."""
        env = {} if env is None else env
        if isinstance(c, (CAnd, COr)):
            parts = [self.condition(p, env) for p in c.parts]
            return self.and_(parts) if isinstance(c, CAnd) else self.or_(parts)
        if isinstance(c, Implies):
            return self.implies(self.condition(c.left, env), self.condition(c.right, env))
        if isinstance(c, (Forall, Exists)):
            out = []
            for vals in product(range(self.n), repeat=len(c.vars)):
                inner = dict(env)
                inner.update(zip(c.vars, vals))
                out.append(self.condition(c.body, inner))
            return self.and_(out) if isinstance(c, Forall) else self.or_(out)
        return self._atom(c, env)

    def add_condition(self, c: Condition) -> None:
        c = expand_macros(c)
        # top-level universal instances become separate requirements
        if isinstance(c, Forall):
            for vals in product(range(self.n), repeat=len(c.vars)):
                self.require(self.condition(c.body, dict(zip(c.vars, vals))))
        else:
            self.require(self.condition(c))

    def condition_literal(self, c: Condition):
        return self.condition(expand_macros(c))

    # -- formulas ----------------------------------------------------------

    def formula(self, f: Formula, hints: bool = True) -> dict[Formula, list]:
        """Literal ``X[φ][i]`` meaning ``i`` satisfies φ, for every subformula.

        ``hints`` adds heredity clauses; they hold in every model, so they only
        help propagation, but must be left out when heredity is being tested.
        """
        n = range(self.n)
        neg = self.neg
        X: dict[Formula, list] = {}
        for node in f.subformulas():
            if isinstance(node, Var):
                if node.name not in self.variables:
                    raise ValueError(f"variable {node.name} not in the encoding")
                X[node] = [self.V(node.name, i) for i in n]
            elif isinstance(node, And):
                X[node] = [self.and_((X[node.left][i], X[node.right][i])) for i in n]
            elif isinstance(node, Or):
                X[node] = [self.or_((X[node.left][i], X[node.right][i])) for i in n]
            elif isinstance(node, Neg):
                a = X[node.inner]
                X[node] = [self.and_(self.or_((neg(self.star(i, j)), neg(a[j]))) for j in n)
                           for i in n]
            elif isinstance(node, Imp):
                a, b = X[node.left], X[node.right]
                X[node] = [self.and_(self.or_((neg(self.R(i, t, u)), neg(a[t]), b[u]))
                                     for t in n for u in n) for i in n]
            else:
                rel = self.Q if isinstance(node, Box) else self.QL
                a = X[node.inner]
                X[node] = [self.and_(self.or_((neg(rel(i, t)), a[t])) for t in n) for i in n]
            if hints:
                lits = X[node]
                for i, j in product(n, n):
                    if i != j:
                        self.clause([neg(lits[i]), neg(self.leq(i, j)), lits[j]])
        return X

    def refute(self, f: Formula) -> None:
        """Require some designated state to falsify ``f``."""
        X = self.formula(f)[f]
        self.require(self.or_(self.and_((self.D(d), self.neg(X[d]))) for d in range(self.n)))

    # -- decoding ----------------------------------------------------------

    def decode(self, true_vars: set[int]) -> Model:
        nm = self.names
        n = range(self.n)

        def on(v):
            return v is True or (v is not False and v in true_vars)

        leq = frozenset((nm[i], nm[j]) for i in n for j in n if on(self.leq(i, j)))
        star = {nm[i]: nm[j] for i in n for j in n if on(self.star(i, j))}
        R = frozenset((nm[i], nm[j], nm[k]) for (i, j, k), v in self._R.items() if on(v))
        Q = frozenset((nm[i], nm[j]) for (i, j), v in self._Q.items() if on(v))
        QL = frozenset((nm[i], nm[j]) for (i, j), v in self._QL.items() if on(v))
        bounds = (nm[0], nm[1]) if self.kind == "W" else None
        structure = Structure(self.names, leq, star, R, Q, QL, bounds)
        des = Designation(self.kind, frozenset(nm[i] for i in n if on(self.D(i))))
        val = {p: frozenset(nm[i] for i in n if on(self.V(p, i))) for p in self.variables}
        return Model(structure, des, val)


class PlusView(Encoding):
    """The plus structure of a model of ``base`` (an L-encoding).

    States ``0..n-1`` are the old ones, then the world ``w``, bottom and top.
    With ``free_world_values`` the world's membership in each ``V(p)`` is a
    fresh variable instead of False, so the variables denote arbitrary
    upsets that agree with the old valuation on old states.
    """

    def __init__(self, base: Encoding, free_world_values: bool = False):
        if base.kind != "L":
            raise ValueError("the plus construction starts from an L-encoding")
        self.base = base
        self.n = base.n + 3
        self.kind = "W"
        self.variables = base.variables
        self.w, self.zero, self.one = base.n, base.n + 1, base.n + 2
        self.clauses = base.clauses
        self._gates = base._gates
        self.collected: list = []
        self._world_vals = {p: (base.new_var() if free_world_values else False)
                            for p in self.variables}

    def new_var(self) -> int:
        return self.base.new_var()

    def _old(self, *xs) -> bool:
        return all(x < self.base.n for x in xs)

    def leq(self, i, j):
        if self._old(i, j):
            return self.base.leq(i, j)
        return i == j or j == self.one or i == self.zero

    def star(self, i, j):
        if self._old(i, j):
            return self.base.star(i, j)
        return (i, j) in ((self.w, self.w), (self.zero, self.one), (self.one, self.zero))

    def D(self, i):
        return i == self.w

    def V(self, p, i):
        if self._old(i):
            return self.base.V(p, i)
        if i == self.w:
            return self._world_vals[p]
        return i == self.one

    def R(self, i, j, k):
        if self._old(i, j, k):
            return self.base.R(i, j, k)
        return (self.zero in (i, j) or k == self.one or (i, j, k) == (self.w,) * 3)

    def Q(self, i, j):
        if self._old(i, j):
            return self.base.Q(i, j)
        return (i, j) == (self.w, self.w) or j == self.one or i == self.zero

    def QL(self, i, j):
        if self._old(i, j):
            return self.base.QL(i, j)
        if i == self.w and self._old(j):
            return self.base.D(j)
        return (i, j) == (self.w, self.w) or j == self.one or i == self.zero

    # requirements are gathered into a single literal instead of asserted
    def clause(self, lits: Iterable) -> None:
        self.collected.append(self.or_(lits))

    def require(self, x) -> None:
        self.collected.append(x)

    def w_model_literal(self):
        """Literal: the plus structure is a W-model."""
        self.collected = []
        self.structure_constraints()
        self.bounded_constraints()
        self.w_designation()
        self.valuation_constraints()
        lit = self.and_(self.collected)
        self.collected = []
        return lit

    def decode(self, true_vars):
        raise NotImplementedError("decode the base encoding and apply plus_construction")
