"""First-order frame conditions, their evaluation, C-variants and the logic registry.

Conditions are closed first-order formulas over states.  They are written
internally in a small ASCII syntax::

    forall s t u. R(s,t,u) => R(s,u*,t*)
    forall s. exists t. t in L & R(s,t,s)

with atoms ``R(a,b,c)``, ``Q(a,b)``, ``QL(a,b)``, ``a <= b``, ``a = b``,
``a in L``, ``a in W`` and the macros

    R4(s,t,u,v)  := exists x. R(s,t,x) & R(x,u,v)      printed Rstuv
    RG(s,t,u,v)  := exists x. R(s,x,v) & R(t,u,x)      printed Rs(tu)v
    RQ(s,t,u)    := exists x. R(s,t,x) & Q(x,u)
    QR(s,t,u)    := exists x. Q(s,x) & R(x,t,u)

Terms are variables with any number of stars (``s*``, ``s**``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .formula import Formula, parse as parse_formula
from .structures import Model, Report


class ConditionError(ValueError):
    pass


class UnknownLogicError(ValueError):
    pass


class ExcludedConditionError(UnknownLogicError):
    pass


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    name: str
    stars: int = 0

    def __str__(self):
        return self.name + "*" * self.stars


class Condition:
    __slots__ = ()

    def __str__(self):
        return render_condition(self, implicit_universal=False)


@dataclass(frozen=True)
class Leq(Condition):
    a: Term
    b: Term


@dataclass(frozen=True)
class Eq(Condition):
    a: Term
    b: Term


@dataclass(frozen=True)
class Rel(Condition):
    rel: str  # "R", "Q" or "QL"
    args: tuple[Term, ...]


@dataclass(frozen=True)
class InL(Condition):
    a: Term


@dataclass(frozen=True)
class InW(Condition):
    a: Term


@dataclass(frozen=True)
class Macro(Condition):
    kind: str  # "R4", "RG", "RQ", "QR"
    args: tuple[Term, ...]


@dataclass(frozen=True)
class CAnd(Condition):
    parts: tuple[Condition, ...]


@dataclass(frozen=True)
class COr(Condition):
    parts: tuple[Condition, ...]


@dataclass(frozen=True)
class Implies(Condition):
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Forall(Condition):
    vars: tuple[str, ...]
    body: Condition


@dataclass(frozen=True)
class Exists(Condition):
    vars: tuple[str, ...]
    body: Condition


ATOMS = (Leq, Eq, Rel, InL, InW, Macro)
_ARITY = {"R": 3, "Q": 2, "QL": 2, "R4": 4, "RG": 4, "RQ": 3, "QR": 3}


def subconditions(c: Condition) -> Iterator[Condition]:
    yield c
    if isinstance(c, (CAnd, COr)):
        for p in c.parts:
            yield from subconditions(p)
    elif isinstance(c, Implies):
        yield from subconditions(c.left)
        yield from subconditions(c.right)
    elif isinstance(c, (Forall, Exists)):
        yield from subconditions(c.body)


def terms_of(c: Condition) -> tuple[Term, ...]:
    if isinstance(c, (Leq, Eq)):
        return (c.a, c.b)
    if isinstance(c, (Rel, Macro)):
        return c.args
    if isinstance(c, (InL, InW)):
        return (c.a,)
    return ()


def variable_names(c: Condition) -> set[str]:
    out: set[str] = set()
    for sub in subconditions(c):
        out.update(t.name for t in terms_of(sub))
        if isinstance(sub, (Forall, Exists)):
            out.update(sub.vars)
    return out


def free_variables(c: Condition) -> set[str]:
    if isinstance(c, ATOMS):
        return {t.name for t in terms_of(c)}
    if isinstance(c, (CAnd, COr)):
        return set().union(*(free_variables(p) for p in c.parts))
    if isinstance(c, Implies):
        return free_variables(c.left) | free_variables(c.right)
    return free_variables(c.body) - set(c.vars)


def mentions(c: Condition, atom_type) -> bool:
    return any(isinstance(s, atom_type) for s in subconditions(c))


def conjoin(parts) -> Condition:
    flat: list[Condition] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, CAnd) else (p,))
    return flat[0] if len(flat) == 1 else CAnd(tuple(flat))


# -- parser -----------------------------------------------------------------

_CTOK = re.compile(r"\s*(forall|exists|in|=>|<=|[A-Za-z_][A-Za-z0-9_]*|\*|[().,&|=])")


def _ctokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _CTOK.match(text, pos)
        if not m:
            raise ConditionError(f"bad condition syntax at {pos}: {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_condition(text: str) -> Condition:
    toks = _ctokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ""

    def take(expected=None):
        nonlocal i
        tok = peek()
        if expected is not None and tok != expected:
            raise ConditionError(f"expected {expected!r}, got {tok!r} in {text!r}")
        i += 1
        return tok

    def term():
        name = take()
        stars = 0
        while peek() == "*":
            take()
            stars += 1
        return Term(name, stars)

    def cond():
        if peek() in ("forall", "exists"):
            q = take()
            vs = []
            while peek() != ".":
                vs.append(take())
            take(".")
            body = cond()
            return (Forall if q == "forall" else Exists)(tuple(vs), body)
        left = disj()
        if peek() == "=>":
            take()
            return Implies(left, cond())
        return left

    def disj():
        parts = [conj()]
        while peek() == "|":
            take()
            parts.append(conj())
        return parts[0] if len(parts) == 1 else COr(tuple(parts))

    def conj():
        parts = [atom()]
        while peek() == "&":
            take()
            parts.append(atom())
        return parts[0] if len(parts) == 1 else CAnd(tuple(parts))

    def atom():
        tok = peek()
        if tok == "(":
            take()
            c = cond()
            take(")")
            return c
        if tok in ("forall", "exists"):
            return cond()
        if tok in _ARITY and i + 1 < len(toks) and toks[i + 1] == "(":
            take()
            take("(")
            args = [term()]
            while peek() == ",":
                take()
                args.append(term())
            take(")")
            if len(args) != _ARITY[tok]:
                raise ConditionError(f"{tok} expects {_ARITY[tok]} arguments")
            if tok in ("R", "Q", "QL"):
                return Rel(tok, tuple(args))
            return Macro(tok, tuple(args))
        a = term()
        op = take()
        if op == "<=":
            return Leq(a, term())
        if op == "=":
            return Eq(a, term())
        if op == "in":
            which = take()
            if which == "L":
                return InL(a)
            if which == "W":
                return InW(a)
        raise ConditionError(f"cannot parse atom near {tok!r} in {text!r}")

    c = cond()
    if i != len(toks):
        raise ConditionError(f"trailing input {toks[i:]} in {text!r}")
    return c


# -- macros -----------------------------------------------------------------

def _fresh(used: set[str], prefer=("x", "y", "z", "v1", "v2")) -> str:
    for cand in prefer:
        if cand not in used:
            used.add(cand)
            return cand
    k = 0
    while f"x{k}" in used:
        k += 1
    used.add(f"x{k}")
    return f"x{k}"


def expand_macros(c: Condition, used: set[str] | None = None) -> Condition:
    used = variable_names(c) if used is None else used
    if isinstance(c, Macro):
        x = Term(_fresh(used))
        a = c.args
        if c.kind == "R4":
            body = CAnd((Rel("R", (a[0], a[1], x)), Rel("R", (x, a[2], a[3]))))
        elif c.kind == "RG":
            body = CAnd((Rel("R", (a[0], x, a[3])), Rel("R", (a[1], a[2], x))))
        elif c.kind == "RQ":
            body = CAnd((Rel("R", (a[0], a[1], x)), Rel("Q", (x, a[2]))))
        else:
            body = CAnd((Rel("Q", (a[0], x)), Rel("R", (x, a[1], a[2]))))
        return Exists((x.name,), body)
    if isinstance(c, CAnd):
        return CAnd(tuple(expand_macros(p, used) for p in c.parts))
    if isinstance(c, COr):
        return COr(tuple(expand_macros(p, used) for p in c.parts))
    if isinstance(c, Implies):
        return Implies(expand_macros(c.left, used), expand_macros(c.right, used))
    if isinstance(c, (Forall, Exists)):
        return type(c)(c.vars, expand_macros(c.body, used))
    return c


# -- evaluation -------------------------------------------------------------

@dataclass
class ConditionResult:
    holds: bool
    witness: dict[str, str] = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _eval_term(m: Model, t: Term, env: Mapping[str, str]) -> str:
    x = env[t.name]
    for _ in range(t.stars):
        x = m.structure.star[x]
    return x


def _holds(m: Model, c: Condition, env: dict[str, str]) -> bool:
    s = m.structure
    if isinstance(c, Rel):
        args = tuple(_eval_term(m, t, env) for t in c.args)
        if c.rel == "R":
            return args in s.R
        return args in (s.Q if c.rel == "Q" else s.QL)
    if isinstance(c, Leq):
        return (_eval_term(m, c.a, env), _eval_term(m, c.b, env)) in s.leq
    if isinstance(c, Eq):
        return _eval_term(m, c.a, env) == _eval_term(m, c.b, env)
    if isinstance(c, InL):
        return _eval_term(m, c.a, env) in m.designation.set
    if isinstance(c, InW):
        return _eval_term(m, c.a, env) in m.designation.set
    if isinstance(c, CAnd):
        return all(_holds(m, p, env) for p in c.parts)
    if isinstance(c, COr):
        return any(_holds(m, p, env) for p in c.parts)
    if isinstance(c, Implies):
        return not _holds(m, c.left, env) or _holds(m, c.right, env)
    if isinstance(c, (Forall, Exists)):
        want_all = isinstance(c, Forall)
        for vals in product(s.states, repeat=len(c.vars)):
            inner = dict(env)
            inner.update(zip(c.vars, vals))
            if _holds(m, c.body, inner) != want_all:
                return not want_all
        return want_all
    if isinstance(c, Macro):
        return _holds(m, expand_macros(c, set(env) | variable_names(c)), env)
    raise TypeError(f"not a condition: {c!r}")


def _check_designation_kind(m: Model, c: Condition) -> None:
    if mentions(c, InL) and m.designation.kind != "L":
        raise ConditionError("condition mentions L but the structure has no L-designation")
    if mentions(c, InW) and m.designation.kind != "W":
        raise ConditionError("condition mentions W but the structure has no W-designation")


def evaluate_condition(m: Model, c: Condition) -> ConditionResult:
    """Whether ``c`` holds in ``m``; on failure, the values of the outermost
    universally quantified variables that falsify it."""
    _check_designation_kind(m, c)
    free = free_variables(c)
    if free:
        raise ConditionError(f"condition is not closed: free {sorted(free)}")
    c = expand_macros(c)
    if isinstance(c, Forall):
        for vals in product(m.structure.states, repeat=len(c.vars)):
            env = dict(zip(c.vars, vals))
            if not _holds(m, c.body, env):
                return ConditionResult(False, env)
        return ConditionResult(True)
    return ConditionResult(_holds(m, c, {}))


# -- C-variants -------------------------------------------------------------

_FRESH_WORLDS = ("w", "u", "v", "y", "z", "x")


def c_variant(c: Condition) -> Condition:
    """Replace each ``s in L`` by ``exists w. w in W & QL(w, s)`` with ``w`` fresh.

    When the replaced atom is a conjunct directly under an existential
    quantifier, the fresh witness joins that quantifier (placed first), so
    ``exists t. t in L & R(s,t,s)`` becomes
    ``exists w t. w in W & QL(w,t) & R(s,t,s)``.  Conditions without ``L``
    are returned unchanged.
    """
    if not mentions(c, InL):
        return c
    used = variable_names(c)

    def fresh() -> str:
        for cand in _FRESH_WORLDS:
            if cand not in used:
                used.add(cand)
                return cand
        return _fresh(used)

    def lifted(a: Term) -> tuple[str, Condition]:
        w = fresh()
        return w, CAnd((InW(Term(w)), Rel("QL", (Term(w), a))))

    def go(node: Condition) -> Condition:
        if isinstance(node, InL):
            w, body = lifted(node.a)
            return Exists((w,), body)
        if isinstance(node, Exists):
            parts = node.body.parts if isinstance(node.body, CAnd) else (node.body,)
            if any(isinstance(p, InL) for p in parts):
                new_vars: list[str] = []
                new_parts: list[Condition] = []
                for p in parts:
                    if isinstance(p, InL):
                        w, body = lifted(p.a)
                        new_vars.append(w)
                        new_parts.extend(body.parts)
                    else:
                        new_parts.append(go(p))
                return Exists(tuple(new_vars) + node.vars, conjoin(new_parts))
            return Exists(node.vars, go(node.body))
        if isinstance(node, Forall):
            return Forall(node.vars, go(node.body))
        if isinstance(node, CAnd):
            return CAnd(tuple(go(p) for p in node.parts))
        if isinstance(node, COr):
            return COr(tuple(go(p) for p in node.parts))
        if isinstance(node, Implies):
            return Implies(go(node.left), go(node.right))
        return node

    return go(c)


# -- printing ---------------------------------------------------------------

def _vars_text(names) -> str:
    names = list(names)
    return "".join(names) if all(len(n) == 1 for n in names) else ",".join(names)


def _args_text(terms) -> str:
    if all(len(t.name) == 1 for t in terms):
        return "".join(str(t) for t in terms)
    return "(" + ",".join(str(t) for t in terms) + ")"


def _is_ql_of_w(c: Condition) -> Term | None:
    """The ``v`` of ``exists w. w in W & QL(w, v)``, else None."""
    if (isinstance(c, Exists) and len(c.vars) == 1 and isinstance(c.body, CAnd)
            and len(c.body.parts) == 2):
        w = c.vars[0]
        a, b = c.body.parts
        if (isinstance(a, InW) and a.a == Term(w) and isinstance(b, Rel) and b.rel == "QL"
                and b.args[0] == Term(w) and b.args[1].name != w):
            return b.args[1]
    return None


_LEVEL = {Implies: 1, COr: 2, CAnd: 3}


def render_condition(c: Condition, implicit_universal: bool = True,
                     abbreviate: bool = False) -> str:
    """Standard notation: ``Rstu ⇒ Rsu*t*``, ``∃w(w ∈ W ∧ Q_L ws) ⇒ s* ≤ s``.

    With ``implicit_universal`` the outer universal prefix is left implicit
    unless the matrix starts with an existential quantifier.  With
    ``abbreviate``, ``∃w(w ∈ W ∧ Q_L wv)`` prints as ``v ∈ Q_L(W)``.
    """
    if implicit_universal and isinstance(c, Forall):
        body = c.body
        while isinstance(body, Forall):
            body = body.body
        if not isinstance(body, Exists):
            return _render(body, abbreviate)
    return _render(c, abbreviate)


def _render(c: Condition, abbr: bool) -> str:
    if abbr:
        v = _is_ql_of_w(c)
        if v is not None:
            return f"{v} ∈ Q_L(W)"
    if isinstance(c, Rel):
        head = {"R": "R", "Q": "Q", "QL": "Q_L "}[c.rel]
        return head + _args_text(c.args)
    if isinstance(c, Macro):
        a = c.args
        if c.kind == "R4":
            return "R" + _args_text(a)
        if c.kind == "RG":
            return f"R{a[0]}({_args_text(a[1:3])}){a[3]}"
        return c.kind + _args_text(a)
    if isinstance(c, Leq):
        return f"{c.a} ≤ {c.b}"
    if isinstance(c, Eq):
        return f"{c.a} = {c.b}"
    if isinstance(c, InL):
        return f"{c.a} ∈ L"
    if isinstance(c, InW):
        return f"{c.a} ∈ W"
    if isinstance(c, (Forall, Exists)):
        sym = "∀" if isinstance(c, Forall) else "∃"
        body = c.body
        if isinstance(body, (Forall, Exists)):
            inner = _render(body, abbr)
        elif isinstance(body, ATOMS):
            inner = " " + _render(body, abbr)
        else:
            inner = "(" + _render(body, abbr) + ")"
        return sym + _vars_text(c.vars) + inner
    level = _LEVEL[type(c)]

    def child(p, strict):
        text = _render(p, abbr)
        pl = _LEVEL.get(type(p), 9)
        if abbr and _is_ql_of_w(p) is not None:
            pl = 9
        if pl < level or (strict and pl == level):
            return f"({text})"
        return text

    if isinstance(c, Implies):
        return f"{child(c.left, True)} ⇒ {child(c.right, True)}"
    sym = " ∧ " if isinstance(c, CAnd) else " ∨ "
    return sym.join(child(p, False) for p in c.parts)


_NOTATION_TOKEN = re.compile(r"Q_L|[A-Za-z]|[0-9]|\*|≤|∈|∧|∨|⇒|∃|∀|\(|\)|=|,")


def notation_tokens(text: str) -> list[str]:
    """Tokenize condition text, ignoring whitespace."""
    return _NOTATION_TOKEN.findall(text)


# -- condition table ---------------------------------------------------------

@dataclass(frozen=True)
class FrameRow:
    tag: str
    condition: Condition
    axiom: Formula | None = None
    rule: str | None = None


_ROWS = [
    ("DN", "forall s. s** = s", "p <-> ~~p", None),
    ("Cp", "forall s t u. R(s,t,u) => R(s,u*,t*)", "(p -> q) -> ~q -> ~p", None),
    ("WB", "forall s t u. R(s,t,u) => RG(s,s,t,u)", "(p -> q) & (q -> r) -> p -> r", None),
    ("X", "forall s. s in L => s* <= s", "p | ~p", None),
    ("Rd", "forall s. R(s,s*,s)", "(p -> ~p) -> ~p", None),
    ("B", "forall s t u v. R4(s,t,u,v) => RG(s,t,u,v)", "(p -> q) -> (r -> p) -> r -> q", None),
    ("CB", "forall s t u v. R4(s,t,u,v) => RG(t,s,u,v)", "(p -> q) -> (q -> r) -> p -> r", None),
    ("W", "forall s t u. R(s,t,u) => R4(s,t,t,u)", "(p -> p -> q) -> p -> q", None),
    ("C", "forall s t u v. R4(s,t,u,v) => R4(s,u,t,v)", "(p -> q -> r) -> q -> p -> r", None),
    ("M", "forall s t u. R(s,t,u) => s <= u | t <= u", "p -> p -> p", None),
    ("ER", "forall s. exists t. t in L & R(s,t,s)", None, "ER"),
    ("Nec", "forall s t. s in L & Q(s,t) => t in L", None, "Nec"),
    ("BoxK", "forall s t u. RQ(s,t,u) => exists x. Q(t,x) & QR(s,x,u)",
     "[](p -> q) -> []p -> []q", None),
    ("BoxT", "forall s. Q(s,s)", "[]p -> p", None),
    ("BoxD", "forall s. exists x. Q(s,x*) & Q(s*,x)", "[]~p -> ~[]p", None),
    ("Box4", "forall s t u. Q(s,t) & Q(t,u) => Q(s,u)", "[]p -> [][]p", None),
    ("Box5", "forall s t u. Q(s*,u) & Q(s,t) => Q(t*,u)", "~[]p -> []~[]p", None),
]

CONDITION_TABLE: dict[str, FrameRow] = {
    tag: FrameRow(tag, parse_condition(cond), parse_formula(ax) if ax else None, rule)
    for tag, cond, ax, rule in _ROWS
}
TAGS: tuple[str, ...] = tuple(CONDITION_TABLE)

# Weakening and mingle-3 are recognised only to be refused.
EXCLUDED: dict[str, Condition] = {
    "K": parse_condition("forall s t u. R(s,t,u) => s <= u"),
    "M3": parse_condition("forall s t u. s in L & t <= u => t <= s"),
}

PROPOSITIONAL_CHAIN = {
    "BM": (),
    "DW": ("Cp",),
    "TW": ("Cp", "B", "CB"),
    "T": ("Cp", "B", "CB", "WB", "X", "Rd", "W"),
    "E": ("Cp", "B", "CB", "WB", "X", "Rd", "W", "ER"),
    "R": ("Cp", "B", "CB", "WB", "X", "Rd", "W", "ER", "C"),
    "RM": ("Cp", "B", "CB", "WB", "X", "Rd", "W", "ER", "C", "M"),
}
MODAL_LEVEL = {"C": (), "R": ("BoxK",), "K": ("BoxK", "Nec")}
MODAL_SUFFIX = {"T": "BoxT", "D": "BoxD", "4": "Box4", "5": "Box5"}

BASE_AXIOMS = tuple(f"a{i}" for i in range(1, 13))
BASE_RULES = ("US", "MP", "Adj", "Aff", "Con", "BoxL-Mon", "Box-Mon")

_NAME_RE = re.compile(r"^(BM|DW|TW|RM|T|E|R)\.([CRK])([TD45]*)((?:\+[A-Za-z0-9]+)*)$")


@dataclass(frozen=True)
class LogicSpec:
    name: str
    classicized: bool
    conditions: dict[str, Condition]
    axioms: tuple[str, ...]
    rules: tuple[str, ...]

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(self.conditions)

    @property
    def family(self) -> str:
        return "CL" if self.classicized else "L"


def split_classicized(name: str) -> tuple[str, bool]:
    """``"C-BM.C"`` -> ``("BM.C", True)``."""
    if name.startswith("C-"):
        return name[2:], True
    return name, False


def logic_tags(name: str, pair_boxd_with_dn: bool = False) -> tuple[str, ...]:
    """Condition tags of the named logic, in table order."""
    m = _NAME_RE.match(name)
    if m is None:
        for bad in EXCLUDED:
            if f"+{bad}" in name:
                raise ExcludedConditionError(
                    f"condition ({bad}) is excluded from the supported logics")
        raise UnknownLogicError(
            f"unknown logic {name!r}; expected <PL>.<X><suffixes> with PL in "
            f"{sorted(PROPOSITIONAL_CHAIN)}, X in C/R/K, suffixes from T,D,4,5")
    pl, level, suffixes, mods = m.groups()
    if len(set(suffixes)) != len(suffixes):
        raise UnknownLogicError(f"repeated modal suffix in {name!r}")
    tags = set(PROPOSITIONAL_CHAIN[pl]) | set(MODAL_LEVEL[level])
    tags |= {MODAL_SUFFIX[c] for c in suffixes}
    for mod in filter(None, mods.split("+")):
        if mod in EXCLUDED:
            raise ExcludedConditionError(
                f"condition ({mod}) is excluded from the supported logics")
        if mod not in CONDITION_TABLE:
            raise UnknownLogicError(f"unknown modifier +{mod} in {name!r}")
        tags.add(mod)
    if pair_boxd_with_dn and "BoxD" in tags:
        tags.add("DN")
    return tuple(t for t in TAGS if t in tags)


def logic_conditions(name: str, classicized: bool | None = None,
                     pair_boxd_with_dn: bool = False) -> LogicSpec:
    base, prefixed = split_classicized(name)
    classicized = prefixed if classicized is None else (classicized or prefixed)
    tags = logic_tags(base, pair_boxd_with_dn)
    conds = {t: CONDITION_TABLE[t].condition for t in tags}
    if classicized:
        conds = {t: c_variant(c) for t, c in conds.items()}
    axioms = BASE_AXIOMS + tuple(t for t in tags if CONDITION_TABLE[t].axiom is not None)
    rules = BASE_RULES + tuple(CONDITION_TABLE[t].rule for t in tags if CONDITION_TABLE[t].rule)
    full = ("C-" if classicized else "") + base
    return LogicSpec(full, classicized, conds, axioms, rules)


def check_logic_frame(m: Model, name: str, classicized: bool | None = None,
                      pair_boxd_with_dn: bool = False) -> Report:
    spec = logic_conditions(name, classicized, pair_boxd_with_dn)
    want = "W" if spec.classicized else "L"
    if m.designation.kind != want:
        raise ConditionError(
            f"{spec.name} frames need a {want}-designation, model has {m.designation.kind!r}")
    rep = Report()
    for tag, cond in spec.conditions.items():
        renamed = spec.classicized and cond is not CONDITION_TABLE[tag].condition
        label = ("C-" if renamed else "") + tag
        rep.checked.append(label)
        res = evaluate_condition(m, cond)
        if not res:
            wit = tuple(res.witness.values())
            rep.add(label, wit, render_condition(cond) + "  with "
                    + ", ".join(f"{k}={v}" for k, v in res.witness.items()))
    return rep


def registry_text() -> str:
    lines = [
        "Logic names: <PL>.<X><suffixes>[+TAG...], optionally prefixed 'C-' for the",
        "classicized system.",
        "  PL: BM, DW (+Cp), TW (+B, CB), T (+WB, X, Rd, W), E (+ER), R (+C), RM (+M)",
        "  X:  C (conjunctive regularity), R (+BoxK), K (+BoxK, Nec)",
        "  suffixes: T (BoxT), D (BoxD), 4 (Box4), 5 (Box5)",
        "  +TAG adds any frame condition below, e.g. DW.C+DN",
        "  (K) and (M3) are not supported.",
        "",
        "Frame conditions:",
    ]
    for row in CONDITION_TABLE.values():
        corr = str(row.axiom) if row.axiom is not None else f"rule {row.rule}"
        lines.append(f"  {row.tag:5} {render_condition(row.condition):32} {corr}")
    return "\n".join(lines)
