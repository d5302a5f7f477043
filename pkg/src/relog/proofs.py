"""Hilbert systems for the relevant modal logics and their classicized versions.

A proof is a list of steps.  Each step names either an axiom schema (with an
optional substitution; when omitted the checker finds one by matching) or a
rule together with the 1-based indices of its premises.

Classicized systems use a fixed classical basis (``cpc1`` .. ``cpc9``) with
modus ponens and substitution, an axiom ``L-X`` = ``[L]X`` for every axiom
``X`` of the underlying logic, a rule ``L-r`` for every rule ``r`` (premises
and conclusion all under ``[L]``), and the bridge rule ``BR``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .conditions import CONDITION_TABLE, logic_tags, split_classicized, BASE_RULES
from .formula import (And, Box, BoxL, Formula, Imp, Neg, Or, Var, as_formula, conj, match,
                      parse, substitute)


class ProofFileError(ValueError):
    pass


class ShapeError(ValueError):
    pass


def _schemas(rows: Sequence[tuple[str, str]]) -> dict[str, Formula]:
    return {name: parse(text) for name, text in rows}


BASE_SCHEMAS = _schemas([
    ("a1", "p -> p"),
    ("a2", "~(p & q) -> ~p | ~q"),
    ("a3", "~p & ~q -> ~(p | q)"),
    ("a4", "p & q -> p"),
    ("a5", "p & q -> q"),
    ("a6", "p -> p | q"),
    ("a7", "q -> p | q"),
    ("a8", "(p -> q) & (p -> r) -> p -> q & r"),
    ("a9", "(p -> r) & (q -> r) -> p | q -> r"),
    ("a10", "p & (q | r) -> p & q | p & r"),
    ("a11", "[]p & []q -> [](p & q)"),
    ("a12", "[L]p & [L]q -> [L](p & q)"),
])

CPC_SCHEMAS = _schemas([
    ("cpc1", "p -> q -> p"),
    ("cpc2", "(p -> q -> r) -> (p -> q) -> p -> r"),
    ("cpc3", "(~p -> ~q) -> q -> p"),
    ("cpc4", "p & q -> p"),
    ("cpc5", "p & q -> q"),
    ("cpc6", "p -> q -> p & q"),
    ("cpc7", "p -> p | q"),
    ("cpc8", "q -> p | q"),
    ("cpc9", "(p -> r) -> (q -> r) -> p | q -> r"),
])

LIFT = "L-"


# -- systems ----------------------------------------------------------------

@dataclass(frozen=True)
class System:
    family: str  # "L" or "CL"
    logic: str   # base name, e.g. "BM.C"
    axioms: dict[str, Formula]
    rules: tuple[str, ...]

    @property
    def name(self) -> str:
        return ("C-" if self.family == "CL" else "") + self.logic


def axioms_of(name: str, family: str | None = None) -> System:
    """Axiom schemas and rule names of a logic (``family`` "L" or "CL").

    A ``C-`` prefix on ``name`` selects the classicized family.
    """
    base, prefixed = split_classicized(name)
    family = family or ("CL" if prefixed else "L")
    if prefixed and family != "CL":
        raise ValueError(f"{name!r} names a classicized system")
    if family not in ("L", "CL"):
        raise ValueError(f"unknown family {family!r}")
    tags = logic_tags(base)
    axioms = dict(BASE_SCHEMAS)
    axioms.update({t: CONDITION_TABLE[t].axiom for t in tags
                   if CONDITION_TABLE[t].axiom is not None})
    rules = BASE_RULES + tuple(CONDITION_TABLE[t].rule for t in tags if CONDITION_TABLE[t].rule)
    if family == "L":
        return System("L", base, axioms, rules)
    cl_axioms = dict(CPC_SCHEMAS)
    cl_axioms.update({LIFT + k: BoxL(v) for k, v in axioms.items()})
    cl_rules = ("MP", "US") + tuple(LIFT + r for r in rules) + ("BR",)
    return System("CL", base, cl_axioms, cl_rules)


# -- proofs -----------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    formula: Formula
    by: str
    premises: tuple[int, ...] = ()
    subst: Mapping[str, Formula] | None = None


@dataclass
class Proof:
    family: str
    logic: str
    steps: list[Step] = field(default_factory=list)

    @property
    def conclusion(self) -> Formula | None:
        return self.steps[-1].formula if self.steps else None

    @property
    def system_name(self) -> str:
        base, _ = split_classicized(self.logic)
        return ("C-" if self.family == "CL" else "") + base

    def add(self, formula, by: str, premises: Sequence[int] = (),
            subst: Mapping[str, Formula | str] | None = None) -> int:
        sub = None if subst is None else {k: as_formula(v) for k, v in subst.items()}
        self.steps.append(Step(as_formula(formula), by, tuple(premises), sub))
        return len(self.steps)


@dataclass
class Verdict:
    ok: bool
    failed_step: int | None = None
    reason: str = ""
    conclusion: Formula | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return f"accepted: {self.conclusion}"
        return f"rejected at step {self.failed_step}: {self.reason}"


# Each checker gets the conclusion, the premise formulas and the substitution
# and returns None when the application is correct, else a reason.
RuleCheck = Callable[[Formula, list[Formula], Mapping | None], str | None]


def _arity(n):
    def wrap(fn):
        def checked(f, prem, sub):
            if len(prem) != n:
                return f"expects {n} premise(s), got {len(prem)}"
            return fn(f, prem, sub)
        return checked
    return wrap


@_arity(1)
def _us(f, prem, sub):
    if sub is not None:
        return None if substitute(prem[0], sub) == f else "not the stated substitution instance"
    return None if match(prem[0], f) is not None else "not a substitution instance of the premise"


@_arity(2)
def _mp(f, prem, sub):
    a, b = prem
    if b == Imp(a, f) or a == Imp(b, f):
        return None
    return "premises are not of the form φ and φ -> ψ with ψ the conclusion"


@_arity(2)
def _adj(f, prem, sub):
    return None if f == And(prem[0], prem[1]) else "conclusion is not the conjunction of the premises"


@_arity(2)
def _aff(f, prem, sub):
    x, y = prem
    if not (isinstance(x, Imp) and isinstance(y, Imp)):
        return "premises must be implications φ' -> φ and ψ -> ψ'"
    want = Imp(Imp(x.right, y.left), Imp(x.left, y.right))
    return None if f == want else f"conclusion should be {want}"


def _unary_mon(op, label):
    @_arity(1)
    def check(f, prem, sub):
        x = prem[0]
        if not isinstance(x, Imp):
            return "premise must be an implication"
        want = op(x)
        return None if f == want else f"conclusion should be {want}"
    check.__name__ = label
    return check


_con = _unary_mon(lambda x: Imp(Neg(x.right), Neg(x.left)), "Con")
_box_mon = _unary_mon(lambda x: Imp(Box(x.left), Box(x.right)), "Box-Mon")
_boxl_mon = _unary_mon(lambda x: Imp(BoxL(x.left), BoxL(x.right)), "BoxL-Mon")


@_arity(1)
def _er(f, prem, sub):
    if isinstance(f, Imp) and isinstance(f.left, Imp) and f.left.left == prem[0] \
            and f.left.right == f.right:
        return None
    return "conclusion should be (φ -> ψ) -> ψ for the premise φ"


@_arity(1)
def _nec(f, prem, sub):
    return None if f == Box(prem[0]) else "conclusion should be [] of the premise"


@_arity(1)
def _br(f, prem, sub):
    x = prem[0]
    if isinstance(x, BoxL) and isinstance(x.inner, Imp) and f == x.inner:
        return None
    return "premise should be [L](φ -> ψ) and the conclusion φ -> ψ"


RULES: dict[str, RuleCheck] = {
    "US": _us, "MP": _mp, "Adj": _adj, "Aff": _aff, "Con": _con,
    "BoxL-Mon": _boxl_mon, "Box-Mon": _box_mon, "ER": _er, "Nec": _nec, "BR": _br,
}


def _lifted(base: RuleCheck) -> RuleCheck:
    def check(f, prem, sub):
        if not isinstance(f, BoxL) or not all(isinstance(p, BoxL) for p in prem):
            return "lifted rules need [L] on every premise and on the conclusion"
        return base(f.inner, [p.inner for p in prem], sub)
    return check


def _normalise_by(by: str) -> str:
    return LIFT + by[len("lifted-"):] if by.startswith("lifted-") else by


def _check_axiom(template: Formula, f: Formula, sub) -> str | None:
    if sub is not None:
        return None if substitute(template, sub) == f else "not the stated instance of the schema"
    return None if match(template, f) is not None else f"not an instance of {template}"


def system_of(proof: Proof) -> System:
    return axioms_of(split_classicized(proof.logic)[0], proof.family)


def check_proof(proof: Proof) -> Verdict:
    """Accept iff every step is a correct axiom instance or rule application."""
    try:
        system = system_of(proof)
    except ValueError as e:
        return Verdict(False, None, str(e))
    if not proof.steps:
        return Verdict(False, None, "empty proof")
    for i, step in enumerate(proof.steps, start=1):
        by = _normalise_by(step.by)
        if by in system.axioms:
            if step.premises:
                return Verdict(False, i, f"axiom {by} takes no premises")
            why = _check_axiom(system.axioms[by], step.formula, step.subst)
        elif by in system.rules:
            bad = [j for j in step.premises if not 1 <= j < i]
            if bad:
                return Verdict(False, i, f"premise index {bad[0]} does not refer to an earlier step")
            base = by[len(LIFT):] if by.startswith(LIFT) else by
            fn = RULES[base] if base == by else _lifted(RULES[base])
            why = fn(step.formula, [proof.steps[j - 1].formula for j in step.premises],
                     step.subst)
        elif by.removeprefix(LIFT) in RULES:
            return Verdict(False, i, f"{by} not a rule of {system.name}")
        else:
            return Verdict(False, i, f"{by} is not an axiom or rule of {system.name}")
        if why is not None:
            return Verdict(False, i, f"{by}: {why}")
    return Verdict(True, conclusion=proof.conclusion)


# -- files ------------------------------------------------------------------

def proof_from_dict(doc) -> Proof:
    """Accepts ``{"family", "logic", "steps": [...]}`` or an array whose first
    element is the header ``{"family", "logic"}`` followed by the steps."""
    if isinstance(doc, list):
        if not doc or not isinstance(doc[0], Mapping) or "family" not in doc[0]:
            raise ProofFileError("array form needs a header object first")
        header, steps = doc[0], doc[1:]
    elif isinstance(doc, Mapping):
        header, steps = doc, doc.get("steps")
        unknown = set(doc) - {"family", "logic", "steps"}
        if unknown:
            raise ProofFileError(f"unknown fields: {', '.join(sorted(unknown))}")
    else:
        raise ProofFileError("proof document must be an object or an array")
    if header.get("family") not in ("L", "CL"):
        raise ProofFileError("header 'family' must be \"L\" or \"CL\"")
    if not isinstance(header.get("logic"), str):
        raise ProofFileError("header 'logic' must be a logic name")
    if not isinstance(steps, list):
        raise ProofFileError("'steps' must be an array")
    proof = Proof(header["family"], header["logic"])
    for k, st in enumerate(steps, start=1):
        if not isinstance(st, Mapping) or "formula" not in st or "by" not in st:
            raise ProofFileError(f"step {k} needs 'formula' and 'by'")
        unknown = set(st) - {"formula", "by", "from", "subst"}
        if unknown:
            raise ProofFileError(f"step {k}: unknown fields {sorted(unknown)}")
        try:
            proof.add(st["formula"], st["by"], [int(j) for j in st.get("from", [])],
                      st.get("subst"))
        except ValueError as e:
            raise ProofFileError(f"step {k}: {e}") from e
    return proof


def load_proof(document) -> Proof:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ProofFileError(f"invalid JSON: {e}") from e
    return proof_from_dict(document)


def proof_to_dict(proof: Proof) -> dict:
    steps = []
    for st in proof.steps:
        d = {"formula": str(st.formula), "by": st.by}
        if st.premises:
            d["from"] = list(st.premises)
        if st.subst is not None:
            d["subst"] = {k: str(v) for k, v in sorted(st.subst.items())}
        steps.append(d)
    return {"family": proof.family, "logic": split_classicized(proof.logic)[0], "steps": steps}


def dump_proof(proof: Proof) -> str:
    return json.dumps(proof_to_dict(proof), indent=1, ensure_ascii=False)


def proof_text(proof: Proof) -> str:
    lines = [f"{proof.system_name}:"]
    for i, st in enumerate(proof.steps, start=1):
        just = st.by + (" " + ",".join(map(str, st.premises)) if st.premises else "")
        lines.append(f"{i:4}. {st.formula}    [{just}]")
    return "\n".join(lines)


# -- transformations --------------------------------------------------------

def _require_accepted(proof: Proof, family: str) -> None:
    if proof.family != family:
        raise ValueError(f"expected a proof in the {family} family")
    v = check_proof(proof)
    if not v.ok:
        raise ValueError(f"input proof rejected: {v}")


def lift_proof(proof: Proof) -> Proof:
    """The classicized proof of ``[L]φ`` obtained by boxing every line."""
    _require_accepted(proof, "L")
    out = Proof("CL", split_classicized(proof.logic)[0])
    for st in proof.steps:
        out.steps.append(Step(BoxL(st.formula), LIFT + st.by, st.premises, st.subst))
    return out


class _Builder:
    """Appends L-steps to a proof, reusing lines already derived."""

    def __init__(self, proof: Proof):
        self.proof = Proof(proof.family, proof.logic, list(proof.steps))
        self.index = {}
        for i, st in enumerate(self.proof.steps, start=1):
            self.index.setdefault(st.formula, i)

    def add(self, f: Formula, by: str, premises=(), subst=None) -> int:
        if f in self.index:
            return self.index[f]
        i = self.proof.add(f, by, premises, subst)
        self.index[f] = i
        return i

    def axiom(self, name: str, **sub: Formula) -> int:
        return self.add(substitute(BASE_SCHEMAS[name], sub), name, subst=sub)

    def formula(self, i: int) -> Formula:
        return self.proof.steps[i - 1].formula

    def mp(self, minor: int, major: int) -> int:
        return self.add(self.formula(major).right, "MP", (minor, major))

    def trans(self, ab: int, bc: int) -> int:
        """From A -> B and B -> C derive A -> C."""
        a, b = self.formula(ab).left, self.formula(ab).right
        c = self.formula(bc).right
        cc = self.axiom("a1", p=c)
        aff = self.add(Imp(Imp(b, c), Imp(a, c)), "Aff", (ab, cc))
        return self.mp(bc, aff)

    def pair(self, ab: int, ac: int) -> int:
        """From A -> B and A -> C derive A -> B & C."""
        a, b = self.formula(ab).left, self.formula(ab).right
        c = self.formula(ac).right
        both = self.add(And(self.formula(ab), self.formula(ac)), "Adj", (ab, ac))
        a8 = self.axiom("a8", p=a, q=b, r=c)
        return self.mp(both, a8)

    def project(self, source: Formula, target: Formula) -> int | None:
        """A proof line ``source -> target`` when ``target`` is an
        And-subtree of ``source``."""
        if source == target:
            return self.axiom("a1", p=source)
        if not isinstance(source, And):
            return None
        for name, part in (("a4", source.left), ("a5", source.right)):
            inner = self.project(part, target) if _has_subtree(part, target) else None
            if inner is not None:
                step = self.axiom(name, p=source.left, q=source.right)
                return step if part == target else self.trans(step, inner)
        return None

    def conj_rearrange(self, source: Formula, target: Formula) -> int:
        """``source -> target`` where every maximal conjunct of ``target``
        is an And-subtree of ``source``."""
        direct = self.project(source, target) if _has_subtree(source, target) else None
        if direct is not None:
            return direct
        if isinstance(target, And):
            left = self.conj_rearrange(source, target.left)
            right = self.conj_rearrange(source, target.right)
            return self.pair(left, right)
        raise ShapeError(f"{target} is not a conjunct of {source}")


def _has_subtree(source: Formula, target: Formula) -> bool:
    if source == target:
        return True
    return isinstance(source, And) and (_has_subtree(source.left, target)
                                        or _has_subtree(source.right, target))


def rr_derivation(proof: Proof, parts: Sequence[Formula | str], psi: Formula | str) -> Proof:
    """Extend an L-proof of ``⋀parts -> ψ`` to an L-proof of ``⋀[]parts -> []ψ``."""
    _require_accepted(proof, "L")
    parts = [as_formula(p) for p in parts]
    psi = as_formula(psi)
    if not parts:
        raise ShapeError("need at least one conjunct")
    concl = proof.conclusion
    if not isinstance(concl, Imp):
        raise ShapeError(f"conclusion {concl} is not an implication")
    if concl.right != psi:
        raise ShapeError(f"conclusion consequent {concl.right} differs from {psi}")
    b = _Builder(proof)
    phi = conj(parts)
    last = len(b.proof.steps)
    if concl.left != phi:
        try:
            fix = b.conj_rearrange(phi, concl.left)
        except ShapeError as e:
            raise ShapeError(f"antecedent {concl.left} is not a conjunction of the parts: {e}")
        last = b.trans(fix, last)
    box_step = b.add(Imp(Box(phi), Box(psi)), "Box-Mon", (last,))
    # (□φ1 ∧ … ∧ □φk) -> □(φ1 ∧ … ∧ φk), by induction on k
    boxes = [Box(p) for p in parts]
    acc = b.axiom("a1", p=boxes[0]) if len(parts) > 1 else None
    for k in range(1, len(parts)):
        ck = conj(boxes[:k + 1])
        prev = b.trans(b.axiom("a4", p=conj(boxes[:k]), q=boxes[k]), acc)
        last_box = b.axiom("a5", p=conj(boxes[:k]), q=boxes[k])
        paired = b.pair(prev, last_box)
        a11 = b.axiom("a11", p=conj(parts[:k]), q=parts[k])
        acc = b.trans(paired, a11)
        assert b.formula(acc) == Imp(ck, Box(conj(parts[:k + 1])))
    final = box_step if len(parts) == 1 else b.trans(acc, box_step)
    out = b.proof
    if final != len(out.steps):
        # the target line was derived earlier; repeat it so it comes last
        out.steps.append(out.steps[final - 1])
    return out


def rr_transform(proof: Proof, parts: Sequence[Formula | str], psi: Formula | str) -> Proof:
    """Classicized proof of ``⋀[]parts -> []ψ`` from an L-proof of ``⋀parts -> ψ``."""
    derivation = rr_derivation(proof, parts, psi)
    out = lift_proof(derivation)
    top = len(out.steps)
    out.add(derivation.conclusion, "BR", (top,))
    return out


# -- random rule chains -----------------------------------------------------

_SMALL_VARS = ("p", "q", "r")


def _random_formula(rng: random.Random, depth: int, variables=_SMALL_VARS) -> Formula:
    if depth == 0 or rng.random() < 0.35:
        return Var(rng.choice(variables))
    op = rng.choice(("and", "or", "imp", "neg", "box", "boxl"))
    if op in ("neg", "box", "boxl"):
        inner = _random_formula(rng, depth - 1, variables)
        return {"neg": Neg, "box": Box, "boxl": BoxL}[op](inner)
    cls = {"and": And, "or": Or, "imp": Imp}[op]
    return cls(_random_formula(rng, depth - 1, variables),
               _random_formula(rng, depth - 1, variables))


def random_proof(rng: random.Random, logic: str = "BM.C", length: int = 8,
                 subst_depth: int = 1) -> Proof:
    """A random accepted L-proof: axiom instances with small substitutions
    combined by whichever rules of the logic apply."""
    system = axioms_of(logic, "L")
    proof = Proof("L", logic)
    axiom_names = sorted(system.axioms)

    def add_axiom():
        name = rng.choice(axiom_names)
        tmpl = system.axioms[name]
        sub = {v: _random_formula(rng, subst_depth) for v in tmpl.variables()}
        proof.add(substitute(tmpl, sub), name, subst=sub)

    add_axiom()
    while len(proof.steps) < length:
        n = len(proof.steps)
        fs = [s.formula for s in proof.steps]
        rule = rng.choice(system.rules + ("axiom",) * 2)
        i = rng.randrange(n) + 1
        f = fs[i - 1]
        if rule == "axiom":
            add_axiom()
        elif rule == "US":
            sub = {v: _random_formula(rng, subst_depth) for v in f.variables()[:1]}
            proof.add(substitute(f, sub), "US", (i,), sub)
        elif rule == "Adj":
            j = rng.randrange(n) + 1
            proof.add(And(f, fs[j - 1]), "Adj", (i, j))
        elif rule == "MP":
            cands = [(j + 1, k + 1) for j, a in enumerate(fs) for k, g in enumerate(fs)
                     if isinstance(g, Imp) and g.left == a]
            if cands:
                j, k = rng.choice(cands)
                proof.add(fs[k - 1].right, "MP", (j, k))
        elif rule in ("Con", "Box-Mon", "BoxL-Mon") and isinstance(f, Imp):
            concl = {"Con": Imp(Neg(f.right), Neg(f.left)),
                     "Box-Mon": Imp(Box(f.left), Box(f.right)),
                     "BoxL-Mon": Imp(BoxL(f.left), BoxL(f.right))}[rule]
            proof.add(concl, rule, (i,))
        elif rule == "Aff" and isinstance(f, Imp):
            imps = [k + 1 for k, g in enumerate(fs) if isinstance(g, Imp)]
            j = rng.choice(imps)
            g = fs[j - 1]
            proof.add(Imp(Imp(f.right, g.left), Imp(f.left, g.right)), "Aff", (i, j))
        elif rule == "ER":
            proof.add(Imp(Imp(f, Var("q")), Var("q")), "ER", (i,))
        elif rule == "Nec":
            proof.add(Box(f), "Nec", (i,))
    return proof
