"""Adjoining a world, a bottom and a top to an L-model, and checking the result.

``plus_construction`` turns an L-model into a W-model with one world ``w``
that sees exactly the logical states through Q_L; ``verify_plus`` re-checks
that the result is a W-model, agrees with the input on the old states, sends
every invalid φ to an invalid □_L φ, and keeps every frame condition the input
satisfied (as its C-variant).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .conditions import (CONDITION_TABLE, c_variant, check_logic_frame, evaluate_condition)
from .formula import BoxL, Formula, as_formula
from .semantics import denotation_closure, interpret
from .structures import (Designation, Model, Report, State, Structure, validate_model)


class PlusError(ValueError):
    pass


RESERVED = ("w", "0", "1")


def fresh_ids(states) -> tuple[State, State, State]:
    """Ids for the new world, bottom and top, renamed ``w_1``, ``w_2``, ... on clash."""
    taken = set(states)
    out = []
    for base in RESERVED:
        name, k = base, 0
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        taken.add(name)
        out.append(name)
    return tuple(out)


def plus_construction(m: Model) -> Model:
    if m.designation.kind != "L":
        raise PlusError("input must carry an L-designation")
    rep = validate_model(m)
    if not rep.ok:
        raise PlusError("input is not a valid L-model:\n" + str(rep))
    s = m.structure
    w, zero, one = fresh_ids(s.states)
    S = s.states + (w, zero, one)
    below_top = {(x, one) for x in S} | {(zero, x) for x in S}
    leq = set(s.leq) | {(w, w)} | below_top
    R = set(s.R) | {(w, w, w)}
    for x in S:
        for y in S:
            R |= {(zero, x, y), (x, zero, y), (x, y, one)}
    star = dict(s.star)
    star.update({w: w, zero: one, one: zero})
    Q = set(s.Q) | {(w, w)} | below_top
    QL = set(s.QL) | {(w, w)} | {(w, x) for x in m.designation.set} | below_top
    structure = Structure(S, frozenset(leq), star, frozenset(R), frozenset(Q),
                          frozenset(QL), (zero, one))
    valuation = {v: frozenset(X | {one}) for v, X in m.valuation.items()}
    return Model(structure, Designation("W", frozenset([w])), valuation)


def ql_image(m: Model) -> frozenset[State]:
    return frozenset(u for w in m.designation.set for u in m.structure.ql_succ[w])


def induced_lframe(m: Model) -> Model:
    """Same structure, designated set replaced by the Q_L-image of W."""
    if m.designation.kind != "W":
        raise PlusError("input must carry a W-designation")
    return m.with_designation(Designation("L", ql_image(m)))


def axiom_shapes() -> list[Formula]:
    from .proofs import BASE_SCHEMAS
    return [BASE_SCHEMAS[f"a{i}"] for i in range(1, 13)]


@dataclass
class PlusReport:
    image: Model
    world: State
    w_model: Report
    formulas_checked: int = 0
    rows: list[tuple[State, str, bool, bool]] = field(default_factory=list)
    mismatches: list[tuple[State, str, bool, bool]] = field(default_factory=list)
    transfers: list[tuple[str, State | None]] = field(default_factory=list)
    transfer_failures: list[str] = field(default_factory=list)
    conditions_kept: dict[str, tuple[bool, bool]] = field(default_factory=dict)
    logic: str | None = None
    logic_check: Report | None = None
    logic_applies: bool = False

    @property
    def condition_failures(self) -> list[str]:
        return [t for t, (before, after) in self.conditions_kept.items() if before and not after]

    @property
    def ok(self) -> bool:
        return (self.w_model.ok and not self.mismatches and not self.transfer_failures
                and not self.condition_failures
                and (self.logic_check is None or self.logic_check.ok))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "world": self.world,
            "w_model": self.w_model.ok,
            "w_model_violations": [str(v) for v in self.w_model.violations],
            "formulas_checked": self.formulas_checked,
            "preservation_mismatches": [list(r) for r in self.mismatches],
            "boxl_transfers": [{"formula": f, "witness": s} for f, s in self.transfers],
            "boxl_transfer_failures": self.transfer_failures,
            "conditions": {t: {"input": a, "image": b}
                           for t, (a, b) in self.conditions_kept.items()},
            "logic": self.logic,
            "logic_check": None if self.logic_check is None else self.logic_check.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False)

    def to_text(self) -> str:
        mark = {True: "yes", False: "no"}
        lines = [f"image is a W-model (W = {{{self.world}}}): {mark[self.w_model.ok]}"]
        lines += [f"  {v}" for v in self.w_model.violations]
        lines.append(f"satisfaction preserved on old states: {len(self.mismatches) == 0} "
                     f"({self.formulas_checked} formulas)")
        for st, f, a, b in self.mismatches[:20]:
            lines.append(f"  {st}: {f}  input={a} image={b}")
        lines.append(f"invalid formulas sent to invalid [L]-formulas: "
                     f"{len(self.transfers) - len(self.transfer_failures)}/{len(self.transfers)}")
        for f in self.transfer_failures[:20]:
            lines.append(f"  failed: [L]({f})")
        lines.append("frame conditions (input -> image of C-variant):")
        for tag, (a, b) in self.conditions_kept.items():
            flag = "  LOST" if a and not b else ""
            lines.append(f"  {tag:5} {mark[a]:3} -> {mark[b]}{flag}")
        if self.logic is not None and not self.logic_applies:
            lines.append(f"input is not a {self.logic}-model; logic check skipped")
        if self.logic_check is not None:
            lines.append(f"C-{self.logic} frame check on image: "
                         f"{'pass' if self.logic_check.ok else 'fail'}")
            lines += [f"  {v}" for v in self.logic_check.violations]
        lines.append("verdict: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines)


def _default_variables(m: Model) -> list[str]:
    return sorted(m.valuation) or ["p"]


def verify_plus(m: Model, formulas: list[Formula | str] | None = None,
                logic: str | None = None, depth: int = 3,
                keep_rows: bool = False) -> PlusReport:
    """Check ``plus_construction(m)``: W-model validity, preservation on the old
    states, transfer of invalidity to ``□_L``, and the C-variants of the input's
    conditions.

    Without an explicit formula list, every formula of depth at most
    ``depth`` over the model's variables is covered: distinct pairs of
    denotations (input, image) are enumerated jointly, which is exact because
    each claim depends on a formula only through those two sets.  The twelve
    base axiom shapes are added on top.
    """
    image = plus_construction(m)
    world = next(iter(image.designation.set))
    rep = PlusReport(image=image, world=world, w_model=validate_model(image), logic=logic)
    if formulas is None:
        closure = denotation_closure([m, image], _default_variables(m), depth)
        work = [(f, key[0], key[1]) for key, f in closure.items()]
        for f in axiom_shapes():
            work.append((f, interpret(m, f), interpret(image, f)))
    else:
        work = []
        for f in formulas:
            f = as_formula(f)
            work.append((f, interpret(m, f), interpret(image, f)))
    rep.formulas_checked = len(work)
    L = m.designation.set
    old = m.states
    for f, before, after in work:
        text = str(f)
        for st in old:
            row = (st, text, st in before, st in after)
            if keep_rows:
                rep.rows.append(row)
            if row[2] != row[3]:
                rep.mismatches.append(row)
        failing = [x for x in old if x in L and x not in before]
        if failing:
            witness = next((x for x in image.states
                            if x in image.structure.ql_succ[world] and x not in after), None)
            rep.transfers.append((text, witness))
            if world in interpret(image, BoxL(f)):
                rep.transfer_failures.append(text)
    for tag, row in CONDITION_TABLE.items():
        before = bool(evaluate_condition(m, row.condition))
        after = bool(evaluate_condition(image, c_variant(row.condition)))
        rep.conditions_kept[tag] = (before, after)
    if logic is not None:
        rep.logic_applies = check_logic_frame(m, logic).ok
        if rep.logic_applies:
            rep.logic_check = check_logic_frame(image, logic, classicized=True)
    return rep


__all__ = ["PlusError", "PlusReport", "fresh_ids", "induced_lframe", "plus_construction",
           "ql_image", "verify_plus"]
