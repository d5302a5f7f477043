"""Finite frames and models: data types, JSON model files and validation.

A structure is a finite poset of states with a ternary relation ``R``, a
Routley star, and two binary relations ``Q`` (belief) and ``QL`` (logical
box), optionally bounded by a bottom ``zero`` and top ``one``.  A model adds
a designation (logical states ``L`` or possible worlds ``W``) and a
valuation.

Validation never stops at the first problem: every check collects all of its
violations, each with the tuple of states that witnesses it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

State = str


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple = ()
    message: str = ""

    def __str__(self) -> str:
        wit = "(" + ", ".join(map(str, self.witness)) + ")" if self.witness else ""
        text = f"{self.condition} violated"
        if wit:
            text += f" at {wit}"
        if self.message:
            text += f": {self.message}"
        return text


@dataclass
class Report:
    """Outcome of a validation or condition check."""

    violations: list[Violation] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, condition: str, witness: tuple = (), message: str = "") -> None:
        self.violations.append(Violation(condition, tuple(witness), message))

    def extend(self, other: "Report") -> "Report":
        self.violations.extend(other.violations)
        self.checked.extend(other.checked)
        return self

    def failed(self, condition: str) -> list[Violation]:
        return [v for v in self.violations if v.condition == condition]

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


class ModelFileError(ValueError):
    """The document does not follow the model file schema."""


class ValidationError(ValueError):
    def __init__(self, report: Report):
        super().__init__("model failed validation:\n" + str(report))
        self.report = report


@dataclass(frozen=True)
class Structure:
    states: tuple[State, ...]
    leq: frozenset[tuple[State, State]]
    star: Mapping[State, State]
    R: frozenset[tuple[State, State, State]]
    Q: frozenset[tuple[State, State]]
    QL: frozenset[tuple[State, State]]
    bounds: tuple[State, State] | None = None

    @property
    def zero(self) -> State | None:
        return self.bounds[0] if self.bounds else None

    @property
    def one(self) -> State | None:
        return self.bounds[1] if self.bounds else None

    @cached_property
    def state_set(self) -> frozenset[State]:
        return frozenset(self.states)

    @cached_property
    def up(self) -> dict[State, frozenset[State]]:
        """``up[s]`` is the set of states above ``s``."""
        out: dict[State, set[State]] = {s: set() for s in self.states}
        for a, b in self.leq:
            out[a].add(b)
        return {s: frozenset(v) for s, v in out.items()}

    @cached_property
    def down(self) -> dict[State, frozenset[State]]:
        out: dict[State, set[State]] = {s: set() for s in self.states}
        for a, b in self.leq:
            out[b].add(a)
        return {s: frozenset(v) for s, v in out.items()}

    @cached_property
    def r_from(self) -> dict[State, tuple[tuple[State, State], ...]]:
        """``r_from[s]`` lists the pairs ``(t, u)`` with ``Rstu``."""
        out: dict[State, list[tuple[State, State]]] = {s: [] for s in self.states}
        for s, t, u in sorted(self.R):
            out[s].append((t, u))
        return {s: tuple(v) for s, v in out.items()}

    @cached_property
    def q_succ(self) -> dict[State, frozenset[State]]:
        return _successors(self.states, self.Q)

    @cached_property
    def ql_succ(self) -> dict[State, frozenset[State]]:
        return _successors(self.states, self.QL)

    def le(self, a: State, b: State) -> bool:
        return (a, b) in self.leq

    def is_upset(self, X: Iterable[State]) -> bool:
        X = set(X)
        return all(self.up[s] <= X for s in X)

    def upset_violation(self, X: Iterable[State]) -> tuple[State, State] | None:
        X = set(X)
        for s in sorted(X):
            for t in sorted(self.up[s] - X):
                return (s, t)
        return None


def _successors(states, rel) -> dict[State, frozenset[State]]:
    out: dict[State, set[State]] = {s: set() for s in states}
    for a, b in rel:
        out[a].add(b)
    return {s: frozenset(v) for s, v in out.items()}


@dataclass(frozen=True)
class Designation:
    kind: str  # "L", "W" or "none"
    set: frozenset[State] = frozenset()

    def __post_init__(self):
        if self.kind not in ("L", "W", "none"):
            raise ValueError(f"unknown designation kind {self.kind!r}")


@dataclass(frozen=True)
class Model:
    structure: Structure
    designation: Designation
    valuation: Mapping[str, frozenset[State]]

    @property
    def states(self) -> tuple[State, ...]:
        return self.structure.states

    def value(self, var: str) -> frozenset[State]:
        """``V(var)``; variables absent from the valuation get the least
        admissible value (empty, or ``{one}`` in bounded models)."""
        v = self.valuation.get(var)
        if v is not None:
            return v
        one = self.structure.one
        return frozenset() if one is None else frozenset([one])

    def with_designation(self, designation: Designation) -> "Model":
        return Model(self.structure, designation, self.valuation)


# -- individual checks ------------------------------------------------------

def check_order(s: Structure) -> Report:
    rep = Report(checked=["leq reflexive", "leq antisymmetric", "leq transitive"])
    for a in s.states:
        if (a, a) not in s.leq:
            rep.add("leq reflexive", (a,))
    for a, b in sorted(s.leq):
        if a != b and (b, a) in s.leq and a < b:
            rep.add("leq antisymmetric", (a, b))
    for a, b in sorted(s.leq):
        for c in sorted(s.up.get(b, ())):
            if (a, c) not in s.leq:
                rep.add("leq transitive", (a, b, c))
    return rep


def check_star_total(s: Structure) -> Report:
    rep = Report(checked=["star total"])
    for a in s.states:
        if a not in s.star:
            rep.add("star total", (a,), "star not total")
        elif s.star[a] not in s.state_set:
            rep.add("star total", (a,), f"star maps to unknown state {s.star[a]!r}")
    return rep


def check_tonicity(s: Structure) -> Report:
    """Every violated tonicity instance of R (down down up), star (antitone),
    Q and QL (down up).  Assumes ``leq`` is a partial order."""
    rep = Report(checked=["R tonicity", "star antitone", "Q tonicity", "QL tonicity"])
    for a, b, c in sorted(s.R):
        for a2 in sorted(s.down[a]):
            if (a2, b, c) not in s.R:
                rep.add("R tonicity", (a2, b, c), f"{a2} <= {a} and R{a}{b}{c} require R{a2}{b}{c}")
        for b2 in sorted(s.down[b]):
            if (a, b2, c) not in s.R:
                rep.add("R tonicity", (a, b2, c), f"{b2} <= {b} and R{a}{b}{c} require R{a}{b2}{c}")
        for c2 in sorted(s.up[c]):
            if (a, b, c2) not in s.R:
                rep.add("R tonicity", (a, b, c2), f"{c} <= {c2} and R{a}{b}{c} require R{a}{b}{c2}")
    for a, b in sorted(s.leq):
        sa, sb = s.star.get(a), s.star.get(b)
        if sa is not None and sb is not None and (sb, sa) not in s.leq:
            rep.add("star antitone", (a, b), f"{a} <= {b} requires star({b}) <= star({a})")
    for name, rel in (("Q", s.Q), ("QL", s.QL)):
        for a, b in sorted(rel):
            for a2 in sorted(s.down[a]):
                if (a2, b) not in rel:
                    rep.add(f"{name} tonicity", (a2, b), f"{a2} <= {a} and {name}{a}{b}")
            for b2 in sorted(s.up[b]):
                if (a, b2) not in rel:
                    rep.add(f"{name} tonicity", (a, b2), f"{b} <= {b2} and {name}{a}{b}")
    return rep


BOUNDED_EQUATIONS = ("bounds", "1*=0", "0*=1", "Q00", "QL00", "Q1s=>s=1", "QL1s=>s=1",
                     "R010", "R1st=>s=0|t=1")


def check_bounded(s: Structure) -> Report:
    rep = Report(checked=list(BOUNDED_EQUATIONS))
    if s.bounds is None:
        rep.add("bounds", (), "no bounds declared")
        return rep
    z, o = s.bounds
    for b in (z, o):
        if b not in s.state_set:
            rep.add("bounds", (b,), "bound is not a state")
            return rep
    for a in s.states:
        if (z, a) not in s.leq:
            rep.add("bounds", (z, a), "zero must be below every state")
        if (a, o) not in s.leq:
            rep.add("bounds", (a, o), "one must be above every state")
    if s.star.get(o) != z:
        rep.add("1*=0", (o,))
    if s.star.get(z) != o:
        rep.add("0*=1", (z,))
    for name, rel in (("Q", s.Q), ("QL", s.QL)):
        if (z, z) not in rel:
            rep.add(f"{name}00", (z, z))
        for a in s.states:
            if a != o and (o, a) in rel:
                rep.add(f"{name}1s=>s=1", (o, a))
    if (z, o, z) not in s.R:
        rep.add("R010", (z, o, z))
    for t, u in s.r_from[o]:
        if t != z and u != o:
            rep.add("R1st=>s=0|t=1", (o, t, u))
    return rep


WORLD_CONDITIONS = ("w*=w", "Rwww", "Rwst=>s=0|w<=t", "Rwst=>t=1|s<=w*")


def world_failures(s: Structure, w: State) -> list[Violation]:
    """Which possible-world conditions fail at ``w`` (bounded structures)."""
    out = []
    z, o = s.bounds
    ws = s.star[w]
    if ws != w:
        out.append(Violation("w*=w", (w,)))
    if (w, w, w) not in s.R:
        out.append(Violation("Rwww", (w,)))
    for t, u in s.r_from[w]:
        if t != z and (w, u) not in s.leq:
            out.append(Violation("Rwst=>s=0|w<=t", (w, t, u)))
        if u != o and (t, ws) not in s.leq:
            out.append(Violation("Rwst=>t=1|s<=w*", (w, t, u)))
    return out


def possible_worlds(s: Structure) -> frozenset[State]:
    if s.bounds is None:
        raise ValueError("possible worlds are defined for bounded structures only")
    return frozenset(w for w in s.states if not world_failures(s, w))


def check_valuation(m: Model) -> Report:
    rep = Report(checked=["valuation upward closed", "valuation bounds"])
    s = m.structure
    for var in sorted(m.valuation):
        X = m.valuation[var]
        unknown = sorted(X - s.state_set)
        if unknown:
            rep.add("valuation states", (var, *unknown), "unknown state")
            continue
        bad = s.upset_violation(X)
        if bad:
            rep.add("valuation upward closed", (var, *bad))
        if s.bounds is not None:
            z, o = s.bounds
            if z in X:
                rep.add("valuation bounds", (var, z), "0 must not satisfy a variable")
            if o not in X:
                rep.add("valuation bounds", (var, o), "1 must satisfy every variable")
    return rep


def check_designation(m: Model) -> Report:
    """L-designation: upward closed plus the two logical-state conditions.
    W-designation: possible worlds only, plus the two QL conditions."""
    s = m.structure
    d = m.designation
    rep = Report()
    if d.kind == "none":
        return rep
    unknown = sorted(d.set - s.state_set)
    if unknown:
        rep.add("designation states", tuple(unknown), "unknown state")
        return rep
    if d.kind == "L":
        rep.checked += ["L upward closed", "L1", "L2"]
        bad = s.upset_violation(d.set)
        if bad:
            rep.add("L upward closed", bad)
        for a in s.states:
            if not any((x, a, a) in s.R for x in d.set):
                rep.add("L1", (a,), f"no x in L with Rx{a}{a}")
        for x in sorted(d.set):
            for t, u in s.r_from[x]:
                if (t, u) not in s.leq:
                    rep.add("L2", (x, t, u), f"{x} in L and R{x}{t}{u} but not {t} <= {u}")
        return rep
    rep.checked += ["W possible worlds", "QL-s<=t", "QL-ss"]
    if s.bounds is None:
        rep.add("W possible worlds", (), "W-designation requires a bounded structure")
        return rep
    for w in sorted(d.set):
        for v in world_failures(s, w):
            rep.add("W possible worlds", v.witness, f"{w} is not a possible world ({v.condition})")
    for w in sorted(d.set):
        for u in sorted(s.ql_succ[w]):
            for t, v in s.r_from[u]:
                if (t, v) not in s.leq:
                    rep.add("QL-s<=t", (w, u, t, v))
    for a in s.states:
        if not any((u, a, a) in s.R for w in d.set for u in s.ql_succ[w]):
            rep.add("QL-ss", (a,), f"no w in W and u with QL w u and R u {a} {a}")
    rep.extend(check_valuation(m))
    return rep


def validate_structure(s: Structure) -> Report:
    rep = Report()
    rep.extend(check_star_total(s))
    for name, rel, arity in (("leq", s.leq, 2), ("R", s.R, 3), ("Q", s.Q, 2), ("QL", s.QL, 2)):
        for tup in sorted(rel):
            if len(tup) != arity or any(x not in s.state_set for x in tup):
                rep.add(f"{name} states", tuple(tup), "unknown state or wrong arity")
    for a in sorted(set(s.star) - s.state_set):
        rep.add("star states", (a,), "star defined on unknown state")
    if not rep.ok:
        return rep
    rep.extend(check_order(s))
    if not rep.ok:
        return rep
    rep.extend(check_tonicity(s))
    if s.bounds is not None:
        rep.extend(check_bounded(s))
        if s.bounds[0] == s.bounds[1]:
            rep.add("bounds", s.bounds, "zero and one must differ")
    return rep


def validate_model(m: Model) -> Report:
    rep = validate_structure(m.structure)
    if not rep.ok and any(v.condition in ("star total", "leq reflexive", "leq antisymmetric",
                                          "leq transitive") or v.condition.endswith("states")
                          for v in rep.violations):
        return rep
    rep.extend(check_valuation(m))
    if m.designation.kind == "W" and m.structure.bounds is None:
        rep.add("bounds", (), "W-models must be bounded")
    rep.extend(check_designation(m))
    rep.violations = list(dict.fromkeys(rep.violations))
    rep.checked = list(dict.fromkeys(rep.checked))
    return rep


# -- model files ------------------------------------------------------------

_FIELDS = {"states", "leq", "star", "R", "Q", "QL", "bounds", "designation", "valuation"}


def model_from_dict(doc: Mapping) -> Model:
    """Build a model from a parsed document without validating it."""
    if not isinstance(doc, Mapping):
        raise ModelFileError("model document must be a JSON object")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ModelFileError(f"unknown fields: {', '.join(sorted(unknown))}")
    for req in ("states", "leq", "star", "R"):
        if req not in doc:
            raise ModelFileError(f"missing field {req!r}")
    states = doc["states"]
    if not isinstance(states, list) or not all(isinstance(x, str) for x in states):
        raise ModelFileError("'states' must be an array of strings")
    if len(set(states)) != len(states):
        raise ModelFileError("duplicate state ids")

    def tuples(key, arity):
        raw = doc.get(key, [])
        if not isinstance(raw, list):
            raise ModelFileError(f"{key!r} must be an array")
        out = []
        for item in raw:
            if not isinstance(item, list) or len(item) != arity:
                raise ModelFileError(f"{key!r} entries must be {arity}-arrays")
            out.append(tuple(str(x) for x in item))
        return frozenset(out)

    star = doc["star"]
    if not isinstance(star, Mapping):
        raise ModelFileError("'star' must be an object")
    bounds = doc.get("bounds")
    if bounds is not None:
        if not isinstance(bounds, Mapping) or set(bounds) != {"zero", "one"}:
            raise ModelFileError("'bounds' must be {\"zero\": s, \"one\": s}")
        bounds = (str(bounds["zero"]), str(bounds["one"]))
    des = doc.get("designation", {"kind": "none", "set": []})
    if not isinstance(des, Mapping) or "kind" not in des:
        raise ModelFileError("'designation' must be an object with 'kind'")
    if des["kind"] not in ("L", "W", "none"):
        raise ModelFileError(f"unknown designation kind {des['kind']!r}")
    val = doc.get("valuation", {})
    if not isinstance(val, Mapping):
        raise ModelFileError("'valuation' must be an object")
    structure = Structure(
        states=tuple(states),
        leq=tuples("leq", 2),
        star={str(k): str(v) for k, v in star.items()},
        R=tuples("R", 3),
        Q=tuples("Q", 2),
        QL=tuples("QL", 2),
        bounds=bounds,
    )
    return Model(
        structure,
        Designation(des["kind"], frozenset(map(str, des.get("set", [])))),
        {str(k): frozenset(map(str, v)) for k, v in val.items()},
    )


def load_model(document: str | Mapping) -> Model:
    """Parse (JSON text or already-decoded object) and validate a model.

    Raises :class:`ModelFileError` on schema problems and
    :class:`ValidationError` carrying the full report otherwise.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ModelFileError(f"invalid JSON: {e}") from e
    m = model_from_dict(document)
    rep = validate_model(m)
    if not rep.ok:
        raise ValidationError(rep)
    return m


def model_to_dict(m: Model) -> dict:
    s = m.structure
    order = {x: i for i, x in enumerate(s.states)}

    def key(t):
        return tuple(order[x] for x in t)

    doc = {
        "states": list(s.states),
        "leq": [list(p) for p in sorted(s.leq, key=key)],
        "star": {x: s.star[x] for x in s.states if x in s.star},
        "R": [list(t) for t in sorted(s.R, key=key)],
        "Q": [list(p) for p in sorted(s.Q, key=key)],
        "QL": [list(p) for p in sorted(s.QL, key=key)],
    }
    if s.bounds is not None:
        doc["bounds"] = {"zero": s.bounds[0], "one": s.bounds[1]}
    doc["designation"] = {"kind": m.designation.kind,
                          "set": sorted(m.designation.set, key=order.get)}
    doc["valuation"] = {v: sorted(m.valuation[v], key=order.get) for v in sorted(m.valuation)}
    return doc


def dump_model(m: Model) -> str:
    return json.dumps(model_to_dict(m), indent=1, ensure_ascii=False)


def discrete_order(states: Iterable[State]) -> frozenset[tuple[State, State]]:
    return frozenset((a, a) for a in states)


def order_closure(states: Iterable[State], pairs: Iterable[tuple[State, State]]
                  ) -> frozenset[tuple[State, State]]:
    """Reflexive-transitive closure; handy for writing models by hand."""
    states = list(states)
    rel = {(a, a) for a in states} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel)
