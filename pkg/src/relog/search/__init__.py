"""Bounded model enumeration and countermodel search.

Models of a given size are encoded as propositional assignments (see
:mod:`relog.search.encode`) and handed to a SAT solver.  The countermodel
returned for a query is the smallest by state count and, among those, the
lexicographically least assignment to the model variables in canonical
order.  That choice does not depend on solver internals or on how the work is
split between processes, so every worker count yields the same model.
"""

from __future__ import annotations

import math
import random
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from pysat.solvers import Solver

from ..conditions import logic_conditions, split_classicized
from ..formula import Formula, as_formula
from ..semantics import explain_failure, failing_designated
from ..structures import Model, Report, dump_model, model_to_dict
from .encode import Encoding, state_names

SOLVER = "glucose4"

__all__ = ["SearchBudget", "SearchResult", "SearchTimeout", "ModelStream", "build_encoding",
           "enumerate_models", "find_countermodel", "random_models", "soundness_fuzz",
           "resolve_kind", "state_names"]


class SearchTimeout(RuntimeError):
    pass


@dataclass
class SearchBudget:
    max_states: int = 4
    variables: Sequence[str] | None = None
    max_seconds: float = 60.0
    workers: int = 1

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def resolve_kind(name: str, kind: str | None) -> tuple[str, str]:
    """``(base logic name, "L" or "W")``; a ``C-`` prefix means W."""
    base, classicized = split_classicized(name)
    if kind is None:
        kind = "W" if classicized else "L"
    if kind not in ("L", "W"):
        raise ValueError(f"kind must be L or W, got {kind!r}")
    if classicized and kind == "L":
        raise ValueError(f"{name} is a classicized logic; its models are W-models")
    return base, kind


def build_encoding(n: int, name: str, kind: str | None, variables: Sequence[str],
                   formula: Formula | None = None, pair_boxd_with_dn: bool = False
                   ) -> Encoding:
    base, kind = resolve_kind(name, kind)
    spec = logic_conditions(base, classicized=(kind == "W"), pair_boxd_with_dn=pair_boxd_with_dn)
    enc = Encoding(n, kind, variables)
    for cond in spec.conditions.values():
        enc.add_condition(cond)
    if formula is not None:
        enc.refute(formula)
    return enc


class _Sat:
    def __init__(self, enc: Encoding, deadline: float | None):
        self.unsat = any(not c for c in enc.clauses)
        self.solver = Solver(name=SOLVER, bootstrap_with=[c for c in enc.clauses if c])
        self.deadline = deadline

    def solve(self, assumptions: Sequence[int] = ()) -> set[int] | None:
        """True variables of a satisfying assignment, or None if unsatisfiable."""
        if self.unsat:
            return None
        if self.deadline is None:
            ok = self.solver.solve(assumptions=list(assumptions))
        else:
            remaining = self.deadline - time.time()
            if remaining <= 0:
                raise SearchTimeout("time budget exhausted")
            timer = threading.Timer(remaining, self.solver.interrupt)
            timer.start()
            try:
                ok = self.solver.solve_limited(assumptions=list(assumptions),
                                               expect_interrupt=True)
            finally:
                timer.cancel()
            if ok is None:
                self.solver.clear_interrupt()
                raise SearchTimeout("time budget exhausted")
        if not ok:
            return None
        return {x for x in self.solver.get_model() if x > 0}

    def close(self):
        self.solver.delete()


def _lexmin(sat: _Sat, enc: Encoding, prefix: Sequence[int] = ()) -> set[int] | None:
    """Least satisfying assignment of the model variables (False < True, canonical
    order) among those extending ``prefix``."""
    model = sat.solve(prefix)
    if model is None:
        return None
    fixed = list(prefix)
    done = {abs(x) for x in prefix}
    for v in enc.model_vars:
        if v in done:
            continue
        if v not in model:
            fixed.append(-v)
            continue
        better = sat.solve(fixed + [-v])
        if better is not None:
            model = better
            fixed.append(-v)
        else:
            fixed.append(v)
    return model


@dataclass
class SearchResult:
    formula: Formula
    logic: str
    kind: str
    status: str  # "countermodel", "none" or "timeout"
    max_states: int
    exhausted: int = 0
    model: Model | None = None
    witness: str | None = None
    trace: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def found(self) -> bool:
        return self.status == "countermodel"

    @property
    def size(self) -> int | None:
        return None if self.model is None else len(self.model.states)

    def to_dict(self) -> dict:
        out = {"formula": str(self.formula), "logic": self.logic, "kind": self.kind,
               "status": self.status, "max_states": self.max_states,
               "exhausted_up_to": self.exhausted}
        if self.model is not None:
            out["witness"] = self.witness
            out["model"] = model_to_dict(self.model)
            out["trace"] = self.trace
        return out

    def to_text(self) -> str:
        if self.found:
            lines = [f"countermodel for {self.formula} in {self.logic} ({self.kind}-models), "
                     f"{self.size} states; fails at designated state {self.witness}"]
            lines += self.trace
            lines.append(dump_model(self.model))
            return "\n".join(lines)
        if self.status == "timeout":
            return (f"timeout: no countermodel for {self.formula} in {self.logic} with up to "
                    f"{self.exhausted} states; larger sizes not finished")
        return (f"no countermodel for {self.formula} in {self.logic} ({self.kind}-models) "
                f"with up to {self.exhausted} states")


def _sizes(kind: str, max_states: int) -> range:
    if kind == "W" and max_states < 3:
        raise ValueError("W-models need at least 3 states (bottom, top and a world)")
    return range(3 if kind == "W" else 1, max_states + 1)


def _partition_prefixes(enc: Encoding, workers: int) -> list[list[int]]:
    """Assignments to the first few order variables, in lexicographic order."""
    order_vars = [v for v in enc.model_vars if enc.labels[v][0] == "leq"]
    k = min(len(order_vars), max(1, math.ceil(math.log2(workers)) + 2))
    heads = order_vars[:k]
    return [[v if bit else -v for v, bit in zip(heads, bits)]
            for bits in product((False, True), repeat=k)]


def _probe(args):
    n, name, kind, variables, ftext, pair, prefix, deadline = args
    enc = build_encoding(n, name, kind, variables, as_formula(ftext), pair)
    sat = _Sat(enc, deadline)
    try:
        return _lexmin(sat, enc, prefix)
    finally:
        sat.close()


def find_countermodel(f: Formula | str, name: str, kind: str | None = None,
                      budget: SearchBudget | None = None,
                      pair_boxd_with_dn: bool = False) -> SearchResult:
    """Smallest model of the logic in which some designated state falsifies ``f``."""
    f = as_formula(f)
    budget = budget or SearchBudget()
    base, kind = resolve_kind(name, kind)
    label = ("C-" if kind == "W" else "") + base
    variables = sorted(set(budget.variables or ()) | set(f.variables()))
    start = time.time()
    deadline = start + budget.max_seconds
    result = SearchResult(f, label, kind, "none", budget.max_states)
    try:
        for n in _sizes(kind, budget.max_states):
            enc = build_encoding(n, base, kind, variables, f, pair_boxd_with_dn)
            if budget.workers > 1 and n > 1:
                prefixes = _partition_prefixes(enc, budget.workers)
                jobs = [(n, base, kind, variables, str(f), pair_boxd_with_dn, p, deadline)
                        for p in prefixes]
                with ProcessPoolExecutor(max_workers=budget.workers) as pool:
                    found = next((m for m in pool.map(_probe, jobs) if m is not None), None)
            else:
                sat = _Sat(enc, deadline)
                try:
                    found = _lexmin(sat, enc)
                finally:
                    sat.close()
            if found is not None:
                m = enc.decode(found)
                result.status = "countermodel"
                result.model = m
                result.witness = failing_designated(m, f)[0]
                result.trace = explain_failure(m, result.witness, f)
                break
            result.exhausted = n
    except SearchTimeout:
        result.status = "timeout"
    result.seconds = time.time() - start
    return result


class ModelStream:
    """Iterator over the models of one size in canonical order.

    ``complete`` becomes True once every model has been produced;
    ``truncated`` is set when the time budget or ``limit`` stopped it early.
    """

    def __init__(self, enc: Encoding, max_seconds: float | None, limit: int | None):
        self.enc = enc
        self.max_seconds = max_seconds
        self.limit = limit
        self.complete = False
        self.truncated = False
        self.count = 0

    def __iter__(self) -> Iterator[Model]:
        deadline = None if self.max_seconds is None else time.time() + self.max_seconds
        sat = _Sat(self.enc, deadline)
        try:
            first = sat.solve()
            if first is None:
                self.complete = True
                return
            for assignment in self._dfs(sat, 0, [], first):
                if self.limit is not None and self.count >= self.limit:
                    self.truncated = True
                    return
                self.count += 1
                yield self.enc.decode(assignment)
            self.complete = True
        except SearchTimeout:
            self.truncated = True
        finally:
            sat.close()

    def _dfs(self, sat, k, assumptions, model):
        mv = self.enc.model_vars
        while k < len(mv):
            v = mv[k]
            # both branches: the one the current witness takes needs no solver call
            lo = -v
            if v in model:
                alt = sat.solve(assumptions + [lo])
                if alt is not None:
                    yield from self._dfs(sat, k + 1, assumptions + [lo], alt)
                assumptions = assumptions + [v]
            else:
                yield from self._dfs(sat, k + 1, assumptions + [lo], model)
                alt = sat.solve(assumptions + [v])
                if alt is None:
                    return
                assumptions = assumptions + [v]
                model = alt
            k += 1
        yield model


def enumerate_models(n: int, name: str, kind: str | None = None,
                     variables: Sequence[str] = ("p",), max_seconds: float | None = None,
                     limit: int | None = None, pair_boxd_with_dn: bool = False) -> ModelStream:
    """Every model of the logic with exactly ``n`` states over ``variables``."""
    base, kind = resolve_kind(name, kind)
    if kind == "W" and n < 3:
        # bottom and top differ and worlds are neither
        return _EmptyStream()
    enc = build_encoding(n, base, kind, list(variables), None, pair_boxd_with_dn)
    return ModelStream(enc, max_seconds, limit)


class _EmptyStream:
    complete = True
    truncated = False
    count = 0

    def __iter__(self):
        return iter(())


def random_models(n: int, name: str, kind: str | None = None,
                  variables: Sequence[str] = ("p",), count: int = 10,
                  rng: random.Random | None = None, pair_boxd_with_dn: bool = False
                  ) -> list[Model]:
    """Up to ``count`` distinct models of size ``n``, drawn by solving under
    random partial assignments.  Reproducible for a seeded ``rng``."""
    rng = rng or random.Random(0)
    base, kind = resolve_kind(name, kind)
    if kind == "W" and n < 3:
        return []
    enc = build_encoding(n, base, kind, list(variables), None, pair_boxd_with_dn)
    sat = _Sat(enc, None)
    out: list[Model] = []
    seen: set[frozenset] = set()
    mv = enc.model_vars
    try:
        if sat.solve() is None:
            return []
        attempts = 0
        while len(out) < count and attempts < 30 * count:
            attempts += 1
            k = rng.randint(0, max(1, len(mv) // 3))
            picked = rng.sample(mv, k)
            assumptions = [v if rng.random() < 0.5 else -v for v in picked]
            model = None
            while model is None:
                model = sat.solve(assumptions)
                if model is None:
                    assumptions = assumptions[: len(assumptions) // 2]
            key = frozenset(v for v in mv if v in model)
            if key in seen:
                continue
            seen.add(key)
            out.append(enc.decode(model))
    finally:
        sat.close()
    return out


def soundness_fuzz(name: str, family: str, proofs, budget: SearchBudget | None = None
                   ) -> Report:
    """Search for countermodels to the conclusions of accepted proofs.

    Every hit is a soundness violation; rejected proofs are reported under
    ``rejected`` and not searched.
    """
    from ..proofs import check_proof

    budget = budget or SearchBudget()
    kind = "W" if family == "CL" else "L"
    base, _ = split_classicized(name)
    rep = Report()
    for k, proof in enumerate(proofs, start=1):
        verdict = check_proof(proof)
        if not verdict.ok:
            rep.add("rejected", (k,), str(verdict))
            continue
        res = find_countermodel(verdict.conclusion, base, kind, budget)
        rep.checked.append(str(verdict.conclusion))
        if res.found:
            rep.add("soundness", (k, res.witness),
                    f"{verdict.conclusion} fails in a {res.size}-state model")
        elif res.status == "timeout":
            rep.add("timeout", (k,), f"{verdict.conclusion}: search not finished")
    return rep
