"""``relog`` command line.

Exit status: 0 success, 1 negative result (invalid, countermodel found,
proof rejected, validation failed), 2 usage or input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import conditions, formula, proofs, search, semantics, structures, transform

OK, NEGATIVE, USAGE, INTERNAL = 0, 1, 2, 3


@dataclass
class CommandResult:
    status: int
    text: str
    payload: object = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n\n{self.format_usage()}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from e


def _formula(args) -> formula.Formula:
    text = args.formula
    if getattr(args, "formula_file", None):
        text = _read(args.formula_file).strip()
    if text is None:
        raise UsageError("a formula is required (--formula or --formula-file)")
    return formula.parse(text)


def _model(path: str) -> structures.Model:
    return structures.load_model(_read(path))


def _result(args, status: int, text: str, payload) -> CommandResult:
    if args.json:
        return CommandResult(status, json.dumps(payload, indent=1, ensure_ascii=False), payload)
    return CommandResult(status, text, payload)


# -- commands ---------------------------------------------------------------

def _ast(f: formula.Formula):
    if isinstance(f, formula.Var):
        return f.name
    return [type(f).__name__] + [_ast(c) for c in formula.children(f)]


def cmd_parse(args):
    f = _formula(args)
    return _result(args, OK, formula.render(f), {"formula": formula.render(f), "ast": _ast(f)})


def cmd_model_check(args):
    m = _model(args.model)
    payload = {"valid_model": True}
    lines = ["model ok"]
    status = OK
    if args.logic:
        rep = conditions.check_logic_frame(m, args.logic, classicized=args.classicized or None)
        payload.update(logic=args.logic, frame_ok=rep.ok,
                       violations=[str(v) for v in rep.violations])
        lines.append(f"{args.logic} frame conditions: " + ("ok" if rep.ok else "violated"))
        lines += [f"  {v}" for v in rep.violations]
        status = OK if rep.ok else NEGATIVE
    return _result(args, status, "\n".join(lines), payload)


def _fmt_set(m, X):
    return "{" + ", ".join(s for s in m.states if s in X) + "}"


def cmd_eval(args):
    m = _model(args.model)
    f = _formula(args)
    den = semantics.interpret(m, f)
    payload = {"formula": str(f), "denotation": [s for s in m.states if s in den]}
    lines = [f"[[{f}]] = {_fmt_set(m, den)}"]
    status = OK
    if args.state is not None:
        if args.state not in m.structure.state_set:
            raise UsageError(f"unknown state {args.state!r}")
        sat = args.state in den
        payload["state"] = args.state
        payload["satisfied"] = sat
        lines = [f"{args.state} {'satisfies' if sat else 'does not satisfy'} {f}"]
        if not sat and args.explain:
            lines += semantics.explain_failure(m, args.state, f)
        status = OK if sat else NEGATIVE
    if args.validity:
        ok = semantics.valid(m, f)
        payload["valid"] = ok
        lines = ["valid" if ok else "invalid"]
        if not ok:
            bad = semantics.failing_designated(m, f)
            payload["failing"] = bad
            lines.append("fails at designated " + ", ".join(bad))
            if args.explain:
                lines += semantics.explain_failure(m, bad[0], f)
        status = OK if ok else NEGATIVE
    return _result(args, status, "\n".join(lines), payload)


def cmd_cvariant(args):
    tag = args.condition
    if tag in conditions.EXCLUDED:
        raise conditions.ExcludedConditionError(f"condition ({tag}) is excluded")
    if tag not in conditions.CONDITION_TABLE:
        raise UsageError(f"unknown condition tag {tag!r}; known: {', '.join(conditions.TAGS)}")
    orig = conditions.CONDITION_TABLE[tag].condition
    cv = conditions.c_variant(orig)
    text = conditions.render_condition(cv, abbreviate=args.abbreviate)
    payload = {"tag": tag, "condition": conditions.render_condition(orig), "c_variant": text}
    return _result(args, OK, text, payload)


def cmd_plus(args):
    m = _model(args.model)
    if not args.verify:
        image = transform.plus_construction(m)
        text = structures.dump_model(image)
        if args.out:
            _write(args.out, text)
            text = f"wrote {args.out}"
        return _result(args, OK, text, structures.model_to_dict(image))
    rep = transform.verify_plus(m, logic=args.logic, depth=args.depth)
    if args.out:
        _write(args.out, structures.dump_model(rep.image))
    return _result(args, OK if rep.ok else NEGATIVE, rep.to_text(), rep.to_dict())


def _proof(path: str) -> proofs.Proof:
    return proofs.load_proof(_read(path))


def cmd_proof_check(args):
    p = _proof(args.proof)
    v = proofs.check_proof(p)
    payload = {"accepted": v.ok, "failed_step": v.failed_step, "reason": v.reason,
               "conclusion": None if v.conclusion is None else str(v.conclusion),
               "system": p.system_name}
    return _result(args, OK if v.ok else NEGATIVE, str(v), payload)


def _emit_proof(args, p: proofs.Proof) -> CommandResult:
    v = proofs.check_proof(p)
    if not v.ok:
        return CommandResult(INTERNAL, f"produced proof does not check: {v}")
    doc = proofs.proof_to_dict(p)
    text = proofs.dump_proof(p)
    if args.out:
        _write(args.out, text)
        text = f"wrote {args.out} ({len(p.steps)} steps, concluding {p.conclusion})"
    return _result(args, OK, text, doc)


def cmd_lift(args):
    p = _proof(args.proof)
    v = proofs.check_proof(p)
    if not v.ok:
        return _result(args, NEGATIVE, f"input {v}", {"accepted": False, "reason": v.reason})
    return _emit_proof(args, proofs.lift_proof(p))


def cmd_rr(args):
    p = _proof(args.proof)
    v = proofs.check_proof(p)
    if not v.ok:
        return _result(args, NEGATIVE, f"input {v}", {"accepted": False, "reason": v.reason})
    parts = [formula.parse(t) for t in args.parts]
    psi = formula.parse(args.psi)
    return _emit_proof(args, proofs.rr_transform(p, parts, psi))


def cmd_search(args):
    f = _formula(args)
    variables = [v for v in (args.vars or "").split(",") if v]
    budget = search.SearchBudget(max_states=args.max_size, variables=variables,
                                 max_seconds=args.timeout, workers=args.jobs)
    res = search.find_countermodel(f, args.logic, args.kind, budget,
                                   pair_boxd_with_dn=args.pair_boxd_dn)
    text = res.to_text()
    if res.found and args.out:
        _write(args.out, structures.dump_model(res.model))
        text = "\n".join(res.to_text().splitlines()[: 1 + len(res.trace)]) + f"\nwrote {args.out}"
    status = OK if res.status == "none" else NEGATIVE
    return _result(args, status, text, res.to_dict())


def cmd_registry(args):
    if args.action == "list":
        payload = {"tags": list(conditions.TAGS), "excluded": list(conditions.EXCLUDED),
                   "propositional": {k: list(v) for k, v in conditions.PROPOSITIONAL_CHAIN.items()},
                   "modal": {k: list(v) for k, v in conditions.MODAL_LEVEL.items()},
                   "suffixes": dict(conditions.MODAL_SUFFIX)}
        return _result(args, OK, conditions.registry_text(), payload)
    if not args.name:
        raise UsageError("registry show needs a logic name")
    spec = conditions.logic_conditions(args.name, pair_boxd_with_dn=args.pair_boxd_dn)
    system = proofs.axioms_of(args.name)
    lines = [f"{spec.name}", "frame conditions:"]
    for tag, c in spec.conditions.items():
        lines.append(f"  {tag:5} {conditions.render_condition(c)}")
    lines.append("axioms:")
    lines += [f"  {k:8} {v}" for k, v in system.axioms.items()]
    lines.append("rules: " + ", ".join(system.rules))
    payload = {"name": spec.name, "conditions": {t: conditions.render_condition(c)
                                                 for t, c in spec.conditions.items()},
               "axioms": {k: str(v) for k, v in system.axioms.items()},
               "rules": list(system.rules)}
    return _result(args, OK, "\n".join(lines), payload)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relog", description="Relevant modal logic workbench.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, fn, help_text):
        c = sub.add_parser(name, help=help_text, description=help_text)
        c.add_argument("--json", action="store_true", help="machine-readable output")
        c.set_defaults(fn=fn)
        return c

    def formula_args(c, positional=False):
        if positional:
            c.add_argument("formula", nargs="?")
        else:
            c.add_argument("--formula", "-f")
        c.add_argument("--formula-file")

    c = command("parse", cmd_parse, "parse a formula and print it normalized")
    formula_args(c, positional=True)

    c = command("model-check", cmd_model_check, "validate a model file")
    c.add_argument("--model", "-m", required=True)
    c.add_argument("--logic", help="also check the frame conditions of this logic")
    c.add_argument("--classicized", action="store_true",
                   help="check the C-variants (needs a W-model)")

    c = command("eval", cmd_eval, "evaluate a formula in a model")
    c.add_argument("--model", "-m", required=True)
    formula_args(c)
    c.add_argument("--state", help="report satisfaction at this state")
    c.add_argument("--validity", action="store_true", help="report validity")
    c.add_argument("--explain", action="store_true", help="trace a failure")

    c = command("cvariant", cmd_cvariant, "print the C-variant of a frame condition")
    c.add_argument("--condition", "-c", required=True, help="frame condition tag, e.g. X")
    c.add_argument("--abbreviate", action="store_true", help="write s ∈ Q_L(W)")

    c = command("plus", cmd_plus, "adjoin a world, bottom and top to an L-model")
    c.add_argument("--model", "-m", required=True)
    c.add_argument("--out", "-o")
    c.add_argument("--verify", action="store_true", help="verify the image against the input")
    c.add_argument("--logic", help="with --verify: check the classicized frame conditions")
    c.add_argument("--depth", type=int, default=3)

    c = command("proof-check", cmd_proof_check, "check a proof file")
    c.add_argument("proof")

    c = command("lift", cmd_lift, "box every line of an L-proof")
    c.add_argument("proof")
    c.add_argument("--out", "-o")

    c = command("rr", cmd_rr, "turn an L-proof of a conjunction-implication into a "
                              "classicized proof of its boxed form")
    c.add_argument("proof")
    c.add_argument("--parts", nargs="+", required=True, help="the conjuncts φ1 ... φn")
    c.add_argument("--psi", required=True, help="the consequent ψ")
    c.add_argument("--out", "-o")

    c = command("search", cmd_search, "search for a countermodel")
    formula_args(c)
    c.add_argument("--logic", "-l", required=True)
    c.add_argument("--kind", choices=("L", "W"))
    c.add_argument("--max-size", type=int, default=4)
    c.add_argument("--timeout", type=float, default=60.0, help="seconds")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--vars", help="extra variables, comma separated")
    c.add_argument("--out", "-o", help="write the countermodel here")
    c.add_argument("--pair-boxd-dn", action="store_true", help="add (DN) alongside (BoxD)")

    c = command("registry", cmd_registry, "logic names and frame conditions")
    c.add_argument("action", nargs="?", choices=("list", "show"), default="list")
    c.add_argument("name", nargs="?")
    c.add_argument("--pair-boxd-dn", action="store_true")
    return p


INPUT_ERRORS = (UsageError, formula.FormulaSyntaxError, structures.ModelFileError,
                proofs.ProofFileError, proofs.ShapeError, conditions.UnknownLogicError,
                conditions.ConditionError, transform.PlusError, semantics.DesignationError)


def run(argv=None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            return CommandResult(USAGE, parser.format_help())
        return args.fn(args)
    except SystemExit as e:  # --help
        return CommandResult(e.code if isinstance(e.code, int) else OK, "")
    except structures.ValidationError as e:
        return CommandResult(NEGATIVE, str(e), {"valid_model": False,
                                                "violations": [str(v) for v in e.report.violations]})
    except INPUT_ERRORS as e:
        return CommandResult(USAGE, str(e))
    except ValueError as e:
        return CommandResult(USAGE, str(e))
    except Exception as e:  # noqa: BLE001
        return CommandResult(INTERNAL, f"internal error: {type(e).__name__}: {e}")


def main(argv=None) -> int:
    res = run(argv)
    stream = sys.stdout if res.status in (OK, NEGATIVE) else sys.stderr
    if res.text:
        print(res.text, file=stream)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
