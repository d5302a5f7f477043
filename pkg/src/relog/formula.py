"""Formulas of the bimodal language: AST, parser, printer and substitution.

Concrete syntax (tightest first)::

    ~  []  [L]      unary: negation, belief box, logical box
    &               conjunction, left associative
    |               disjunction, left associative
    ->              implication, right associative
    <->             biconditional, non-associative, sugar only

``a <-> b`` is stored as ``(a -> b) & (b -> a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

IDENT_RE = re.compile(r"[a-z][a-z0-9_]*")


class Formula:
    """Base class of formula nodes.  Nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)

    def subformulas(self) -> Iterator["Formula"]:
        """Yield every subformula once, children before parents."""
        seen: set[Formula] = set()
        stack: list[tuple[Formula, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if node in seen:
                continue
            if expanded or isinstance(node, Var):
                seen.add(node)
                yield node
                continue
            stack.append((node, True))
            for child in reversed(children(node)):
                if child not in seen:
                    stack.append((child, False))

    def variables(self) -> list[str]:
        return sorted({f.name for f in self.subformulas() if isinstance(f, Var)})

    @property
    def complexity(self) -> int:
        return 1 + sum(c.complexity for c in children(self))

    @property
    def depth(self) -> int:
        kids = children(self)
        return 0 if not kids else 1 + max(c.depth for c in kids)


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Neg(Formula):
    inner: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    inner: Formula


@dataclass(frozen=True, slots=True)
class BoxL(Formula):
    inner: Formula


BINARY = (And, Or, Imp)
UNARY = (Neg, Box, BoxL)
Substitution = Mapping[str, Formula]


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Var):
        return ()
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.inner,)


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    """Same connective as ``f`` applied to ``kids``."""
    if isinstance(f, BINARY):
        return type(f)(*kids)
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    return f


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def conj(parts: list[Formula]) -> Formula:
    """Left-nested conjunction of a nonempty list."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# -- substitution -----------------------------------------------------------

def substitute(f: Formula, s: Substitution) -> Formula:
    """Replace each variable leaf by its image under ``s``; unmapped ones stay."""
    cache: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            out = s.get(g.name, g)
        else:
            out = rebuild(g, tuple(go(c) for c in children(g)))
        cache[g] = out
        return out

    return go(f)


def match(template: Formula, f: Formula, binding: dict[str, Formula] | None = None
          ) -> dict[str, Formula] | None:
    """First-order matching: a substitution ``s`` with ``substitute(template, s) == f``."""
    binding = {} if binding is None else binding
    if isinstance(template, Var):
        bound = binding.get(template.name)
        if bound is None:
            binding[template.name] = f
            return binding
        return binding if bound == f else None
    if type(template) is not type(f):
        return None
    for t, g in zip(children(template), children(f)):
        if match(t, g, binding) is None:
            return None
    return binding


# -- parsing ----------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(<->)|(->)|(\[L\])|(\[\])|([~&|()])|([a-z][a-z0-9_]*))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """List of (kind, value, position); kind is 'op', 'ident' or 'end'."""
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        value = m.group(m.lastindex)
        kind = "ident" if m.lastindex == 6 else "op"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {value!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def form(self) -> Formula:
        left = self.imp()
        if self.peek()[1] == "<->":
            self.take()
            right = self.imp()
            if self.peek()[1] == "<->":
                raise FormulaSyntaxError("'<->' is non-associative", self.text, self.peek()[2])
            return iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[1] == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek()[1] == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~":
            self.take()
            return Neg(self.unary())
        if value == "[]":
            self.take()
            return Box(self.unary())
        if value == "[L]":
            self.take()
            return BoxL(self.unary())
        if kind == "ident":
            self.take()
            return Var(value)
        if value == "(":
            self.take()
            inner = self.form()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"unexpected {what}", self.text, pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.form()
    kind, value, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", text, pos)
    return f


def as_formula(f: Union[str, Formula]) -> Formula:
    return parse(f) if isinstance(f, str) else f


# -- rendering --------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}
_UNARY_SYM = {Neg: "~", Box: "[]", BoxL: "[L]"}
_BINARY_SYM = {Imp: "->", Or: "|", And: "&"}


def render(f: Formula) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, UNARY):
        inner = render(f.inner)
        if isinstance(f.inner, BINARY):
            inner = f"({inner})"
        return _UNARY_SYM[type(f)] + inner
    prec = _PREC[type(f)]
    left, right = render(f.left), render(f.right)
    lp = _PREC.get(type(f.left), 9)
    rp = _PREC.get(type(f.right), 9)
    if isinstance(f, Imp):
        # right associative
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {_BINARY_SYM[type(f)]} {right}"


def formulas_up_to_depth(variables: list[str], depth: int) -> list[Formula]:
    """Every formula over ``variables`` with depth at most ``depth``.

    Grows very fast; intended for depth <= 2 with few variables.
    """
    layer: list[Formula] = [Var(v) for v in variables]
    allf = list(layer)
    for _ in range(depth):
        new = []
        for a in allf:
            for u in UNARY:
                new.append(u(a))
            for b in allf:
                for c in BINARY:
                    new.append(c(a, b))
        allf = list(dict.fromkeys(allf + new))
    return allf
