"""Formulas of the n-modal predicate language with equality.

Formulas are immutable trees of frozen dataclasses.  Variables are plain
strings (lowercase-initial identifiers); predicate letters are
uppercase-initial strings whose arity is the length of the argument tuple.

Concrete ASCII syntax, loosest binding first::

    forall x. A      exists x. A      (scope extends maximally right,
                                       also after ~, [k] and <k>)
    A <-> B          (left associative)
    A -> B           (right associative)
    A | B            A & B
    ~A   [k]A   <k>A
    T   F   P(x, y)   x = y   x != y   (A)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

from .errors import FormulaSyntaxError

__all__ = [
    "Atom", "Equal", "Top", "Bottom", "Not", "And", "Or", "Implies", "Iff",
    "Forall", "Exists", "Box", "Diamond", "Formula", "Metrics", "Signature",
    "parse_formula", "print_formula", "free_vars", "universal_closure",
    "metrics", "check_monadic", "letters", "subformulas", "to_json",
]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Equal:
    left: str
    right: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    index: int
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    index: int
    body: "Formula"


Formula = Union[Atom, Equal, Top, Bottom, Not, And, Or, Implies, Iff,
                Forall, Exists, Box, Diamond]

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)
MODALITIES = (Box, Diamond)


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<impl>->)
  | (?P<neq>!=)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<punct>[~&|\[\]<>(),.=])
""", re.VERBOSE)

_KEYWORDS = {"forall", "exists"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "punct":
                kind = value
            elif kind == "ident" and value in _KEYWORDS:
                kind = value
            elif kind in ("iff", "impl", "neq"):
                kind = value
            tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str, n: int, signature: dict[str, int] | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.arities: dict[str, int] = dict(signature or {})

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {found!r}", self.tok.pos)
        return self.advance()

    def variable(self) -> str:
        t = self.tok
        if t.kind != "ident" or not t.text[0].islower():
            found = t.text or "end of input"
            raise FormulaSyntaxError(f"expected a variable, found {found!r}", t.pos)
        self.advance()
        return t.text

    def formula(self) -> Formula:
        if self.tok.kind in ("forall", "exists"):
            kind = self.advance().kind
            var = self.variable()
            self.expect(".")
            body = self.formula()
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        return self.iff()

    def iff(self) -> Formula:
        f = self.impl()
        while self.tok.kind == "<->":
            self.advance()
            f = Iff(f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.disj()
        if self.tok.kind == "->":
            self.advance()
            return Implies(f, self.impl())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def modal_index(self, close: str) -> int:
        t = self.expect("int")
        self.expect(close)
        k = int(t.text)
        if not 1 <= k <= self.n:
            raise FormulaSyntaxError(
                f"index out of range: modality {k} not in 1..{self.n}", t.pos)
        return k

    def unary(self) -> Formula:
        t = self.tok
        if t.kind in ("forall", "exists"):
            # a quantifier after a prefix operator still scopes maximally right
            return self.formula()
        if t.kind == "~":
            self.advance()
            return Not(self.unary())
        if t.kind == "[":
            self.advance()
            k = self.modal_index("]")
            return Box(k, self.unary())
        if t.kind == "<":
            self.advance()
            k = self.modal_index(">")
            return Diamond(k, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident" and t.text[0].isupper():
            self.advance()
            if self.tok.kind != "(":
                if t.text == "T":
                    return Top()
                if t.text == "F":
                    return Bottom()
                raise FormulaSyntaxError(
                    f"predicate {t.text!r} needs an argument list", self.tok.pos)
            self.advance()
            args = [self.variable()]
            while self.tok.kind == ",":
                self.advance()
                args.append(self.variable())
            self.expect(")")
            self.note_arity(t.text, len(args), t.pos)
            return Atom(t.text, tuple(args))
        if t.kind == "ident" and t.text[0].islower():
            left = self.variable()
            op = self.tok
            if op.kind not in ("=", "!="):
                raise FormulaSyntaxError(
                    f"expected '=' or '!=' after variable {left!r}", op.pos)
            self.advance()
            right = self.variable()
            eq = Equal(left, right)
            return eq if op.kind == "=" else Not(eq)
        found = t.text or "end of input"
        raise FormulaSyntaxError(f"unexpected token {found!r}", t.pos)

    def note_arity(self, pred: str, arity: int, pos: int) -> None:
        known = self.arities.setdefault(pred, arity)
        if known != arity:
            raise FormulaSyntaxError(
                f"arity mismatch: {pred} used with {arity} argument(s), expected {known}", pos)


def parse_formula(text: str, n: int = 1, signature: dict[str, int] | None = None) -> Formula:
    """Parse ``text`` into a formula of the ``n``-modal language.

    ``signature`` optionally fixes letter arities in advance; every
    letter must in any case be used with a single arity throughout.
    """
    if n < 1:
        raise ValueError("modal count n must be at least 1")
    p = _Parser(text, n, signature)
    f = p.formula()
    if p.tok.kind != "eof":
        raise FormulaSyntaxError(f"unexpected token {p.tok.text!r}", p.tok.pos)
    return f


# ---------------------------------------------------------------------------
# Printer

# binding strength used by the printer; higher binds tighter
_PREC = {Forall: 0, Exists: 0, Iff: 1, Implies: 2, Or: 3, And: 4,
         Not: 5, Box: 5, Diamond: 5}
_ATOMIC = 6
_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _ATOMIC)


def _show(f: Formula, need: int) -> str:
    s = _render(f)
    return f"({s})" if _prec(f) < need else s


def _render(f: Formula) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Atom):
        return f"{f.pred}({', '.join(f.args)})"
    if isinstance(f, Equal):
        return f"{f.left} = {f.right}"
    if isinstance(f, QUANTIFIERS):
        word = "forall" if isinstance(f, Forall) else "exists"
        return f"{word} {f.var}. {_render(f.body)}"
    if isinstance(f, (Not, Box, Diamond)):
        if isinstance(f, Not):
            head = "~"
        elif isinstance(f, Box):
            head = f"[{f.index}] "
        else:
            head = f"<{f.index}> "
        body = f.body
        # equality gets explicit parentheses under a prefix operator
        inner = f"({_render(body)})" if isinstance(body, Equal) else _show(body, 5)
        return head + inner
    # binary connectives: left/right operand requirements encode associativity
    p = _PREC[type(f)]
    if isinstance(f, Implies):
        lneed, rneed = p + 1, p
    else:
        lneed, rneed = p, p + 1
    return f"{_show(f.left, lneed)} {_SYMBOL[type(f)]} {_show(f.right, rneed)}"


def print_formula(f: Formula) -> str:
    """Render ``f`` in the concrete syntax; the output parses back to ``f``."""
    return _render(f)


# ---------------------------------------------------------------------------
# Traversals and measures

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of ``f``."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, BINARY):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Not, Forall, Exists, Box, Diamond)):
            stack.append(g.body)


def _var_occurrences(f: Formula) -> Iterator[str]:
    """Variables in left-to-right textual order, binders included."""
    if isinstance(f, Atom):
        yield from f.args
    elif isinstance(f, Equal):
        yield f.left
        yield f.right
    elif isinstance(f, BINARY):
        yield from _var_occurrences(f.left)
        yield from _var_occurrences(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield f.var
        yield from _var_occurrences(f.body)
    elif isinstance(f, (Not, Box, Diamond)):
        yield from _var_occurrences(f.body)


def _free_in_order(f: Formula, bound: frozenset = frozenset()) -> Iterator[str]:
    if isinstance(f, Atom):
        yield from (x for x in f.args if x not in bound)
    elif isinstance(f, Equal):
        yield from (x for x in (f.left, f.right) if x not in bound)
    elif isinstance(f, BINARY):
        yield from _free_in_order(f.left, bound)
        yield from _free_in_order(f.right, bound)
    elif isinstance(f, QUANTIFIERS):
        yield from _free_in_order(f.body, bound | {f.var})
    elif isinstance(f, (Not, Box, Diamond)):
        yield from _free_in_order(f.body, bound)


def free_vars(f: Formula) -> frozenset[str]:
    return frozenset(_free_in_order(f))


def universal_closure(f: Formula) -> Formula:
    """Prefix universal quantifiers for the free variables of ``f``.

    The outermost quantifier binds the variable whose free occurrence
    comes first in ``f``.  Closed formulas are returned unchanged.
    """
    order = list(dict.fromkeys(_free_in_order(f)))
    for x in reversed(order):
        f = Forall(x, f)
    return f


def letters(f: Formula) -> dict[str, int]:
    """Map each non-equality predicate letter in ``f`` to its arity."""
    out: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.setdefault(g.pred, len(g.args))
    return dict(sorted(out.items()))


def _depth(f: Formula, kinds: tuple) -> int:
    if isinstance(f, BINARY):
        return max(_depth(f.left, kinds), _depth(f.right, kinds))
    if isinstance(f, (Not, Forall, Exists, Box, Diamond)):
        return _depth(f.body, kinds) + (1 if isinstance(f, kinds) else 0)
    return 0


@dataclass(frozen=True)
class Metrics:
    letters: int
    variables: int
    modal_depth: int
    quantifier_rank: int
    modal_indices_used: frozenset[int]


def metrics(f: Formula) -> Metrics:
    """Size parameters of ``f`` (these feed the default search bound)."""
    return Metrics(
        letters=len(letters(f)),
        variables=len(set(_var_occurrences(f))),
        modal_depth=_depth(f, MODALITIES),
        quantifier_rank=_depth(f, QUANTIFIERS),
        modal_indices_used=frozenset(
            g.index for g in subformulas(f) if isinstance(g, MODALITIES)),
    )


class Signature(str, Enum):
    MONADIC_WITH_EQUALITY = "monadic_with_equality"
    MONADIC_WITHOUT_EQUALITY = "monadic_without_equality"
    NON_MONADIC = "non_monadic"


def has_equality(f: Formula) -> bool:
    return any(isinstance(g, Equal) for g in subformulas(f))


def check_monadic(f: Formula) -> Signature:
    if any(arity != 1 for arity in letters(f).values()):
        return Signature.NON_MONADIC
    if has_equality(f):
        return Signature.MONADIC_WITH_EQUALITY
    return Signature.MONADIC_WITHOUT_EQUALITY


def to_json(f: Formula) -> dict:
    """Nested-dict form of the AST, as emitted by the ``parse`` command."""
    if isinstance(f, Atom):
        return {"op": "atom", "pred": f.pred, "args": list(f.args)}
    if isinstance(f, Equal):
        return {"op": "eq", "args": [f.left, f.right]}
    if isinstance(f, Top):
        return {"op": "top"}
    if isinstance(f, Bottom):
        return {"op": "bottom"}
    if isinstance(f, Not):
        return {"op": "not", "body": to_json(f.body)}
    if isinstance(f, BINARY):
        return {"op": type(f).__name__.lower(),
                "left": to_json(f.left), "right": to_json(f.right)}
    if isinstance(f, QUANTIFIERS):
        return {"op": type(f).__name__.lower(), "var": f.var, "body": to_json(f.body)}
    return {"op": type(f).__name__.lower(), "index": f.index, "body": to_json(f.body)}
