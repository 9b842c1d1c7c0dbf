"""PAL syntax: formula AST, concrete-syntax parser and printer, uniform substitution.

Concrete syntax (ASCII)::

    atom | top | ~F | K agent F | E F | C F | C(F | G) | [! F] G
    F & G | F | G | F -> G | F <-> G

Unary prefixes bind tightest, then ``&``, ``|``, ``->`` and ``<->``; the last
two associate to the right, ``&`` and ``|`` to the left.  Inside ``C( ... )``
the first top-level ``|`` separates guard from body, so a disjunctive guard
must be parenthesised.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

RESERVED = frozenset({"K", "E", "C", "top"})
IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.fullmatch(name)) and name not in RESERVED


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Neg:
    sub: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Knows:
    agent: str
    sub: Formula


@dataclass(frozen=True)
class Everyone:
    sub: Formula


@dataclass(frozen=True)
class Announce:
    announced: Formula
    body: Formula


@dataclass(frozen=True)
class RCK:
    """Relativized common knowledge C(guard | body)."""

    guard: Formula
    body: Formula


@dataclass(frozen=True)
class CK:
    """Common knowledge; the same as ``RCK(Top(), sub)`` for every evaluator."""

    sub: Formula


Formula = Union[Atom, Top, Neg, And, Or, Imp, Iff, Knows, Everyone, Announce, RCK, CK]

BINARY = (And, Or, Imp, Iff)
TOP = Top()


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Top)):
        return ()
    if isinstance(f, (Neg, Knows, Everyone, CK)):
        return (f.sub,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, Announce):
        return (f.announced, f.body)
    if isinstance(f, RCK):
        return (f.guard, f.body)
    raise TypeError(f"not a formula: {f!r}")


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from walk(c)


def atoms(f: Formula) -> set[str]:
    return {g.name for g in walk(f) if isinstance(g, Atom)}


def agents(f: Formula) -> set[str]:
    return {g.agent for g in walk(f) if isinstance(g, Knows)}


def uses_group(f: Formula) -> bool:
    """True if ``f`` mentions E or C, whose meaning depends on the whole agent group."""
    return any(isinstance(g, (Everyone, RCK, CK)) for g in walk(f))


def height(f: Formula) -> int:
    cs = children(f)
    return 1 + max(map(height, cs)) if cs else 0


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def modal_depth(f: Formula) -> int:
    own = 1 if isinstance(f, (Knows, Everyone, RCK, CK)) else 0
    return own + max((modal_depth(c) for c in children(f)), default=0)


def announcement_depth(f: Formula) -> int:
    own = 1 if isinstance(f, Announce) else 0
    return own + max((announcement_depth(c) for c in children(f)), default=0)


def _rebuild(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Neg):
        return Neg(fn(f.sub))
    if isinstance(f, Everyone):
        return Everyone(fn(f.sub))
    if isinstance(f, CK):
        return CK(fn(f.sub))
    if isinstance(f, Knows):
        return Knows(f.agent, fn(f.sub))
    if isinstance(f, BINARY):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, Announce):
        return Announce(fn(f.announced), fn(f.body))
    if isinstance(f, RCK):
        return RCK(fn(f.guard), fn(f.body))
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, target: str, replacement: Formula) -> Formula:
    """Replace every ``Atom(target)`` in ``f`` by ``replacement``."""
    if isinstance(f, Atom):
        return replacement if f.name == target else f
    return _rebuild(f, lambda g: substitute(g, target, replacement))


def normalize_ck(f: Formula) -> Formula:
    """Rewrite every ``CK(x)`` as ``RCK(Top(), x)``."""
    if isinstance(f, CK):
        return RCK(TOP, normalize_ck(f.sub))
    return _rebuild(f, normalize_ck)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


class UnknownOperatorError(ParseError):
    pass


class UnbalancedParenthesisError(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # ident, op, eof
    text: str
    offset: int  # byte offset into the UTF-8 encoding


_OPS = ("<->", "->", "[!", "~", "&", "|", "(", ")", "]")
_OPERATOR_CHARS = set("<>-=!^+*/\\@#$%,;:.?'\"`{}[")
_STARTS = frozenset({"identifier", "top", "~", "K", "E", "C", "[!", "("})


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    byte = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            byte += len(ch.encode())
            i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            tokens.append(Token("ident", m.group(), byte))
            byte += len(m.group())
            i = m.end()
            continue
        for op in _OPS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, byte))
                byte += len(op)
                i += len(op)
                break
        else:
            if ch == "[":
                raise ParseError("'[' must be followed by '!'", byte, frozenset({"[!"}))
            if ch in _OPERATOR_CHARS:
                j = i
                while j < len(text) and text[j] in _OPERATOR_CHARS:
                    j += 1
                raise UnknownOperatorError(f"unknown operator {text[i:j]!r}", byte)
            raise ParseError(f"unexpected character {ch!r}", byte)
    tokens.append(Token("eof", "", byte))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.opened: list[Token] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def fail(self, expected: frozenset[str]):
        t = self.tok
        if t.kind == "eof":
            if self.opened and ")" in expected:
                o = self.opened[-1]
                raise UnbalancedParenthesisError("unclosed parenthesis", o.offset, frozenset({")"}))
            raise ParseError("unexpected end of input", t.offset, expected)
        if t.text == ")" and not self.opened:
            raise UnbalancedParenthesisError("unmatched ')'", t.offset)
        raise ParseError(f"unexpected token {t.text!r}", t.offset, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(frozenset({text}))
        return self.advance()

    def open_paren(self) -> None:
        self.opened.append(self.expect("("))

    def close_paren(self) -> None:
        self.expect(")")
        self.opened.pop()

    def parse(self) -> Formula:
        f = self.iff(False)
        if self.tok.kind != "eof":
            self.fail(frozenset({"&", "|", "->", "<->", "end of input"}))
        return f

    # ``in_guard`` stops the disjunction level at a top-level '|' inside C( ... ).
    def iff(self, in_guard: bool) -> Formula:
        left = self.imp(in_guard)
        if self.at("<->"):
            self.advance()
            return Iff(left, self.iff(in_guard))
        return left

    def imp(self, in_guard: bool) -> Formula:
        left = self.disj(in_guard)
        if self.at("->"):
            self.advance()
            return Imp(left, self.imp(in_guard))
        return left

    def disj(self, in_guard: bool) -> Formula:
        f = self.conj()
        while not in_guard and self.at("|"):
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.advance()
            f = And(f, self.unary())
        return f

    def agent(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in RESERVED:
            self.fail(frozenset({"agent name"}))
        self.advance()
        return t.text

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "ident":
            if t.text == "top":
                self.advance()
                return TOP
            if t.text == "K":
                self.advance()
                return Knows(self.agent(), self.unary())
            if t.text == "E":
                self.advance()
                return Everyone(self.unary())
            if t.text == "C":
                self.advance()
                return self.common()
            self.advance()
            return Atom(t.text)
        if self.at("~"):
            self.advance()
            return Neg(self.unary())
        if self.at("[!"):
            self.advance()
            announced = self.iff(False)
            self.expect("]")
            return Announce(announced, self.unary())
        if self.at("("):
            self.open_paren()
            f = self.iff(False)
            self.close_paren()
            return f
        self.fail(_STARTS)

    def common(self) -> Formula:
        if not self.at("("):
            return CK(self.unary())
        self.open_paren()
        guard = self.iff(True)
        if self.at("|"):
            self.advance()
            body = self.iff(False)
            self.close_paren()
            return RCK(guard, body)
        self.close_paren()
        return CK(guard)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Imp: "->", Or: "|", And: "&"}
_UNARY = 5


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _UNARY)


def _render(f: Formula, ctx: int, in_guard: bool) -> str:
    p = _prec(f)
    if p < ctx or (in_guard and isinstance(f, Or)):
        return "(" + _render(f, 0, False) + ")"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Neg):
        return "~" + _render(f.sub, _UNARY, False)
    if isinstance(f, Knows):
        return f"K {f.agent} " + _render(f.sub, _UNARY, False)
    if isinstance(f, Everyone):
        return "E " + _render(f.sub, _UNARY, False)
    if isinstance(f, Announce):
        return "[!" + _render(f.announced, 0, False) + "] " + _render(f.body, _UNARY, False)
    if isinstance(f, RCK):
        return "C(" + _render(f.guard, 0, True) + " | " + _render(f.body, 0, False) + ")"
    if isinstance(f, CK):
        if _prec(f.sub) < _UNARY:
            # "C (x | y)" would read as relativized, so top-level '|' gets its own parens
            return "C (" + _render(f.sub, 0, True) + ")"
        return "C " + _render(f.sub, _UNARY, False)
    if isinstance(f, (Imp, Iff)):
        return f"{_render(f.left, p + 1, in_guard)} {_SYMBOL[type(f)]} {_render(f.right, p, in_guard)}"
    return f"{_render(f.left, p, in_guard)} {_SYMBOL[type(f)]} {_render(f.right, p + 1, in_guard)}"


def render(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that still parse back to ``f``."""
    return _render(f, 0, False)


def to_json(f: Formula) -> object:
    """A plain nested-list form of the AST for machine-readable output."""
    if isinstance(f, Atom):
        return ["atom", f.name]
    if isinstance(f, Top):
        return ["top"]
    if isinstance(f, Knows):
        return ["K", f.agent, to_json(f.sub)]
    tag = type(f).__name__.lower()
    return [tag, *(to_json(c) for c in children(f))]


# ---------------------------------------------------------------------------
# random formulas

def random_formula(rng: random.Random, max_depth: int, agent_names: Sequence[str],
                   atom_names: Sequence[str]) -> Formula:
    """A random formula of height at most ``max_depth`` using every constructor."""
    if max_depth == 0 or rng.random() < 0.2:
        return TOP if rng.random() < 0.08 else Atom(rng.choice(atom_names))
    sub = lambda: random_formula(rng, max_depth - 1, agent_names, atom_names)
    kind = rng.choice(("neg", "and", "or", "imp", "iff", "K", "K", "E", "ann", "ann", "rck", "ck"))
    if kind == "neg":
        return Neg(sub())
    if kind == "K":
        return Knows(rng.choice(agent_names), sub())
    if kind == "E":
        return Everyone(sub())
    if kind == "ck":
        return CK(sub())
    cls = {"and": And, "or": Or, "imp": Imp, "iff": Iff, "ann": Announce, "rck": RCK}[kind]
    return cls(sub(), sub())


def generate_formulas(count: int, max_depth: int, agent_names: Sequence[str],
                      atom_names: Sequence[str], seed: int = 0) -> list[Formula]:
    """``count`` distinct random formulas, reproducible from ``seed``."""
    rng = random.Random(seed)
    seen: dict[Formula, None] = {}
    attempts = 0
    while len(seen) < count:
        attempts += 1
        if attempts > 100 * count:
            raise ValueError(f"could not find {count} distinct formulas of depth <= {max_depth}")
        seen.setdefault(random_formula(rng, max_depth, agent_names, atom_names))
    return list(seen)
