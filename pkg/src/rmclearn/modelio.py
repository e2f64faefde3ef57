"""Textual model format and automaton export.

A model document looks like::

    # one process holds a token (T) or not (N)
    alphabet: T N
    let E = T/T + N/N;
    init: N* T (N* T N* T N*)*
    trans: E*
    trans: E* T/N N/T E*
    bad: N*

``alphabet:`` must come first. ``let`` binds a name to an expression for
later lines. ``init:``/``bad:`` give word expressions, each ``trans:`` line
gives a relation expression and all of them are unioned. Expression syntax:
juxtaposition concatenates, ``+`` unions, ``*`` repeats, ``( )`` group,
``eps`` is the empty word, ``a/b`` is an input/output symbol pair (allowed
only where a relation is expected). ``#`` starts a comment. Precedence:
star, then concatenation, then union.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .automata import Alphabet, Dfa, Nfa
from .regex import (
    Concat,
    Epsilon,
    Pair,
    Ref,
    Regex,
    RegexCompileError,
    Star,
    Sym,
    Union,
    compile_pair_regex,
    compile_regex,
    resolve,
)
from .teacher import RmcProblem
from .transducer import Transducer

__all__ = [
    "ModelDoc",
    "ModelSyntaxError",
    "compile_model",
    "export_dot",
    "parse_model",
    "parse_model_doc",
    "parse_regex_text",
    "pretty_model",
]


class ModelSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ModelDoc:
    """Parsed model text: expression trees, not yet compiled to automata."""

    alphabet: Alphabet
    bindings: tuple[tuple[str, Regex], ...]
    init: Regex
    trans: tuple[Regex, ...]
    bad: Regex


_IDENT = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" or one of + * ( ) /
    text: str
    column: int


def _tokenize(text: str, line: int, offset: int) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+*()/":
            tokens.append(_Token(c, c, offset + i + 1))
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), offset + i + 1))
            i = m.end()
            continue
        raise ModelSyntaxError(f"unexpected character {c!r}", line, offset + i + 1)
    return tokens


class _RegexParser:
    def __init__(self, tokens, line, end_column, alphabet, names, pairs_allowed):
        self.tokens = tokens
        self.line = line
        self.end_column = end_column
        self.alphabet = alphabet
        self.names = names
        self.pairs_allowed = pairs_allowed
        self.pos = 0

    def error(self, message: str, column: int | None = None):
        if column is None:
            column = (
                self.tokens[self.pos].column
                if self.pos < len(self.tokens)
                else self.end_column
            )
        raise ModelSyntaxError(message, self.line, column)

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        self.pos += 1
        return tok

    def parse(self) -> Regex:
        r = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek().text!r}")
        return r

    def expr(self) -> Regex:
        items = [self.term()]
        while (tok := self.peek()) is not None and tok.kind == "+":
            self.take()
            items.append(self.term())
        return items[0] if len(items) == 1 else Union(tuple(items))

    def term(self) -> Regex:
        items = []
        while (tok := self.peek()) is not None and tok.kind in ("ident", "("):
            items.append(self.factor())
        if not items:
            self.error("expected an expression")
        return items[0] if len(items) == 1 else Concat(tuple(items))

    def factor(self) -> Regex:
        atom = self.atom()
        while (tok := self.peek()) is not None and tok.kind == "*":
            self.take()
            atom = Star(atom)
        return atom

    def atom(self) -> Regex:
        tok = self.take()
        if tok.kind == "(":
            inner = self.expr()
            closing = self.take()
            if closing.kind != ")":
                self.error("expected ')'", closing.column)
            return inner
        if tok.kind != "ident":
            self.error(f"unexpected {tok.text!r}", tok.column)
        nxt = self.peek()
        if nxt is not None and nxt.kind == "/":
            self.take()
            right = self.take()
            if right.kind != "ident":
                self.error("expected a symbol after '/'", right.column)
            if not self.pairs_allowed:
                self.error("symbol pairs are only allowed in 'trans' expressions", tok.column)
            for part in (tok, right):
                if part.text not in self.alphabet.symbols:
                    self.error(f"unknown symbol {part.text!r}", part.column)
            return Pair(tok.text, right.text)
        if tok.text == "eps":
            return Epsilon()
        if tok.text in self.alphabet.symbols:
            return Sym(tok.text)
        if tok.text in self.names:
            return Ref(tok.text)
        self.error(f"unknown symbol or name {tok.text!r}", tok.column)


def _parse_regex(body, line, col0, alphabet, names, pairs_allowed) -> Regex:
    tokens = _tokenize(body, line, col0)
    end_column = col0 + len(body) + 1
    return _RegexParser(tokens, line, end_column, alphabet, names, pairs_allowed).parse()


def parse_regex_text(text: str, alphabet: Alphabet, pairs_allowed: bool = False) -> Regex:
    """Parse a standalone expression (no name bindings in scope)."""
    return _parse_regex(text, 1, 0, alphabet, frozenset(), pairs_allowed)


def parse_model_doc(text: str) -> ModelDoc:
    alphabet: Alphabet | None = None
    bindings: list[tuple[str, Regex]] = []
    names: set[str] = set()
    init: Regex | None = None
    trans: list[Regex] = []
    bad: Regex | None = None
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())

        if alphabet is None:
            if not stripped.startswith("alphabet:"):
                raise ModelSyntaxError(
                    "model must start with an 'alphabet:' line", lineno, indent + 1
                )
            symbols = tuple(stripped[len("alphabet:") :].split())
            if not symbols:
                raise ModelSyntaxError("alphabet must list at least one symbol", lineno, indent + 1)
            for s in symbols:
                if not _IDENT.fullmatch(s) or s == "eps":
                    raise ModelSyntaxError(f"bad symbol name {s!r}", lineno, indent + 1)
            try:
                alphabet = Alphabet(symbols)
            except ValueError as e:
                raise ModelSyntaxError(str(e), lineno, indent + 1) from None
            continue

        if stripped.startswith("alphabet:"):
            raise ModelSyntaxError("duplicate 'alphabet:' line", lineno, indent + 1)

        if stripped.startswith("let"):
            m = re.fullmatch(r"let\s+([A-Za-z0-9_]+)\s*=\s*(.*)", stripped)
            if m is None:
                raise ModelSyntaxError("malformed 'let' line", lineno, indent + 1)
            name, body = m.group(1), m.group(2)
            if not body.endswith(";"):
                raise ModelSyntaxError("'let' line must end with ';'", lineno, len(line) + 1)
            body = body[:-1]
            if name == "eps" or name in alphabet.symbols or name in names:
                raise ModelSyntaxError(f"name {name!r} is already taken", lineno, indent + 1)
            col0 = line.index("=") + 1
            bindings.append(
                (name, _parse_regex(body, lineno, col0, alphabet, names, True))
            )
            names.add(name)
            continue

        for directive in ("init", "trans", "bad"):
            prefix = directive + ":"
            if stripped.startswith(prefix):
                col0 = line.index(prefix) + len(prefix)
                body = line[col0:]
                pairs = directive == "trans"
                r = _parse_regex(body, lineno, col0, alphabet, names, pairs)
                if directive == "init":
                    if init is not None:
                        raise ModelSyntaxError("duplicate 'init:' line", lineno, indent + 1)
                    init = r
                elif directive == "bad":
                    if bad is not None:
                        raise ModelSyntaxError("duplicate 'bad:' line", lineno, indent + 1)
                    bad = r
                else:
                    trans.append(r)
                break
        else:
            raise ModelSyntaxError(
                f"unrecognized line {stripped.split()[0]!r}", lineno, indent + 1
            )

    if alphabet is None:
        raise ModelSyntaxError("empty model: missing 'alphabet:' line", max(last_line, 1), 1)
    for missing, value in (("init", init), ("bad", bad)):
        if value is None:
            raise ModelSyntaxError(f"missing '{missing}:' line", last_line, 1)
    if not trans:
        raise ModelSyntaxError("missing 'trans:' line", last_line, 1)
    return ModelDoc(alphabet, tuple(bindings), init, tuple(trans), bad)


def compile_model(doc: ModelDoc) -> RmcProblem:
    env: dict[str, Regex] = {}
    for name, r in doc.bindings:
        env[name] = resolve(r, env)

    def compile_word(r: Regex, where: str) -> Nfa:
        try:
            return compile_regex(resolve(r, env), doc.alphabet)
        except RegexCompileError as e:
            raise ModelSyntaxError(f"in '{where}': {e}", 0, 0) from None

    init = compile_word(doc.init, "init")
    bad = compile_word(doc.bad, "bad")
    try:
        relation = resolve(
            doc.trans[0] if len(doc.trans) == 1 else Union(doc.trans), env
        )
        trans = compile_pair_regex(relation, doc.alphabet)
    except RegexCompileError as e:
        raise ModelSyntaxError(f"in 'trans': {e}", 0, 0) from None
    return RmcProblem(init, trans, bad)


def parse_model(text: str) -> RmcProblem:
    return compile_model(parse_model_doc(text))


def _regex_text(r: Regex, need: int) -> str:
    """Render with minimal parentheses; need is the context precedence
    (0 union, 1 concatenation, 2 star operand)."""
    if isinstance(r, Union):
        out, prec = " + ".join(_regex_text(x, 1) for x in r.items), 0
    elif isinstance(r, Concat):
        out, prec = " ".join(_regex_text(x, 2) for x in r.items), 1
    elif isinstance(r, Star):
        out, prec = _regex_text(r.item, 3) + "*", 2
    elif isinstance(r, Epsilon):
        out, prec = "eps", 3
    elif isinstance(r, Sym):
        out, prec = r.name, 3
    elif isinstance(r, Pair):
        out, prec = f"{r.left}/{r.right}", 3
    elif isinstance(r, Ref):
        out, prec = r.name, 3
    else:
        raise ValueError(f"{type(r).__name__} has no concrete syntax")
    return f"({out})" if prec < need else out


def pretty_model(doc: ModelDoc) -> str:
    lines = ["alphabet: " + " ".join(doc.alphabet.symbols)]
    for name, r in doc.bindings:
        lines.append(f"let {name} = {_regex_text(r, 0)};")
    lines.append("init: " + _regex_text(doc.init, 0))
    for r in doc.trans:
        lines.append("trans: " + _regex_text(r, 0))
    lines.append("bad: " + _regex_text(doc.bad, 0))
    return "\n".join(lines) + "\n"


def export_dot(m: Nfa | Dfa | Transducer) -> str:
    """GraphViz digraph; states keep their canonical numbers and edges are
    emitted sorted, so equal automata export to identical text."""
    symbols = m.alphabet.symbols
    lines = ["digraph automaton {", "  rankdir=LR;", "  node [shape=circle];"]
    for f in sorted(m.finals):
        lines.append(f"  q{f} [shape=doublecircle];")
    lines.append('  __start [shape=point, label=""];')
    lines.append(f"  __start -> q{m.initial};")
    if isinstance(m, Transducer):

        def key(tr):
            s, a, b, t = tr
            return (s, -1 if a is None else a, -1 if b is None else b, t)

        for s, a, b, t in sorted(m.transitions, key=key):
            left = "eps" if a is None else symbols[a]
            right = "eps" if b is None else symbols[b]
            lines.append(f'  q{s} -> q{t} [label="{left}/{right}"];')
    else:
        for s, a, t in sorted(m.transitions):
            lines.append(f'  q{s} -> q{t} [label="{symbols[a]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
