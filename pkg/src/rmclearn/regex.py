"""Regular-expression syntax trees and their compilation to automata.

The same tree shape serves two roles: leaves are either single symbols
(word expressions, compiled to an Nfa) or input/output symbol pairs
(relation expressions, compiled to a Transducer). Compilation is a Thompson
construction followed by epsilon elimination, so results are epsilon-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .automata import Alphabet, Nfa
from .transducer import Transducer

__all__ = [
    "Concat",
    "Empty",
    "Epsilon",
    "Pair",
    "Ref",
    "Regex",
    "RegexCompileError",
    "Star",
    "Sym",
    "Union",
    "compile_pair_regex",
    "compile_regex",
    "resolve",
]


class RegexCompileError(ValueError):
    """An expression cannot be compiled in the requested role."""


@dataclass(frozen=True)
class Regex:
    pass


@dataclass(frozen=True)
class Empty(Regex):
    """The empty language."""


@dataclass(frozen=True)
class Epsilon(Regex):
    """The language containing only the empty word."""


@dataclass(frozen=True)
class Sym(Regex):
    name: str


@dataclass(frozen=True)
class Pair(Regex):
    """Input/output symbol pair, the leaf of a relation expression."""

    left: str
    right: str


@dataclass(frozen=True)
class Concat(Regex):
    items: tuple[Regex, ...]


@dataclass(frozen=True)
class Union(Regex):
    items: tuple[Regex, ...]


@dataclass(frozen=True)
class Star(Regex):
    item: Regex


@dataclass(frozen=True)
class Ref(Regex):
    """Reference to a named sub-expression; resolved before compilation."""

    name: str


def resolve(r: Regex, bindings: Mapping[str, Regex]) -> Regex:
    """Substitute Ref nodes from bindings, rejecting unknown names and cycles."""

    def go(node: Regex, active: tuple[str, ...]) -> Regex:
        if isinstance(node, Ref):
            if node.name in active:
                raise RegexCompileError(f"cyclic definition of {node.name!r}")
            if node.name not in bindings:
                raise RegexCompileError(f"undefined name {node.name!r}")
            return go(bindings[node.name], active + (node.name,))
        if isinstance(node, Concat):
            return Concat(tuple(go(x, active) for x in node.items))
        if isinstance(node, Union):
            return Union(tuple(go(x, active) for x in node.items))
        if isinstance(node, Star):
            return Star(go(node.item, active))
        return node

    return go(r, ())


class _Builder:
    """Thompson construction over generic edge labels (None = epsilon)."""

    def __init__(self) -> None:
        self.n = 0
        self.edges: list[tuple[int, object, int]] = []

    def fresh(self) -> int:
        self.n += 1
        return self.n - 1

    def add(self, s: int, label: object, t: int) -> None:
        self.edges.append((s, label, t))

    def build(self, r: Regex, leaf) -> tuple[int, int]:
        s, t = self.fresh(), self.fresh()
        if isinstance(r, Empty):
            pass
        elif isinstance(r, Epsilon):
            self.add(s, None, t)
        elif isinstance(r, (Sym, Pair)):
            self.add(s, leaf(r), t)
        elif isinstance(r, Concat):
            if not r.items:
                self.add(s, None, t)
            else:
                prev = s
                for item in r.items:
                    a, b = self.build(item, leaf)
                    self.add(prev, None, a)
                    prev = b
                self.add(prev, None, t)
        elif isinstance(r, Union):
            for item in r.items:
                a, b = self.build(item, leaf)
                self.add(s, None, a)
                self.add(b, None, t)
        elif isinstance(r, Star):
            a, b = self.build(r.item, leaf)
            self.add(s, None, t)
            self.add(s, None, a)
            self.add(b, None, a)
            self.add(b, None, t)
        elif isinstance(r, Ref):
            raise RegexCompileError(f"unresolved reference {r.name!r}")
        else:
            raise RegexCompileError(f"cannot compile node {type(r).__name__}")
        return s, t


def _epsilon_closure(n: int, edges) -> list[set[int]]:
    eps: dict[int, list[int]] = {}
    for s, label, t in edges:
        if label is None:
            eps.setdefault(s, []).append(t)
    closures: list[set[int]] = []
    for s in range(n):
        reach = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in eps.get(u, ()):
                if v not in reach:
                    reach.add(v)
                    stack.append(v)
        closures.append(reach)
    return closures


def _compile(r: Regex, leaf) -> tuple[int, int, list[tuple[int, object, int]], set[int]]:
    """Thompson + epsilon elimination + reachable trim.

    Returns (n_states, initial, labeled edges, finals).
    """
    builder = _Builder()
    start, accept = builder.build(r, leaf)
    closures = _epsilon_closure(builder.n, builder.edges)
    labeled: dict[int, list[tuple[object, int]]] = {}
    for s, label, t in builder.edges:
        if label is not None:
            labeled.setdefault(s, []).append((label, t))

    moves: dict[int, set[tuple[object, int]]] = {}
    finals: set[int] = set()
    for s in range(builder.n):
        out: set[tuple[object, int]] = set()
        for c in closures[s]:
            out.update(labeled.get(c, ()))
        moves[s] = out
        if accept in closures[s]:
            finals.add(s)

    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for _, t in sorted(moves[s]):
            if t not in seen:
                seen.add(t)
                order.append(t)
    renum = {s: i for i, s in enumerate(order)}
    edges = [
        (renum[s], label, renum[t])
        for s in order
        for label, t in moves[s]
        if t in renum
    ]
    trimmed_finals = {renum[s] for s in order if s in finals}
    return len(order), renum[start], edges, trimmed_finals


def compile_regex(r: Regex, alphabet: Alphabet) -> Nfa:
    """Compile a word expression; Pair leaves and unresolved Refs are errors."""

    def leaf(node: Regex) -> int:
        if isinstance(node, Pair):
            raise RegexCompileError(
                f"symbol pair {node.left}/{node.right} not allowed in a word expression"
            )
        assert isinstance(node, Sym)
        try:
            return alphabet.index(node.name)
        except ValueError as e:
            raise RegexCompileError(str(e)) from None

    n, initial, edges, finals = _compile(r, leaf)
    transitions = frozenset((s, a, t) for s, a, t in edges)
    return Nfa(alphabet, n, initial, transitions, frozenset(finals))


def compile_pair_regex(r: Regex, alphabet: Alphabet) -> Transducer:
    """Compile a relation expression; every leaf must be a symbol pair, which
    keeps the resulting transducer length-preserving by construction."""

    def leaf(node: Regex) -> tuple[int, int]:
        if isinstance(node, Sym):
            raise RegexCompileError(
                f"bare symbol {node.name!r} in a relation expression is not "
                "length-preserving; write an input/output pair like "
                f"{node.name}/{node.name}"
            )
        assert isinstance(node, Pair)
        try:
            return alphabet.index(node.left), alphabet.index(node.right)
        except ValueError as e:
            raise RegexCompileError(str(e)) from None

    n, initial, edges, finals = _compile(r, leaf)
    transitions = frozenset((s, a, b, t) for s, (a, b), t in edges)
    return Transducer(alphabet, n, initial, transitions, frozenset(finals))
