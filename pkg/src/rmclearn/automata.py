"""Finite automata over an indexed alphabet.

Automata are immutable values; every operation returns a fresh automaton.
State numbering of determinized/minimized results is canonical (breadth-first
discovery order with symbols tried in alphabet order), and all shortest-word
queries break length ties lexicographically in that same symbol order, so
any run built on top of these primitives is reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

__all__ = [
    "Alphabet",
    "AlphabetMismatchError",
    "Dfa",
    "Nfa",
    "Word",
    "accepts",
    "complement",
    "determinize",
    "includes",
    "intersect",
    "is_empty",
    "minimize",
    "shortest_symmetric_difference",
    "union",
    "word_nfa",
]

Word = tuple[int, ...]


class AlphabetMismatchError(ValueError):
    """An operation combined automata over different alphabets."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbol names; the order fixes all tie-breaking."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet must not be empty")
        if any(not s for s in self.symbols):
            raise ValueError("symbol names must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbol names in alphabet")

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise ValueError(f"unknown symbol {name!r}") from None

    def word(self, text) -> Word:
        """Build a word from 'TN' (single-char symbols) or an iterable of names."""
        if isinstance(text, str) and all(len(s) == 1 for s in self.symbols):
            return tuple(self.index(c) for c in text)
        return tuple(self.index(s) for s in text)

    def format_word(self, w: Word) -> str:
        if not w:
            return "eps"
        sep = "" if all(len(s) == 1 for s in self.symbols) else " "
        return sep.join(self.symbols[i] for i in w)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton: single initial state, no epsilon moves."""

    alphabet: Alphabet
    n_states: int
    initial: int
    transitions: frozenset[tuple[int, int, int]]
    finals: frozenset[int]

    def __post_init__(self) -> None:
        if self.n_states <= 0:
            raise ValueError("automaton needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        nsym = len(self.alphabet)
        for s, a, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition ({s},{a},{t}) uses unknown state")
            if not 0 <= a < nsym:
                raise ValueError(f"transition ({s},{a},{t}) uses unknown symbol")
        for f in self.finals:
            if not 0 <= f < self.n_states:
                raise ValueError(f"final state {f} out of range")

    def successors(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Map (state, symbol) to the sorted tuple of successor states."""
        raw: dict[tuple[int, int], list[int]] = {}
        for s, a, t in self.transitions:
            raw.setdefault((s, a), []).append(t)
        return {k: tuple(sorted(v)) for k, v in raw.items()}


@dataclass(frozen=True)
class Dfa(Nfa):
    """Deterministic automaton; with ``total`` set, every (state, symbol) moves."""

    total: bool = True

    def __post_init__(self) -> None:
        super().__post_init__()
        seen: set[tuple[int, int]] = set()
        for s, a, _ in self.transitions:
            if (s, a) in seen:
                raise ValueError(f"state {s} has two moves on symbol {a}")
            seen.add((s, a))
        if self.total and len(seen) != self.n_states * len(self.alphabet):
            raise ValueError("DFA marked total but some moves are missing")

    def delta(self) -> dict[tuple[int, int], int]:
        return {(s, a): t for s, a, t in self.transitions}


def _require_same_alphabet(x: Nfa, y: Nfa) -> None:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatchError(
            f"alphabets differ: {x.alphabet.symbols} vs {y.alphabet.symbols}"
        )


def accepts(m: Nfa, w: Word) -> bool:
    """Standard run semantics: does some run on w end in a final state?"""
    succ = m.successors()
    current = {m.initial}
    for a in w:
        current = {t for s in current for t in succ.get((s, a), ())}
        if not current:
            return False
    return bool(current & m.finals)


def determinize(m: Nfa) -> Dfa:
    """Subset construction, reachable subsets only; the result is total
    (a missing move lands in the implicit empty subset, which is a sink)."""
    nsym = len(m.alphabet)
    succ = m.successors()
    start = frozenset({m.initial})
    ids: dict[frozenset[int], int] = {start: 0}
    queue: deque[frozenset[int]] = deque([start])
    transitions: set[tuple[int, int, int]] = set()
    finals: set[int] = set()
    while queue:
        subset = queue.popleft()
        sid = ids[subset]
        if subset & m.finals:
            finals.add(sid)
        for a in range(nsym):
            target = frozenset(t for s in subset for t in succ.get((s, a), ()))
            tid = ids.get(target)
            if tid is None:
                tid = ids[target] = len(ids)
                queue.append(target)
            transitions.add((sid, a, tid))
    return Dfa(m.alphabet, len(ids), 0, frozenset(transitions), frozenset(finals))


def minimize(d: Dfa) -> Dfa:
    """Unique minimal total DFA via partition refinement on the reachable part.

    States of the result are numbered by breadth-first traversal in symbol
    order, so two language-equal inputs minimize to structurally identical
    values (``==`` on the results decides language equality).
    """
    if not d.total:
        raise ValueError("minimize requires a total DFA")
    delta = d.delta()
    nsym = len(d.alphabet)

    order = [d.initial]
    seen = {d.initial}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for a in range(nsym):
            t = delta[(s, a)]
            if t not in seen:
                seen.add(t)
                order.append(t)

    block = {s: 1 if s in d.finals else 0 for s in order}
    n_blocks = len(set(block.values()))
    while True:
        ids: dict[tuple, int] = {}
        new_block: dict[int, int] = {}
        for s in order:
            sig = (block[s], tuple(block[delta[(s, a)]] for a in range(nsym)))
            if sig not in ids:
                ids[sig] = len(ids)
            new_block[s] = ids[sig]
        block = new_block
        if len(ids) == n_blocks:
            break
        n_blocks = len(ids)

    block_delta: dict[tuple[int, int], int] = {}
    block_final: set[int] = set()
    for s in order:
        b = block[s]
        for a in range(nsym):
            block_delta[(b, a)] = block[delta[(s, a)]]
        if s in d.finals:
            block_final.add(b)

    renum = {block[d.initial]: 0}
    bfs = [block[d.initial]]
    i = 0
    while i < len(bfs):
        b = bfs[i]
        i += 1
        for a in range(nsym):
            t = block_delta[(b, a)]
            if t not in renum:
                renum[t] = len(renum)
                bfs.append(t)
    transitions = frozenset(
        (renum[b], a, renum[block_delta[(b, a)]]) for b in bfs for a in range(nsym)
    )
    finals = frozenset(renum[b] for b in block_final)
    return Dfa(d.alphabet, len(renum), 0, transitions, finals)


def complement(d: Dfa) -> Dfa:
    if not d.total:
        raise ValueError("complement requires a total DFA")
    finals = frozenset(range(d.n_states)) - d.finals
    return Dfa(d.alphabet, d.n_states, d.initial, d.transitions, finals)


def intersect(x: Nfa, y: Nfa) -> Nfa:
    """Product construction, reachable pairs only."""
    _require_same_alphabet(x, y)
    nsym = len(x.alphabet)
    sx, sy = x.successors(), y.successors()
    start = (x.initial, y.initial)
    ids: dict[tuple[int, int], int] = {start: 0}
    queue: deque[tuple[int, int]] = deque([start])
    transitions: set[tuple[int, int, int]] = set()
    finals: set[int] = set()
    while queue:
        pair = queue.popleft()
        pid = ids[pair]
        if pair[0] in x.finals and pair[1] in y.finals:
            finals.add(pid)
        for a in range(nsym):
            for tx in sx.get((pair[0], a), ()):
                for ty in sy.get((pair[1], a), ()):
                    target = (tx, ty)
                    tid = ids.get(target)
                    if tid is None:
                        tid = ids[target] = len(ids)
                        queue.append(target)
                    transitions.add((pid, a, tid))
    return Nfa(x.alphabet, len(ids), 0, frozenset(transitions), frozenset(finals))


def union(x: Nfa, y: Nfa) -> Nfa:
    """Disjoint union behind a fresh initial state (stays epsilon-free)."""
    _require_same_alphabet(x, y)
    off = x.n_states
    init = off + y.n_states
    transitions: set[tuple[int, int, int]] = set(x.transitions)
    transitions.update((s + off, a, t + off) for s, a, t in y.transitions)
    transitions.update((init, a, t) for s, a, t in x.transitions if s == x.initial)
    transitions.update(
        (init, a, t + off) for s, a, t in y.transitions if s == y.initial
    )
    finals: set[int] = set(x.finals)
    finals.update(f + off for f in y.finals)
    if x.initial in x.finals or y.initial in y.finals:
        finals.add(init)
    return Nfa(x.alphabet, init + 1, init, frozenset(transitions), frozenset(finals))


def is_empty(m: Nfa) -> Word | None:
    """None if the language is empty, else the shortest accepted word
    (ties broken lexicographically in alphabet symbol order).

    Runs breadth-first over determinized subsets: each subset is reached by
    exactly one word per length, and FIFO processing with symbols expanded
    in order discovers every subset through its length-lex-minimal word, so
    the first accepting subset found yields the minimal accepted word.
    """
    start = frozenset({m.initial})
    if start & m.finals:
        return ()
    if not m.finals:
        return None
    succ = m.successors()
    nsym = len(m.alphabet)
    prev: dict[frozenset[int], tuple[frozenset[int], int]] = {}
    seen = {start}
    queue: deque[frozenset[int]] = deque([start])

    def rebuild(subset: frozenset[int]) -> Word:
        out: list[int] = []
        while subset != start:
            subset, a = prev[subset]
            out.append(a)
        return tuple(reversed(out))

    while queue:
        subset = queue.popleft()
        for a in range(nsym):
            target = frozenset(t for s in subset for t in succ.get((s, a), ()))
            if not target or target in seen:
                continue
            seen.add(target)
            prev[target] = (subset, a)
            if target & m.finals:
                return rebuild(target)
            queue.append(target)
    return None


def includes(a: Nfa, b: Dfa) -> Word | None:
    """None iff the language of a is included in b's; otherwise the shortest
    (then lexicographically least) word accepted by a but not by b."""
    _require_same_alphabet(a, b)
    return is_empty(intersect(a, complement(b)))


def word_nfa(alphabet: Alphabet, w: Word) -> Nfa:
    """Automaton accepting exactly the word w."""
    transitions = frozenset((i, a, i + 1) for i, a in enumerate(w))
    return Nfa(alphabet, len(w) + 1, 0, transitions, frozenset({len(w)}))


def shortest_symmetric_difference(x: Nfa, y: Nfa) -> Word | None:
    """Shortest-lex word on which the two languages disagree, if any."""
    _require_same_alphabet(x, y)
    w1 = includes(x, determinize(y))
    w2 = includes(y, determinize(x))
    candidates = [w for w in (w1, w2) if w is not None]
    if not candidates:
        return None
    return min(candidates, key=lambda w: (len(w), w))
