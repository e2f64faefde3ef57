"""Length-preserving regular relations and their application to languages.

A transducer transition reads one input symbol and writes one output symbol;
``None`` labels are representable so that imported relations can be
validated, but every operation here requires the length-preserving form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import (
    Alphabet,
    AlphabetMismatchError,
    Dfa,
    Nfa,
    Word,
    complement,
    intersect,
    is_empty,
    word_nfa,
)

__all__ = [
    "Transducer",
    "check_length_preserving",
    "identity_transducer",
    "inductive_violation",
    "post_image",
    "pre_image",
]


@dataclass(frozen=True)
class Transducer:
    """Pair-labeled automaton; transitions are (state, in, out, state).

    A pair of words (x, y) is related iff some run ending in a final state
    spells x on the input track and y on the output track.
    """

    alphabet: Alphabet
    n_states: int
    initial: int
    transitions: frozenset[tuple[int, int | None, int | None, int]]
    finals: frozenset[int]

    def __post_init__(self) -> None:
        if self.n_states <= 0:
            raise ValueError("transducer needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        nsym = len(self.alphabet)
        for s, a, b, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition ({s},{a},{b},{t}) uses unknown state")
            for lab in (a, b):
                if lab is not None and not 0 <= lab < nsym:
                    raise ValueError(f"transition ({s},{a},{b},{t}) uses unknown symbol")
        for f in self.finals:
            if not 0 <= f < self.n_states:
                raise ValueError(f"final state {f} out of range")

    def by_input(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        """Map (state, in_symbol) to sorted (out_symbol, successor) pairs."""
        raw: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for s, a, b, t in self.transitions:
            if a is None or b is None:
                continue
            raw.setdefault((s, a), []).append((b, t))
        return {k: tuple(sorted(v)) for k, v in raw.items()}

    def by_output(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        """Map (state, out_symbol) to sorted (in_symbol, successor) pairs."""
        raw: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for s, a, b, t in self.transitions:
            if a is None or b is None:
                continue
            raw.setdefault((s, b), []).append((a, t))
        return {k: tuple(sorted(v)) for k, v in raw.items()}


def check_length_preserving(t: Transducer) -> bool:
    """True iff every transition reads and writes exactly one symbol."""
    return all(a is not None and b is not None for _, a, b, _ in t.transitions)


def _require_length_preserving(t: Transducer) -> None:
    if not check_length_preserving(t):
        raise ValueError("operation requires a length-preserving transducer")


def identity_transducer(alphabet: Alphabet) -> Transducer:
    """The identity relation on all words over the alphabet."""
    transitions = frozenset((0, a, a, 0) for a in range(len(alphabet)))
    return Transducer(alphabet, 1, 0, transitions, frozenset({0}))


def post_image(t: Transducer, language: Nfa) -> Nfa:
    """Automaton for { y : some x in the language has (x, y) in the relation }."""
    if t.alphabet != language.alphabet:
        raise AlphabetMismatchError("transducer and language alphabets differ")
    _require_length_preserving(t)
    by_in = t.by_input()
    lang_succ = language.successors()
    nsym = len(t.alphabet)
    start = (t.initial, language.initial)
    ids: dict[tuple[int, int], int] = {start: 0}
    queue: deque[tuple[int, int]] = deque([start])
    transitions: set[tuple[int, int, int]] = set()
    finals: set[int] = set()
    while queue:
        tq, lq = queue.popleft()
        pid = ids[(tq, lq)]
        if tq in t.finals and lq in language.finals:
            finals.add(pid)
        for a in range(nsym):
            successors = lang_succ.get((lq, a), ())
            if not successors:
                continue
            for b, tq2 in by_in.get((tq, a), ()):
                for lq2 in successors:
                    target = (tq2, lq2)
                    tid = ids.get(target)
                    if tid is None:
                        tid = ids[target] = len(ids)
                        queue.append(target)
                    transitions.add((pid, b, tid))
    return Nfa(t.alphabet, len(ids), 0, frozenset(transitions), frozenset(finals))


def pre_image(t: Transducer, language: Nfa) -> Nfa:
    """Automaton for { x : some y in the language has (x, y) in the relation }."""
    if t.alphabet != language.alphabet:
        raise AlphabetMismatchError("transducer and language alphabets differ")
    _require_length_preserving(t)
    by_out = t.by_output()
    lang_succ = language.successors()
    nsym = len(t.alphabet)
    start = (t.initial, language.initial)
    ids: dict[tuple[int, int], int] = {start: 0}
    queue: deque[tuple[int, int]] = deque([start])
    transitions: set[tuple[int, int, int]] = set()
    finals: set[int] = set()
    while queue:
        tq, lq = queue.popleft()
        pid = ids[(tq, lq)]
        if tq in t.finals and lq in language.finals:
            finals.add(pid)
        for b in range(nsym):
            successors = lang_succ.get((lq, b), ())
            if not successors:
                continue
            for a, tq2 in by_out.get((tq, b), ()):
                for lq2 in successors:
                    target = (tq2, lq2)
                    tid = ids.get(target)
                    if tid is None:
                        tid = ids[target] = len(ids)
                        queue.append(target)
                    transitions.add((pid, a, tid))
    return Nfa(t.alphabet, len(ids), 0, frozenset(transitions), frozenset(finals))


def inductive_violation(t: Transducer, candidate: Dfa) -> tuple[Word, Word] | None:
    """Search for (w, w') in the relation with w accepted and w' rejected.

    Returns None iff applying the relation cannot leave the candidate's
    language. Otherwise w has minimal length, is lexicographically least
    among that length on the input track, and w' is lexicographically least
    among the rejected successors of that w.
    """
    if t.alphabet != candidate.alphabet:
        raise AlphabetMismatchError("transducer and candidate alphabets differ")
    _require_length_preserving(t)
    comp = complement(candidate)
    delta = candidate.delta()
    comp_delta = comp.delta()
    by_in = t.by_input()
    nsym = len(t.alphabet)

    # Triple product projected to the input track: a word is accepted iff it
    # is accepted by the candidate and some output run lands outside it.
    start = (candidate.initial, t.initial, comp.initial)
    ids: dict[tuple[int, int, int], int] = {start: 0}
    queue: deque[tuple[int, int, int]] = deque([start])
    transitions: set[tuple[int, int, int]] = set()
    finals: set[int] = set()
    while queue:
        p, q, r = queue.popleft()
        pid = ids[(p, q, r)]
        if p in candidate.finals and q in t.finals and r in comp.finals:
            finals.add(pid)
        for a in range(nsym):
            p2 = delta[(p, a)]
            for b, q2 in by_in.get((q, a), ()):
                target = (p2, q2, comp_delta[(r, b)])
                tid = ids.get(target)
                if tid is None:
                    tid = ids[target] = len(ids)
                    queue.append(target)
                transitions.add((pid, a, tid))
    product = Nfa(t.alphabet, len(ids), 0, frozenset(transitions), frozenset(finals))
    w = is_empty(product)
    if w is None:
        return None
    escaped = intersect(post_image(t, word_nfa(t.alphabet, w)), comp)
    w2 = is_empty(escaped)
    assert w2 is not None, "violating input must have a rejected successor"
    return w, w2
