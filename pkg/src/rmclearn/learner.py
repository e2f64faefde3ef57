"""Active automata-learning engines against an abstract teacher.

A teacher exposes ``alphabet``, ``membership(word) -> bool`` and
``equivalence(hypothesis) -> Equal | Counterexample | Stop``. Five engines
are provided: observation-table learning with three counterexample rules
(all prefixes to rows, all suffixes to columns, or a binary-search suffix),
classification-tree learning, and residual-automaton learning whose
hypotheses are nondeterministic.

Membership answers are memoized per run; statistics count distinct words.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Protocol

from .automata import Alphabet, Dfa, Nfa, Word, accepts, determinize, shortest_symmetric_difference

__all__ = [
    "ALGORITHMS",
    "ClassificationTree",
    "Counterexample",
    "DeadlineExceeded",
    "Equal",
    "ExactTeacher",
    "KvLearner",
    "LearnerRun",
    "LearnerStats",
    "NlStarLearner",
    "ObservationTable",
    "RfsaTable",
    "Stop",
    "TableLearner",
    "Teacher",
    "TeacherContractError",
    "build_candidate",
    "close_table",
    "make_learner",
    "rs_analyze",
    "run_learner",
]

ALGORITHMS = ("rs", "lstar", "lstarc", "kv", "nlstar")


@dataclass(frozen=True)
class Equal:
    """The hypothesis matches the target."""


@dataclass(frozen=True)
class Counterexample:
    """A word on which hypothesis and target disagree."""

    word: Word


@dataclass(frozen=True)
class Stop:
    """The teacher ends the run with a verdict of its own."""

    payload: object


EquivalenceReply = Equal | Counterexample | Stop


class Teacher(Protocol):
    alphabet: Alphabet

    def membership(self, w: Word) -> bool: ...

    def equivalence(self, hypothesis: Dfa) -> EquivalenceReply: ...


class TeacherContractError(RuntimeError):
    """The teacher returned a word that is not actually a counterexample."""


class DeadlineExceeded(Exception):
    """Raised by cooperating teachers when the wall-clock budget runs out."""


@dataclass
class LearnerStats:
    membership_queries: int = 0
    equivalence_queries: int = 0
    iterations: int = 0
    final_states: int = 0


@dataclass
class LearnerRun:
    hypothesis: Nfa | None
    stats: LearnerStats
    stop: object | None = None
    exhausted: str | None = None


Membership = Callable[[Word], bool]


class ObservationTable:
    """Prefix/suffix table: rows S, columns E, entries over (S + S*Sigma)*E."""

    def __init__(self, alphabet: Alphabet, mem: Membership):
        self.alphabet = alphabet
        self.mem = mem
        self.S: list[Word] = [()]
        self.E: list[Word] = [()]
        self.entries: dict[Word, bool] = {}
        self._fill()

    def _domain(self):
        nsym = len(self.alphabet)
        for x in self.S:
            yield x
            for a in range(nsym):
                yield x + (a,)

    def _fill(self) -> None:
        for x in self._domain():
            for e in self.E:
                w = x + e
                if w not in self.entries:
                    self.entries[w] = self.mem(w)

    def entry(self, w: Word) -> bool:
        return self.entries[w]

    def row(self, x: Word) -> tuple[bool, ...]:
        return tuple(self.entries[x + e] for e in self.E)

    def add_prefix(self, x: Word) -> None:
        if x not in self.S:
            self.S.append(x)
            self._fill()

    def add_suffix(self, e: Word) -> None:
        if e not in self.E:
            self.E.append(e)
            self._fill()

    def unclosed(self) -> Word | None:
        """First one-symbol extension whose row matches no row in S."""
        s_rows = {self.row(x) for x in self.S}
        for x in self.S:
            for a in range(len(self.alphabet)):
                if self.row(x + (a,)) not in s_rows:
                    return x + (a,)
        return None

    def inconsistency(self) -> Word | None:
        """Suffix separating the extensions of two S-words with equal rows."""
        nsym = len(self.alphabet)
        for i, x in enumerate(self.S):
            for y in self.S[i + 1 :]:
                if self.row(x) != self.row(y):
                    continue
                for a in range(nsym):
                    for e in self.E:
                        if self.entries[x + (a,) + e] != self.entries[y + (a,) + e]:
                            return (a,) + e
        return None

    def representatives(self) -> list[Word]:
        """First S-word of each distinct row, in S order."""
        seen: set[tuple[bool, ...]] = set()
        reps: list[Word] = []
        for x in self.S:
            r = self.row(x)
            if r not in seen:
                seen.add(r)
                reps.append(x)
        return reps


def close_table(tbl: ObservationTable) -> ObservationTable:
    """Extend S until every one-symbol extension's row is represented."""
    while True:
        xa = tbl.unclosed()
        if xa is None:
            return tbl
        tbl.S.append(xa)
        tbl._fill()


def build_candidate(tbl: ObservationTable) -> Dfa:
    """Hypothesis DFA over the distinct rows of a closed table."""
    reps = tbl.representatives()
    row_to_state = {tbl.row(x): i for i, x in enumerate(reps)}
    transitions: set[tuple[int, int, int]] = set()
    for i, rep in enumerate(reps):
        for a in range(len(tbl.alphabet)):
            target = row_to_state.get(tbl.row(rep + (a,)))
            if target is None:
                raise ValueError("table is not closed")
            transitions.add((i, a, target))
    finals = frozenset(i for i, rep in enumerate(reps) if tbl.entry(rep))
    return Dfa(tbl.alphabet, len(reps), 0, frozenset(transitions), finals)


def rs_analyze(w: Word, tbl: ObservationTable, hypothesis: Dfa | None = None) -> Word:
    """Binary-search a counterexample for a suffix that splits a row pair.

    Walk the hypothesis along w and compare membership of ``rep(state after
    w[:i]) + w[i:]``: it equals the target's answer at i=0 and the
    hypothesis's at i=len(w), so some adjacent flip exists and yields a
    suffix not yet in E. Uses about log(len(w)) membership queries; the
    target's answer at i=0 is derived from the hypothesis rather than
    queried, since a genuine counterexample must disagree with it.
    """
    hyp = build_candidate(tbl) if hypothesis is None else hypothesis
    reps = tbl.representatives()
    delta = hyp.delta()
    states = [hyp.initial]
    for a in w:
        states.append(delta[(states[-1], a)])
    beta_end = tbl.entry(reps[states[-1]])
    beta_start = tbl.entries.get(w)
    if beta_start is not None and beta_start == beta_end:
        raise TeacherContractError("word is not a counterexample for the hypothesis")
    if beta_start is None:
        beta_start = not beta_end
    lo, hi = 0, len(w)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tbl.mem(reps[states[mid]] + w[mid:]) == beta_start:
            lo = mid
        else:
            hi = mid
    suffix = w[lo + 1 :]
    if suffix in tbl.E:
        raise TeacherContractError("word is not a counterexample for the hypothesis")
    return suffix


class TableLearner:
    """Observation-table learner; the variant fixes the counterexample rule.

    ``rs`` adds one binary-search suffix to E, ``lstarc`` adds every suffix
    of the counterexample to E, ``lstar`` adds every prefix to S and
    restores consistency (prefix-adding can duplicate rows, so hypotheses
    are built over distinct rows).
    """

    def __init__(self, alphabet: Alphabet, mem: Membership, variant: str):
        if variant not in ("lstar", "lstarc", "rs"):
            raise ValueError(f"unknown table learner variant {variant!r}")
        self.variant = variant
        self.table = ObservationTable(alphabet, mem)
        self._hypothesis: Dfa | None = None

    def hypothesis(self) -> Dfa:
        tbl = self.table
        while True:
            close_table(tbl)
            if self.variant == "lstar":
                e = tbl.inconsistency()
                if e is not None:
                    tbl.add_suffix(e)
                    continue
            break
        self._hypothesis = build_candidate(tbl)
        return self._hypothesis

    def refine(self, w: Word) -> None:
        tbl = self.table
        if self.variant == "rs":
            tbl.add_suffix(rs_analyze(w, tbl, self._hypothesis))
        elif self.variant == "lstarc":
            for i in range(len(w) - 1, -1, -1):
                tbl.add_suffix(w[i:])
        else:
            for i in range(1, len(w) + 1):
                tbl.add_prefix(w[:i])


class _TreeNode:
    __slots__ = ("suffix", "low", "high", "access")

    def __init__(self, *, access: Word | None = None, suffix: Word | None = None):
        self.access = access
        self.suffix = suffix
        self.low: _TreeNode | None = None
        self.high: _TreeNode | None = None

    @property
    def is_leaf(self) -> bool:
        return self.suffix is None


class ClassificationTree:
    """Binary tree of distinguishing suffixes with access-word leaves."""

    def __init__(self, mem: Membership, root: _TreeNode):
        self.mem = mem
        self.root = root

    def sift(self, w: Word) -> _TreeNode:
        node = self.root
        while not node.is_leaf:
            node = node.high if self.mem(w + node.suffix) else node.low
        return node

    def leaves(self) -> list[_TreeNode]:
        out: list[_TreeNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.append(node.high)
                stack.append(node.low)
        return out

    def diverging_suffix(self, x: _TreeNode, y: _TreeNode) -> Word:
        """Suffix labelling the lowest common ancestor of two distinct leaves."""
        node = self.root
        while not node.is_leaf:
            bx = self.mem(x.access + node.suffix)
            by = self.mem(y.access + node.suffix)
            if bx != by:
                return node.suffix
            node = node.high if bx else node.low
        raise TeacherContractError("leaves are not distinguished by the tree")

    def split_leaf(self, leaf: _TreeNode, new_access: Word, suffix: Word) -> None:
        """Turn ``leaf`` into an inner node separating its old access word
        from ``new_access`` by ``suffix``."""
        old_access = leaf.access
        side_old = self.mem(old_access + suffix)
        side_new = self.mem(new_access + suffix)
        if side_old == side_new:
            raise TeacherContractError("split suffix does not separate the words")
        old_leaf = _TreeNode(access=old_access)
        new_leaf = _TreeNode(access=new_access)
        leaf.access = None
        leaf.suffix = suffix
        leaf.high = old_leaf if side_old else new_leaf
        leaf.low = new_leaf if side_old else old_leaf


class KvLearner:
    """Classification-tree learner.

    The tree starts lazily: the first hypothesis is the single-state
    automaton classifying like the empty word, and the first counterexample
    creates the root (suffix lambda) with the two seed leaves. Every later
    counterexample splits exactly one leaf, so each refinement adds one
    state.
    """

    def __init__(self, alphabet: Alphabet, mem: Membership):
        self.alphabet = alphabet
        self.mem = mem
        self.tree: ClassificationTree | None = None
        self._leaves: list[_TreeNode] = []
        self._hypothesis: Dfa | None = None

    def hypothesis(self) -> Dfa:
        nsym = len(self.alphabet)
        if self.tree is None:
            loops = frozenset((0, a, 0) for a in range(nsym))
            finals = frozenset({0}) if self.mem(()) else frozenset()
            self._hypothesis = Dfa(self.alphabet, 1, 0, loops, finals)
            self._leaves = []
            return self._hypothesis
        leaves = self.tree.leaves()
        index = {id(leaf): i for i, leaf in enumerate(leaves)}
        transitions: set[tuple[int, int, int]] = set()
        finals: set[int] = set()
        for i, leaf in enumerate(leaves):
            if self.mem(leaf.access):
                finals.add(i)
            for a in range(nsym):
                target = self.tree.sift(leaf.access + (a,))
                transitions.add((i, a, index[id(target)]))
        initial = index[id(self.tree.sift(()))]
        self._leaves = leaves
        self._hypothesis = Dfa(
            self.alphabet, len(leaves), initial, frozenset(transitions), frozenset(finals)
        )
        return self._hypothesis

    def refine(self, w: Word) -> None:
        if self.tree is None:
            same = self.mem(()) == self.mem(w)
            if same:
                raise TeacherContractError("word is not a counterexample for the hypothesis")
            root = _TreeNode(suffix=())
            leaf_empty = _TreeNode(access=())
            leaf_w = _TreeNode(access=w)
            root.high = leaf_empty if self.mem(()) else leaf_w
            root.low = leaf_w if self.mem(()) else leaf_empty
            self.tree = ClassificationTree(self.mem, root)
            return
        hyp = self._hypothesis
        assert hyp is not None
        delta = hyp.delta()
        state = hyp.initial
        for j in range(1, len(w) + 1):
            state = delta[(state, w[j - 1])]
            actual = self.tree.sift(w[:j])
            predicted = self._leaves[state]
            if actual is not predicted:
                break
        else:
            raise TeacherContractError("word is not a counterexample for the hypothesis")
        # The states reached on w[:j-1] agree, so the hypothesis move on
        # w[j-1] used the predicted leaf's access word where the true prefix
        # behaves differently: split their shared leaf on that evidence.
        prev_leaf = self.tree.sift(w[: j - 1])
        d = self.tree.diverging_suffix(predicted, actual)
        self.tree.split_leaf(prev_leaf, w[: j - 1], (w[j - 1],) + d)


def _covered(small: tuple[bool, ...], big: tuple[bool, ...]) -> bool:
    return all(y or not x for x, y in zip(small, big))


class RfsaTable(ObservationTable):
    """Observation table compared by row coverage instead of row equality."""

    def all_rows(self) -> list[tuple[bool, ...]]:
        """Distinct rows over S and its extensions, first-seen order."""
        seen: set[tuple[bool, ...]] = set()
        out: list[tuple[bool, ...]] = []
        for x in self._domain():
            r = self.row(x)
            if r not in seen:
                seen.add(r)
                out.append(r)
        return out

    def primes(self) -> set[tuple[bool, ...]]:
        """Rows that are not the join of the rows they strictly cover."""
        rows = self.all_rows()
        out: set[tuple[bool, ...]] = set()
        for r in rows:
            join = [False] * len(r)
            for r2 in rows:
                if r2 != r and _covered(r2, r):
                    join = [x or y for x, y in zip(join, r2)]
            if tuple(join) != r:
                out.add(r)
        return out


class NlStarLearner:
    """Residual-automaton learner; hypotheses are NFAs over prime rows.

    Closedness requires every prime extension row to appear in S;
    consistency requires coverage between S-rows to persist under symbol
    extension. Counterexamples add all their suffixes to the columns.
    """

    def __init__(self, alphabet: Alphabet, mem: Membership):
        self.alphabet = alphabet
        self.table = RfsaTable(alphabet, mem)

    def _unclosed(self) -> Word | None:
        tbl = self.table
        primes = tbl.primes()
        upper = {tbl.row(x) for x in tbl.S}
        for x in tbl.S:
            for a in range(len(self.alphabet)):
                r = tbl.row(x + (a,))
                if r in primes and r not in upper:
                    return x + (a,)
        return None

    def _inconsistency(self) -> Word | None:
        tbl = self.table
        nsym = len(self.alphabet)
        for x in tbl.S:
            rx = tbl.row(x)
            for y in tbl.S:
                if x == y or not _covered(rx, tbl.row(y)):
                    continue
                for a in range(nsym):
                    for e in tbl.E:
                        if tbl.entries[x + (a,) + e] and not tbl.entries[y + (a,) + e]:
                            return (a,) + e
        return None

    def hypothesis(self) -> Nfa:
        tbl = self.table
        while True:
            xa = self._unclosed()
            if xa is not None:
                tbl.S.append(xa)
                tbl._fill()
                continue
            e = self._inconsistency()
            if e is not None:
                tbl.add_suffix(e)
                continue
            break
        primes = tbl.primes()
        seen: set[tuple[bool, ...]] = set()
        reps: list[Word] = []
        for x in tbl.S:
            r = tbl.row(x)
            if r in primes and r not in seen:
                seen.add(r)
                reps.append(x)
        prime_rows = [tbl.row(x) for x in reps]
        n = len(reps)
        prime_edges: set[tuple[int, int, int]] = set()
        finals: set[int] = set()
        for i, rep in enumerate(reps):
            if tbl.entry(rep):
                finals.add(i)
            for a in range(len(self.alphabet)):
                target_row = tbl.row(rep + (a,))
                for j, pr in enumerate(prime_rows):
                    if _covered(pr, target_row):
                        prime_edges.add((i, a, j))
        # Residual automata have a set of initial states (the primes covered
        # by the lambda row); fold it into one fresh initial state.
        initial = n
        transitions = set(prime_edges)
        start_row = tbl.row(())
        for j, pr in enumerate(prime_rows):
            if _covered(pr, start_row):
                if j in finals:
                    finals.add(initial)
                transitions.update(
                    (initial, a, t) for s, a, t in prime_edges if s == j
                )
        return Nfa(
            self.alphabet, n + 1, initial, frozenset(transitions), frozenset(finals)
        )

    def refine(self, w: Word) -> None:
        for i in range(len(w) - 1, -1, -1):
            self.table.add_suffix(w[i:])


class ExactTeacher:
    """Teacher over a known total DFA, for testing learners in isolation;
    equivalence answers with the shortest disagreeing word."""

    def __init__(self, target: Dfa):
        if not target.total:
            raise ValueError("exact teacher requires a total DFA")
        self.target = target
        self.alphabet = target.alphabet

    def membership(self, w: Word) -> bool:
        return accepts(self.target, w)

    def equivalence(self, hypothesis: Dfa) -> EquivalenceReply:
        w = shortest_symmetric_difference(hypothesis, self.target)
        return Equal() if w is None else Counterexample(w)


def make_learner(algorithm: str, alphabet: Alphabet, mem: Membership):
    if algorithm in ("lstar", "lstarc", "rs"):
        return TableLearner(alphabet, mem, algorithm)
    if algorithm == "kv":
        return KvLearner(alphabet, mem)
    if algorithm == "nlstar":
        return NlStarLearner(alphabet, mem)
    raise ValueError(f"unknown learning algorithm {algorithm!r}")


def run_learner(
    algorithm: str,
    teacher: Teacher,
    *,
    max_states: int | None = None,
    max_iterations: int | None = None,
    deadline: float | None = None,
) -> LearnerRun:
    """Drive query/close/hypothesize/equivalence until the teacher accepts,
    stops with a verdict, or a resource limit is hit."""
    stats = LearnerStats()
    cache: dict[Word, bool] = {}

    def mem(w: Word) -> bool:
        if w not in cache:
            stats.membership_queries += 1
            cache[w] = teacher.membership(w)
        return cache[w]

    monotone = algorithm != "nlstar"
    prev_states = 0
    hyp: Nfa | None = None

    def finish(exhausted: str | None, stop: object | None = None) -> LearnerRun:
        if hyp is not None:
            stats.final_states = hyp.n_states
        return LearnerRun(hyp, stats, stop=stop, exhausted=exhausted)

    try:
        learner = make_learner(algorithm, teacher.alphabet, mem)
    except DeadlineExceeded:
        return finish("timeout")

    while True:
        if deadline is not None and time.monotonic() > deadline:
            return finish("timeout")
        if max_iterations is not None and stats.iterations >= max_iterations:
            return finish("iteration limit")
        try:
            hyp = learner.hypothesis()
        except DeadlineExceeded:
            return finish("timeout")
        if monotone:
            if hyp.n_states <= prev_states:
                raise TeacherContractError("refinement did not add a state")
            prev_states = hyp.n_states
        if max_states is not None and hyp.n_states > max_states:
            return finish("state limit")
        submitted = determinize(hyp) if algorithm == "nlstar" else hyp
        stats.equivalence_queries += 1
        stats.iterations += 1
        try:
            reply = teacher.equivalence(submitted)
        except DeadlineExceeded:
            return finish("timeout")
        if isinstance(reply, Equal):
            return finish(None)
        if isinstance(reply, Stop):
            return finish(None, stop=reply.payload)
        try:
            learner.refine(reply.word)
        except DeadlineExceeded:
            return finish("timeout")
