"""The verification teacher: membership by bounded reachability, equivalence
by checking the candidate as an inductive invariant.

A problem is a triple (initial language, length-preserving transition
relation, bad language). The teacher targets the reachable set: a word of
length k is a member iff it lies in the fixpoint of the transition relation
restricted to length k, which is decidable because the relation preserves
length. A candidate automaton is accepted as soon as it contains the
initial language, avoids the bad language, and is closed under the
relation, even when it is not the reachable set itself.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .automata import (
    Dfa,
    Nfa,
    Word,
    accepts,
    determinize,
    includes,
    intersect,
    is_empty,
    minimize,
    union,
)
from .learner import (
    Counterexample,
    DeadlineExceeded,
    EquivalenceReply,
    LearnerStats,
    Stop,
    run_learner,
)
from .transducer import Transducer, check_length_preserving, inductive_violation, post_image

__all__ = [
    "Limits",
    "ReachabilityTeacher",
    "InvariantReport",
    "RmcProblem",
    "Safe",
    "Unknown",
    "Unsafe",
    "Verdict",
    "check_invariant",
    "run_prover",
]


@dataclass(frozen=True)
class RmcProblem:
    """Initial language, transition relation, bad language, one alphabet."""

    init: Nfa
    trans: Transducer
    bad: Nfa

    def __post_init__(self) -> None:
        if not (self.init.alphabet == self.trans.alphabet == self.bad.alphabet):
            raise ValueError("problem components must share one alphabet")
        if not check_length_preserving(self.trans):
            raise ValueError("transition relation must be length-preserving")

    @property
    def alphabet(self):
        return self.init.alphabet


@dataclass(frozen=True)
class Safe:
    invariant: Dfa


@dataclass(frozen=True)
class Unsafe:
    witness: Word


@dataclass(frozen=True)
class Unknown:
    reason: str
    stats: LearnerStats | None = None


Verdict = Safe | Unsafe | Unknown


@dataclass
class Limits:
    """Resource bounds; the prover reports Unknown when one is exhausted."""

    timeout_s: float = 60.0
    max_states: int = 10_000
    max_iterations: int | None = None


@dataclass(frozen=True)
class InvariantReport:
    ok: bool
    failed_condition: int | None = None
    witness: Word | None = None

    def describe(self, problem: RmcProblem) -> str:
        if self.ok:
            return "all three invariant conditions hold"
        shown = problem.alphabet.format_word(self.witness)
        reasons = {
            1: f"initial configuration {shown} is not covered",
            2: f"bad configuration {shown} is covered",
            3: f"a covered configuration steps to {shown}, which is not covered",
        }
        return f"condition ({self.failed_condition}) fails: {reasons[self.failed_condition]}"


def check_invariant(problem: RmcProblem, candidate: Dfa) -> InvariantReport:
    """Re-verify the three proof conditions from the base primitives only:
    the initial language is covered, the bad language is excluded, and the
    candidate is closed under the transition relation."""
    w = includes(problem.init, candidate)
    if w is not None:
        return InvariantReport(False, 1, w)
    w = is_empty(intersect(candidate, problem.bad))
    if w is not None:
        return InvariantReport(False, 2, w)
    w = includes(post_image(problem.trans, candidate), candidate)
    if w is not None:
        return InvariantReport(False, 3, w)
    return InvariantReport(True)


def _length_slice(m: Nfa, k: int) -> Nfa:
    """Restriction of a language to words of exactly length k."""
    chain = Nfa(
        m.alphabet,
        k + 1,
        0,
        frozenset((i, a, i + 1) for i in range(k) for a in range(len(m.alphabet))),
        frozenset({k}),
    )
    return intersect(m, chain)


class ReachabilityTeacher:
    """Answers membership by computing the reachable set per word length and
    equivalence by the invariant-condition cascade.

    Equivalence replies follow a fixed cascade: (1) a missing initial word is
    a positive counterexample; (2) a covered bad word ends the run as unsafe
    when reachable and is a negative counterexample otherwise; (3) for a
    closure violation (w, w'), reachability of w decides whether w' is
    returned positively or w negatively; (4) otherwise the candidate is an
    inductive invariant and the run stops as safe. Every word handed out is
    shortest with lexicographic tie-breaking.

    Reachable-set automata are cached per length. Whenever a new length is
    computed, its intersection with the bad language is checked at once; a
    hit is remembered and surfaced as an unsafe stop at the next equivalence
    query rather than by interrupting the membership query that found it.
    """

    def __init__(self, problem: RmcProblem, deadline: float | None = None):
        self.problem = problem
        self.alphabet = problem.alphabet
        self.deadline = deadline
        self.post_cache: dict[int, Dfa] = {}
        self.pending_unsafe: Word | None = None
        self.counterexample_log: list[Word] = []

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded()

    def post_k(self, k: int) -> Dfa:
        """Reachable configurations of exactly length k: the fixpoint of the
        transition relation over the initial slice, one minimized automaton
        per round (canonical minimization makes the fixpoint test ==)."""
        cached = self.post_cache.get(k)
        if cached is not None:
            return cached
        current = minimize(determinize(_length_slice(self.problem.init, k)))
        while True:
            self._check_deadline()
            stepped = minimize(
                determinize(union(current, post_image(self.problem.trans, current)))
            )
            if stepped == current:
                break
            current = stepped
        self.post_cache[k] = current
        if self.pending_unsafe is None:
            hit = is_empty(intersect(current, self.problem.bad))
            if hit is not None:
                self.pending_unsafe = hit
        return current

    def membership(self, w: Word) -> bool:
        return accepts(self.post_k(len(w)), w)

    def equivalence(self, candidate: Dfa) -> EquivalenceReply:
        if self.pending_unsafe is not None:
            return Stop(Unsafe(self.pending_unsafe))
        w = includes(self.problem.init, candidate)
        if w is not None:
            self.counterexample_log.append(w)
            return Counterexample(w)
        w = is_empty(intersect(candidate, self.problem.bad))
        if w is not None:
            if self.membership(w):
                return Stop(Unsafe(w))
            self.counterexample_log.append(w)
            return Counterexample(w)
        pair = inductive_violation(self.problem.trans, candidate)
        if pair is not None:
            w, w2 = pair
            out = w2 if self.membership(w) else w
            self.counterexample_log.append(out)
            return Counterexample(out)
        return Stop(Safe(candidate))


def run_prover(
    problem: RmcProblem, algorithm: str = "rs", limits: Limits | None = None
) -> tuple[Verdict, LearnerStats]:
    """Wire a learner to the reachability teacher and run to a verdict.

    Safe verdicts carry the minimized invariant and are re-validated through
    check_invariant; unsafe witnesses are re-validated against the bad
    language and the reachable set. Exhausted limits yield Unknown.
    """
    limits = limits or Limits()
    deadline = time.monotonic() + limits.timeout_s if limits.timeout_s else None
    teacher = ReachabilityTeacher(problem, deadline)
    run = run_learner(
        algorithm,
        teacher,
        max_states=limits.max_states,
        max_iterations=limits.max_iterations,
        deadline=deadline,
    )
    if run.exhausted is not None:
        return Unknown(run.exhausted, run.stats), run.stats
    if run.stop is None:
        # The reachability teacher never answers plain Equal.
        return Unknown("learner finished without a verdict", run.stats), run.stats
    verdict = run.stop
    if isinstance(verdict, Safe):
        invariant = minimize(verdict.invariant)
        report = check_invariant(problem, invariant)
        if not report.ok:
            raise RuntimeError(
                f"accepted candidate failed validation: {report.describe(problem)}"
            )
        return Safe(invariant), run.stats
    if isinstance(verdict, Unsafe):
        w = verdict.witness
        if not accepts(problem.bad, w) or not teacher.membership(w):
            raise RuntimeError("unsafe witness failed validation")
        return Unsafe(w), run.stats
    raise RuntimeError(f"teacher stopped with unexpected payload {verdict!r}")
