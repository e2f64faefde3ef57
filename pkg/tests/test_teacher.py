import pytest

from oracles import words_of_length, words_upto
from rmclearn.automata import (
    Alphabet,
    Dfa,
    Nfa,
    accepts,
    determinize,
    is_empty,
    minimize,
    word_nfa,
)
from rmclearn.learner import Counterexample, Stop, run_learner
from rmclearn.modelio import parse_model
from rmclearn.teacher import (
    Limits,
    ReachabilityTeacher,
    RmcProblem,
    Safe,
    Unknown,
    Unsafe,
    check_invariant,
    run_prover,
)

TN = Alphabet(("T", "N"))

DIVERGENT_MODEL = """\
alphabet: T N
let E = T/T + N/N;
init: N T (N T)*
trans: E* T/N N/T E*
bad: N*
"""


def dfa_words(d, max_len):
    return {w for w in words_upto(len(d.alphabet), max_len) if accepts(d, w)}


def odd_token_dfa():
    return Dfa(
        TN, 2, 0,
        frozenset({(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1)}),
        frozenset({1}),
    )


def sigma_star_dfa():
    return Dfa(TN, 1, 0, frozenset({(0, 0, 0), (0, 1, 0)}), frozenset({0}))


def empty_dfa():
    return Dfa(TN, 1, 0, frozenset({(0, 0, 0), (0, 1, 0)}), frozenset())


def length_at_least_two_dfa():
    return Dfa(
        TN, 3, 0,
        frozenset({(0, a, 1) for a in range(2)}
                  | {(1, a, 2) for a in range(2)}
                  | {(2, a, 2) for a in range(2)}),
        frozenset({2}),
    )


class TestPostK:
    def test_herman_length_zero_is_empty(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        assert is_empty(teacher.post_k(0)) is None

    def test_herman_length_two(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        d = teacher.post_k(2)
        got = {w for w in words_of_length(2, 2) if accepts(d, w)}
        assert got == {TN.word("TN"), TN.word("NT")}

    def test_empty_slice_stays_empty(self, problems):
        # the token-passing initial language has no length-0 configuration
        teacher = ReachabilityTeacher(problems["token_passing_linear"])
        assert is_empty(teacher.post_k(0)) is None

    def test_cache_reuse(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        first = teacher.post_k(3)
        assert teacher.post_k(3) is first

    def test_iterates_grow_monotonically(self, problems):
        from rmclearn.automata import includes, union
        from rmclearn.teacher import _length_slice
        from rmclearn.transducer import post_image

        problem = problems["israeli_jalfon"]
        current = minimize(determinize(_length_slice(problem.init, 3)))
        for _ in range(8):
            stepped = minimize(
                determinize(union(current, post_image(problem.trans, current)))
            )
            assert includes(current, stepped) is None
            if stepped == current:
                break
            current = stepped
        else:
            pytest.fail("fixpoint not reached")
        assert current == ReachabilityTeacher(problem).post_k(3)


class TestMembership:
    def test_herman_fig_values(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        assert teacher.membership(TN.word("TN")) is True
        assert teacher.membership(TN.word("TT")) is False

    def test_even_token_word_unreachable(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        assert teacher.membership(TN.word("NNTTNN")) is False


class TestEquivalence:
    def test_invariant_candidate_is_accepted(self, problems):
        teacher = ReachabilityTeacher(problems["herman_linear"])
        reply = teacher.equivalence(odd_token_dfa())
        assert isinstance(reply, Stop) and isinstance(reply.payload, Safe)

    def test_missing_initial_word_is_returned(self, problems):
        teacher = ReachabilityTeacher(problems["israeli_jalfon"])
        reply = teacher.equivalence(empty_dfa())
        assert reply == Counterexample(TN.word("TT"))

    def test_unreachable_bad_word_is_returned(self, problems):
        teacher = ReachabilityTeacher(problems["israeli_jalfon"])
        reply = teacher.equivalence(length_at_least_two_dfa())
        assert reply == Counterexample(TN.word("NN"))
        assert teacher.membership(TN.word("NN")) is False

    def test_reachable_bad_word_stops_unsafe(self, problems):
        teacher = ReachabilityTeacher(problems["herman_unsafe_demo"])
        reply = teacher.equivalence(odd_token_dfa())
        assert isinstance(reply, Stop)
        assert reply.payload == Unsafe(TN.word("T"))

    def test_closure_violation_negative_side(self, problems):
        # odd-token words plus the unreachable TT: covers the initial set and
        # avoids the bad set, but TT steps to NN which escapes; TT is
        # unreachable, so it comes back as the negative counterexample
        from rmclearn.automata import union

        problem = problems["herman_linear"]
        teacher = ReachabilityTeacher(problem)
        candidate = minimize(
            determinize(union(odd_token_dfa(), word_nfa(TN, TN.word("TT"))))
        )
        reply = teacher.equivalence(candidate)
        assert reply == Counterexample(TN.word("TT"))
        assert teacher.membership(TN.word("TT")) is False

    def test_closure_violation_positive_side(self, problems):
        # words starting with T cover the token-passing initial set and avoid
        # the bad set, but the reachable TN steps to NT which escapes, so NT
        # comes back as the positive counterexample
        problem = problems["token_passing_linear"]
        teacher = ReachabilityTeacher(problem)
        starts_with_token = Dfa(
            TN, 3, 0,
            frozenset({(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1), (2, 0, 2), (2, 1, 2)}),
            frozenset({1}),
        )
        reply = teacher.equivalence(starts_with_token)
        assert reply == Counterexample(TN.word("NT"))
        assert teacher.membership(TN.word("NT")) is True

    def test_pending_unsafety_surfaces_at_next_query(self, problems):
        teacher = ReachabilityTeacher(problems["herman_unsafe_demo"])
        assert teacher.membership(TN.word("T")) is True
        assert teacher.pending_unsafe == TN.word("T")
        reply = teacher.equivalence(empty_dfa())
        assert isinstance(reply, Stop) and reply.payload == Unsafe(TN.word("T"))

    def test_counterexamples_lie_in_symmetric_difference(self, problems):
        problem = problems["israeli_jalfon"]
        teacher = ReachabilityTeacher(problem)
        submitted = []

        class Probe:
            alphabet = problem.alphabet

            def membership(self, w):
                return teacher.membership(w)

            def equivalence(self, hypothesis):
                reply = teacher.equivalence(hypothesis)
                if isinstance(reply, Counterexample):
                    submitted.append((hypothesis, reply.word))
                return reply

        run = run_learner("rs", Probe())
        assert isinstance(run.stop, Safe)
        for hypothesis, w in submitted:
            fresh = ReachabilityTeacher(problem)
            assert accepts(hypothesis, w) != fresh.membership(w)

    def test_counterexamples_placed_correctly_on_random_problems(self):
        import random

        from rmclearn.transducer import Transducer

        rng = random.Random(424)

        def random_nfa():
            n = rng.randint(1, 3)
            transitions = frozenset(
                (s, a, t)
                for s in range(n)
                for a in range(2)
                for t in range(n)
                if rng.random() < 0.4
            )
            finals = frozenset(s for s in range(n) if rng.random() < 0.5)
            return Nfa(TN, n, 0, transitions, finals)

        for _ in range(25):
            n = rng.randint(1, 2)
            transitions = frozenset(
                (s, a, b, t)
                for s in range(n)
                for a in range(2)
                for b in range(2)
                for t in range(n)
                if rng.random() < 0.35
            )
            trans = Transducer(
                TN, n, 0, transitions, frozenset(s for s in range(n) if rng.random() < 0.7)
            )
            problem = RmcProblem(random_nfa(), trans, random_nfa())
            teacher = ReachabilityTeacher(problem)
            logged = []

            class Probe:
                alphabet = TN

                def membership(self, w):
                    return teacher.membership(w)

                def equivalence(self, hypothesis):
                    reply = teacher.equivalence(hypothesis)
                    if isinstance(reply, Counterexample):
                        logged.append((hypothesis, reply.word))
                    return reply

            run_learner("rs", Probe(), max_iterations=12, max_states=40)
            for hypothesis, w in logged:
                fresh = ReachabilityTeacher(problem)
                assert accepts(hypothesis, w) != fresh.membership(w)


class TestCheckInvariant:
    def test_valid_invariant(self, problems):
        report = check_invariant(problems["herman_linear"], odd_token_dfa())
        assert report.ok

    def test_sigma_star_hits_bad(self, problems):
        report = check_invariant(problems["herman_linear"], sigma_star_dfa())
        assert not report.ok
        assert report.failed_condition == 2
        assert report.witness == ()

    def test_missing_initial(self, problems):
        report = check_invariant(problems["herman_linear"], empty_dfa())
        assert not report.ok
        assert report.failed_condition == 1
        assert report.witness == TN.word("T")

    def test_not_inductive(self, problems):
        starts_with_token = Dfa(
            TN, 3, 0,
            frozenset({(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1), (2, 0, 2), (2, 1, 2)}),
            frozenset({1}),
        )
        report = check_invariant(problems["token_passing_linear"], starts_with_token)
        assert not report.ok
        assert report.failed_condition == 3
        assert report.witness == TN.word("NT")

    def test_israeli_jalfon_final_invariant(self, problems):
        problem = problems["israeli_jalfon"]
        verdict, _ = run_prover(problem, "rs")
        assert isinstance(verdict, Safe)
        report = check_invariant(problem, verdict.invariant)
        assert report.ok

    def test_describe_names_the_condition(self, problems):
        report = check_invariant(problems["herman_linear"], sigma_star_dfa())
        assert "condition (2)" in report.describe(problems["herman_linear"])


class TestRunProver:
    def test_herman_linear(self, problems):
        verdict, stats = run_prover(problems["herman_linear"], "rs")
        assert isinstance(verdict, Safe)
        assert verdict.invariant.n_states == 2
        assert len(verdict.invariant.transitions) == 4
        assert stats.equivalence_queries == 1

    def test_israeli_jalfon(self, problems):
        verdict, stats = run_prover(problems["israeli_jalfon"], "rs")
        assert isinstance(verdict, Safe)
        assert verdict.invariant.n_states == 4
        assert len(verdict.invariant.transitions) == 8
        assert stats.equivalence_queries == 3

    def test_unsafe_demo(self, problems):
        verdict, stats = run_prover(problems["herman_unsafe_demo"], "rs")
        assert verdict == Unsafe(TN.word("T"))

    def test_theorem_bound_on_equivalence_queries(self, problems):
        # the reachable language of the herman models has a 2-state DFA, so
        # every deterministic learner finishes within 2 equivalence queries
        for name in ("herman_linear", "herman_ring"):
            for algorithm in ("rs", "lstar", "lstarc", "kv"):
                _, stats = run_prover(problems[name], algorithm)
                assert stats.equivalence_queries <= 2, (name, algorithm)

    def test_divergent_model_hits_iteration_limit(self):
        problem = parse_model(DIVERGENT_MODEL)
        verdict, stats = run_prover(
            problem, "rs", Limits(timeout_s=30.0, max_iterations=4)
        )
        assert isinstance(verdict, Unknown)
        assert verdict.reason == "iteration limit"
        assert stats.iterations == 4

    def test_timeout_already_expired(self, problems):
        verdict, _ = run_prover(
            problems["herman_linear"], "rs", Limits(timeout_s=1e-9)
        )
        assert isinstance(verdict, Unknown)
        assert verdict.reason == "timeout"

    def test_state_limit(self):
        problem = parse_model(DIVERGENT_MODEL)
        verdict, _ = run_prover(
            problem, "rs", Limits(timeout_s=30.0, max_states=2)
        )
        assert isinstance(verdict, Unknown)
        assert verdict.reason == "state limit"

    def test_all_learners_agree_on_bundled_verdicts(self, problems):
        from rmclearn.learner import ALGORITHMS

        for name, problem in problems.items():
            expected_unsafe = name == "herman_unsafe_demo"
            for algorithm in ALGORITHMS:
                verdict, _ = run_prover(problem, algorithm)
                assert isinstance(verdict, Unsafe if expected_unsafe else Safe), (
                    name, algorithm, verdict,
                )


class TestRmcProblem:
    def test_alphabet_mismatch_rejected(self, problems):
        other = Alphabet(("a", "b"))
        bad = Nfa(other, 1, 0, frozenset(), frozenset())
        p = problems["herman_linear"]
        with pytest.raises(ValueError):
            RmcProblem(p.init, p.trans, bad)

    def test_non_length_preserving_rejected(self, problems):
        from rmclearn.transducer import Transducer

        p = problems["herman_linear"]
        t = Transducer(TN, 1, 0, frozenset({(0, None, 0, 0)}), frozenset({0}))
        with pytest.raises(ValueError):
            RmcProblem(p.init, t, p.bad)
