import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pair_regex_matches, regex_matches, words_of_length, words_upto
from rmclearn.automata import Alphabet, accepts, determinize, minimize
from rmclearn.regex import (
    Concat,
    Empty,
    Epsilon,
    Pair,
    Ref,
    RegexCompileError,
    Star,
    Sym,
    Union,
    compile_pair_regex,
    compile_regex,
    resolve,
)

AB = Alphabet(("a", "b"))
ABC = Alphabet(("a", "b", "c"))
TN = Alphabet(("T", "N"))


def leaves(symbols):
    return st.sampled_from([Epsilon(), Empty()] + [Sym(s) for s in symbols])


def regexes(symbols):
    return st.recursive(
        leaves(symbols),
        lambda kids: st.one_of(
            st.builds(lambda x, y: Concat((x, y)), kids, kids),
            st.builds(lambda x, y: Union((x, y)), kids, kids),
            st.builds(Star, kids),
        ),
        max_leaves=8,
    )


class TestCompile:
    def test_empty_has_empty_language(self):
        m = compile_regex(Empty(), AB)
        assert all(not accepts(m, w) for w in words_upto(2, 4))

    def test_star_of_symbol(self):
        # N* over {T, N}: empty word and N-runs, never a T
        m = compile_regex(Star(Sym("N")), TN)
        assert accepts(m, ())
        assert accepts(m, TN.word("N"))
        assert accepts(m, TN.word("NN"))
        assert not accepts(m, TN.word("T"))

    def test_odd_token_expression(self):
        token_group = Concat(
            (Star(Sym("N")), Sym("T"), Star(Sym("N")), Sym("T"), Star(Sym("N")))
        )
        odd = Concat((Star(Sym("N")), Sym("T"), Star(token_group), Star(Sym("N"))))
        m = compile_regex(odd, TN)
        for w in words_upto(2, 6):
            tokens = sum(1 for c in w if c == TN.index("T"))
            assert accepts(m, w) == (tokens % 2 == 1)

    def test_unknown_symbol(self):
        with pytest.raises(RegexCompileError):
            compile_regex(Sym("z"), AB)

    def test_unresolved_ref(self):
        with pytest.raises(RegexCompileError):
            compile_regex(Ref("X"), AB)

    def test_pair_leaf_rejected_in_word_expression(self):
        with pytest.raises(RegexCompileError):
            compile_regex(Pair("a", "b"), AB)

    @given(regexes(("a", "b")))
    @settings(max_examples=120, deadline=None)
    def test_agrees_with_direct_matching(self, r):
        m = compile_regex(r, AB)
        for w in words_upto(2, 6):
            assert accepts(m, w) == regex_matches(r, w, AB)

    @given(regexes(("a", "b", "c")))
    @settings(max_examples=60, deadline=None)
    def test_pipeline_agrees_with_direct_matching(self, r):
        d = minimize(determinize(compile_regex(r, ABC)))
        for w in words_upto(3, 5):
            assert accepts(d, w) == regex_matches(r, w, ABC)


class TestResolve:
    def test_substitutes(self):
        r = resolve(Concat((Ref("X"), Sym("b"))), {"X": Star(Sym("a"))})
        assert r == Concat((Star(Sym("a")), Sym("b")))

    def test_undefined(self):
        with pytest.raises(RegexCompileError):
            resolve(Ref("X"), {})

    def test_cycle(self):
        with pytest.raises(RegexCompileError):
            resolve(Ref("X"), {"X": Concat((Ref("Y"),)), "Y": Ref("X")})


class TestCompilePairs:
    def test_single_pair_concat(self):
        # T/N N/T relates exactly TN -> NT
        r = Concat((Pair("T", "N"), Pair("N", "T")))
        t = compile_pair_regex(r, TN)
        for xs in words_upto(2, 3):
            for ys in words_of_length(2, len(xs)):
                related = pair_regex_matches(r, xs, ys, TN)
                assert related == (xs == TN.word("TN") and ys == TN.word("NT"))

    def test_bare_symbol_rejected(self):
        with pytest.raises(RegexCompileError):
            compile_pair_regex(Concat((Pair("T", "T"), Sym("N"))), TN)

    def test_epsilon_allowed(self):
        t = compile_pair_regex(Union((Epsilon(), Pair("T", "T"))), TN)
        assert t.n_states >= 1

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_direct_matching(self, data):
        pair_leaves = st.sampled_from(
            [Epsilon()] + [Pair(x, y) for x in ("a", "b") for y in ("a", "b")]
        )
        r = data.draw(
            st.recursive(
                pair_leaves,
                lambda kids: st.one_of(
                    st.builds(lambda x, y: Concat((x, y)), kids, kids),
                    st.builds(lambda x, y: Union((x, y)), kids, kids),
                    st.builds(Star, kids),
                ),
                max_leaves=6,
            )
        )
        t = compile_pair_regex(r, AB)
        from rmclearn.transducer import post_image
        from rmclearn.automata import word_nfa

        for xs in words_upto(2, 3):
            image = post_image(t, word_nfa(AB, xs))
            for ys in words_of_length(2, len(xs)):
                assert accepts(image, ys) == pair_regex_matches(r, xs, ys, AB)
