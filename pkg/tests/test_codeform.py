import itertools
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from scc import codeform


def recursive_levenshtein(a, b):
    """Exhaustive-recursion oracle, memoized but structurally independent."""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        sub = go(i - 1, j - 1) + (0 if a[i - 1] == b[j - 1] else 1)
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1, sub)

    return go(len(a), len(b))


class TestSbt:
    def test_deterministic(self):
        code = "function f(uint256 x) public returns (uint256) { return x + 1; }"
        assert codeform.to_sbt(code) == codeform.to_sbt(code)

    def test_whitespace_and_comments_invariant(self):
        a = "function f() public { return; }"
        b = "function f()  public {\n    // say something\n    return ;\n}"
        assert codeform.to_sbt(a).tokens == codeform.to_sbt(b).tokens

    def test_identifier_only_difference(self):
        a = codeform.to_sbt("function f() public {}").tokens
        b = codeform.to_sbt("function g() public {}").tokens
        assert len(a) == len(b)
        diffs = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
        assert diffs == [a.index("f")]

    def test_unparseable_falls_back(self):
        result = codeform.to_sbt("function ( { ]]]")
        assert result.degraded
        assert len(result.tokens) > 0

    def test_empty_input(self):
        result = codeform.to_sbt("   ")
        assert result.tokens == ()
        assert not result.degraded

    def test_parseable_nonempty(self):
        result = codeform.to_sbt("modifier onlyOwner() { require(msg.sender == owner); _; }")
        assert not result.degraded
        assert len(result.tokens) > 0


class TestLevenshtein:
    def test_self_zero(self):
        assert codeform.levenshtein(["a", "b", "c"], ["a", "b", "c"]) == 0

    def test_empty_vs_three(self):
        assert codeform.levenshtein([], ["x", "y", "z"]) == 3

    def test_single_substitution(self):
        assert codeform.levenshtein(["a", "b", "c"], ["a", "b", "d"]) == 1

    def test_exhaustive_small(self):
        alphabet = "abc"
        sequences = [
            list(seq)
            for length in range(5)
            for seq in itertools.product(alphabet, repeat=length)
        ]
        for a in sequences:
            for b in sequences:
                assert codeform.levenshtein(a, b) == recursive_levenshtein(a, b)

    @settings(max_examples=200)
    @given(
        st.lists(st.sampled_from("abcde"), max_size=12),
        st.lists(st.sampled_from("abcde"), max_size=12),
    )
    def test_bounds_and_symmetry(self, a, b):
        d = codeform.levenshtein(a, b)
        assert codeform.levenshtein(b, a) == d
        assert abs(len(a) - len(b)) <= d <= max(len(a), len(b), 0)

    @settings(max_examples=100)
    @given(
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
    )
    def test_triangle_inequality(self, a, b, c):
        assert codeform.levenshtein(a, c) <= codeform.levenshtein(a, b) + codeform.levenshtein(b, c)


class TestSyntacticSimilarity:
    def test_identical(self):
        code = "function f() public { return; }"
        assert codeform.syntactic_similarity(code, code) == 1.0

    def test_worked_five_sixths(self):
        assert codeform.sequence_similarity(["a", "b", "c"], ["a", "b", "d"]) == pytest.approx(5 / 6)

    def test_worked_one_third(self):
        # disjoint sequences of lengths 2 and 4: lev = 4
        assert codeform.sequence_similarity(["x", "y"], ["a", "b", "c", "d"]) == pytest.approx(1 / 3)

    def test_both_empty(self):
        assert codeform.sequence_similarity([], []) == 1.0

    def test_one_empty(self):
        assert codeform.sequence_similarity([], ["a"]) == 0.0

    def test_symmetric(self):
        a = "function f(uint x) public { return; }"
        b = "function g() internal { x = 1; }"
        assert codeform.syntactic_similarity(a, b) == codeform.syntactic_similarity(b, a)


class TestLexical:
    def test_dedup(self):
        assert codeform.lexical_set("a a b") == {"a", "b"}

    def test_empty(self):
        assert codeform.lexical_set("") == frozenset()

    def test_subtoken_split(self):
        assert codeform.lexical_set("transferFrom transfer") == {"transfer", "from"}

    def test_identical_sets(self):
        assert codeform.lexical_similarity("a b", "b a a") == 1.0

    def test_one_third_overlap(self):
        assert codeform.lexical_similarity("a b", "b c") == pytest.approx(1 / 3)

    def test_disjoint(self):
        assert codeform.lexical_similarity("a b", "c d") == 0.0

    def test_both_empty(self):
        assert codeform.lexical_similarity("", "") == 1.0

    def test_symmetric(self):
        assert codeform.lexical_similarity("a b c", "b d") == codeform.lexical_similarity(
            "b d", "a b c"
        )


class TestMixedScore:
    def test_identical(self):
        code = "function f() public {}"
        assert codeform.mixed_score(code, code) == 1.0

    def test_weighted_sum(self):
        # lexical=0.5, syntactic=0.9, lambda=0.7 -> 0.62
        assert 0.7 * 0.5 + 0.3 * 0.9 == pytest.approx(0.62)

    def test_lambda_zero_is_syntactic(self):
        a = "function f() public { return; }"
        b = "function g() internal {}"
        assert codeform.mixed_score(a, b, lam=0.0) == codeform.syntactic_similarity(a, b)

    def test_lambda_one_is_lexical(self):
        a = "function f() public { return; }"
        b = "function g() internal {}"
        assert codeform.mixed_score(a, b, lam=1.0) == codeform.lexical_similarity(a, b)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            codeform.mixed_score("a", "b", lam=1.5)

    @given(
        st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    )
    def test_monotone_in_components(self, lex1, lex2, syn1, syn2, lam):
        lo = lam * min(lex1, lex2) + (1 - lam) * min(syn1, syn2)
        hi = lam * max(lex1, lex2) + (1 - lam) * max(syn1, syn2)
        assert lo <= hi + 1e-12
