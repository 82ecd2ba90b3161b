import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from periodica.words import (
    BINARY,
    TERNARY,
    Alphabet,
    FiniteWord,
    Necklace,
    canonicalize,
    complement,
    cyclic_factors,
    enumerate_necklaces,
    factors,
    is_factor,
    necklace_count,
    random_necklace,
)


def W(text, alphabet=BINARY):
    return FiniteWord.from_text(text, alphabet)


def N(text, alphabet=BINARY):
    return Necklace.from_text(text, alphabet)


binary_texts = st.text(alphabet="ab", min_size=1, max_size=12)


def brute_canonical(text):
    # Independent oracle: enumerate every rotation of every repetition root.
    n = len(text)
    roots = [text[:d] for d in range(1, n + 1) if n % d == 0 and text == text[:d] * (n // d)]
    root = roots[0]
    return min(root[i:] + root[:i] for i in range(len(root)))


class TestCanonicalize:
    def test_primitivity_reduction(self):
        assert canonicalize(W("abab")) == N("ab")

    def test_primitive_word_kept(self):
        # Oracle: all 3 rotations of "aab" checked by direct enumeration.
        assert brute_canonical("aab") == "aab"
        assert canonicalize(W("aab")) == N("aab")

    def test_single_letter(self):
        assert canonicalize(W("a")) == N("a")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            canonicalize(FiniteWord((), BINARY))

    @given(binary_texts)
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_oracle(self, text):
        assert canonicalize(W(text)).text == brute_canonical(text)

    @given(binary_texts, st.integers(min_value=0, max_value=11))
    @settings(max_examples=200, deadline=None)
    def test_rotation_invariant_and_idempotent(self, text, shift):
        shift %= len(text)
        rotated = text[shift:] + text[:shift]
        c = canonicalize(W(text))
        assert canonicalize(W(rotated)) == c
        assert canonicalize(c.period_word) == c


class TestNecklaceValidation:
    def test_rejects_non_primitive(self):
        with pytest.raises(ValueError):
            Necklace(W("abab"))

    def test_rejects_non_canonical_rotation(self):
        with pytest.raises(ValueError):
            Necklace(W("aba"))


class TestFactors:
    def test_aab_length_2(self):
        # Oracle: scan "aabaa" windows of length 2.
        assert {f.text for f in factors(N("aab"), 2)} == {"aa", "ab", "ba"}

    def test_aab_length_3(self):
        assert {f.text for f in factors(N("aab"), 3)} == {"aab", "aba", "baa"}

    def test_unary_long_factor(self):
        assert {f.text for f in factors(N("a"), 3)} == {"aaa"}

    def test_length_zero(self):
        assert {f.text for f in factors(N("ab"), 0)} == {""}

    @given(binary_texts, st.integers(min_value=0, max_value=8))
    @settings(max_examples=200, deadline=None)
    def test_counts_and_membership(self, text, k):
        w = canonicalize(W(text))
        fs = factors(w, k)
        assert len(fs) <= min(2**k, w.n) or k == 0
        if k >= w.n:
            assert len(fs) == w.n
        for f in fs:
            assert is_factor(w, f)

    @given(binary_texts, binary_texts)
    @settings(max_examples=200, deadline=None)
    def test_is_factor_agrees_with_enumeration(self, text, probe):
        w = canonicalize(W(text))
        assert is_factor(w, W(probe)) == (probe in {f.text for f in factors(w, len(probe))})


class TestIsFactor:
    def test_examples(self):
        assert not is_factor(N("aab"), W("bab"))
        assert is_factor(N("aab"), W("aabaab"))
        assert not is_factor(N("ab"), W("aa"))

    def test_alphabet_mismatch(self):
        with pytest.raises(ValueError):
            is_factor(N("ab"), W("abc", TERNARY))


class TestEnumeration:
    def test_period_1(self):
        assert [w.text for w in enumerate_necklaces(BINARY, 1)] == ["a", "b"]

    def test_period_3(self):
        # Oracle: all 8 length-3 binary words, filtered and canonicalized.
        expected = sorted(
            {
                brute_canonical("".join(t))
                for t in product("ab", repeat=3)
                if len({("".join(t))[i:] + ("".join(t))[:i] for i in range(3)}) == 3
            }
        )
        assert expected == ["aab", "abb"]
        assert [w.text for w in enumerate_necklaces(BINARY, 3)] == expected

    @pytest.mark.parametrize("n,count", [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6), (6, 9), (18, 14532)])
    def test_counts_match_formula(self, n, count):
        assert necklace_count(2, n) == count
        if n <= 10:
            assert sum(1 for _ in enumerate_necklaces(BINARY, n)) == count

    @pytest.mark.parametrize("n", range(1, 9))
    def test_exhaustive_against_brute(self, n):
        brute = {
            brute_canonical("".join(t))
            for t in product("ab", repeat=n)
        }
        brute = {w for w in brute if len(w) == n}
        generated = {w.text for w in enumerate_necklaces(BINARY, n)}
        assert generated == brute

    def test_ternary_counts(self):
        assert necklace_count(3, 1) == 3
        assert necklace_count(3, 4) == 18
        assert sum(1 for _ in enumerate_necklaces(TERNARY, 4)) == 18


class TestSampling:
    def test_uniform_support(self):
        rng = random.Random(7)
        seen = {random_necklace(rng, BINARY, 5).text for _ in range(200)}
        assert seen == {w.text for w in enumerate_necklaces(BINARY, 5)}


def test_complement_involution():
    assert complement("aabab") == "bbaba"
    assert complement(complement("aabab")) == "aabab"


def test_cyclic_factors_direct():
    assert cyclic_factors("aab", 2) == {"aa", "ab", "ba"}


def test_alphabet_bounds():
    with pytest.raises(ValueError):
        Alphabet(1)
    with pytest.raises(ValueError):
        W("abc")  # 'c' outside a binary alphabet
