import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from periodica.forbidden import (
    DoesNotDefineError,
    ForbiddenSystem,
    Verdict,
    classify,
    minimal_absent_words,
    reduce,
    reduced_system,
    satisfies,
)
from periodica.words import BINARY, TERNARY, Necklace, enumerate_necklaces, is_cyclic_factor


def N(text, alphabet=BINARY):
    return Necklace.from_text(text, alphabet)


def S(*texts, alphabet=BINARY):
    return ForbiddenSystem(frozenset(texts), alphabet)


def brute_satisfier_necklaces(system, n_max):
    """Oracle: every necklace of period <= n_max satisfying the system."""
    out = []
    for n in range(1, n_max + 1):
        for w in enumerate_necklaces(system.alphabet, n):
            if satisfies(w, system):
                out.append(w)
    return out


class TestSatisfies:
    def test_examples(self):
        assert satisfies(N("aab"), S("bb", "aaa", "bab"))
        assert not satisfies(N("aab"), S("aab"))
        assert satisfies(N("a"), S("b"))

    def test_alphabet_mismatch(self):
        with pytest.raises(ValueError):
            satisfies(N("ab"), S("abc", alphabet=TERNARY))


class TestClassify:
    def test_unique_aab(self):
        verdict = classify(S("bb", "aaa", "bab"))
        assert verdict.kind is Verdict.UNIQUE
        assert verdict.word == N("aab")

    def test_empty_system_is_multiple(self):
        assert classify(S()).kind is Verdict.MULTIPLE

    def test_all_letters_forbidden(self):
        assert classify(S("a", "b")).kind is Verdict.EMPTY

    def test_unique_ab(self):
        verdict = classify(S("aa", "bb"))
        assert verdict.is_unique(N("ab"))

    def test_one_letter_forbidden(self):
        assert classify(S("a")).is_unique(N("b"))

    def test_ternary_unique(self):
        verdict = classify(S("aa", "bb", "cc", "ba", "cb", "ac", alphabet=TERNARY))
        assert verdict.is_unique(N("abc", TERNARY))

    @given(
        st.sets(
            st.text(alphabet="ab", min_size=1, max_size=4),
            min_size=0,
            max_size=6,
        )
    )
    @settings(max_examples=150, deadline=None)
    def test_against_satisfier_enumeration(self, texts):
        system = ForbiddenSystem(frozenset(texts), BINARY)
        verdict = classify(system)
        # Any satisfying word has one of bounded period, so period <= 2^k words
        # (k = longest restriction length - 1) decide the verdict.
        horizon = 2 ** max(system.max_len - 1, 0) + 1
        sats = brute_satisfier_necklaces(system, min(horizon, 10))
        if verdict.kind is Verdict.EMPTY:
            assert not sats
        elif verdict.kind is Verdict.UNIQUE:
            assert sats == [verdict.word]
        else:
            # MULTIPLE admits >= 2 periodic words within the horizon.
            assert len(sats) >= 2


class TestReducedSystem:
    def test_unary(self):
        assert reduced_system(N("a")).sorted_restrictions() == ["b"]

    def test_ab(self):
        assert reduced_system(N("ab")).sorted_restrictions() == ["aa", "bb"]

    def test_aab(self):
        assert reduced_system(N("aab")).sorted_restrictions() == ["bb", "aaa", "bab"]

    def test_abaab(self):
        assert reduced_system(N("aabab")).sorted_restrictions() == ["bb", "aaa", "aabaa", "babab"]

    def test_ternary_abc(self):
        got = reduced_system(N("abc", TERNARY)).sorted_restrictions()
        assert got == sorted(["aa", "bb", "cc", "ba", "cb", "ac"], key=lambda r: (len(r), r))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_brute_minimal_absent_oracle(self, n):
        # Oracle: check every word of each length <= n+1 directly.
        for w in enumerate_necklaces(BINARY, n):
            expected = set()
            for m in range(1, w.n + 2):
                for t in product("ab", repeat=m):
                    x = "".join(t)
                    if (
                        not is_cyclic_factor(w.text, x)
                        and is_cyclic_factor(w.text, x[:-1])
                        and is_cyclic_factor(w.text, x[1:])
                    ):
                        expected.add(x)
            assert reduced_system(w).restrictions == frozenset(expected)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_defines_its_word(self, n):
        for w in enumerate_necklaces(BINARY, n):
            assert classify(reduced_system(w)).is_unique(w)

    def test_no_restriction_longer_than_n_plus_1(self):
        for n in range(1, 10):
            for w in enumerate_necklaces(BINARY, n):
                assert reduced_system(w).max_len <= w.n + 1


class TestReduce:
    def test_replaces_inflated_restriction(self):
        got = reduce(S("bbb", "aaa", "bab"), N("aab"))
        assert got.sorted_restrictions() == ["bb", "aaa", "bab"]

    def test_fixed_point(self):
        system = S("bb", "aaa", "bab")
        assert reduce(system, N("aab")) == system

    def test_error_when_not_defining(self):
        # {bb, abba} reduces to {bb} alone, which admits many words.
        with pytest.raises(DoesNotDefineError):
            reduce(S("bb", "abba"), N("aab"))

    def test_error_when_word_violates(self):
        with pytest.raises(DoesNotDefineError):
            reduce(S("aab"), N("aab"))

    def test_completeness_of_length_capped_absent_words(self):
        # All absent words of length exactly n+1 already define the word,
        # and reduce recovers the reduced system from them.
        for w in enumerate_necklaces(BINARY, 4):
            absent = {
                "".join(t)
                for t in product("ab", repeat=w.n + 1)
                if not is_cyclic_factor(w.text, "".join(t))
            }
            system = ForbiddenSystem(frozenset(absent), BINARY)
            assert classify(system).is_unique(w)
            assert reduce(system, w) == reduced_system(w)

    def test_never_grows(self):
        rng = random.Random(11)
        for _ in range(30):
            n = rng.randint(1, 8)
            w = next(iter(enumerate_necklaces(BINARY, n)))
            base = reduced_system(w)
            extras = set()
            for r in base.sorted_restrictions():
                for _ in range(rng.randint(0, 2)):
                    pad = "".join(rng.choice("ab") for _ in range(rng.randint(0, 2)))
                    if not is_cyclic_factor(w.text, pad + r):
                        extras.add(pad + r)
            system = ForbiddenSystem(base.restrictions | frozenset(extras), BINARY)
            got = reduce(system, w)
            assert got == base
            assert len(got) <= len(system)


class TestUniquenessProperty:
    @given(st.integers(min_value=1, max_value=8), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_randomized_supersets_reduce_identically(self, n, rnd):
        words = list(enumerate_necklaces(BINARY, n))
        w = words[rnd.randrange(len(words))]
        target = reduced_system(w)
        # Superset of all absent words up to length n+1, plus random longer junk.
        absent = {
            "".join(t)
            for m in range(1, w.n + 2)
            for t in product("ab", repeat=m)
            if not is_cyclic_factor(w.text, "".join(t))
        }
        for _ in range(rnd.randrange(0, 6)):
            m = rnd.randrange(w.n + 2, w.n + 5)
            x = "".join(rnd.choice("ab") for _ in range(m))
            if not is_cyclic_factor(w.text, x):
                absent.add(x)
        system = ForbiddenSystem(frozenset(absent), BINARY)
        assert reduce(system, w) == target


def test_system_text_and_json_roundtrip():
    system = S("bb", "aaa", "bab")
    assert system.to_text() == "bb\naaa\nbab"
    assert ForbiddenSystem.from_json(system.to_json()) == system


def test_rejects_empty_restriction():
    with pytest.raises(ValueError):
        S("")


def test_minimal_absent_words_direct():
    assert minimal_absent_words("ab", BINARY) == {"aa", "bb"}
