"""Alphabets, finite words, and periodic bi-infinite words (necklaces).

A periodic bi-infinite word is represented by its primitive period in
canonical rotation (the lexicographically least one).  All symbols are
integers ``0..size-1``; the text rendering maps symbol ``i`` to the ASCII
letter ``chr(ord('a') + i)``, so binary words read as strings over
``{a, b}``.

Everything here is immutable and safe to share between threads.  The
module also hosts the low-level string engine (cyclic factor sets,
least-rotation, FKM necklace generation) used by the rest of the package.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Iterator

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Alphabet:
    """A finite alphabet of ``size`` symbols, rendered as 'a', 'b', ..."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ValueError(f"alphabet needs at least 2 symbols, got {self.size}")
        if self.size > len(_LETTERS):
            raise ValueError(f"alphabet size {self.size} exceeds text rendering range")

    @property
    def letters(self) -> str:
        return _LETTERS[: self.size]

    def check_text(self, text: str) -> None:
        if not set(text) <= _letter_sets(self.size):
            bad = sorted(set(text) - _letter_sets(self.size))
            raise ValueError(f"symbols {bad} outside alphabet of size {self.size}")


BINARY = Alphabet(2)
TERNARY = Alphabet(3)


@dataclass(frozen=True)
class FiniteWord:
    """A finite word; the empty word is allowed (it is the sole order-0 vertex)."""

    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        for s in self.symbols:
            if not 0 <= s < self.alphabet.size:
                raise ValueError(f"symbol {s} outside alphabet of size {self.alphabet.size}")

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet = BINARY) -> "FiniteWord":
        alphabet.check_text(text)
        return cls(tuple(ord(c) - ord("a") for c in text), alphabet)

    @property
    def text(self) -> str:
        return "".join(_LETTERS[s] for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Necklace:
    """A periodic bi-infinite word, stored as its canonical primitive period.

    Invariants: ``period_word`` is primitive (no shorter word generates the
    same bi-infinite word) and is the lexicographically least among its
    rotations.  ``n`` is the least period.
    """

    period_word: FiniteWord

    def __post_init__(self) -> None:
        text = self.period_word.text
        if not text:
            raise ValueError("a necklace needs a nonempty period")
        if _least_period(text) != len(text):
            raise ValueError(f"period {text!r} is not primitive")
        if _least_rotation(text) != text:
            raise ValueError(f"period {text!r} is not in canonical rotation")

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet = BINARY) -> "Necklace":
        return cls(FiniteWord.from_text(text, alphabet))

    @property
    def n(self) -> int:
        return len(self.period_word)

    @property
    def text(self) -> str:
        return self.period_word.text

    @property
    def alphabet(self) -> Alphabet:
        return self.period_word.alphabet

    def __str__(self) -> str:
        return self.text


# ---------------------------------------------------------------------------
# string engine


def _least_period(s: str) -> int:
    """Least period of the bi-infinite periodization of ``s`` (divides len(s))."""
    n = len(s)
    for p in range(1, n + 1):
        if n % p == 0 and s == s[:p] * (n // p):
            return p
    raise AssertionError("unreachable")


def _least_rotation(s: str) -> str:
    doubled = s + s
    return min(doubled[i : i + len(s)] for i in range(len(s)))


def cyclic_factors(period: str, length: int) -> set[str]:
    """Distinct factors of the given length of the periodization of ``period``."""
    if length == 0:
        return {""}
    n = len(period)
    reps = (n + length - 1 + n - 1) // n
    ext = (period * reps)[: n + length - 1]
    return {ext[i : i + length] for i in range(n)}


def cyclic_factor_sets(period: str, max_len: int) -> list[set[str]]:
    """All factor sets F_0..F_max of the periodization, as a list by length."""
    n = len(period)
    if max_len == 0:
        return [{""}]
    reps = (n + max_len - 1 + n - 1) // n
    ext = (period * reps)[: n + max_len - 1]
    sets: list[set[str]] = [{""}]
    for m in range(1, max_len + 1):
        sets.append({ext[i : i + m] for i in range(n)})
    return sets


def is_cyclic_factor(period: str, x: str) -> bool:
    """True iff ``x`` occurs in the bi-infinite periodization of ``period``."""
    if not x:
        return True
    n = len(period)
    reps = (n + len(x) - 1 + n - 1) // n
    return x in period * reps


# ---------------------------------------------------------------------------
# public operations


def canonicalize(word: FiniteWord) -> Necklace:
    """The necklace of the bi-infinite periodization of ``word``.

    Reduces to the primitive root, then rotates to the lexicographic minimum;
    idempotent and invariant under rotation of the input.
    """
    text = word.text
    if not text:
        raise ValueError("cannot canonicalize the empty word")
    root = text[: _least_period(text)]
    return Necklace(FiniteWord.from_text(_least_rotation(root), word.alphabet))


def factors(w: Necklace, k: int) -> set[FiniteWord]:
    """F_w restricted to length ``k``: all length-k subwords of the necklace."""
    if k < 0:
        raise ValueError("factor length must be nonnegative")
    return {FiniteWord.from_text(t, w.alphabet) for t in cyclic_factors(w.text, k)}


def is_factor(w: Necklace, x: FiniteWord) -> bool:
    """True iff ``x`` occurs as a subword of the bi-infinite word."""
    if x.alphabet.size > w.alphabet.size:
        raise ValueError("alphabet mismatch: word symbols exceed the necklace alphabet")
    return is_cyclic_factor(w.text, x.text)


def enumerate_necklaces(alphabet: Alphabet, n: int) -> Iterator[Necklace]:
    """All necklaces with least period exactly ``n``, in lexicographic order.

    Uses the Fredricksen-Kessler-Maiorana generation of canonical
    representatives, keeping only the aperiodic ones.  The count matches
    ``necklace_count`` (Moreau's formula), which the test suite uses as a
    self-check.
    """
    if n < 1:
        raise ValueError("period must be at least 1")
    for text in enumerate_necklace_strings(alphabet.size, n):
        yield Necklace(FiniteWord.from_text(text, alphabet))


def enumerate_necklace_strings(k: int, n: int) -> Iterator[str]:
    """FKM generation of primitive necklaces of length ``n`` over ``k`` letters."""
    if n == 1:
        for j in range(k):
            yield _LETTERS[j]
        return
    a = [0] * (n + 1)

    def gen(t: int, p: int) -> Iterator[str]:
        if t > n:
            if p == n:  # aperiodic representatives only
                yield "".join(_LETTERS[a[i]] for i in range(1, n + 1))
        else:
            a[t] = a[t - p]
            yield from gen(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                yield from gen(t + 1, t)

    yield from gen(1, 1)


def _mobius(m: int) -> int:
    result, d, rest = 1, 2, m
    while d * d <= rest:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                return 0
            result = -result
        d += 1
    if rest > 1:
        result = -result
    return result


def necklace_count(alphabet_size: int, n: int) -> int:
    """Number of primitive necklaces of period ``n`` (Moreau's formula)."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * alphabet_size ** (n // d)
    return total // n


def random_necklace(rng: random.Random, alphabet: Alphabet, n: int) -> Necklace:
    """Uniform sample from the necklaces of least period ``n``.

    Rejection sampling: a uniform primitive word maps to its necklace, and
    each necklace has exactly ``n`` primitive words, so the result is uniform.
    """
    letters = alphabet.letters
    while True:
        text = "".join(rng.choice(letters) for _ in range(n))
        if _least_period(text) == n:
            return Necklace(FiniteWord.from_text(_least_rotation(text), alphabet))


def complement(text: str) -> str:
    """Swap 'a' and 'b' in a binary word (the abelian symmetry of the search)."""
    return text.translate(str.maketrans("ab", "ba"))
