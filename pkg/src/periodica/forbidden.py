"""Forbidden-word systems and the words they pin down.

A system of restrictions is a finite set of finite words; a bi-infinite word
satisfies it when none of the restrictions occurs as a subword.  A system
*defines* a word when exactly one bi-infinite word satisfies it.  Any finite
defining system can be reduced, and each periodic word has a unique reduced
system: the words that are absent from it while both their maximal proper
prefix and suffix are present (its minimal absent words).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .words import (
    Alphabet,
    BINARY,
    FiniteWord,
    Necklace,
    canonicalize,
    cyclic_factor_sets,
    is_cyclic_factor,
)


class DoesNotDefineError(ValueError):
    """Raised when a system fails the 'defines this word' precondition."""


@dataclass(frozen=True)
class ForbiddenSystem:
    """A deduplicated set of nonempty restrictions over a fixed alphabet."""

    restrictions: frozenset[str]
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        for r in self.restrictions:
            if not r:
                raise ValueError("the empty word cannot be a restriction")
            self.alphabet.check_text(r)

    @classmethod
    def from_words(cls, words: Iterable[FiniteWord | str], alphabet: Alphabet = BINARY) -> "ForbiddenSystem":
        texts = frozenset(w if isinstance(w, str) else w.text for w in words)
        return cls(texts, alphabet)

    @property
    def max_len(self) -> int:
        return max((len(r) for r in self.restrictions), default=0)

    def sorted_restrictions(self) -> list[str]:
        return sorted(self.restrictions, key=lambda r: (len(r), r))

    def to_text(self) -> str:
        return "\n".join(self.sorted_restrictions())

    def to_json(self) -> str:
        return json.dumps({"alphabet": self.alphabet.size, "restrictions": self.sorted_restrictions()})

    @classmethod
    def from_json(cls, payload: str) -> "ForbiddenSystem":
        data = json.loads(payload)
        return cls(frozenset(data["restrictions"]), Alphabet(data["alphabet"]))

    def __len__(self) -> int:
        return len(self.restrictions)

    def __iter__(self):
        return iter(self.sorted_restrictions())


class Verdict(Enum):
    EMPTY = "empty"
    UNIQUE = "unique"
    MULTIPLE = "multiple"


@dataclass(frozen=True)
class DefinednessVerdict:
    kind: Verdict
    word: Optional[Necklace] = None

    def is_unique(self, w: Optional[Necklace] = None) -> bool:
        if self.kind is not Verdict.UNIQUE:
            return False
        return w is None or self.word == w


def satisfies(w: Necklace, system: ForbiddenSystem) -> bool:
    """True iff no restriction occurs in the bi-infinite word."""
    if system.alphabet.size > w.alphabet.size:
        raise ValueError("alphabet mismatch between system and word")
    period = w.text
    return not any(is_cyclic_factor(period, r) for r in system.restrictions)


def classify(system: ForbiddenSystem) -> DefinednessVerdict:
    """Decide whether a finite system admits no, one, or several words.

    Build the graph whose vertices are all words of length k (k+1 being the
    longest restriction) and whose edges are the length-(k+1) words containing
    no restriction, then iteratively drop vertices that cannot be crossed by a
    bi-infinite path (in- or out-degree zero).  The satisfying words are
    exactly the bi-infinite paths of what survives: nothing (EMPTY), a single
    simple cycle (UNIQUE, necessarily periodic), or a graph with a branch or a
    second cycle (MULTIPLE).
    """
    base = system.alphabet.size
    k = max(system.max_len - 1, 0)
    by_len: dict[int, set[int]] = {}
    for r in system.restrictions:
        by_len.setdefault(len(r), set()).add(_encode(r))
    allowed = _allowed_edges(base, k, by_len)
    allowed = _prune(base, k, allowed)
    if not allowed:
        return DefinednessVerdict(Verdict.EMPTY)
    cycle = _single_cycle_word(base, k, allowed)
    if cycle is None:
        return DefinednessVerdict(Verdict.MULTIPLE)
    word = canonicalize(FiniteWord.from_text(cycle, system.alphabet))
    return DefinednessVerdict(Verdict.UNIQUE, word)


def reduce(system: ForbiddenSystem, w: Necklace) -> ForbiddenSystem:
    """Shrink a system defining ``w`` to the unique reduced one.

    Each restriction that has a proper factor absent from ``w`` is replaced by
    that factor (the shortest one, leftmost on ties); such a factor has all of
    its own proper factors present, so a single replacement already reaches the
    fixed point.  Deduplication can only shrink the set, so the result never
    has more elements than the input.

    Raises DoesNotDefineError if ``w`` does not satisfy the system or if the
    reduction does not reach the reduced system of ``w`` (which happens
    whenever the input fails to define ``w`` by missing some obligatory
    restriction).  Callers are expected to pass defining systems; a
    non-defining input that still covers every obligatory restriction is not
    detected here (full definedness checking is ``classify``'s job).
    """
    factor_sets = cyclic_factor_sets(w.text, max(system.max_len, w.n + 1))
    reduced: set[str] = set()
    for r in system.restrictions:
        if r in factor_sets[len(r)]:
            raise DoesNotDefineError(f"{w.text!r} does not satisfy restriction set (contains {r!r})")
        reduced.add(_shortest_absent_factor(r, factor_sets))
    target = reduced_system(w)
    if reduced != target.restrictions:
        raise DoesNotDefineError(
            f"system does not define {w.text!r}: reduction reached {sorted(reduced)} "
            f"instead of {target.sorted_restrictions()}"
        )
    return ForbiddenSystem(frozenset(reduced), system.alphabet)


def reduced_system(w: Necklace) -> ForbiddenSystem:
    """The unique reduced system defining ``w``: its minimal absent words.

    A word x is collected when x is absent from ``w`` while both x minus its
    last letter and x minus its first letter are present.  No such word is
    longer than n+1, because order-n factors extend uniquely around the
    n-cycle.
    """
    return ForbiddenSystem(frozenset(minimal_absent_words(w.text, w.alphabet)), w.alphabet)


def minimal_absent_words(period: str, alphabet: Alphabet) -> set[str]:
    n = len(period)
    sets = cyclic_factor_sets(period, n + 1)
    letters = alphabet.letters
    out = {c for c in letters if c not in sets[1]}
    for m in range(2, n + 2):
        full, left, mid = sets[m], sets[m - 1], sets[m - 2]
        for u in mid:
            for a in letters:
                if a + u not in left:
                    continue
                au = a + u
                for b in letters:
                    if u + b in left and au + b not in full:
                        out.add(au + b)
    return out


def _shortest_absent_factor(r: str, factor_sets: list[set[str]]) -> str:
    # Shortest proper factor absent from the word, leftmost on ties; if none,
    # the restriction is already minimal.  The found factor is itself a
    # minimal absent word (its shorter factors are all present).
    for m in range(1, len(r)):
        row = factor_sets[m]
        for i in range(len(r) - m + 1):
            window = r[i : i + m]
            if window not in row:
                return window
    return r


# ---------------------------------------------------------------------------
# integer graph engine (shared with the exhaustive micro oracle)


def _encode(text: str) -> int:
    value = 0
    for ch in text:
        value = value * 26 + (ord(ch) - ord("a"))
    return value


def _allowed_edges(base: int, k: int, forbidden_by_len: dict[int, set[int]]) -> set[int]:
    """Length-(k+1) words, base-encoded, containing no forbidden word."""
    # Words of length m are integers in base 26 to keep encodings
    # length-independent only within a fixed length; windows are re-encoded.
    edges = set()
    length = k + 1
    for e in range(base ** length):
        digits = _digits(e, base, length)
        if not _contains_forbidden(digits, forbidden_by_len):
            edges.add(e)
    return edges


def _digits(value: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(value % base)
        value //= base
    return tuple(reversed(out))


def _contains_forbidden(digits: tuple[int, ...], forbidden_by_len: dict[int, set[int]]) -> bool:
    m = len(digits)
    for length, bucket in forbidden_by_len.items():
        if length > m:
            continue
        for i in range(m - length + 1):
            window = 0
            for d in digits[i : i + length]:
                window = window * 26 + d
            if window in bucket:
                return True
    return False


def _prune(base: int, k: int, edges: set[int]) -> set[int]:
    """Drop edges not on any bi-infinite path (degree-zero vertex elimination)."""
    size = base ** k
    while True:
        outdeg = [0] * size
        indeg = [0] * size
        for e in edges:
            outdeg[e // base] += 1
            indeg[e % size] += 1
        dead = {v for v in range(size) if (outdeg[v] == 0) != (indeg[v] == 0)}
        # Vertices untouched by any edge have both degrees zero and are inert.
        if not dead:
            return edges
        edges = {e for e in edges if e // base not in dead and e % size not in dead}


def _single_cycle_word(base: int, k: int, edges: set[int]) -> Optional[str]:
    """If the surviving edges form one simple cycle, spell its period."""
    size = base ** k
    succ: dict[int, int] = {}
    for e in edges:
        v = e // base
        if v in succ:
            return None  # out-degree 2: a branch, hence several words
        succ[v] = e
    indeg: dict[int, int] = {}
    for e in edges:
        indeg[e % size] = indeg.get(e % size, 0) + 1
    if any(c > 1 for c in indeg.values()):
        return None
    start = next(iter(succ))
    spelled = []
    v = start
    while True:
        e = succ[v]
        spelled.append(_LETTER_TABLE[e % base])
        v = e % size
        if v == start:
            break
        if len(spelled) > len(edges):
            return None
    if len(spelled) != len(edges):
        return None  # several disjoint cycles
    return "".join(spelled)


_LETTER_TABLE = "abcdefghijklmnopqrstuvwxyz"
