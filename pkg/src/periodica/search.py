"""Exhaustive and constructive experiments around the period bound.

verify_theorem sweeps every binary necklace up to a period cap and checks
fib(c) >= n for the reduced-restriction count c; micro_optimality_oracle
confirms by brute enumeration that no smaller system pins down a given
small word; extremal_word builds the words meeting the bound with equality
(periods 1, 2, 3, 5, 8, ...); multi_letter_survey runs the same census
over larger alphabets, where the bound is only observational.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from itertools import combinations, product
from multiprocessing import get_context
from typing import Optional

from .words import (
    Alphabet,
    BINARY,
    FiniteWord,
    Necklace,
    canonicalize,
    cyclic_factor_sets,
    enumerate_necklace_strings,
    necklace_count,
)
from .forbidden import minimal_absent_words, reduced_system
from .rauzy import evolve
from .drive import build_context, sequential_drive
from .bounds import ALPHA, check_bound, fib


class TheoremViolation(RuntimeError):
    """A word needed fewer restrictions than the bound allows: falsification."""


@dataclass(frozen=True)
class SurveyRow:
    alphabet_size: int
    n: int
    count: int
    min_c: int
    max_c: int
    witnesses: tuple[str, ...]  # words attaining min_c, canonical forms
    flagged: tuple[str, ...] = ()  # soft-bound exceptions (observational runs)

    def to_csv_line(self) -> str:
        return "{},{},{},{},{},{}".format(
            self.alphabet_size, self.n, self.count, self.min_c, self.max_c,
            " ".join(self.witnesses),
        )

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "alphabet": self.alphabet_size,
                "n": self.n,
                "count": self.count,
                "min_c": self.min_c,
                "max_c": self.max_c,
                "witnesses": list(self.witnesses),
                "flagged": list(self.flagged),
            }
        )


SURVEY_CSV_HEADER = "alphabet,n,count,min_c,max_c,witnesses"


def _scan_shard(task: tuple[int, int, int, int, bool]) -> tuple:
    """Worker: census one residue class of the period-n necklaces."""
    alphabet_size, n, shard, nshards, enforce = task
    alphabet = Alphabet(alphabet_size)
    count = 0
    min_c: Optional[int] = None
    max_c = 0
    witnesses: list[str] = []
    for idx, text in enumerate(enumerate_necklace_strings(alphabet_size, n)):
        if idx % nshards != shard:
            continue
        c = len(minimal_absent_words(text, alphabet))
        if enforce and fib(c) < n:
            raise TheoremViolation(
                f"{text!r} has period {n} but only {c} reduced restrictions "
                f"(fib({c}) = {fib(c)})"
            )
        count += 1
        if min_c is None or c < min_c:
            min_c, witnesses = c, [text]
        elif c == min_c:
            witnesses.append(text)
        max_c = max(max_c, c)
    return (n, count, min_c, max_c, witnesses)


def default_jobs() -> int:
    env = os.environ.get("PERIODICA_JOBS")
    if env:
        return max(1, int(env))
    return 1


def verify_theorem(
    n_max: int,
    alphabet_size: int = 2,
    jobs: int = 1,
    progress=None,
) -> list[SurveyRow]:
    """Census every necklace of least period <= n_max, enforcing the bound.

    For binary alphabets any word with fib(c) < n aborts the sweep with
    TheoremViolation; larger alphabets are reported without enforcement.
    Work is sharded over necklace residue classes, so the merged rows do not
    depend on the worker count.
    """
    if n_max < 1:
        raise ValueError("period cap must be at least 1")
    enforce = alphabet_size == 2
    jobs = max(1, jobs)
    tasks = []
    for n in range(1, n_max + 1):
        nshards = jobs if necklace_count(alphabet_size, n) >= 4 * jobs else 1
        tasks.extend((alphabet_size, n, shard, nshards, enforce) for shard in range(nshards))
    if jobs == 1:
        results = [_scan_shard(t) for t in tasks]
    else:
        with get_context("fork").Pool(jobs) as pool:
            results = pool.map(_scan_shard, tasks, chunksize=1)
    rows = []
    for n in range(1, n_max + 1):
        shards = [r for r in results if r[0] == n]
        count = sum(r[1] for r in shards)
        min_c = min(r[2] for r in shards if r[2] is not None)
        max_c = max(r[3] for r in shards)
        witnesses = sorted(w for r in shards if r[2] == min_c for w in r[4])
        if count != necklace_count(alphabet_size, n):
            raise RuntimeError(f"shard merge lost necklaces at n={n}")
        rows.append(SurveyRow(alphabet_size, n, count, min_c, max_c, tuple(witnesses)))
        if progress is not None:
            print(f"n={n}: {count} necklaces, min_c={min_c}", file=progress)
    return rows


# ---------------------------------------------------------------------------
# exhaustive micro-scale optimality oracle


def micro_optimality_oracle(w: Necklace, c_claim: int, budget: int = 10_000_000) -> bool:
    """True iff no system of fewer than ``c_claim`` restrictions defines ``w``.

    Blunt enumeration over all candidate systems drawn from the words of
    length <= n+1 that do not occur in ``w`` (a system containing an occurring
    word is not satisfied by ``w`` and so can never define it).  Each system
    is classified from first principles: build its allowed-window graph,
    prune to the bi-infinite core, and compare with the word's own cycle;
    a cycle the word does not follow would survive the pruning, so systems
    leaving either single-letter loop unblocked are skipped without building
    the graph.  Only sensible at desk scale; the budget guards the
    combinatorics.
    """
    if w.alphabet.size != 2:
        raise ValueError("oracle is binary-only")
    if w.n > 5:
        raise ValueError("oracle is for periods up to 5")
    n = w.n
    length = n + 1
    size = 1 << n
    full = (1 << (2 * size)) - 1  # all 2^(n+1) windows allowed
    factor_sets = cyclic_factor_sets(w.text, length)
    w_mask = 0
    for f in factor_sets[length]:
        w_mask |= 1 << int(f.translate(_BIN), 2)
    pool = []
    for m in range(1, length + 1):
        for t in product("ab", repeat=m):
            x = "".join(t)
            if x not in factor_sets[m]:
                pool.append(_blocked_mask(x, length))
    out_masks = [((1 << (2 * v)) | (1 << (2 * v + 1))) for v in range(size)]
    in_masks = [((1 << v) | (1 << (v + size))) for v in range(size)]
    unary_bits = [bit for bit in (1, 1 << (2 * size - 1)) if not w_mask & bit]
    total = sum(_n_choose_k(len(pool), k) for k in range(1, c_claim))
    if total > budget:
        raise ValueError(f"{total} candidate systems exceed the budget")

    def defining_exists(start: int, left: int, acc: int) -> bool:
        if left == 0:
            if any(not acc & bit for bit in unary_bits):
                return False
            return _pruned(full & ~acc, size, out_masks, in_masks) == w_mask
        return any(
            defining_exists(i + 1, left - 1, acc | pool[i])
            for i in range(start, len(pool) - left + 1)
        )

    return not any(defining_exists(0, k, 0) for k in range(1, c_claim))


_BIN = str.maketrans("ab", "01")


def _blocked_mask(x: str, length: int) -> int:
    """Bitmask of the length-(n+1) windows containing ``x``."""
    mask = 0
    m = len(x)
    for t in product("01", repeat=length - m):
        pad = "".join(t)
        core = x.translate(_BIN)
        for cut in range(length - m + 1):
            window = pad[:cut] + core + pad[cut:]
            mask |= 1 << int(window, 2)
    return mask


def _pruned(allowed: int, size: int, out_masks: list[int], in_masks: list[int]) -> int:
    while True:
        dead = 0
        for v in range(size):
            has_out = allowed & out_masks[v]
            has_in = allowed & in_masks[v]
            if (has_out == 0) != (has_in == 0):
                dead |= has_out | has_in
        if not dead:
            return allowed
        allowed &= ~dead


def _n_choose_k(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# ---------------------------------------------------------------------------
# extremal words


def _fibonacci_root(c: int) -> str:
    a, b = "ab", "a"  # roots for c = 2 and c = 1
    if c == 1:
        return b
    for _ in range(c - 2):
        a, b = a + b, a
    return a


def extremal_word(c: int) -> Necklace:
    """A binary necklace with period fib(c) needing exactly c restrictions.

    The candidate is the concatenation orbit a, ab, aba, abaab, ...; the
    verification (reduced-restriction count and tightness) is what makes the
    result authoritative, with an exhaustive fallback at small sizes if the
    candidate ever failed.
    """
    if c < 1:
        raise ValueError("restriction count must be positive")
    candidate = canonicalize(FiniteWord.from_text(_fibonacci_root(c), BINARY))
    report = check_bound(candidate)
    if report.c == c and report.tight:
        return candidate
    for text in enumerate_necklace_strings(2, fib(c)):  # pragma: no cover
        w = Necklace.from_text(text)
        if check_bound(w).c == c:
            return w
    raise RuntimeError(f"no word of period fib({c}) needs exactly {c} restrictions")


# ---------------------------------------------------------------------------
# larger alphabets


def multi_letter_survey(
    alphabet_size: int,
    n_max: int,
    check_agreement: bool = True,
    progress=None,
) -> list[SurveyRow]:
    """Census all necklaces over a k-letter alphabet, observationally.

    Each word's restriction count is computed three independent ways when
    ``check_agreement`` is set (directly, through graph evolution, and
    through the scheme drive) and any disagreement raises.  Rows flag the
    words whose period exceeds (2/alpha)^(k-1) * fib(c), the growth trend
    sketched for larger alphabets; exceptions are reported, not fatal.
    """
    if alphabet_size < 3:
        raise ValueError("use verify_theorem for binary alphabets")
    alphabet = Alphabet(alphabet_size)
    rows = []
    for n in range(1, n_max + 1):
        count = 0
        min_c: Optional[int] = None
        max_c = 0
        witnesses: list[str] = []
        flagged: list[str] = []
        for text in enumerate_necklace_strings(alphabet_size, n):
            w = Necklace.from_text(text, alphabet)
            c = len(reduced_system(w))
            if check_agreement:
                trace = evolve(w)
                totals = {c, trace.total_restrictions}
                if len(set(text)) >= 2:
                    totals.add(build_context(w).outcome.restrictions_total)
                if len(totals) != 1:
                    raise RuntimeError(
                        f"restriction counts disagree for {text!r}: {sorted(totals)}"
                    )
            count += 1
            if min_c is None or c < min_c:
                min_c, witnesses = c, [text]
            elif c == min_c:
                witnesses.append(text)
            max_c = max(max_c, c)
            if n > (2 / ALPHA) ** (alphabet_size - 1) * fib(c):
                flagged.append(text)
        rows.append(
            SurveyRow(alphabet_size, n, count, min_c, max_c, tuple(sorted(witnesses)), tuple(flagged))
        )
        if progress is not None:
            print(f"alphabet {alphabet_size}, n={n}: {count} necklaces", file=progress)
    return rows
