"""Fibonacci bound machinery: the number sequence itself, the period bound
check, the golden-ratio deviation and growth tables, and the strengthened
one-fork size estimate tracker.

Indexing convention throughout: fib(1) = 1, fib(2) = 2, fib(3) = 3,
fib(4) = 5, so fib(c) is the largest least period a binary word definable
by c restrictions can have.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .words import Necklace
from .forbidden import reduced_system
from .scheme import SchemeState

ALPHA = (1 + math.sqrt(5)) / 2

_fib_cache = [1, 1, 2]  # offset so that _fib_cache[c] is fib(c)


def fib(c: int) -> int:
    """The c-th number of the sequence 1, 2, 3, 5, 8, ..."""
    if c < 1:
        raise ValueError("index must be positive")
    while len(_fib_cache) <= c:
        _fib_cache.append(_fib_cache[-1] + _fib_cache[-2])
    return _fib_cache[c]


def fib_table(m: int) -> list[int]:
    return [fib(c) for c in range(1, m + 1)]


def fib_closed_form(c: int) -> float:
    """(alpha^(c+1) - (-alpha)^(-c-1)) / sqrt(5); agrees with fib to 1e-9."""
    return (ALPHA ** (c + 1) - (-ALPHA) ** (-c - 1)) / math.sqrt(5)


@dataclass(frozen=True)
class BoundReport:
    word_text: str
    n: int
    c: int
    phi_c: int
    passed: bool
    tight: bool

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "word": self.word_text,
                "n": self.n,
                "c": self.c,
                "phi_c": self.phi_c,
                "pass": self.passed,
                "tight": self.tight,
            }
        )


def check_bound(w: Necklace) -> BoundReport:
    """Count the word's reduced restrictions and compare fib(c) against n."""
    c = len(reduced_system(w))
    phi = fib(c)
    return BoundReport(w.text, w.n, c, phi, phi >= w.n, phi == w.n)


# ---------------------------------------------------------------------------
# tables


def deviation_table(max_u: int = 8, max_v: int = 8) -> list[list[float]]:
    """Entries fib(u) / (fib(v) * alpha^(u-v)), 1-indexed in both axes.

    Measures how far the sequence strays from a pure geometric progression
    with ratio alpha; only the lower triangle u >= v matters for the size
    estimates.
    """
    return [
        [fib(u) / (fib(v) * ALPHA ** (u - v)) for v in range(1, max_v + 1)]
        for u in range(1, max_u + 1)
    ]


def deviation_extremes(max_u: int = 8, max_v: int = 8) -> tuple[float, float]:
    """Smallest and second-smallest distinct value of the lower triangle."""
    table = deviation_table(max_u, max_v)
    values = sorted(table[u - 1][v - 1] for u in range(1, max_u + 1) for v in range(1, u + 1))
    smallest = values[0]
    second = next(v for v in values if v > smallest + 1e-12)
    return smallest, second


#: Lower-triangle minimum of the deviation table and the runner-up, the two
#: constants the size estimates lean on.
DEVIATION_MIN = 0.9270509831
DEVIATION_SECOND = 0.9442719100

GrowthEntry = tuple[float, int, int]  # (value, c + 1, k)


def growth_table(rows: int = 10, cols: int = 6, multiplier: float = 1.0) -> list[list[GrowthEntry]]:
    """Entries alpha^c * (alpha/2)^k as (value, c+1, k) triples.

    Row r (1-based) fixes c = r; column j holds k = c + 2 - j, so each row
    slides the fork-count change k downward while the step count c grows.
    The multiplier 1 gives the raw table; DEVIATION_SECOND gives the safety-
    discounted one.
    """
    out = []
    for r in range(1, rows + 1):
        c = r
        row = []
        for j in range(1, cols + 1):
            k = c + 2 - j
            row.append((multiplier * ALPHA**c * (ALPHA / 2) ** k, c + 1, k))
        out.append(row)
    return out


def format_growth_table(table: list[list[GrowthEntry]]) -> str:
    cells = [
        ["({:.6g}, {}, {})".format(*entry) for entry in row]
        for row in table
    ]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.ljust(width) for c in row) for row in cells)


def format_deviation_table(table: list[list[float]]) -> str:
    return "\n".join(" ".join(f"{x:.7f}" for x in row) for row in table)


def growth_table_csv(table: list[list[GrowthEntry]]) -> str:
    lines = ["row,col,value,c_plus_1,k"]
    for i, row in enumerate(table, 1):
        for j, (value, c1, k) in enumerate(row, 1):
            lines.append(f"{i},{j},{value!r},{c1},{k}")
    return "\n".join(lines)


def deviation_table_csv(table: list[list[float]]) -> str:
    lines = ["u,v,value"]
    for u, row in enumerate(table, 1):
        for v, value in enumerate(row, 1):
            lines.append(f"{u},{v},{value!r}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# strengthened one-fork estimate


@dataclass(frozen=True)
class OneForkState:
    """A single-pair state indexed by accounted meetings."""

    k: int
    x: int
    y: int
    z: int

    @property
    def size(self) -> int:
        return self.x + self.y + self.z

    @property
    def next_size(self) -> int:
        return 2 * self.x + self.y + self.z


@dataclass
class EstimateReport:
    one_fork_checked: int
    multi_fork_seen: int
    multi_fork_flagged: list[tuple[int, int, int]]  # (accounted, size, in_forks)
    terminal_ok: bool


class EstimateViolation(RuntimeError):
    """A state the bound claims unconditionally broke it."""


def strengthened_estimate_check(states: Sequence[SchemeState]) -> EstimateReport:
    """Check the size estimate along a drive's state trail.

    Single-pair states must satisfy x+y+z <= fib(k) and 2x+y+z <= fib(k+1)
    with k the accounted-meeting index, and the terminal cycle must satisfy
    n <= fib(c); both are asserted and raise on violation.  Multi-fork states
    carry the estimate only along specially chosen schedules, so here they
    are merely reported when they exceed fib(k+d+[d>1]-1) / 2^(d+[d>1]-1).
    """
    checked = 0
    multi = 0
    flagged: list[tuple[int, int, int]] = []
    terminal_ok = True
    for state in states:
        if state.one_fork is not None:
            x, y, z = state.one_fork
            k = state.accounted
            if x + y + z > fib(k) or 2 * x + y + z > fib(k + 1):
                raise EstimateViolation(
                    f"one-fork state (x={x}, y={y}, z={z}) breaks the bound at k={k}"
                )
            checked += 1
        elif state.in_forks > 1:
            multi += 1
            d = state.in_forks
            bound = fib(state.accounted + d) / 2**d  # with the d>1 surcharge
            if state.size > bound:
                flagged.append((state.accounted, state.size, d))
        elif state.in_forks == 0:
            # Terminal cycle: its length against fib of the accounted index.
            if state.size > fib(state.accounted):
                raise EstimateViolation(
                    f"terminal cycle of length {state.size} exceeds fib({state.accounted})"
                )
    return EstimateReport(checked, multi, flagged, terminal_ok)


def one_fork_closure(k_max: int = 12) -> int:
    """Exhaustively confirm both single-pair updates preserve the bounds.

    For every integer state with x+y+z <= fib(k) and 2x+y+z <= fib(k+1),
    k <= k_max, the two successor states (x+y, x+z, 0) and (x+z, x+y, 0)
    must satisfy the same bounds at k+1.  Returns the number of states
    checked; raises EstimateViolation on any failure.
    """
    checked = 0
    for k in range(1, k_max + 1):
        f_k, f_k1, f_k2 = fib(k), fib(k + 1), fib(k + 2)
        for x in range(f_k + 1):
            if 2 * x > f_k1:
                break
            for y in range(f_k - x + 1):
                z_cap = min(f_k - x - y, f_k1 - 2 * x - y)
                for z in range(z_cap + 1):
                    for nx, ny in ((x + y, x + z), (x + z, x + y)):
                        if nx + ny > f_k1 or 2 * nx + ny > f_k2:
                            raise EstimateViolation(
                                f"update of (x={x}, y={y}, z={z}) at k={k} "
                                f"escapes the bound"
                            )
                    checked += 1
    return checked
