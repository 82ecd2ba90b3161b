"""Order-k factor graphs of periodic words and their evolution.

The order-k graph of a word has its length-k factors as vertices and its
length-(k+1) factors as edges; the edge x runs from the vertex spelled by
x minus its last letter to the vertex spelled by x minus its first.  One
step of evolution goes through the half-step (vertices on edges, edges on
length-2 paths) followed by deletion of the windows that do not occur in
the word; those deleted windows are exactly the reduced restrictions of
matching length.  Evolution terminates in a simple cycle whose length is
the least period, and the integer identities relating sizes, fork counts,
and deletions are asserted at every stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .words import Alphabet, Necklace, cyclic_factor_sets


class IdentityViolation(RuntimeError):
    """A counting identity failed; either a bug or a falsification event."""


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise IdentityViolation(message)


@dataclass(frozen=True)
class RauzyGraph:
    """Vertices are length-k words, edges length-(k+1) words over one alphabet."""

    k: int
    vertices: frozenset[str]
    edges: frozenset[str]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        for e in self.edges:
            if len(e) != self.k + 1:
                raise ValueError(f"edge {e!r} has length {len(e)}, expected {self.k + 1}")
            if e[:-1] not in self.vertices or e[1:] not in self.vertices:
                raise ValueError(f"edge {e!r} has a missing endpoint")

    @property
    def size(self) -> int:
        """Edge count; the quantity whose growth the evolution identities track."""
        return len(self.edges)

    def degree_maps(self) -> tuple[dict[str, int], dict[str, int]]:
        indeg = {v: 0 for v in self.vertices}
        outdeg = {v: 0 for v in self.vertices}
        for e in self.edges:
            outdeg[e[:-1]] += 1
            indeg[e[1:]] += 1
        return indeg, outdeg

    def is_simple_cycle(self) -> bool:
        indeg, outdeg = self.degree_maps()
        if not all(indeg[v] == 1 and outdeg[v] == 1 for v in self.vertices):
            return False
        # One component: walk from any vertex and count the edges met.
        succ = {e[:-1]: e for e in self.edges}
        start = next(iter(self.vertices))
        v, steps = start, 0
        while True:
            v = succ[v][1:]
            steps += 1
            if v == start:
                return steps == len(self.edges)

    def to_dot(self, dashed_edges: Iterable[str] = ()) -> str:
        dashed = set(dashed_edges)
        lines = ["digraph G {"]
        for v in sorted(self.vertices):
            lines.append(f'  "{v or "ε"}";')
        for e in sorted(self.edges | dashed):
            style = ', style=dashed' if e in dashed else ""
            lines.append(f'  "{e[:-1] or "ε"}" -> "{e[1:] or "ε"}" [label="{e}"{style}];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ForkCensus:
    """Vertex-class counts of one graph.

    roads/f_in/f_out/c count the degree classes (1,1), (2,1), (1,2), (2,2);
    the pair/triple counts generalize beyond binary as d_in = sum(indeg-1),
    c_pairs = sum((indeg-1)(outdeg-1)) and t_in = sum((indeg-1)*outdeg), which
    collapse to the binary identities d = f + c and t = f + 2c.
    """

    roads: int
    f_in: int
    f_out: int
    c: int
    d_in: int
    d_out: int
    t_in: int
    t_out: int
    c_pairs: int

    def __post_init__(self) -> None:
        _check(self.d_in == self.d_out, "incoming and outgoing pair-fork counts differ")
        _check(self.t_in == self.d_in + self.c_pairs, "t = d + c failed")


def build_graph(w: Necklace, k: int) -> RauzyGraph:
    """The order-k graph of ``w``: F_w at length k versus length k+1."""
    if k < 0:
        raise ValueError("graph order must be nonnegative")
    sets = cyclic_factor_sets(w.text, k + 1)
    return RauzyGraph(k, frozenset(sets[k]), frozenset(sets[k + 1]), w.alphabet)


def half_step(g: RauzyGraph) -> RauzyGraph:
    """Place a vertex on every edge and an edge on every length-2 path.

    The result has one edge per consecutive edge pair (e1, e2), labeled by e1
    extended with the last letter of e2, so its edge count is
    sum(indeg(v) * outdeg(v)) over the vertices of ``g``.
    """
    by_tail: dict[str, list[str]] = {}
    for e in g.edges:
        by_tail.setdefault(e[:-1], []).append(e)
    new_edges = set()
    for e1 in g.edges:
        for e2 in by_tail.get(e1[1:], ()):
            new_edges.add(e1 + e2[-1])
    return RauzyGraph(g.k + 1, frozenset(g.edges), frozenset(new_edges), g.alphabet)


def apply_restrictions(h: RauzyGraph, restrictions: Iterable[str]) -> RauzyGraph:
    """Delete exactly the edges whose labels are restrictions.

    Restrictions of non-matching length are ignored; a matching-length
    restriction absent from ``h`` signals an inconsistent or non-reduced
    system and raises.
    """
    applicable = {r for r in restrictions if len(r) == h.k + 1}
    missing = applicable - set(h.edges)
    if missing:
        raise ValueError(f"restrictions {sorted(missing)} are not edges of the graph")
    return RauzyGraph(h.k, h.vertices, frozenset(h.edges - applicable), h.alphabet)


def census(g: RauzyGraph) -> ForkCensus:
    """Count vertex classes; raises on a dangling vertex (degree 0 on a side)."""
    indeg, outdeg = g.degree_maps()
    roads = f_in = f_out = c = 0
    d_in = d_out = t_in = t_out = c_pairs = 0
    for v in g.vertices:
        i, o = indeg[v], outdeg[v]
        if i == 0 or o == 0:
            raise ValueError(f"dangling vertex {v!r} (in={i}, out={o})")
        if i == 1 and o == 1:
            roads += 1
        elif i == 2 and o == 1:
            f_in += 1
        elif i == 1 and o == 2:
            f_out += 1
        elif i == 2 and o == 2:
            c += 1
        d_in += i - 1
        d_out += o - 1
        t_in += (i - 1) * o
        t_out += (o - 1) * i
        c_pairs += (i - 1) * (o - 1)
    return ForkCensus(roads, f_in, f_out, c, d_in, d_out, t_in, t_out, c_pairs)


@dataclass
class EvolutionTrace:
    """Per-stage record of one word's evolution down to the simple cycle.

    sizes[k] and censuses[k] describe the order-k graph; r[k] counts the
    length-(k+1) deletions applied while building it, with r[0] counting the
    letters absent from the word (the trivial pre-stage).  The trace stops at
    the first simple cycle; its length equals the least period.
    """

    word: Necklace
    sizes: list[int] = field(default_factory=list)
    censuses: list[ForkCensus] = field(default_factory=list)
    r: list[int] = field(default_factory=list)
    restrictions_found: set[str] = field(default_factory=set)
    k_final: int = 0

    @property
    def n(self) -> int:
        return self.word.n

    @property
    def total_restrictions(self) -> int:
        return sum(self.r)

    def summary(self) -> dict:
        return {
            "word": self.word.text,
            "n": self.n,
            "k_final": self.k_final,
            "sizes": self.sizes,
            "r": self.r,
            "d": [c.d_in for c in self.censuses],
            "c": [c.c_pairs for c in self.censuses],
            "restrictions": sum(self.r),
        }


def evolve(w: Necklace) -> EvolutionTrace:
    """Run build/half-step/delete until a simple cycle appears, checking
    every counting identity with exact integer arithmetic.

    Checked at each stage (r being the deletions applied building order k+1):
      d_{k+1} = d_k + c_k - r_{k+1}
      size_{k+1} = size_k + d_k + c_k - r_{k+1}
      t_in(G_k) = d_in(half_step(G_k))
    and at termination:
      cycle length = n,  sum(r) = sum(c) + d_0,  n = size_0 + sum_{k>=1} d_k.
    """
    trace = EvolutionTrace(w)
    factor_sets = cyclic_factor_sets(w.text, w.n + 1)
    trace.r.append(w.alphabet.size - len(factor_sets[1]))
    trace.restrictions_found.update(c for c in w.alphabet.letters if c not in factor_sets[1])

    g = build_graph(w, 0)
    trace.sizes.append(g.size)
    trace.censuses.append(census(g))
    while not g.is_simple_cycle():
        _check(g.k < w.n, f"evolution of {w.text!r} ran past order n without cycling")
        h = half_step(g)
        h_census = census(h)
        _check(
            h_census.d_in == trace.censuses[-1].t_in,
            f"pair forks after half-step != triple forks before, at k={g.k} of {w.text!r}",
        )
        keep = factor_sets[g.k + 2]
        deleted = {e for e in h.edges if e not in keep}
        trace.restrictions_found.update(deleted)
        trace.r.append(len(deleted))
        g = RauzyGraph(h.k, h.vertices, frozenset(h.edges - deleted), h.alphabet)
        trace.sizes.append(g.size)
        trace.censuses.append(census(g))
        prev, cur = trace.censuses[-2], trace.censuses[-1]
        _check(
            cur.d_in == prev.d_in + prev.c_pairs - trace.r[-1],
            f"fork-count identity failed at k={g.k} of {w.text!r}",
        )
        _check(
            trace.sizes[-1] == trace.sizes[-2] + prev.d_in + prev.c_pairs - trace.r[-1],
            f"size identity failed at k={g.k} of {w.text!r}",
        )
        _check(g.k <= w.n, f"evolution of {w.text!r} ran past order n")
    trace.k_final = g.k
    _check(g.size == w.n, f"final cycle of {w.text!r} has length {g.size}, period is {w.n}")
    _check(
        sum(trace.r[1:]) == sum(c.c_pairs for c in trace.censuses) + trace.censuses[0].d_in,
        f"restriction total != crossroad total + initial forks for {w.text!r}",
    )
    _check(
        w.n == trace.sizes[0] + sum(c.d_in for c in trace.censuses[1:]),
        f"period != initial size + later fork counts for {w.text!r}",
    )
    return trace
