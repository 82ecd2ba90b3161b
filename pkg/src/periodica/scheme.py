"""Weighted schemes of factor graphs and the collapse calculus.

A scheme is the weighted contraction of a directed graph: every maximal
chain of plain (1,1) vertices becomes one arc whose weight is the chain
length, so only forks remain.  Vertex classes: an in-fork has several
in-arcs (its *tails*, carrying slot marks) and one out-arc, an out-fork is
the mirror image, a crossroad has several of both.  A crossroad never
survives long: the 0-replacement splits it into fresh out-forks (one per
in-tail) and fresh in-forks (one per out-tail) joined by a complete
bipartite bundle of weight-0 arcs, one arc per way of crossing the old
vertex.

Weight dynamics: under the h* transformation the out-forks travel towards
the in-forks ahead of them, so the arc an out-fork is approached through
(in edge orientation: an arc *from* an in-fork *to* an out-fork) shrinks by
one per step, the two tails behind the traveller grow by one, and arcs
between same-kind forks keep their weight.  When an approach arc reaches
weight zero the two forks meet in a crossroad; resolving it by
0-replacement, deleting the forbidden ways of crossing, and contracting the
(1,1) leftovers is one *collapse*.  Collapsing pairs one at a time, in any
order, reaches the same final cycle as the all-at-once drive; the drives in
:mod:`periodica.drive` exercise exactly that.

Arcs optionally carry an annotation string ``psi`` holding the last letter
of each underlying graph edge on the chain (so ``len(psi) == weight``);
concatenated around the final cycle it spells the word's period, and the
word-driven deletion decisions are reconstructed from it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

from .words import Alphabet, BINARY
from .rauzy import RauzyGraph

Token = Hashable


class SchemeError(ValueError):
    """Structural violation: illegal deletion set, disconnection, stuck state."""


@dataclass
class Fork:
    """A branching vertex; slot order in the arc lists is the tail marking.

    For binary schemes the two tails of a fork are its "left" (slot 0) and
    "right" (slot 1) tails; larger alphabets simply get more slots.
    """

    token: Token
    in_arcs: list[int]
    out_arcs: list[int]

    @property
    def kind(self) -> str:
        i, o = len(self.in_arcs), len(self.out_arcs)
        if i >= 2 and o >= 2:
            return "cross"
        if i >= 2:
            return "in"
        if o >= 2:
            return "out"
        return "road"


@dataclass
class Arc:
    id: int
    tail: Token
    head: Token
    weight: int
    psi: Optional[str] = None  # last letters of the chain edges; len == weight


@dataclass
class Scheme:
    alphabet: Alphabet = BINARY
    forks: dict[Token, Fork] = field(default_factory=dict)
    arcs: dict[int, Arc] = field(default_factory=dict)
    cycle_length: Optional[int] = None  # set once collapsed to a bare cycle
    cycle_word: Optional[str] = None
    _arc_counter: int = 0
    _token_counter: int = 0

    # -- construction helpers ------------------------------------------------

    def new_arc(self, tail: Token, head: Token, weight: int, psi: Optional[str] = None) -> Arc:
        arc = Arc(self._arc_counter, tail, head, weight, psi)
        self._arc_counter += 1
        self.arcs[arc.id] = arc
        return arc

    def fresh_token(self) -> int:
        self._token_counter += 1
        return self._token_counter - 1

    # -- inspection ----------------------------------------------------------

    @property
    def size(self) -> int:
        """Total weight (the edge count of the underlying graph)."""
        if self.cycle_length is not None:
            return self.cycle_length
        return sum(a.weight for a in self.arcs.values())

    @property
    def is_terminal(self) -> bool:
        return self.cycle_length is not None

    def kind_of(self, token: Token) -> str:
        return self.forks[token].kind

    def in_fork_count(self) -> int:
        """Generalized in-fork count: sum of (in-valence - 1) over vertices."""
        return sum(len(f.in_arcs) - 1 for f in self.forks.values())

    def collapsible_pairs(self) -> list[tuple[Token, Token]]:
        """(out, in) pairs joined by a fork-free approach path.

        In a scheme every arc is fork-free inside, so these are exactly the
        arcs leaving an in-fork and entering an out-fork.
        """
        pairs = []
        for arc in self.arcs.values():
            if self.forks[arc.tail].kind == "in" and self.forks[arc.head].kind == "out":
                pairs.append((arc.head, arc.tail))
        return sorted(pairs, key=lambda p: (str(p[0]), str(p[1])))

    def one_fork_state(self) -> Optional[tuple[int, int, int]]:
        """(x, y, z) when the scheme is a single in-fork/out-fork pair.

        x is the approach-arc weight, y and z the two return weights in slot
        order of the in-fork's tails.
        """
        if len(self.forks) != 2:
            return None
        kinds = {f.kind: f for f in self.forks.values()}
        if set(kinds) != {"in", "out"}:
            return None
        i_fork, o_fork = kinds["in"], kinds["out"]
        if len(i_fork.in_arcs) != 2 or len(o_fork.out_arcs) != 2:
            return None
        approach = self.arcs[i_fork.out_arcs[0]]
        if approach.head != o_fork.token:
            return None
        y, z = (self.arcs[a].weight for a in i_fork.in_arcs)
        return (approach.weight, y, z)

    def copy(self, *, strip_psi: bool = False) -> "Scheme":
        s = Scheme(self.alphabet)
        s.forks = {t: Fork(f.token, list(f.in_arcs), list(f.out_arcs)) for t, f in self.forks.items()}
        s.arcs = {
            a.id: Arc(a.id, a.tail, a.head, a.weight, None if strip_psi else a.psi)
            for a in self.arcs.values()
        }
        s.cycle_length = self.cycle_length
        s.cycle_word = self.cycle_word
        s._arc_counter = self._arc_counter
        s._token_counter = self._token_counter
        return s

    def validate(self) -> None:
        if self.is_terminal:
            if self.forks or self.arcs:
                raise SchemeError("terminal scheme still has structure")
            return
        seen_in: dict[int, Token] = {}
        seen_out: dict[int, Token] = {}
        for tok, f in self.forks.items():
            if f.kind == "road":
                raise SchemeError(f"plain (1,1) vertex {tok!r} left uncontracted")
            if not f.in_arcs or not f.out_arcs:
                raise SchemeError(f"vertex {tok!r} has an empty side")
            for a in f.in_arcs:
                if a in seen_in:
                    raise SchemeError(f"arc {a} claimed by two heads")
                seen_in[a] = tok
            for a in f.out_arcs:
                if a in seen_out:
                    raise SchemeError(f"arc {a} claimed by two tails")
                seen_out[a] = tok
        for a in self.arcs.values():
            if a.weight < 0:
                raise SchemeError(f"arc {a.id} has negative weight")
            if a.psi is not None and len(a.psi) != a.weight:
                raise SchemeError(f"arc {a.id} annotation length differs from weight")
            if seen_in.get(a.id) != a.head or seen_out.get(a.id) != a.tail:
                raise SchemeError(f"arc {a.id} endpoints disagree with fork slots")
        if len(seen_in) != len(self.arcs) or len(seen_out) != len(self.arcs):
            raise SchemeError("slot lists and arc set disagree")

    def to_dot(self) -> str:
        shapes = {"in": "invtriangle", "out": "triangle", "cross": "diamond", "road": "circle"}
        lines = ["digraph scheme {"]
        if self.is_terminal:
            lines.append(f'  "cycle" [shape=doublecircle, label="cycle {self.cycle_length}"];')
            lines.append(f'  "cycle" -> "cycle" [label="{self.cycle_length}"];')
        for tok, f in self.forks.items():
            lines.append(f'  "{tok}" [shape={shapes[f.kind]}];')
        for a in sorted(self.arcs.values(), key=lambda a: a.id):
            label = str(a.weight) if a.psi is None else f"{a.weight}:{a.psi or 'ε'}"
            lines.append(f'  "{a.tail}" -> "{a.head}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class CollapseEvent:
    """One fork pair driven together, resolved, and restricted."""

    out_fork: Token
    in_fork: Token
    path_length: int
    restrictions_applied: int
    children: tuple[Token, ...]
    deleted: tuple[tuple[int, int], ...]  # (in-tail mark, out-tail mark) pairs
    valences: tuple[int, int]  # (in-fork valence, out-fork valence)
    size_after: int

    @property
    def crossing_pairs(self) -> int:
        """Crossroad weight (in-valence - 1)(out-valence - 1); 1 for binary."""
        return (self.valences[0] - 1) * (self.valences[1] - 1)

    def to_json(self) -> dict:
        return {
            "out_fork": self.out_fork,
            "in_fork": self.in_fork,
            "path_length": self.path_length,
            "restrictions_applied": self.restrictions_applied,
            "children": list(self.children),
            "deleted": [list(d) for d in self.deleted],
            "valences": list(self.valences),
            "size_after": self.size_after,
        }


@dataclass(frozen=True)
class SchemeState:
    """Snapshot after an accounted collapse, for the estimate tracker."""

    size: int
    in_forks: int
    accounted: int  # 1 + collapses performed so far, the graph index
    one_fork: Optional[tuple[int, int, int]] = None


@dataclass
class DriveOutcome:
    word_text: str
    final_cycle_length: int
    crossroads_total: int
    crossing_pairs_total: int
    restrictions_total: int
    d_initial: int
    events: list[CollapseEvent]
    states: list[SchemeState]
    period_spelled: Optional[str] = None
    mode: str = "parallel"

    def to_json(self) -> dict:
        return {
            "word": self.word_text,
            "mode": self.mode,
            "final_cycle_length": self.final_cycle_length,
            "crossroads": self.crossroads_total,
            "restrictions": self.restrictions_total,
            "events": [e.to_json() for e in self.events],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json())


# ---------------------------------------------------------------------------
# construction from a graph


def to_scheme(g: RauzyGraph) -> Scheme:
    """Contract every road chain of ``g`` into one weighted arc.

    The total weight equals the edge count of ``g``.  A bare cycle has no
    forks to keep, so it becomes the designated terminal scheme.
    """
    indeg, outdeg = g.degree_maps()
    fork_vertices = {v for v in g.vertices if indeg[v] >= 2 or outdeg[v] >= 2}
    if not fork_vertices:
        period = _spell_cycle(g)
        return Scheme(g.alphabet, cycle_length=g.size, cycle_word=period)
    succ: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        succ[e[:-1]].append(e)
    s = Scheme(g.alphabet)
    for v in fork_vertices:
        s.forks[v] = Fork(v, [], [])
    chains = []
    for v in sorted(fork_vertices):
        for first in sorted(succ[v]):
            chain = [first]
            while chain[-1][1:] not in fork_vertices:
                (nxt,) = succ[chain[-1][1:]]
                chain.append(nxt)
            chains.append((v, chain[-1][1:], chain))
    records = []
    # Tail slots ordered by opening edge, head slots by closing edge.
    for tail, head, chain in sorted(chains, key=lambda c: c[2][0]):
        arc = s.new_arc(tail, head, len(chain), "".join(e[-1] for e in chain))
        s.forks[tail].out_arcs.append(arc.id)
        records.append((chain[-1], arc.id, head))
    for _, arc_id, head in sorted(records):
        s.forks[head].in_arcs.append(arc_id)
    s.validate()
    return s


def _spell_cycle(g: RauzyGraph) -> str:
    succ = {e[:-1]: e for e in g.edges}
    start = next(iter(g.vertices))
    v, out = start, []
    while True:
        e = succ[v]
        out.append(e[-1])
        v = e[1:]
        if v == start:
            return "".join(out)


# ---------------------------------------------------------------------------
# the three structural operations


def zero_replace(s: Scheme, crossroad: Token) -> Scheme:
    """Split one crossroad into fresh forks joined by weight-0 arcs.

    Each in-tail keeps its arc, now ending at a fresh out-fork; each
    out-tail starts at a fresh in-fork; the bundle of weight-0 arcs between
    them carries one arc per (in-tail, out-tail) pair, which is exactly
    where deletions can act.  Total weight is unchanged.
    """
    out = s.copy()
    _zero_replace_in_place(out, crossroad, lambda kind, mark: out.fresh_token())
    out.validate()
    return out


def _zero_replace_in_place(
    s: Scheme, crossroad: Token, child_token: Callable[[str, int], Token]
) -> tuple[list[Token], list[Token], dict[tuple[int, int], int]]:
    fork = s.forks.get(crossroad)
    if fork is None or fork.kind != "cross":
        raise SchemeError(f"vertex {crossroad!r} is not a crossroad")
    out_children: list[Token] = []
    for i, a_id in enumerate(fork.in_arcs):
        tok = child_token("o", i)
        s.forks[tok] = Fork(tok, [a_id], [])
        s.arcs[a_id].head = tok
        out_children.append(tok)
    in_children: list[Token] = []
    for j, b_id in enumerate(fork.out_arcs):
        tok = child_token("i", j)
        s.forks[tok] = Fork(tok, [], [b_id])
        s.arcs[b_id].tail = tok
        in_children.append(tok)
    fresh: dict[tuple[int, int], int] = {}
    for i, p in enumerate(out_children):
        for j, r in enumerate(in_children):
            arc = s.new_arc(p, r, 0, "" if _tracks_psi(s) else None)
            s.forks[p].out_arcs.append(arc.id)
            fresh[(i, j)] = arc.id
    for j, r in enumerate(in_children):
        for i, p in enumerate(out_children):
            s.forks[r].in_arcs.append(fresh[(i, j)])
    del s.forks[crossroad]
    return out_children, in_children, fresh


def _tracks_psi(s: Scheme) -> bool:
    return all(a.psi is not None for a in s.arcs.values())


def h_star(s: Scheme) -> Scheme:
    """One synchronous travel step: approach arcs shrink, tails grow.

    Arcs from an in-fork to an out-fork (the paths out-forks are driven
    along) lose one unit; arcs from an out-fork to an in-fork gain one;
    same-kind arcs keep their weight.  A crossroad must be 0-replaced
    before stepping, and an arc that would go negative is an overdue
    collapse and raises.
    """
    out = s.copy()
    _h_star_in_place(out)
    out.validate()
    return out


def _h_star_in_place(s: Scheme) -> None:
    for f in s.forks.values():
        if f.kind == "cross":
            raise SchemeError("0-replace all crossroads before the travel step")
    track = _tracks_psi(s)
    updates: list[tuple[Arc, int, Optional[str]]] = []
    fwd_cache: dict[Token, str] = {}
    for arc in s.arcs.values():
        tk = s.forks[arc.tail].kind
        hk = s.forks[arc.head].kind
        if tk == "in" and hk == "out":
            if arc.weight == 0:
                raise SchemeError(f"arc {arc.id} would go negative: collapse is overdue")
            updates.append((arc, arc.weight - 1, arc.psi[1:] if track else None))
        elif tk == "out" and hk == "in":
            letter = _next_letter(s, arc.head, fwd_cache) if track else None
            updates.append((arc, arc.weight + 1, arc.psi + letter if track else None))
        elif tk == "in" and hk == "in":
            if track and arc.weight == 0:
                raise SchemeError(f"zero-weight arc {arc.id} between in-forks: stacked forks")
            letter = _next_letter(s, arc.head, fwd_cache) if track else None
            updates.append((arc, arc.weight, arc.psi[1:] + letter if track else None))
        else:
            updates.append((arc, arc.weight, arc.psi))
    for arc, w, psi in updates:
        arc.weight = w
        arc.psi = psi


def _next_letter(s: Scheme, in_fork: Token, cache: dict[Token, str]) -> str:
    """First letter ahead of an in-fork, hopping over weight-0 arcs."""
    if in_fork in cache:
        return cache[in_fork]
    hops = 0
    tok = in_fork
    while True:
        fork = s.forks[tok]
        if fork.kind != "in":
            raise SchemeError(f"annotation lookup ran into a {fork.kind}-fork at {tok!r}")
        arc = s.arcs[fork.out_arcs[0]]
        if arc.weight >= 1:
            cache[in_fork] = arc.psi[0]
            return arc.psi[0]
        tok = arc.head
        hops += 1
        if hops > len(s.arcs) + 1:
            raise SchemeError("zero-weight loop while resolving the next letter")


def collapse(
    s: Scheme,
    out_token: Token,
    in_token: Token,
    restriction_choice: Iterable[tuple[int, int]] = (),
) -> tuple[Scheme, CollapseEvent]:
    """Drive one out-fork along its approach path into one in-fork.

    The path (the arc from ``in_token`` to ``out_token``) must carry no
    other fork; the traveller adds one unit to each of its tails per unit
    travelled, so the scheme grows by exactly the path length.  The meeting
    crossroad is 0-replaced and ``restriction_choice`` (pairs of in-tail
    mark, out-tail mark) names the fresh crossing arcs to delete; the
    leftover (1,1) vertices are contracted away.  Deleting a full matching
    of the crossings ends the drive in a single cycle; a choice that strands
    a vertex with an empty side, or splits the scheme, raises.
    """
    out = s.copy()
    event = _collapse_in_place(out, out_token, in_token, set(restriction_choice), None)
    out.validate()
    return out, event


def _collapse_in_place(
    s: Scheme,
    out_token: Token,
    in_token: Token,
    deletions: set[tuple[int, int]],
    child_token: Optional[Callable[[str, int], Token]],
) -> CollapseEvent:
    i_fork = s.forks.get(in_token)
    o_fork = s.forks.get(out_token)
    if i_fork is None or i_fork.kind != "in":
        raise SchemeError(f"{in_token!r} is not an in-fork")
    if o_fork is None or o_fork.kind != "out":
        raise SchemeError(f"{out_token!r} is not an out-fork")
    approach = s.arcs[i_fork.out_arcs[0]]
    if approach.head != out_token:
        raise SchemeError(f"no fork-free path from {out_token!r} back to {in_token!r}")
    x = approach.weight
    for a_id in o_fork.out_arcs:
        arc = s.arcs[a_id]
        arc.weight += x
        if arc.psi is not None:
            # Sequential replays do not track annotations; guard regardless.
            arc.psi = None
    approach.weight = 0
    return _resolve_meeting(s, out_token, in_token, deletions, child_token, path_length=x)


def _resolve_meeting(
    s: Scheme,
    out_token: Token,
    in_token: Token,
    deletions: set[tuple[int, int]],
    child_token: Optional[Callable[[str, int], Token]],
    path_length: int,
) -> CollapseEvent:
    """Merge a met pair into a crossroad, 0-replace, delete, contract."""
    i_fork = s.forks[in_token]
    o_fork = s.forks[out_token]
    approach = s.arcs[i_fork.out_arcs[0]]
    if approach.head != out_token or approach.weight != 0:
        raise SchemeError("pair has not met yet")
    valences = (len(i_fork.in_arcs), len(o_fork.out_arcs))
    del s.arcs[approach.id]
    cross_tok = ("cross", out_token, in_token)
    cross = Fork(cross_tok, list(i_fork.in_arcs), list(o_fork.out_arcs))
    for a_id in cross.in_arcs:
        s.arcs[a_id].head = cross_tok
    for a_id in cross.out_arcs:
        s.arcs[a_id].tail = cross_tok
    del s.forks[in_token]
    del s.forks[out_token]
    s.forks[cross_tok] = cross

    if child_token is None:
        child_token = lambda kind, mark: s.fresh_token()
    out_children, in_children, fresh = _zero_replace_in_place(s, cross_tok, child_token)

    bad = deletions - set(fresh)
    if bad:
        raise SchemeError(f"deletion marks {sorted(bad)} do not name crossing arcs")
    for key in deletions:
        _delete_arc(s, fresh[key])
    _contract(s)
    if not s.is_terminal:
        for tok in list(s.forks):
            f = s.forks[tok]
            if not f.in_arcs or not f.out_arcs:
                raise SchemeError(
                    f"deletion choice strands vertex {tok!r} with an empty side"
                )
    survivors = tuple(t for t in out_children + in_children if t in s.forks)
    return CollapseEvent(
        out_fork=out_token,
        in_fork=in_token,
        path_length=path_length,
        restrictions_applied=len(deletions),
        children=survivors,
        deleted=tuple(sorted(deletions)),
        valences=valences,
        size_after=s.size,
    )


def _delete_arc(s: Scheme, arc_id: int) -> None:
    arc = s.arcs.pop(arc_id)
    s.forks[arc.tail].out_arcs.remove(arc_id)
    s.forks[arc.head].in_arcs.remove(arc_id)


def _contract(s: Scheme) -> None:
    changed = True
    while changed:
        changed = False
        for tok in list(s.forks):
            f = s.forks[tok]
            if len(f.in_arcs) != 1 or len(f.out_arcs) != 1:
                continue
            a_id, b_id = f.in_arcs[0], f.out_arcs[0]
            if a_id == b_id:
                # A cycle through roads only: legal solely as the whole scheme.
                arc = s.arcs[a_id]
                if len(s.forks) > 1 or len(s.arcs) > 1:
                    raise SchemeError("deletions split the scheme into components")
                s.cycle_length = arc.weight
                s.cycle_word = arc.psi
                s.forks.clear()
                s.arcs.clear()
                return
            a, b = s.arcs[a_id], s.arcs[b_id]
            a.head = b.head
            a.weight += b.weight
            a.psi = a.psi + b.psi if (a.psi is not None and b.psi is not None) else None
            head_fork = s.forks[b.head]
            head_fork.in_arcs[head_fork.in_arcs.index(b_id)] = a_id
            del s.arcs[b_id]
            del s.forks[tok]
            changed = True


def one_fork_scheme(x: int, y: int, z: int, alphabet: Alphabet = BINARY) -> Scheme:
    """The single-pair scheme: approach weight x, return loops y and z."""
    if min(x, y, z) < 0:
        raise ValueError("weights must be nonnegative")
    s = Scheme(alphabet)
    o = Fork("O", [], [])
    i = Fork("I", [], [])
    s.forks = {"O": o, "I": i}
    approach = s.new_arc("I", "O", x)
    ret_y = s.new_arc("O", "I", y)
    ret_z = s.new_arc("O", "I", z)
    i.out_arcs = [approach.id]
    o.in_arcs = [approach.id]
    i.in_arcs = [ret_y.id, ret_z.id]
    o.out_arcs = [ret_y.id, ret_z.id]
    s.validate()
    return s
