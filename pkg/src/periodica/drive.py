"""Word-driven drives of a scheme down to its final cycle.

Both drives start from the resolved order-0 picture of a word: the single
branching vertex of its order-0 graph, met, 0-replaced, and stripped of the
length-2 windows the word avoids.  The *parallel* drive then advances every
fork one step per tick (h*), resolving every meeting as it happens; its
deletions are decided by reconstructing, from the arc annotations, the
actual window of the word each fresh crossing arc stands for, and testing
it for factorhood.  The *sequential* drive replays the same history one
collapse at a time in any schedule: the pair chosen now mated in the
parallel run too, so its deletions (and the identities of its surviving
children) are read off the parallel record, joined on fork lineage ids.

The outcome of either drive reports the final cycle length (the least
period), the number of meetings, and the number of deletions; the
sequential numbers match the parallel ones for every schedule, which the
test suite checks exhaustively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .words import Necklace, canonicalize, cyclic_factor_sets, FiniteWord
from .scheme import (
    CollapseEvent,
    DriveOutcome,
    Fork,
    Scheme,
    SchemeError,
    SchemeState,
    _collapse_in_place,
    _h_star_in_place,
    _resolve_meeting,
)

Policy = Callable[[Sequence[tuple[int, int]], random.Random], tuple[int, int]]


class Lineage:
    """Structural fork identities, shared between a drive and its replays.

    A child's identity is determined by the pair that met and the tail slots
    it sits on, so any schedule that brings the same pairs together produces
    the same ids.  The reference (parallel) run interns ids; replays may only
    look them up, and a missing key means the schedules disagree on who mates
    with whom.
    """

    def __init__(self) -> None:
        self._ids: dict[tuple, int] = {}

    def _intern(self, key: tuple) -> int:
        if key not in self._ids:
            self._ids[key] = len(self._ids)
        return self._ids[key]

    def seed(self, kind: str) -> int:
        return self._intern(("seed", kind))

    def child(self, out_tok: int, in_tok: int, kind: str, mark: int) -> int:
        return self._intern((out_tok, in_tok, kind, mark))

    def existing(self, out_tok: int, in_tok: int, kind: str, mark: int) -> int:
        key = (out_tok, in_tok, kind, mark)
        if key not in self._ids:
            raise SchemeError(
                f"pair ({out_tok}, {in_tok}) has no recorded offspring: schedules disagree"
            )
        return self._ids[key]


@dataclass
class DriveContext:
    """Reference run of one word: resolved start state plus the full record."""

    word: Necklace
    outcome: DriveOutcome
    start: Scheme  # state after the root meeting, annotations stripped
    lineage: Lineage
    events_by_pair: dict[tuple[int, int], CollapseEvent]
    root_event: CollapseEvent
    root_state: SchemeState


def parallel_drive(w: Necklace) -> DriveOutcome:
    """Drive all forks simultaneously; see the module docstring."""
    return build_context(w).outcome


def build_context(w: Necklace) -> DriveContext:
    present = sorted(set(w.text))
    if len(present) < 2:
        raise ValueError("single-letter words collapse trivially; drive needs two letters")
    n = w.n
    factor_sets = cyclic_factor_sets(w.text, n + 1)

    def member(x: str) -> bool:
        return len(x) <= n + 1 and x in factor_sets[len(x)]

    lineage = Lineage()
    events: list[CollapseEvent] = []
    states: list[SchemeState] = []
    s, root_event = _root_resolution(w, present, member, lineage)
    events.append(root_event)
    states.append(_snapshot(s, accounted=2))
    start = s.copy(strip_psi=True)

    approach_birth: dict[int, tuple[int, int, int]] = {}
    _note_approaches(s, approach_birth)
    tick = 0
    while not s.is_terminal:
        tick += 1
        if tick > n + 1:
            raise SchemeError(f"drive of {w.text!r} failed to terminate by order n")
        _h_star_in_place(s)
        _resolve_all_meetings(s, tick, member, lineage, events, states, approach_birth)
    outcome = _finish_outcome(w, s, events, states, mode="parallel")
    table = {(e.out_fork, e.in_fork): e for e in events}
    return DriveContext(w, outcome, start, lineage, table, root_event, states[0])


def sequential_drive(
    w: Necklace,
    policy: str | Policy = "random",
    seed: int = 0,
    context: Optional[DriveContext] = None,
) -> DriveOutcome:
    """Collapse one pair at a time in the order the policy picks.

    ``policy`` is "first", "last", "random", or a callable mapping the
    current (out, in) pair list and an RNG to a chosen pair.  The final
    cycle length and meeting count are asserted to match the parallel run.
    """
    ctx = context or build_context(w)
    rng = random.Random(seed)
    pick = _policies[policy] if isinstance(policy, str) else policy
    s = ctx.start.copy()
    events = [ctx.root_event]
    states = [ctx.root_state]
    while not s.is_terminal:
        pairs = s.collapsible_pairs()
        if not pairs:
            raise SchemeError("non-terminal scheme without a collapsible pair")
        out_tok, in_tok = pick(pairs, rng)
        record = ctx.events_by_pair.get((out_tok, in_tok))
        if record is None:
            raise SchemeError(
                f"pair ({out_tok}, {in_tok}) is collapsible here but never mated "
                "in the reference run"
            )
        size_before = s.size
        event = _collapse_in_place(
            s,
            out_tok,
            in_tok,
            set(record.deleted),
            lambda kind, mark: ctx.lineage.existing(out_tok, in_tok, kind, mark),
        )
        if event.children != record.children:
            raise SchemeError("surviving children differ from the reference run")
        # Each travelled unit feeds every tail of the mover and eats one ahead.
        if s.size != size_before + event.path_length * (event.valences[1] - 1):
            raise SchemeError("collapse did not grow the scheme by the travelled length")
        events.append(event)
        states.append(_snapshot(s, accounted=len(events) + 1))
    outcome = _finish_outcome(w, s, events, states, mode="sequential")
    ref = ctx.outcome
    if (
        outcome.final_cycle_length != ref.final_cycle_length
        or outcome.crossroads_total != ref.crossroads_total
        or outcome.restrictions_total != ref.restrictions_total
    ):
        raise SchemeError(
            f"schedule changed the outcome for {w.text!r}: "
            f"{outcome.final_cycle_length}/{outcome.crossroads_total} vs "
            f"{ref.final_cycle_length}/{ref.crossroads_total}"
        )
    return outcome


def _policy_first(pairs: Sequence[tuple[int, int]], rng: random.Random) -> tuple[int, int]:
    return pairs[0]


def _policy_last(pairs: Sequence[tuple[int, int]], rng: random.Random) -> tuple[int, int]:
    return pairs[-1]


def _policy_random(pairs: Sequence[tuple[int, int]], rng: random.Random) -> tuple[int, int]:
    return pairs[rng.randrange(len(pairs))]


_policies: dict[str, Policy] = {
    "first": _policy_first,
    "last": _policy_last,
    "random": _policy_random,
}


# ---------------------------------------------------------------------------
# internals


def _root_resolution(w, present, member, lineage):
    """Meet the virtual seed pair over the order-0 vertex and resolve it.

    Letters missing from the word count as one deletion each (their loop is
    simply never built); the pairs of present letters are then kept or
    deleted by factorhood of the corresponding two-letter window.
    """
    s = Scheme(w.alphabet)
    seed_out, seed_in = lineage.seed("o"), lineage.seed("i")
    o_fork = Fork(seed_out, [], [])
    i_fork = Fork(seed_in, [], [])
    s.forks = {seed_out: o_fork, seed_in: i_fork}
    approach = s.new_arc(seed_in, seed_out, 0, "")
    i_fork.out_arcs = [approach.id]
    o_fork.in_arcs = [approach.id]
    for letter in present:
        loop = s.new_arc(seed_out, seed_in, 1, letter)
        o_fork.out_arcs.append(loop.id)
        i_fork.in_arcs.append(loop.id)
    deletions = {
        (i, j)
        for i, a in enumerate(present)
        for j, b in enumerate(present)
        if not member(a + b)
    }
    event = _resolve_meeting(
        s,
        seed_out,
        seed_in,
        deletions,
        lambda kind, mark: lineage.child(seed_out, seed_in, kind, mark),
        path_length=1,
    )
    absent = w.alphabet.size - len(present)
    event = replace(event, restrictions_applied=event.restrictions_applied + absent)
    return s, event


def _resolve_all_meetings(s, tick, member, lineage, events, states, approach_birth):
    """Resolve every met pair of this tick; new zero-distance meetings after a
    resolution would be stacked microstates the calculus leaves undefined, so
    they fail loudly instead of being guessed at."""
    expected = _met_arcs(s)
    while True:
        met = _met_arcs(s)
        if not met:
            break
        emergent = [a for a in met if a not in expected]
        if emergent:
            raise SchemeError(
                f"zero-distance meeting emerged mid-resolution at tick {tick}; "
                "stacked forks are not modeled"
            )
        arc = s.arcs[met[0]]
        in_tok, out_tok = arc.tail, arc.head
        deletions = _word_deletions(s, in_tok, out_tok, tick, member)
        birth = approach_birth.get(arc.id)
        event = _resolve_meeting(
            s,
            out_tok,
            in_tok,
            deletions,
            lambda kind, mark: lineage.child(out_tok, in_tok, kind, mark),
            path_length=birth[2] if birth else 0,
        )
        events.append(event)
        states.append(_snapshot(s, accounted=len(events) + 1))
        if s.is_terminal:
            return
    _note_approaches(s, approach_birth)


def _met_arcs(s) -> list[int]:
    met = []
    for arc in s.arcs.values():
        if (
            arc.weight == 0
            and s.forks[arc.tail].kind == "in"
            and s.forks[arc.head].kind == "out"
        ):
            met.append(arc.id)
    return sorted(met)


def _note_approaches(s, birth: dict[int, tuple[int, int, int]]) -> None:
    """Track, per approach arc, its weight when it last (re)formed.

    An id whose endpoints changed was rebuilt by a contraction and counts as
    newly formed.  The stored weight is the number of ticks the pair will
    spend approaching, reported as the meeting's path length.
    """
    for stale in [a for a in birth if a not in s.arcs]:
        del birth[stale]
    for arc in s.arcs.values():
        if s.forks[arc.tail].kind == "in" and s.forks[arc.head].kind == "out":
            old = birth.get(arc.id)
            if old is None or (old[0], old[1]) != (arc.tail, arc.head):
                birth[arc.id] = (arc.tail, arc.head, arc.weight)


def _word_deletions(s, in_tok, out_tok, tick, member) -> set[tuple[int, int]]:
    """Reconstruct the windows the fresh crossing arcs stand for and keep
    exactly the factors of the word."""
    i_fork = s.forks[in_tok]
    o_fork = s.forks[out_tok]
    for a in i_fork.in_arcs:
        if s.arcs[a].weight == 0:
            raise SchemeError("weightless in-tail at a meeting: stacked forks are not modeled")
    lead_ins = [_collect_backward(s, a, tick + 1) for a in i_fork.in_arcs]
    middles = {c[1:] for c in lead_ins}
    if len(middles) != 1:
        raise SchemeError(f"in-tails disagree on the met vertex: {sorted(middles)}")
    outs = [_collect_forward(s, b, 1) for b in o_fork.out_arcs]
    deletions = set()
    for i, lead in enumerate(lead_ins):
        if not member(lead):
            raise SchemeError(f"reconstructed edge {lead!r} is not a factor")
        for j, letter in enumerate(outs):
            window = lead + letter
            if not member(window[1:]):
                raise SchemeError(f"reconstructed edge {window[1:]!r} is not a factor")
            if not member(window):
                deletions.add((i, j))
    return deletions


def _collect_backward(s, first_arc_id: int, need: int) -> str:
    """The ``need`` letters of the word ending where the first arc ends.

    Walks against the arrows; the first arc fixes the branch, after which any
    in-arc spells the same letters because vertices determine their own label.
    """
    parts: list[str] = []
    have = 0
    arc = s.arcs[first_arc_id]
    hops = 0
    limit = (need + 2) * (len(s.arcs) + 2)
    while True:
        parts.append(arc.psi)
        have += len(arc.psi)
        if have >= need:
            break
        arc = s.arcs[s.forks[arc.tail].in_arcs[0]]
        hops += 1
        if hops > limit:
            raise SchemeError("weightless loop while reading letters backward")
    return "".join(reversed(parts))[-need:]


def _collect_forward(s, first_arc_id: int, need: int) -> str:
    parts: list[str] = []
    have = 0
    arc = s.arcs[first_arc_id]
    hops = 0
    limit = (need + 2) * (len(s.arcs) + 2)
    while True:
        parts.append(arc.psi)
        have += len(arc.psi)
        if have >= need:
            break
        fork = s.forks[arc.head]
        if fork.kind != "in":
            raise SchemeError("forward letter walk ran into a branching fork")
        arc = s.arcs[fork.out_arcs[0]]
        hops += 1
        if hops > limit:
            raise SchemeError("weightless loop while reading letters forward")
    return "".join(parts)[:need]


def _snapshot(s: Scheme, accounted: int) -> SchemeState:
    return SchemeState(
        size=s.size,
        in_forks=0 if s.is_terminal else s.in_fork_count(),
        accounted=accounted,
        one_fork=None if s.is_terminal else s.one_fork_state(),
    )


def _finish_outcome(w, s, events, states, mode) -> DriveOutcome:
    if s.cycle_length != w.n:
        raise SchemeError(
            f"drive of {w.text!r} ended in a cycle of length {s.cycle_length}, "
            f"period is {w.n}"
        )
    spelled = s.cycle_word
    if spelled is not None:
        if canonicalize(FiniteWord.from_text(spelled, w.alphabet)) != w:
            raise SchemeError(f"final cycle spells {spelled!r}, not a rotation of {w.text!r}")
    crossing = sum(e.crossing_pairs for e in events)
    restrictions = sum(e.restrictions_applied for e in events)
    d_initial = w.alphabet.size - 1
    if restrictions != crossing + d_initial:
        raise SchemeError(
            f"bookkeeping identity failed for {w.text!r}: "
            f"{restrictions} deletions vs {crossing} crossings + {d_initial}"
        )
    return DriveOutcome(
        word_text=w.text,
        final_cycle_length=s.cycle_length,
        crossroads_total=len(events),
        crossing_pairs_total=crossing,
        restrictions_total=restrictions,
        d_initial=d_initial,
        events=list(events),
        states=list(states),
        period_spelled=spelled,
        mode=mode,
    )
