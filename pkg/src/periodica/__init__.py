"""Forbidden-word systems of periodic sequences.

Periodic bi-infinite words, the finite systems of forbidden subwords that
pin them down, the factor-graph evolution computing the unique reduced
system, a weighted-scheme collapse calculus over the same data, and the
Fibonacci lower bound relating the least period to the number of
restrictions, together with exhaustive verification tools.
"""

from .words import (
    Alphabet,
    BINARY,
    FiniteWord,
    Necklace,
    TERNARY,
    canonicalize,
    enumerate_necklaces,
    factors,
    is_factor,
    necklace_count,
    random_necklace,
)
from .forbidden import (
    DefinednessVerdict,
    DoesNotDefineError,
    ForbiddenSystem,
    Verdict,
    classify,
    reduce,
    reduced_system,
    satisfies,
)
from .rauzy import (
    EvolutionTrace,
    ForkCensus,
    RauzyGraph,
    apply_restrictions,
    build_graph,
    census,
    evolve,
    half_step,
)

__version__ = "0.1.0"
