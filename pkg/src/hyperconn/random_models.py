"""Random hypergraph models and the edge-by-edge process.

Random streams come from numpy's PCG64 bit generator.  The stream of
trial ``i`` under master seed ``s`` is ``SeedSequence(s, spawn_key=(i,))``,
so any trial can be regenerated on its own, on any platform, without
replaying the trials before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from math import comb
from typing import Iterator

import numpy as np

from .connectivity import CutWitness, connected_components, find_separator
from .errors import UnreachableEventError
from .hypergraph import Edge, Hypergraph, unrank, unrank_many

_CHUNK = 256
_MAX_RANK = 2**63 - 1


@dataclass(frozen=True)
class Seed:
    master: int
    trial_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master < 2**64:
            raise ValueError(f"master seed must fit in 64 bits, got {self.master}")
        if self.trial_index < 0:
            raise ValueError(f"trial_index must be >= 0, got {self.trial_index}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master, spawn_key=(self.trial_index,))
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, Seed):
        return seed.generator()
    if isinstance(seed, np.random.Generator):
        return seed
    return Seed(int(seed)).generator()


def _potential_edges(n: int, d: int) -> int:
    if d < 2 or n < d:
        raise ValueError(f"need n >= d >= 2, got n={n}, d={d}")
    N = comb(n, d)
    if N > _MAX_RANK:
        raise ValueError(f"C({n},{d}) = {N} exceeds the 63-bit rank range")
    return N


# --------------------------------------------------------------------------
# process

def _rank_stream(N: int, rng: np.random.Generator) -> Iterator[int]:
    seen: set[int] = set()
    while len(seen) < N:
        for r in rng.integers(0, N, size=_CHUNK).tolist():
            if r in seen:
                continue
            seen.add(r)
            yield r
            if len(seen) == N:
                return


def process_stream(n: int, d: int, seed) -> Iterator[Edge]:
    """Lazy random hypergraph process: distinct uniform edges, one per step.

    Each step draws a uniform rank among all ``C(n, d)`` and rejects ranks
    already emitted, which is exactly a uniform draw among the remaining
    edges.  The iterator ends after ``C(n, d)`` edges.
    """
    N = _potential_edges(n, d)
    rng = _as_generator(seed)
    for r in _rank_stream(N, rng):
        yield unrank(r, d)


def sample_gnm(n: int, d: int, m: int, seed) -> Hypergraph:
    """Uniform hypergraph with exactly ``m`` edges.

    For ``m <= N/2`` this is the unordered ``m``-prefix of the process; above
    that the complement of an ``(N - m)``-prefix is taken.
    """
    N = _potential_edges(n, d)
    if not 0 <= m <= N:
        raise ValueError(f"m must lie in [0, {N}], got {m}")
    rng = _as_generator(seed)
    if m <= N - m:
        edges = unrank_many(list(islice(_rank_stream(N, rng), m)), d)
    else:
        excluded = set(islice(_rank_stream(N, rng), N - m))
        edges = [unrank(r, d) for r in range(N) if r not in excluded]
    return Hypergraph(d, range(1, n + 1), edges)


def sample_gnp(n: int, d: int, p: float, seed) -> Hypergraph:
    """Each potential edge present independently with probability ``p``.

    Walks the colex ranks with geometric gaps, so the cost is proportional
    to the number of edges drawn rather than to ``C(n, d)``.
    """
    N = _potential_edges(n, d)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = _as_generator(seed)
    if p == 0.0:
        ranks: list[int] = []
    elif p == 1.0:
        ranks = list(range(N))
    else:
        ranks = []
        pos = -1
        chunk = max(_CHUNK, int(1.1 * p * N) + 16)
        while True:
            gaps = rng.geometric(p, size=chunk)
            hits = pos + np.cumsum(gaps, dtype=np.int64)
            inside = hits[hits < N]
            ranks.extend(inside.tolist())
            if len(inside) < chunk:
                break
            pos = int(hits[-1])
    return Hypergraph(d, range(1, n + 1), unrank_many(ranks, d))


# --------------------------------------------------------------------------
# stopping times

@dataclass
class ProcessTrace:
    """Prefix of one process run with its recorded stopping times.

    ``stopping_times`` maps ``"min-degree>=j"`` and ``"j-connected"`` to the
    1-based step at which the event first holds.
    """

    n: int
    d: int
    k: int
    prefix: list[Edge] = field(default_factory=list)
    stopping_times: dict[str, int] = field(default_factory=dict)
    witnesses_checked: int = 0

    def tau(self, j: int) -> int:
        return self.stopping_times[f"min-degree>={j}"]

    def T(self, j: int) -> int:
        return self.stopping_times[f"{j}-connected"]

    def hypergraph_at(self, step: int) -> Hypergraph:
        if not 0 <= step <= len(self.prefix):
            raise ValueError(f"step {step} outside materialized prefix 0..{len(self.prefix)}")
        return Hypergraph(self.d, range(1, self.n + 1), self.prefix[:step])


def stopping_times(n: int, d: int, k: int, seed) -> ProcessTrace:
    """Run the random process until it is k-connected, recording tau_j and T_j."""
    return stopping_times_along(n, d, k, process_stream(n, d, seed))


def stopping_times_along(n: int, d: int, k: int, edges) -> ProcessTrace:
    """Stopping times along a given sequence of distinct edges.

    tau_j is tracked from degree counters.  For j-connectivity the first
    test happens at tau_j (nothing earlier can qualify); after a failed
    test the cut witness is kept and the test is repeated only when a new
    edge avoids the witness separator and meets both of its sides.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n <= k:
        raise UnreachableEventError(f"{k}-connectivity needs more than {k} vertices, n={n}")
    trace = ProcessTrace(n, d, k)
    deg = [0] * (n + 1)
    # below[j] = number of vertices with degree < j
    below = [0] + [n] * k
    witness: dict[int, CutWitness | None] = {}
    open_conn = list(range(1, k + 1))
    step = 0
    for e in edges:
        e = tuple(e)
        step += 1
        trace.prefix.append(e)
        for v in e:
            deg[v] += 1
            if deg[v] <= k:
                below[deg[v]] -= 1
        for j in range(1, k + 1):
            key = f"min-degree>={j}"
            if key not in trace.stopping_times and below[j] == 0:
                trace.stopping_times[key] = step
        still_open = []
        for j in open_conn:
            if (f"min-degree>={j}" not in trace.stopping_times
                    or (j > 1 and f"{j - 1}-connected" not in trace.stopping_times)):
                still_open.append(j)
                continue
            w = witness.get(j)
            if w is not None and not w.broken_by(e):
                still_open.append(j)
                continue
            H = Hypergraph(d, range(1, n + 1), trace.prefix)
            trace.witnesses_checked += 1
            if j == 1:
                parts = connected_components(H)
                w = None if parts.is_connected() else CutWitness(frozenset(), parts.blocks[0])
            else:
                w = find_separator(H, j)
            if w is None:
                trace.stopping_times[f"{j}-connected"] = step
            else:
                witness[j] = w
                still_open.append(j)
        open_conn = still_open
        if not open_conn:
            return trace
    missing = [f"{j}-connected" for j in open_conn]
    raise UnreachableEventError(f"edge sequence exhausted after {step} edges before {missing}")
