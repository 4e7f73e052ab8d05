"""d-uniform hypergraphs on labelled vertex sets.

Vertices are positive integers (1-based, matching ``[n]``).  Edges are
stored as strictly increasing tuples.  Deleting a vertex removes every
edge that contains it, it never shrinks an edge.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import HypergraphError

Edge = tuple[int, ...]


# --------------------------------------------------------------------------
# colex ranking of d-subsets

def rank(edge: Sequence[int]) -> int:
    """Colexicographic rank of a sorted edge (1-based vertices).

    The rank does not depend on n, so ranks of ``[n']``-edges are a prefix
    of the ranks of ``[n]``-edges for ``n' < n``.
    """
    return sum(comb(v - 1, i) for i, v in enumerate(edge, start=1))


def _largest_below(r: int, i: int) -> int:
    # largest c with comb(c, i) <= r
    if i == 1:
        return r
    c = int((r * factorial(i)) ** (1.0 / i)) + i
    while comb(c, i) > r:
        c -= 1
    while comb(c + 1, i) <= r:
        c += 1
    return c


def unrank(r: int, d: int) -> Edge:
    """Inverse of :func:`rank` for edges of size ``d``."""
    if r < 0:
        raise ValueError(f"rank must be nonnegative, got {r}")
    out = [0] * d
    for i in range(d, 0, -1):
        c = _largest_below(r, i)
        out[i - 1] = c + 1
        r -= comb(c, i)
    return tuple(out)


def _comb_array(c, i: int):
    out = np.ones_like(c)
    for t in range(i):
        out = out * (c - t) // (t + 1)
    return out


def unrank_many(ranks, d: int) -> list[Edge]:
    """Vectorized :func:`unrank` for a batch of ranks.

    Falls back to the scalar routine when intermediate products could
    leave the int64 range.
    """
    r = np.asarray(ranks, dtype=np.int64)
    if r.size == 0:
        return []
    top = int(r.max())
    if top >= 2**40 or d > 8:
        return [unrank(int(x), d) for x in r.tolist()]
    cols = []
    for i in range(d, 0, -1):
        if i == 1:
            c = r.copy()
        else:
            c = np.floor((r.astype(np.float64) * factorial(i)) ** (1.0 / i)).astype(np.int64) + i
            too_big = _comb_array(c, i) > r
            while too_big.any():
                c[too_big] -= 1
                too_big = _comb_array(c, i) > r
            fits = _comb_array(c + 1, i) <= r
            while fits.any():
                c[fits] += 1
                fits = _comb_array(c + 1, i) <= r
        cols.append(c + 1)
        r = r - _comb_array(c, i)
    return list(zip(*(col.tolist() for col in reversed(cols))))


@dataclass(frozen=True)
class EdgeKey:
    vertices: Edge
    rank: int

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "EdgeKey":
        vs = tuple(sorted(vertices))
        return cls(vs, rank(vs))

    @classmethod
    def from_rank(cls, r: int, d: int) -> "EdgeKey":
        return cls(unrank(r, d), r)


# --------------------------------------------------------------------------
# the hypergraph value

class Hypergraph:
    """Immutable d-uniform hypergraph.

    ``vertices`` is the vertex universe (``{1..n}`` for freshly built
    hypergraphs, a subset after :func:`delete_vertices`).  ``edges`` is the
    sorted tuple of edges; ``incidence[v]`` lists indices into ``edges``.
    Equality compares the vertex universe and the edge set.
    """

    __slots__ = ("d", "vertices", "edges", "incidence", "_edge_set")

    def __init__(self, d: int, vertices: Iterable[int], edges: Iterable[Edge]):
        # trusted constructor; use build() for validated input
        self.d = d
        self.vertices = frozenset(vertices)
        self.edges = tuple(sorted(edges))
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for idx, e in enumerate(self.edges):
            for v in e:
                inc[v].append(idx)
        self.incidence = inc
        self._edge_set = frozenset(self.edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return self._edge_set

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    @property
    def degrees(self) -> dict[int, int]:
        return {v: len(es) for v, es in self.incidence.items()}

    def min_degree(self) -> int:
        return min((len(es) for es in self.incidence.values()), default=0)

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def neighbors(self, v: int) -> set[int]:
        out: set[int] = set()
        for idx in self.incidence[v]:
            out.update(self.edges[idx])
        out.discard(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.d == other.d and self.vertices == other.vertices
                and self._edge_set == other._edge_set)

    def __hash__(self):
        return hash((self.d, self.vertices, self._edge_set))

    def __repr__(self):
        return f"Hypergraph(n={self.n}, d={self.d}, m={self.m})"


def _check_edge(raw, n: int, d: int) -> Edge:
    e = tuple(sorted(raw))
    if len(e) != d or len(set(e)) != d:
        raise HypergraphError(f"edge {tuple(raw)} does not have {d} distinct vertices")
    for v in e:
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
            raise HypergraphError(f"edge {tuple(raw)} has vertex {v!r} outside [1, {n}]")
    return e


def build(n: int, d: int, edges: Iterable[Iterable[int]] = ()) -> Hypergraph:
    """Validated construction of a d-uniform hypergraph on ``[n]``.

    Raises :class:`HypergraphError` on wrong arity, out-of-range vertices or
    duplicate edges; the message names the offending tuple.
    """
    if d < 2:
        raise HypergraphError(f"edge size d must be >= 2, got {d}")
    if n < d:
        raise HypergraphError(f"need n >= d, got n={n}, d={d}")
    seen: set[Edge] = set()
    for raw in edges:
        e = _check_edge(tuple(raw), n, d)
        if e in seen:
            raise HypergraphError(f"duplicate edge {e}")
        seen.add(e)
    return Hypergraph(d, range(1, n + 1), seen)


def complete(n: int, d: int) -> Hypergraph:
    from itertools import combinations
    return Hypergraph(d, range(1, n + 1), combinations(range(1, n + 1), d))


def empty(n: int, d: int) -> Hypergraph:
    return build(n, d, ())


def delete_vertices(H: Hypergraph, S: Iterable[int]) -> Hypergraph:
    """Remove ``S`` and every edge meeting ``S``.

    The result's vertex universe is exactly ``H.vertices - S``; labels not
    present in ``H`` are ignored.
    """
    S = frozenset(S) & H.vertices
    if not S:
        return H
    kept = [e for e in H.edges if not any(v in S for v in e)]
    return Hypergraph(H.d, H.vertices - S, kept)


def degree_profile(H: Hypergraph) -> dict[int, int]:
    """Histogram ``degree -> number of vertices`` (sorted by degree)."""
    hist = Counter(len(es) for es in H.incidence.values())
    return dict(sorted(hist.items()))


# --------------------------------------------------------------------------
# edge-list text format:  "n d m" header, then one ascending edge per line

def dumps(H: Hypergraph) -> str:
    n = H.n
    if H.vertices != frozenset(range(1, n + 1)):
        raise ValueError("edge-list format needs vertex universe [1, n]")
    buf = io.StringIO()
    buf.write(f"{n} {H.d} {H.m}\n")
    for e in H.edges:
        buf.write(" ".join(map(str, e)) + "\n")
    return buf.getvalue()


def loads(text: str) -> Hypergraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise HypergraphError("empty edge-list: missing 'n d m' header")
    try:
        n, d, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise HypergraphError(f"bad header {lines[0]!r}, expected 'n d m'") from None
    body = lines[1:]
    if len(body) != m:
        raise HypergraphError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        try:
            vs = [int(x) for x in ln.split()]
        except ValueError:
            raise HypergraphError(f"non-integer vertex in edge line {ln!r}") from None
        if vs != sorted(vs):
            raise HypergraphError(f"edge line {ln!r} is not in ascending order")
        edges.append(vs)
    return build(n, d, edges)


def read_edge_list(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_edge_list(H: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(H))
