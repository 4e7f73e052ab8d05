"""Vertex connectivity of hypergraphs.

Deleting a vertex removes every edge through it.  Under that rule a
vertex of degree ``k - 1`` is cut off by deleting one neighbour per
incident edge, and separators are generally much smaller than in the
"shrink the edge" convention used for ordinary graph flow reductions.

The k-connectivity test is exact.  It grows a *robust core* ``C``: a set
with ``C - S`` connected in ``H - S`` for every ``|S| < k``.  A vertex
joins the core either through a cheap local rule (its core-touching petals
have no transversal of size ``< k``) or through an exact bounded search
for a separator between it and the core; a failed search is a cut witness.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import ScaleGuardError
from .hypergraph import Hypergraph, delete_vertices
from .structure import hitting_set_within, link

BRUTE_FORCE_MAX_N = 12
PROPERTY_Q_MAX_N = 500
PROPERTY_Q_MAX_K = 3


@dataclass(frozen=True)
class ComponentPartition:
    blocks: tuple[frozenset, ...]

    def __len__(self):
        return len(self.blocks)

    @property
    def largest(self) -> int:
        return max((len(b) for b in self.blocks), default=0)

    def is_connected(self) -> bool:
        return len(self.blocks) <= 1


@dataclass(frozen=True)
class CutWitness:
    """Separator ``S`` and one side ``A`` of ``V - S``.

    Valid when ``A`` and ``V - S - A`` are nonempty and no edge avoiding
    ``S`` meets both.
    """

    separator: frozenset
    side: frozenset

    def other_side(self, H: Hypergraph) -> frozenset:
        return H.vertices - self.separator - self.side

    def verify(self, H: Hypergraph) -> bool:
        S, A = self.separator, self.side
        if not A or S & A or not A <= H.vertices or not S <= H.vertices:
            return False
        B = self.other_side(H)
        if not B:
            return False
        for e in H.edges:
            if any(v in S for v in e):
                continue
            inside = sum(1 for v in e if v in A)
            if 0 < inside < len(e):
                return False
        return True

    def broken_by(self, edge) -> bool:
        """Would adding ``edge`` reconnect the two sides?"""
        if any(v in self.separator for v in edge):
            return False
        inside = sum(1 for v in edge if v in self.side)
        return 0 < inside < len(edge)

    def to_dict(self) -> dict:
        return {"separator": sorted(self.separator), "side": sorted(self.side)}


# --------------------------------------------------------------------------
# components

def connected_components(H: Hypergraph) -> ComponentPartition:
    parent = {v: v for v in H.vertices}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for e in H.edges:
        r0 = find(e[0])
        for v in e[1:]:
            r = find(v)
            if r != r0:
                # keep the smaller label as root so output is canonical
                if r < r0:
                    parent[r0] = r
                    r0 = r
                else:
                    parent[r] = r0
    groups: dict[int, set] = {}
    for v in H.vertices:
        groups.setdefault(find(v), set()).add(v)
    blocks = sorted((frozenset(g) for g in groups.values()), key=min)
    return ComponentPartition(tuple(blocks))


def _bfs(H: Hypergraph, source: int, removed=frozenset(), targets=None):
    """Breadth-first search over edges avoiding ``removed``.

    Returns ``(hit, via)`` where ``via[y] = (prev_vertex, edge_index)`` for
    every reached vertex, and ``hit`` is the first reached member of
    ``targets - removed`` (or None).
    """
    edges = H.edges
    inc = H.incidence
    via = {source: None}
    seen_e = set()
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for ei in inc[v]:
            if ei in seen_e:
                continue
            seen_e.add(ei)
            e = edges[ei]
            if removed and any(x in removed for x in e):
                continue
            for y in e:
                if y not in via:
                    via[y] = (v, ei)
                    if targets is not None and y in targets and y not in removed:
                        return y, via
                    queue.append(y)
    return None, via


def _path_vertices(H: Hypergraph, via, end) -> set:
    out = set()
    y = end
    while via[y] is not None:
        prev, ei = via[y]
        out.update(H.edges[ei])
        y = prev
    return out


def _component_of(H: Hypergraph, v: int, removed) -> frozenset:
    _, via = _bfs(H, v, removed)
    return frozenset(via)


# --------------------------------------------------------------------------
# pairwise separation

def _shares_edge(H: Hypergraph, u: int, w: int) -> bool:
    return any(w in H.edges[ei] for ei in H.incidence[u])


def _edge_within(H: Hypergraph, u: int, w: int) -> bool:
    # an edge contained in {u, w} survives every deletion avoiding u and w
    return any(set(H.edges[ei]) <= {u, w} for ei in H.incidence[u])


def _separate(H: Hypergraph, source: int, targets: frozenset, budget: int,
              protected: frozenset = frozenset()):
    """Find ``S`` (``|S| <= budget``) cutting ``source`` from ``targets - S``.

    ``source`` is never put in ``S``; ``S`` never swallows all of
    ``targets`` nor any vertex of ``protected``.  Exact bounded search: any
    valid ``S`` must meet the vertex set of every surviving
    source-to-target path, so branching on one shortest path is complete.
    """
    tried = set()

    def rec(S: frozenset):
        if S in tried:
            return None
        tried.add(S)
        hit, via = _bfs(H, source, S, targets)
        if hit is None:
            return S
        if len(S) >= budget:
            return None
        for x in sorted(_path_vertices(H, via, hit) - {source}):
            if x in protected:
                continue
            S2 = S | {x}
            if targets <= S2:
                continue
            got = rec(S2)
            if got is not None:
                return got
        return None

    return rec(frozenset())


def _disjoint_path_bound(H: Hypergraph, u: int, w: int, cap: int) -> int:
    """Greedy count of u-w paths whose vertex sets meet only in {u, w}.

    Every separator meets each such path, so the count is a lower bound.
    """
    removed: set = set()
    count = 0
    target = frozenset([w])
    while count < cap:
        hit, via = _bfs(H, u, frozenset(removed), target)
        if hit is None:
            break
        removed |= _path_vertices(H, via, hit) - {u, w}
        count += 1
    return count


def min_separating_cut(H: Hypergraph, u: int, w: int, limit: int | None = None) -> int:
    """Size of a smallest ``S`` (avoiding u, w) whose deletion separates them.

    A shared edge with a third vertex is destroyed by deleting that vertex,
    so only an edge equal to ``{u, w}`` (``d = 2``) makes the pair
    inseparable; that case reports ``n - 1``.  With
    ``limit`` the search stops early and returns ``limit`` once the cut is
    known to be at least that large.
    """
    if u == w:
        raise ValueError("u and w must differ")
    n = H.n
    if _edge_within(H, u, w):
        return n - 1 if limit is None else min(n - 1, limit)
    top = n - 2 if limit is None else min(n - 2, limit)
    b = _disjoint_path_bound(H, u, w, top)
    protected = frozenset([w])
    target = frozenset([w])
    while b < top:
        if _separate(H, u, target, b, protected) is not None:
            return b
        b += 1
    return top


# --------------------------------------------------------------------------
# k-connectivity

def find_separator(H: Hypergraph, k: int) -> CutWitness | None:
    """A witness ``S`` with ``|S| < k`` and ``H - S`` disconnected, or None.

    Does not look at the ``n > k`` requirement of k-connectivity; see
    :func:`is_k_connected`.
    """
    if H.n <= 1:
        return None
    parts = connected_components(H)
    if len(parts) > 1:
        return CutWitness(frozenset(), parts.blocks[0])
    if k <= 1:
        return None
    budget = k - 1
    n = H.n
    order = H.sorted_vertices()

    # isolation: a small transversal of the link cuts v off
    for v in order:
        T = hitting_set_within(link(H, v).petals, budget)
        if T is not None and n - len(T) - 1 >= 1:
            return CutWitness(frozenset(T), frozenset([v]))

    return _grow_core(H, budget, order)


def _grow_core(H: Hypergraph, budget: int, order) -> CutWitness | None:
    edges = H.edges
    inc = H.incidence
    seed = max(order, key=lambda v: (len(inc[v]), -v))
    core = {seed}
    touched: set[int] = set()
    touch: dict[int, int] = {}
    heap: list = []
    pending: dict[int, int] = {}

    def admit(y):
        core.add(y)
        pending.pop(y, None)
        for ei in inc[y]:
            if ei in touched:
                continue
            touched.add(ei)
            for z in edges[ei]:
                if z not in core:
                    touch[z] = touch.get(z, 0) + 1
                    heapq.heappush(heap, (-touch[z], z))

    admit(seed)
    n = H.n
    while len(core) < n:
        progressed = False
        while heap:
            negc, z = heapq.heappop(heap)
            if z in core or -negc != touch[z]:
                continue
            if touch[z] > budget:
                petals = [frozenset(edges[ei]) - {z} for ei in inc[z] if ei in touched]
                if hitting_set_within(petals, budget) is None:
                    admit(z)
                    progressed = True
                    continue
            pending[z] = touch[z]
        if progressed:
            continue
        if not pending:
            # nothing touches the core: H is disconnected
            rest = frozenset(H.vertices - core)
            return CutWitness(frozenset(), rest)
        z = min(pending, key=lambda v: (-pending[v], v))
        S = _separate(H, z, frozenset(core), budget)
        if S is not None:
            return CutWitness(S, _component_of(H, z, S))
        admit(z)
    return None


def is_k_connected(H: Hypergraph, k: int) -> bool:
    """More than ``k`` vertices and connected after deleting any ``k - 1``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if H.n <= k:
        return False
    return find_separator(H, k) is None


def k_connectivity(H: Hypergraph, k: int) -> tuple[bool, CutWitness | None]:
    """``is_k_connected`` together with a witness when one exists."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    w = find_separator(H, k)
    return (H.n > k and w is None), w


def vertex_connectivity(H: Hypergraph) -> int:
    """Largest k for which H is k-connected (0 if disconnected).

    When no deletion can disconnect H the value is ``n - 1``.
    """
    n = H.n
    for k in range(1, n):
        if find_separator(H, k) is not None:
            return k - 1
    return max(n - 1, 0)


# --------------------------------------------------------------------------
# exhaustive checks

def brute_force_is_k_connected(H: Hypergraph, k: int, max_n: int = BRUTE_FORCE_MAX_N) -> bool:
    """Literal definition: try every (k-1)-subset of vertices."""
    if H.n > max_n:
        raise ScaleGuardError(f"brute force limited to n <= {max_n}, got {H.n}")
    if H.n <= k:
        return False
    for S in combinations(H.sorted_vertices(), k - 1):
        if not connected_components(delete_vertices(H, S)).is_connected():
            return False
    return True


def check_property_Q(H: Hypergraph, k: int, budget: int | None = None,
                     max_n: int = PROPERTY_Q_MAX_N, max_k: int = PROPERTY_Q_MAX_K) -> bool:
    """After deleting any ``k - 1`` vertices, one block misses at most ``budget``.

    ``budget`` defaults to ``ceil(ln n)``.
    """
    n = H.n
    if n > max_n or k > max_k:
        raise ScaleGuardError(
            f"property-Q check limited to n <= {max_n}, k <= {max_k}; got n={n}, k={k}")
    if budget is None:
        budget = math.ceil(math.log(n))
    need = (n - (k - 1)) - budget
    for S in combinations(H.sorted_vertices(), k - 1):
        if connected_components(delete_vertices(H, S)).largest < need:
            return False
    return True


def separated_pairs(H: Hypergraph) -> Iterable[tuple[int, int]]:
    """Vertex pairs that do not share an edge."""
    vs = H.sorted_vertices()
    for i, u in enumerate(vs):
        nb = H.neighbors(u)
        for w in vs[i + 1:]:
            if w not in nb:
                yield u, w
