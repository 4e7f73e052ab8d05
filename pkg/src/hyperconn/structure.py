"""Exact packing/covering on the link of a vertex.

The link of ``v`` is the family of petals ``e - {v}`` over edges ``e`` at
``v``.  A quasi-disjoint set is a packing of petals (pairwise disjoint),
a transversal is a vertex set hitting every petal.  Both are solved
exactly; degrees near ``ln n`` keep the search small.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .hypergraph import Edge, Hypergraph

DEGREE_CAP = 32


class DegreeCapError(ValueError):
    pass


@dataclass(frozen=True)
class LinkSystem:
    center: int
    edges: tuple[Edge, ...]
    petals: tuple[frozenset, ...]

    @property
    def degree(self) -> int:
        return len(self.petals)


def link(H: Hypergraph, v: int) -> LinkSystem:
    edges = tuple(H.edges[i] for i in H.incidence[v])
    petals = tuple(frozenset(e) - {v} for e in edges)
    return LinkSystem(v, edges, petals)


def _check_cap(L: LinkSystem):
    if L.degree > DEGREE_CAP:
        raise DegreeCapError(
            f"vertex {L.center} has degree {L.degree} > cap {DEGREE_CAP}")


def _masks(petals):
    ground = sorted(set().union(*petals)) if petals else []
    bit = {x: 1 << i for i, x in enumerate(ground)}
    masks = []
    for p in petals:
        m = 0
        for x in p:
            m |= bit[x]
        masks.append(m)
    return ground, masks


# --------------------------------------------------------------------------
# packing

def max_packing(petals) -> tuple[int, tuple[int, ...]]:
    """Maximum family of pairwise disjoint petals.

    Returns ``(size, indices)`` with the lexicographically smallest index
    tuple among maximum packings.
    """
    _, masks = _masks(petals)
    L = len(masks)
    # greedy in index order is the first leaf of the include-first search
    used = 0
    greedy = 0
    for m in masks:
        if not m & used:
            used |= m
            greedy += 1
    best_size = greedy - 1
    best: tuple[int, ...] = ()
    chosen: list[int] = []

    def dfs(i, used):
        nonlocal best_size, best
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = tuple(chosen)
        if i == L:
            return
        compatible = sum(1 for j in range(i, L) if not masks[j] & used)
        if len(chosen) + compatible <= best_size:
            return
        if not masks[i] & used:
            chosen.append(i)
            dfs(i + 1, used | masks[i])
            chosen.pop()
        dfs(i + 1, used)

    dfs(0, 0)
    return best_size, best


def packing_at_least(petals, k: int) -> bool:
    """True iff some ``k`` petals are pairwise disjoint."""
    if k <= 0:
        return True
    if len(petals) < k:
        return False
    _, masks = _masks(petals)
    used = 0
    got = 0
    for m in masks:
        if not m & used:
            used |= m
            got += 1
            if got >= k:
                return True
    L = len(masks)

    def dfs(i, used, size):
        if size >= k:
            return True
        if L - i < k - size:
            return False
        if not masks[i] & used and dfs(i + 1, used | masks[i], size + 1):
            return True
        return dfs(i + 1, used, size)

    return dfs(0, 0, 0)


# --------------------------------------------------------------------------
# covering

def hitting_set_within(petals, budget: int):
    """A set of at most ``budget`` vertices meeting every petal, or None.

    Bounded search tree: branch on the members of the first petal not yet
    hit.  Exact, cost ``O(r**budget)`` for petals of size ``r``.
    """
    petals = [sorted(p) for p in petals]
    chosen: list[int] = []

    def rec(budget):
        for p in petals:
            if not any(x in chosen for x in p):
                break
        else:
            return list(chosen)
        if budget == 0 or not p:
            return None
        for x in p:
            chosen.append(x)
            got = rec(budget - 1)
            chosen.pop()
            if got is not None:
                return got
        return None

    return rec(budget)


def min_hitting_set(petals) -> tuple[int, tuple[int, ...]]:
    """Minimum transversal of a family; lexicographically smallest witness."""
    if not petals:
        return 0, ()
    ground, masks = _masks(petals)
    full_masks = list(masks)

    def packing_lb(unhit):
        used = 0
        got = 0
        for m in unhit:
            if not m & used:
                used |= m
                got += 1
        return got

    # size: branch on the first unhit petal
    best = len(masks)

    def size_dfs(unhit, chosen):
        nonlocal best
        if not unhit:
            best = min(best, chosen)
            return
        if chosen + packing_lb(unhit) >= best:
            return
        first = unhit[0]
        bits = first
        while bits:
            b = bits & -bits
            bits ^= b
            size_dfs([m for m in unhit if not m & b], chosen + 1)

    size_dfs(full_masks, 0)
    t = best

    # lexicographically smallest t-set: include-first over sorted ground set
    G = len(ground)
    chosen: list[int] = []

    def lex_dfs(i, unhit):
        if not unhit:
            return True
        if len(chosen) + packing_lb(unhit) > t or i == G:
            return False
        remaining = (1 << G) - (1 << i)
        if any(not m & remaining for m in unhit):
            return False
        b = 1 << i
        if len(chosen) < t:
            chosen.append(ground[i])
            if lex_dfs(i + 1, [m for m in unhit if not m & b]):
                return True
            chosen.pop()
        return lex_dfs(i + 1, unhit)

    lex_dfs(0, full_masks)
    return t, tuple(chosen)


# --------------------------------------------------------------------------
# vertex-level API

def max_quasi_disjoint(H: Hypergraph, v: int) -> tuple[int, tuple[Edge, ...]]:
    """Largest set of edges at ``v`` whose pairwise intersections are ``{v}``."""
    L = link(H, v)
    _check_cap(L)
    size, idx = max_packing(L.petals)
    return size, tuple(L.edges[i] for i in idx)


def min_transversal(H: Hypergraph, v: int) -> tuple[int, tuple[int, ...]]:
    """Smallest vertex set (not containing ``v``) meeting every edge at ``v``.

    Deleting the returned set isolates ``v``.  Degree 0 gives ``(0, ())``.
    """
    L = link(H, v)
    _check_cap(L)
    return min_hitting_set(L.petals)


def has_quasi_disjoint(H: Hypergraph, v: int, k: int) -> bool:
    """``max_quasi_disjoint(H, v) >= k`` without the degree cap."""
    return packing_at_least(link(H, v).petals, k)


@dataclass(frozen=True)
class QuasiProfile:
    """Counts of vertices by (max quasi-disjoint size j, excess degree l)."""

    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def mass(self, pred) -> int:
        return sum(c for (j, l), c in self.counts.items() if pred(j, l))

    def low_quasi_mass(self, k: int) -> int:
        # vertices with j <= k-1 and l >= 1
        return self.mass(lambda j, l: j <= k - 1 and l >= 1)


def quasi_profile(H: Hypergraph) -> QuasiProfile:
    tally: Counter = Counter()
    for v in H.sorted_vertices():
        deg = H.degree(v)
        j, _ = max_quasi_disjoint(H, v)
        tally[(j, deg - j)] += 1
    return QuasiProfile(dict(sorted(tally.items())))
