"""Signed digraphs and signed graphs of sign patterns.

The digraph of an ``n x n`` pattern has an arc ``(i, j)`` for every nonzero
entry, loops included. A combinatorially symmetric pattern also has an
undirected graph whose edge ``{i, j}`` carries the sign of ``p_ij * p_ji``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceededError, PreconditionError
from .pattern import Sign, SignPattern, is_combinatorially_symmetric

__all__ = [
    "SignedDigraph",
    "SignedUGraph",
    "SimpleCycle",
    "CompositeCycle",
    "MaximalSignedPath",
    "GraphMetrics",
    "simple_cycles",
    "composite_cycles",
    "composite_sign_table",
    "max_composite_cycle_length",
    "maximal_signed_paths",
    "signed_runs",
    "matchings",
    "max_matching",
    "undirected_cycles",
    "graph_metrics",
]


@dataclass(frozen=True)
class SimpleCycle:
    """Directed simple cycle, rotated so the smallest vertex comes first.

    ``product_sign`` is the product of the arc signs. ``cycle_sign`` is the
    sign the cycle contributes to a principal minor, ``(-1)**(l-1)`` times
    the product; for a loop both agree with the diagonal entry.
    """

    vertices: tuple[int, ...]
    product_sign: Sign

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def cycle_sign(self) -> Sign:
        flip = -1 if (self.length - 1) % 2 else 1
        return Sign(flip * self.product_sign.value)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[k], v[(k + 1) % len(v)]) for k in range(len(v))]

    @property
    def mask(self) -> int:
        m = 0
        for v in self.vertices:
            m |= 1 << v
        return m

    @property
    def is_odd(self) -> bool:
        return self.length % 2 == 1

    def __str__(self) -> str:
        return "(" + ",".join(str(v + 1) for v in self.vertices) + ")"


@dataclass(frozen=True)
class CompositeCycle:
    """Vertex-disjoint simple cycles, ordered by smallest vertex."""

    parts: tuple[SimpleCycle, ...]

    def __post_init__(self):
        parts = tuple(sorted(self.parts, key=lambda c: c.vertices))
        seen: set[int] = set()
        for c in parts:
            if seen & set(c.vertices):
                raise PreconditionError("cycles of a composite cycle must be vertex-disjoint")
            seen |= set(c.vertices)
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return sum(c.length for c in self.parts)

    @property
    def sign(self) -> Sign:
        s = 1
        for c in self.parts:
            s *= c.cycle_sign.value
        return Sign(s)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.parts for v in c.vertices)

    @property
    def mask(self) -> int:
        m = 0
        for c in self.parts:
            m |= c.mask
        return m

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [a for c in self.parts for a in c.arcs]

    def __str__(self) -> str:
        return "".join(str(c) for c in self.parts)


@dataclass(frozen=True)
class MaximalSignedPath:
    """Maximal run of equally signed consecutive edges."""

    edges: tuple[tuple[int, int], ...]
    sign: Sign

    @property
    def length(self) -> int:
        return len(self.edges)


class SignedDigraph:
    """Arc-signed digraph of a square pattern (loops included)."""

    def __init__(self, pattern: SignPattern):
        self.pattern = pattern
        self.n = pattern.n
        a = pattern.array
        self.out = [[int(j) for j in np.flatnonzero(a[i])] for i in range(self.n)]

    def sign(self, i: int, j: int) -> Sign:
        return self.pattern[i, j]

    def induced(self, vertices) -> tuple["SignedDigraph", list[int]]:
        """Induced subdigraph and the map from its vertices to ours."""
        keep = sorted(vertices)
        sub = SignPattern(self.pattern.array[np.ix_(keep, keep)]) if keep else None
        return (SignedDigraph(sub) if sub is not None else None), keep

    @cached_property
    def cycles(self) -> list[SimpleCycle]:
        return simple_cycles(self)


class SignedUGraph:
    """Edge-signed simple graph of a combinatorially symmetric pattern."""

    def __init__(self, n: int, edges: dict[tuple[int, int], Sign]):
        self.n = n
        self.edges = {(min(e), max(e)): Sign.of(s) for e, s in edges.items()}
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in sorted(self.edges):
            self.adj[i].append(j)
            self.adj[j].append(i)
        for nb in self.adj:
            nb.sort()

    @classmethod
    def from_pattern(cls, p: SignPattern) -> "SignedUGraph":
        if not is_combinatorially_symmetric(p):
            raise PreconditionError("signed graph requires a combinatorially symmetric pattern")
        a = p.array
        n = p.n
        edges = {
            (i, j): Sign(int(a[i, j]) * int(a[j, i]))
            for i in range(n)
            for j in range(i + 1, n)
            if a[i, j] != 0
        }
        return cls(n, edges)

    def sign(self, i: int, j: int) -> Sign:
        return self.edges[(min(i, j), max(i, j))]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(_bfs(self.adj, [0])) == self.n


def _as_digraph(d) -> SignedDigraph:
    return d if isinstance(d, SignedDigraph) else SignedDigraph(d)


def _as_ugraph(g) -> SignedUGraph:
    return g if isinstance(g, SignedUGraph) else SignedUGraph.from_pattern(g)


def _bfs(adj, sources, allowed=None) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    q = deque(sources)
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist and (allowed is None or v in allowed):
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


# --------------------------------------------------------------------------
# cycles in the digraph


def simple_cycles(d, max_len: int | None = None) -> list[SimpleCycle]:
    """All simple cycles of the digraph, loops included.

    Cycles are listed by smallest vertex, then in depth-first order with
    neighbours visited in increasing order.
    """
    d = _as_digraph(d)
    a = d.pattern.array
    limit = d.n if max_len is None else max_len
    out: list[SimpleCycle] = []
    for s in range(d.n):
        if a[s, s] != 0 and limit >= 1:
            out.append(SimpleCycle((s,), Sign(int(a[s, s]))))
        path = [s]
        on_path = {s}

        def extend(u: int, prod: int) -> None:
            for v in d.out[u]:
                if v == s and len(path) >= 2:
                    out.append(SimpleCycle(tuple(path), Sign(prod * int(a[u, s]))))
                elif v > s and v not in on_path and len(path) < limit:
                    path.append(v)
                    on_path.add(v)
                    extend(v, prod * int(a[u, v]))
                    path.pop()
                    on_path.discard(v)

        extend(s, 1)
    return out


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(f"composite cycle enumeration not computed: order {n} exceeds cap {cap}")


def composite_cycles(d, exact_len: int | None = None, cap: int = 12) -> Iterator[CompositeCycle]:
    """Lazily enumerate composite cycles, optionally of one exact length.

    The order is deterministic: lexicographic in the indices of the parts
    within :func:`simple_cycles`.
    """
    d = _as_digraph(d)
    _check_cap(d.n, cap)
    cycles = d.cycles
    target = exact_len

    def rec(start: int, mask: int, length: int, chosen: list[SimpleCycle]):
        if chosen and (target is None or length == target):
            yield CompositeCycle(tuple(chosen))
        for k in range(start, len(cycles)):
            c = cycles[k]
            if c.mask & mask:
                continue
            if target is not None and length + c.length > target:
                continue
            chosen.append(c)
            yield from rec(k + 1, mask | c.mask, length + c.length, chosen)
            chosen.pop()

    return rec(0, 0, 0, [])


def composite_sign_table(d, cap: int = 12) -> dict[int, set[int]]:
    """Map each vertex bitmask to the signs of composite cycles covering it.

    Only masks covered by at least one composite cycle appear; the empty
    mask maps to ``{1}``. Built by dynamic programming on the smallest
    vertex of each mask, so it is much cheaper than listing composites.
    """
    d = _as_digraph(d)
    _check_cap(d.n, cap)
    by_min: dict[int, list[tuple[int, int]]] = {}
    for c in d.cycles:
        by_min.setdefault(c.vertices[0], []).append((c.mask, c.cycle_sign.value))
    table: dict[int, set[int]] = {0: {1}}
    for mask in range(1, 1 << d.n):
        low = (mask & -mask).bit_length() - 1
        signs: set[int] = set()
        for cm, cs in by_min.get(low, ()):
            if cm & ~mask:
                continue
            rest = table.get(mask ^ cm)
            if rest:
                signs.update(cs * s for s in rest)
                if len(signs) == 2:
                    break
        if signs:
            table[mask] = signs
    return table


def composite_signs_by_length(d, cap: int = 12) -> dict[int, set[int]]:
    """Signs of composite cycles grouped by length (lengths >= 1 only)."""
    out: dict[int, set[int]] = {}
    for mask, signs in composite_sign_table(d, cap).items():
        if mask:
            out.setdefault(bin(mask).count("1"), set()).update(signs)
    return out


def max_composite_cycle_length(d, cap: int = 12) -> int:
    """Largest length of a composite cycle (0 if the digraph is acyclic)."""
    table = composite_sign_table(d, cap)
    return max(bin(m).count("1") for m in table)


# --------------------------------------------------------------------------
# undirected graphs


def signed_runs(edges: Sequence[tuple[int, int]], signs: Sequence[Sign], cyclic: bool) -> list[MaximalSignedPath]:
    """Split consecutive edges into maximal equally signed runs.

    For a cyclic sequence whose edges all share one sign the single run
    starts at ``edges[0]``. Otherwise a cyclic sequence is rotated so that
    a run boundary falls at the start.
    """
    m = len(edges)
    if m == 0:
        return []
    order = list(range(m))
    if cyclic and len(set(signs)) > 1:
        k = next(k for k in range(m) if signs[k] != signs[k - 1])
        order = order[k:] + order[:k]
    runs: list[MaximalSignedPath] = []
    cur = [order[0]]
    for idx in order[1:]:
        if signs[idx] == signs[cur[-1]]:
            cur.append(idx)
        else:
            runs.append(MaximalSignedPath(tuple(edges[i] for i in cur), signs[cur[0]]))
            cur = [idx]
    runs.append(MaximalSignedPath(tuple(edges[i] for i in cur), signs[cur[0]]))
    return runs


def walk_cycle(g: SignedUGraph, vertices=None) -> list[int]:
    """Vertex order around a cycle: smallest vertex, then its smaller neighbour."""
    verts = set(range(g.n)) if vertices is None else set(vertices)
    start = min(verts)
    nbrs = [v for v in g.adj[start] if v in verts]
    order = [start, min(nbrs)]
    while len(order) < len(verts):
        u = order[-1]
        nxt = [v for v in g.adj[u] if v in verts and v != order[-2]]
        order.append(nxt[0])
    return order


def cycle_edge_sequence(g: SignedUGraph, order: Sequence[int]) -> tuple[list[tuple[int, int]], list[Sign]]:
    k = len(order)
    edges = [(min(order[i], order[(i + 1) % k]), max(order[i], order[(i + 1) % k])) for i in range(k)]
    return edges, [g.edges[e] for e in edges]


def maximal_signed_paths(g) -> list[MaximalSignedPath]:
    """Maximal signed paths of a path graph or a cycle graph."""
    g = _as_ugraph(g)
    n = g.n
    degs = [g.degree(v) for v in range(n)]
    if not g.is_connected() or n < 2:
        raise PreconditionError("maximal signed paths need a connected path or cycle graph")
    if len(g.edges) == n - 1 and max(degs) <= 2:
        start = min(v for v in range(n) if degs[v] == 1)
        order = [start]
        prev = -1
        while len(order) < n:
            u = order[-1]
            nxt = [v for v in g.adj[u] if v != prev]
            prev = u
            order.append(nxt[0])
        edges = [(min(order[i], order[i + 1]), max(order[i], order[i + 1])) for i in range(n - 1)]
        return signed_runs(edges, [g.edges[e] for e in edges], cyclic=False)
    if len(g.edges) == n and all(x == 2 for x in degs):
        edges, signs = cycle_edge_sequence(g, walk_cycle(g))
        return signed_runs(edges, signs, cyclic=True)
    raise PreconditionError("maximal signed paths are defined only for path and cycle graphs")


def matchings(g, sign_filter: Sign | None = None, within=None) -> Iterator[tuple[tuple[int, int], ...]]:
    """All matchings (empty one first) using edges of the given sign.

    ``within`` restricts both endpoints to a vertex set.
    """
    g = _as_ugraph(g)
    allowed = None if within is None else set(within)
    edges = [
        e
        for e in sorted(g.edges)
        if (sign_filter is None or g.edges[e] == sign_filter)
        and (allowed is None or (e[0] in allowed and e[1] in allowed))
    ]

    def rec(start: int, used: int, chosen: list[tuple[int, int]]):
        yield tuple(chosen)
        for k in range(start, len(edges)):
            i, j = edges[k]
            bit = (1 << i) | (1 << j)
            if used & bit:
                continue
            chosen.append(edges[k])
            yield from rec(k + 1, used | bit, chosen)
            chosen.pop()

    return rec(0, 0, [])


def max_matching(g, sign_filter: Sign | None = None, within=None) -> tuple[tuple[int, int], ...]:
    """A maximum matching; the first one found in enumeration order."""
    best: tuple[tuple[int, int], ...] = ()
    for m in matchings(g, sign_filter, within):
        if len(m) > len(best):
            best = m
    return best


def undirected_cycles(g) -> list[tuple[int, ...]]:
    """Simple cycles of length >= 3, each listed once.

    Each starts at its smallest vertex and is oriented so that the second
    vertex is smaller than the last.
    """
    g = _as_ugraph(g)
    out: list[tuple[int, ...]] = []
    for s in range(g.n):
        path = [s]
        on_path = {s}

        def extend(u: int) -> None:
            for v in g.adj[u]:
                if v == s and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(path))
                elif v > s and v not in on_path:
                    path.append(v)
                    on_path.add(v)
                    extend(v)
                    path.pop()
                    on_path.discard(v)

        extend(s)
    return out


@dataclass
class GraphMetrics:
    """Distances and cycle data of a connected signed graph."""

    leaves: list[int]
    distances: np.ndarray
    cycles: list[tuple[int, ...]]
    path_adjacent: dict[tuple[int, int], int] = field(default_factory=dict)
    leaf_cycle_distances: dict[tuple[int, int], int] = field(default_factory=dict)


def graph_metrics(g) -> GraphMetrics:
    """Leaves, BFS distances, cycles, path-adjacent cycle pairs, leaf distances.

    Two distinct cycles are path-adjacent when a path joins them whose
    interior avoids every cycle vertex; the recorded distance is the length
    of the shortest such path, 0 if the cycles share a vertex. Keys of
    ``path_adjacent`` are index pairs into ``cycles``.
    """
    g = _as_ugraph(g)
    if not g.is_connected():
        raise PreconditionError("graph metrics require a connected graph")
    n = g.n
    dist = np.full((n, n), -1, dtype=int)
    for s in range(n):
        for v, dv in _bfs(g.adj, [s]).items():
            dist[s, v] = dv
    leaves = [v for v in range(n) if g.degree(v) == 1]
    cycles = undirected_cycles(g)
    on_cycle = set(v for c in cycles for v in c)
    adjacent: dict[tuple[int, int], int] = {}
    for a in range(len(cycles)):
        va = set(cycles[a])
        for b in range(a + 1, len(cycles)):
            vb = set(cycles[b])
            if va & vb:
                adjacent[(a, b)] = 0
                continue
            d = _cycle_gap(g, va, vb, on_cycle)
            if d is not None:
                adjacent[(a, b)] = d
    leaf_dist = {
        (leaf, c): int(min(dist[leaf, v] for v in cycles[c])) for leaf in leaves for c in range(len(cycles))
    }
    return GraphMetrics(leaves, dist, cycles, adjacent, leaf_dist)


def _cycle_gap(g: SignedUGraph, va: set[int], vb: set[int], on_cycle: set[int]) -> int | None:
    dist = {u: 0 for u in va}
    q = deque(va)
    best = None
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if w in vb:
                cand = dist[u] + 1
                best = cand if best is None else min(best, cand)
            elif w not in on_cycle and w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return best
