"""Graphs, vertex subsets as bitmasks, and exhaustive desk-scale enumeration.

Vertex subsets and edge subsets are plain ints: bit i of a vertex mask is
vertex i, bit j of an edge mask is the edge with id j in the host graph's
canonical edge order.  All enumerations are deterministic: outputs are
sorted by (vertex mask, edge mask).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import CapExceeded

DEFAULT_CAP = 8

# --------------------------------------------------------------------------
# bitmask helpers


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits_of(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask` in ascending numeric order (includes 0 and mask)."""
    s = 0
    while True:
        yield s
        if s == mask:
            return
        s = (s - mask) & mask


# --------------------------------------------------------------------------
# host graphs


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a canonical edge order.

    Edge ids are positions in `edges`, which is sorted; every edge is stored
    with u < v.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self.edges != tuple(sorted(self.edges)):
            raise ValueError("edges must be sorted canonically")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def all_verts(self) -> int:
        return (1 << self.n) - 1

    @property
    def all_edges(self) -> int:
        return (1 << self.m) - 1

    def edge_id(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.edges.index((u, v))

    def edges_within(self, verts_mask: int) -> int:
        """Edge mask of edges with both endpoints inside `verts_mask`."""
        out = 0
        for j, (u, v) in enumerate(self.edges):
            if verts_mask >> u & 1 and verts_mask >> v & 1:
                out |= 1 << j
        return out

    def endpoints_mask(self, edge_mask: int) -> int:
        out = 0
        for j in iter_bits(edge_mask):
            u, v = self.edges[j]
            out |= (1 << u) | (1 << v)
        return out


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


@functools.lru_cache(maxsize=None)
def edges_within_table(g: Graph) -> tuple[int, ...]:
    """edges_within for every vertex mask, densely indexed (2^n entries)."""
    table = [0] * (1 << g.n)
    for j, (u, v) in enumerate(g.edges):
        bit = 1 << j
        pair = (1 << u) | (1 << v)
        for s in range(1 << g.n):
            if s & pair == pair:
                table[s] |= bit
    return tuple(table)


def check_cap(g: Graph, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if g.n > cap:
        raise CapExceeded(g.n, cap)


# --------------------------------------------------------------------------
# forests


class Forest(NamedTuple):
    """A forest of a host graph: vertex mask plus an acyclic edge mask."""

    verts: int
    edges: int


EMPTY_FOREST = Forest(0, 0)


def forest_components_count(f: Forest) -> int:
    # t = |V(F)| - |E(F)| for any forest
    return f.verts.bit_count() - f.edges.bit_count()


def is_valid_forest(g: Graph, f: Forest) -> bool:
    if f.verts & ~g.all_verts or f.edges & ~g.all_edges:
        return False
    if g.endpoints_mask(f.edges) & ~f.verts:
        return False
    return _is_acyclic(g, f.edges)


def _is_acyclic(g: Graph, edge_mask: int) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in iter_bits(edge_mask):
        u, v = g.edges[j]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def induced_subforest(g: Graph, f: Forest, verts_mask: int) -> Forest:
    """Restriction of `f` to `verts_mask`: kept vertices and interior edges."""
    keep = f.verts & verts_mask
    kept_edges = 0
    for j in iter_bits(f.edges):
        u, v = g.edges[j]
        if keep >> u & 1 and keep >> v & 1:
            kept_edges |= 1 << j
    return Forest(keep, kept_edges)


def components(g: Graph, f: Forest) -> list[Forest]:
    """Maximal connected subtrees of `f`, ordered by smallest vertex."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in iter_bits(f.verts)}
    for j in iter_bits(f.edges):
        u, v = g.edges[j]
        adj[u].append((v, j))
        adj[v].append((u, j))
    seen = 0
    out = []
    for start in iter_bits(f.verts):
        if seen >> start & 1:
            continue
        verts = 0
        edges = 0
        stack = [start]
        seen |= 1 << start
        while stack:
            x = stack.pop()
            verts |= 1 << x
            for y, j in adj[x]:
                edges |= 1 << j
                if not seen >> y & 1:
                    seen |= 1 << y
                    stack.append(y)
        out.append(Forest(verts, edges))
    return out


@functools.lru_cache(maxsize=None)
def _acyclic_edge_subsets(g: Graph, allowed: int) -> tuple[int, ...]:
    """All acyclic submasks of `allowed`, sorted ascending."""
    ids = bits_of(allowed)
    ends = [g.edges[j] for j in ids]
    results: list[int] = []

    def rec(i: int, mask: int, parent: tuple[int, ...]):
        results.append(mask)
        for k in range(i, len(ids)):
            u, v = ends[k]
            # find roots without mutation (parent is a tuple snapshot)
            ru = u
            while parent[ru] != ru:
                ru = parent[ru]
            rv = v
            while parent[rv] != rv:
                rv = parent[rv]
            if ru == rv:
                continue
            upd = list(parent)
            upd[ru] = rv
            rec(k + 1, mask | (1 << ids[k]), tuple(upd))

    rec(0, 0, tuple(range(g.n)))
    results.sort()
    return tuple(results)


@functools.lru_cache(maxsize=None)
def _enumerate_forests_cached(g: Graph) -> tuple[Forest, ...]:
    out = []
    within = edges_within_table(g)
    for vmask in range(1 << g.n):
        for emask in _acyclic_edge_subsets(g, within[vmask]):
            out.append(Forest(vmask, emask))
    return tuple(out)


def enumerate_forests(g: Graph, cap: int | None = None) -> tuple[Forest, ...]:
    """Every forest (S, A) of `g`, ordered by (vertex mask, edge mask).

    Includes the empty forest.  Vertices of S not covered by A are isolated
    vertices of the forest.
    """
    check_cap(g, cap)
    return _enumerate_forests_cached(g)


def enumerate_trees(g: Graph, cap: int | None = None) -> tuple[Forest, ...]:
    """Every single-component forest, including one-vertex trees."""
    check_cap(g, cap)
    return tuple(f for f in _enumerate_forests_cached(g)
                 if forest_components_count(f) == 1)


# --------------------------------------------------------------------------
# paths

PathSeq = tuple[int, ...]


def canonical_path(p: PathSeq) -> PathSeq:
    """A path equals its reversal; keep the lexicographically smaller tuple."""
    r = p[::-1]
    return p if p <= r else r


def is_valid_path(g: Graph, p: PathSeq) -> bool:
    if len(set(p)) != len(p):
        return False
    if any(not 0 <= v < g.n for v in p):
        return False
    eset = set(g.edges)
    return all((min(a, b), max(a, b)) in eset for a, b in zip(p, p[1:]))


@functools.lru_cache(maxsize=None)
def _enumerate_paths_cached(g: Graph) -> tuple[PathSeq, ...]:
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    found: set[PathSeq] = {()}

    def extend(seq: list[int], used: int):
        found.add(canonical_path(tuple(seq)))
        for w in adj[seq[-1]]:
            if not used >> w & 1:
                seq.append(w)
                extend(seq, used | (1 << w))
                seq.pop()

    for start in range(g.n):
        extend([start], 1 << start)
    return tuple(sorted(found, key=lambda p: (len(p), p)))


def enumerate_paths(g: Graph, cap: int | None = None) -> tuple[PathSeq, ...]:
    """All simple paths, one per reversal class, including () and singletons."""
    check_cap(g, cap)
    return _enumerate_paths_cached(g)


def path_to_forest(g: Graph, p: PathSeq) -> Forest:
    verts = mask_of(p)
    edges = 0
    for a, b in zip(p, p[1:]):
        edges |= 1 << g.edge_id(a, b)
    return Forest(verts, edges)


def tree_as_path(g: Graph, t: Forest) -> PathSeq | None:
    """The vertex sequence of `t` if it is path-shaped, else None.

    `t` must be a connected forest (a single tree) or empty.
    """
    if t.verts == 0:
        return ()
    verts = bits_of(t.verts)
    if len(verts) == 1:
        return (verts[0],)
    deg = {v: 0 for v in verts}
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for j in iter_bits(t.edges):
        u, v = g.edges[j]
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    ends = sorted(v for v in verts if deg[v] == 1)
    if any(deg[v] > 2 for v in verts) or len(ends) != 2:
        return None
    seq = [ends[0]]
    prev = -1
    while len(seq) < len(verts):
        nxt = [w for w in adj[seq[-1]] if w != prev]
        if not nxt:
            return None
        prev = seq[-1]
        seq.append(nxt[0])
    return canonical_path(tuple(seq))
