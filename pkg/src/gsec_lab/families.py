"""Membership oracles for families of forests, trees, and paths.

Families are immutable values; membership is a pure predicate.  Structural
checks (downward closure, edge-consistency, vertex-consistency) run by
exhaustive enumeration below the cap and return certificates on failure.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams, InternalMismatch, InvalidDemand
from .graphs import (
    DEFAULT_CAP,
    Forest,
    Graph,
    PathSeq,
    canonical_path,
    check_cap,
    components,
    enumerate_forests,
    enumerate_paths,
    enumerate_trees,
    iter_bits,
    tree_as_path,
)
from .setfuncs import SetFunction, as_fraction

# --------------------------------------------------------------------------
# BRP route feasibility: two interchangeable evaluators


def _check_demands(d, Q):
    if Q <= 0:
        raise BadParams("Q must be positive")
    for v, dv in enumerate(d):
        if abs(dv) > Q:
            raise InvalidDemand(f"|d_{v}| = {abs(dv)} exceeds Q = {Q}")


def brp_band_feasible(d, Q, p: PathSeq) -> bool:
    """Feasible iff the prefix-sum band never exceeds Q.

    Checks max(D(0..i)) - min(D(0..i)) <= Q at every stop i, where D is the
    running demand along the path.
    """
    _check_demands(d, Q)
    running = Fraction(0)
    hi = lo = Fraction(0)
    for v in p:
        running += d[v]
        hi = max(hi, running)
        lo = min(lo, running)
        if hi - lo > Q:
            return False
    return True


def brp_interval_feasible(d, Q, p: PathSeq) -> bool:
    """Feasible iff every contiguous interval has |demand sum| <= Q."""
    _check_demands(d, Q)
    prefix = [Fraction(0)]
    for v in p:
        prefix.append(prefix[-1] + d[v])
    for i in range(len(p)):
        for j in range(i + 1, len(p) + 1):
            if abs(prefix[j] - prefix[i]) > Q:
                return False
    return True


def brp_path_feasible(d, Q, p: PathSeq) -> bool:
    """Runs both evaluators; they must agree."""
    a = brp_band_feasible(d, Q, p)
    b = brp_interval_feasible(d, Q, p)
    if a != b:
        raise InternalMismatch(
            f"BRP evaluators disagree on {p}: band={a} intervals={b}")
    return a


# --------------------------------------------------------------------------
# path families


@dataclass(frozen=True)
class PathFamilyBase:
    host: Graph

    def contains_path(self, p: PathSeq) -> bool:
        raise NotImplementedError

    def contains_tree(self, t: Forest) -> bool:
        """Treat a path-shaped tree as a member candidate."""
        seq = tree_as_path(self.host, t)
        return seq is not None and self.contains_path(seq)


@dataclass(frozen=True)
class ExplicitPaths(PathFamilyBase):
    paths: frozenset[PathSeq]

    def __post_init__(self):
        for p in self.paths:
            if canonical_path(p) != p:
                raise BadParams(f"path {p} is not stored canonically")

    def contains_path(self, p: PathSeq) -> bool:
        return canonical_path(tuple(p)) in self.paths


@dataclass(frozen=True)
class BrpPaths(PathFamilyBase):
    """Bike-rebalancing routes: every contiguous interval sum within [-Q, Q]."""

    d: tuple[Fraction, ...]
    Q: Fraction

    def __post_init__(self):
        _check_demands(self.d, self.Q)

    def contains_path(self, p: PathSeq) -> bool:
        return brp_path_feasible(self.d, self.Q, tuple(p))


@dataclass(frozen=True)
class CvrpPaths(PathFamilyBase):
    """Capacitated routes: total demand of the path at most Q."""

    d: tuple[Fraction, ...]
    Q: Fraction

    def __post_init__(self):
        if self.Q <= 0:
            raise BadParams("Q must be positive")
        if any(x < 0 for x in self.d):
            raise BadParams("CVRP demands must be nonnegative")

    def contains_path(self, p: PathSeq) -> bool:
        return sum((self.d[v] for v in p), Fraction(0)) <= self.Q


PathFamily = ExplicitPaths | BrpPaths | CvrpPaths


# --------------------------------------------------------------------------
# tree families


@dataclass(frozen=True)
class TreeFamilyBase:
    host: Graph

    def contains_tree(self, t: Forest) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitTrees(TreeFamilyBase):
    trees: frozenset[Forest]

    def contains_tree(self, t: Forest) -> bool:
        return t in self.trees


@dataclass(frozen=True)
class ThetaTrees(TreeFamilyBase):
    """Trees all of whose subtrees T' satisfy g(V(T')) <= 1."""

    g: SetFunction

    def contains_tree(self, t: Forest) -> bool:
        return _theta_tree_ok(self, t)


@functools.lru_cache(maxsize=None)
def _theta_tree_ok(tf: ThetaTrees, t: Forest) -> bool:
    if t.verts == 0:
        return True
    g0 = tf.host
    ends = [g0.edges[j] for j in iter_bits(t.edges)]
    # vertex sets of subtrees = subsets of V(T) connected inside T
    sub = 0
    while True:
        sub = (sub - t.verts) & t.verts
        if sub == 0:
            break
        inner = sum(1 for u, v in ends if sub >> u & 1 and sub >> v & 1)
        if sub.bit_count() - inner == 1 and tf.g.eval(sub) > 1:
            return False
    return True


TreeFamily = ExplicitTrees | ThetaTrees


# --------------------------------------------------------------------------
# forest families


@dataclass(frozen=True)
class ForestFamilyBase:
    host: Graph

    def contains(self, f: Forest) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Omega(ForestFamilyBase):
    """All forests of the host graph."""

    def contains(self, f: Forest) -> bool:
        return True


@dataclass(frozen=True)
class ExplicitForests(ForestFamilyBase):
    forests: frozenset[Forest]

    def contains(self, f: Forest) -> bool:
        return f in self.forests


@dataclass(frozen=True)
class EdgeMaskFamily(ForestFamilyBase):
    """Membership determined by the edge set alone (edge-consistent by
    construction); used for explicit families given as indicator sets."""

    masks: frozenset[int]

    def contains(self, f: Forest) -> bool:
        return f.edges in self.masks


@dataclass(frozen=True)
class Cmst(ForestFamilyBase):
    """Forests whose component trees each carry total demand at most Q."""

    d: tuple[Fraction, ...]
    Q: Fraction

    def contains(self, f: Forest) -> bool:
        for part in components(self.host, f):
            if sum((self.d[v] for v in iter_bits(part.verts)), Fraction(0)) > self.Q:
                return False
        return True


@dataclass(frozen=True)
class DegreeBounded(ForestFamilyBase):
    """Forests with deg_F(v) <= b_v for every vertex of the forest."""

    b: tuple[int, ...]

    def contains(self, f: Forest) -> bool:
        deg = [0] * self.host.n
        for j in iter_bits(f.edges):
            u, v = self.host.edges[j]
            deg[u] += 1
            deg[v] += 1
            if deg[u] > self.b[u] or deg[v] > self.b[v]:
                return False
        return True


@dataclass(frozen=True)
class TreeClosure(ForestFamilyBase):
    """F(T): forests whose every component tree belongs to the tree family.

    The empty forest is always a member.  A path family may serve as the
    tree family; non-path trees are then never members.
    """

    trees: TreeFamily | PathFamily

    def contains(self, f: Forest) -> bool:
        return all(self.trees.contains_tree(t)
                   for t in components(self.host, f))


@dataclass(frozen=True)
class PathRestriction(ForestFamilyBase):
    """base intersected with the forests whose components are all paths."""

    base: ForestFamilyBase

    def contains(self, f: Forest) -> bool:
        if not all(tree_as_path(self.host, t) is not None
                   for t in components(self.host, f)):
            return False
        return self.base.contains(f)


ForestFamily = (Omega | ExplicitForests | EdgeMaskFamily | Cmst
                | DegreeBounded | TreeClosure | PathRestriction)


def path_forests(host: Graph) -> PathRestriction:
    """C_path: every forest whose components are paths."""
    return PathRestriction(host, Omega(host))


def brp_forest_family(host: Graph, d, Q) -> TreeClosure:
    """F(R_brp): forests whose components are feasible rebalancing routes."""
    return TreeClosure(host, BrpPaths(host, tuple(as_fraction(x) for x in d),
                                      as_fraction(Q)))


# --------------------------------------------------------------------------
# enumeration-backed member sets and structural checks


@functools.lru_cache(maxsize=None)
def family_members(fam: ForestFamilyBase, cap: int | None = None) -> tuple[Forest, ...]:
    """All members of the family, in canonical forest order."""
    return tuple(f for f in enumerate_forests(fam.host, cap) if fam.contains(f))


@functools.lru_cache(maxsize=None)
def family_member_set(fam: ForestFamilyBase, cap: int | None = None) -> frozenset[Forest]:
    return frozenset(family_members(fam, cap))


def cover_subgraphs(g: Graph, f: Forest) -> list[Forest]:
    """Maximal proper subgraphs: drop one edge, or one isolated vertex.

    Every proper subgraph is reachable through a chain of these covers.
    """
    out = []
    for j in iter_bits(f.edges):
        out.append(Forest(f.verts, f.edges & ~(1 << j)))
    isolated = f.verts & ~g.endpoints_mask(f.edges)
    for v in iter_bits(isolated):
        out.append(Forest(f.verts & ~(1 << v), f.edges))
    return out


def is_downward_closed(fam: ForestFamilyBase, cap: int | None = None):
    """(verdict, certificate): the certificate is a member together with a
    maximal proper subgraph that falls outside the family."""
    member_set = family_member_set(fam, cap)
    for f in family_members(fam, cap):
        for sub in cover_subgraphs(fam.host, f):
            if sub not in member_set:
                return False, (f, sub)
    return True, None


def is_edge_consistent(fam: ForestFamilyBase, cap: int | None = None):
    """(verdict, certificate): forests with equal edge sets must agree on
    membership; the certificate is a disagreeing (member, non-member) pair."""
    member_set = family_member_set(fam, cap)
    first_in: dict[int, Forest] = {}
    first_out: dict[int, Forest] = {}
    for f in enumerate_forests(fam.host, cap):
        side = first_in if f in member_set else first_out
        side.setdefault(f.edges, f)
    for emask in sorted(first_in.keys() & first_out.keys()):
        return False, (first_in[emask], first_out[emask])
    return True, None


def edge_consistent_closure(fam: ForestFamilyBase, cap: int | None = None) -> EdgeMaskFamily:
    """The unique edge-consistent family with the same incidence vectors."""
    masks = frozenset(f.edges for f in family_members(fam, cap))
    return EdgeMaskFamily(fam.host, masks)


def is_vertex_consistent(fam, cap: int | None = None):
    """(verdict, certificate): membership must depend only on the vertex set.

    Dispatches on the family species: forest families compare forests,
    tree families compare trees, path families compare path tuples (the
    paper's permutation invariance).
    """
    host = fam.host
    check_cap(host, cap)
    if isinstance(fam, PathFamilyBase):
        universe = enumerate_paths(host, cap)
        key = lambda p: sum(1 << v for v in p)
        member = fam.contains_path
    elif isinstance(fam, TreeFamilyBase):
        universe = enumerate_trees(host, cap)
        key = lambda t: t.verts
        member = fam.contains_tree
    else:
        universe = enumerate_forests(host, cap)
        key = lambda f: f.verts
        member = fam.contains
    first_in: dict[int, object] = {}
    first_out: dict[int, object] = {}
    for obj in universe:
        side = first_in if member(obj) else first_out
        side.setdefault(key(obj), obj)
    for vmask in sorted(first_in.keys() & first_out.keys()):
        return False, (first_in[vmask], first_out[vmask])
    return True, None


def path_family_members(fam, cap: int | None = None) -> tuple[PathSeq, ...]:
    return tuple(p for p in enumerate_paths(fam.host, cap) if fam.contains_path(p))


def contains_trivial_paths(fam, cap: int | None = None) -> bool:
    """The standing assumption: the empty path and all singletons are members."""
    if not fam.contains_path(()):
        return False
    return all(fam.contains_path((v,)) for v in range(fam.host.n))


def is_subpath_closed(fam, cap: int | None = None):
    """Closure under contiguous subpaths (subgraphs that are paths)."""
    for p in path_family_members(fam, cap):
        for i in range(len(p)):
            for j in range(i, len(p) + 1):
                if not fam.contains_path(p[i:j]):
                    return False, (p, p[i:j])
    return True, None


def is_subsequence_closed(fam, cap: int | None = None):
    """Closure under arbitrary subsequences (the stronger tuple sense)."""
    for p in path_family_members(fam, cap):
        sub = 0
        full = (1 << len(p)) - 1
        while sub != full:
            sub = (sub - full) & full
            q = tuple(p[i] for i in range(len(p)) if sub >> i & 1)
            if not fam.contains_path(q):
                return False, (p, q)
    return True, None
