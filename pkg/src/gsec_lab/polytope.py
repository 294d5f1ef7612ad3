"""The GSEC polytope P(f; G) = {x in [0,1]^E : x(S) <= |S| - f(S) for all S}.

Integer-point queries run by enumeration; fractional questions (maximizing
x(S), deciding containment between two GSEC polytopes) run through the
exact simplex, so every verdict is a theorem about the rational polytope,
not a tolerance call.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams, CapExceeded
from .graphs import (
    Forest,
    Graph,
    _acyclic_edge_subsets,
    check_cap,
    edges_within_table,
)
from .families import ForestFamilyBase, family_members
from .setfuncs import RhsTable
from .simplex import simplex_max


@dataclass(frozen=True)
class GsecPolytope:
    host: Graph
    rhs: RhsTable

    def __post_init__(self):
        if self.rhs.host != self.host:
            raise BadParams("rhs table built for a different host")


def indicator_in_polytope(p: GsecPolytope, f: Forest | int):
    """(verdict, violating S): does the 0/1 vector of the edge set satisfy
    every GSEC?  On failure returns the smallest violating vertex mask."""
    emask = f.edges if isinstance(f, Forest) else f
    within = edges_within_table(p.host)
    for s in range(1, 1 << p.host.n):
        if (emask & within[s]).bit_count() > s.bit_count() - p.rhs[s]:
            return False, s
    return True, None


@functools.lru_cache(maxsize=None)
def integer_points(p: GsecPolytope, cap: int | None = None) -> tuple[int, ...]:
    """Edge masks of the 0/1 points of P(f), deduplicated, ascending.

    GSECs imply SECs, so only acyclic edge sets can qualify; the scan
    variant below verifies this claim independently.
    """
    check_cap(p.host, cap)
    out = []
    for emask in _acyclic_edge_subsets(p.host, p.host.all_edges):
        ok, _ = indicator_in_polytope(p, emask)
        if ok:
            out.append(emask)
    return tuple(out)


def integer_points_scan(p: GsecPolytope, max_edges: int = 20) -> tuple[int, ...]:
    """All 0/1 vectors satisfying the GSECs, with no acyclicity assumption."""
    m = p.host.m
    if m > max_edges:
        raise CapExceeded(m, max_edges)
    out = []
    for emask in range(1 << m):
        ok, _ = indicator_in_polytope(p, emask)
        if ok:
            out.append(emask)
    return tuple(out)


def represents(p: GsecPolytope, fam: ForestFamilyBase, cap: int | None = None):
    """(verdict, certificate): is the incidence-vector set of the family
    exactly the set of integer points of P(f)?

    The certificate is either ("extra_integer_point", edge mask) for a point
    of P(f) outside the family, or ("violating_gsec", member, S, lhs, rhs)
    for a member cut off by a GSEC.
    """
    if fam.host != p.host:
        raise BadParams("family and polytope host differ")
    pts = set(integer_points(p, cap))
    member_masks = {f.edges for f in family_members(fam, cap)}
    if pts == member_masks:
        return True, None
    extra = sorted(pts - member_masks)
    if extra:
        return False, ("extra_integer_point", extra[0])
    missing = min(member_masks - pts)
    _, s = indicator_in_polytope(p, missing)
    within = edges_within_table(p.host)
    lhs = (missing & within[s]).bit_count()
    return False, ("violating_gsec", missing, s, lhs, s.bit_count() - p.rhs[s])


def _lp_constraints(p: GsecPolytope):
    """Deduplicated GSEC rows plus x_e <= 1 rows, as (coeff mask, rhs)."""
    within = edges_within_table(p.host)
    tightest: dict[int, int] = {}
    for s in range(1, 1 << p.host.n):
        inner = within[s]
        if inner == 0:
            continue
        bound = s.bit_count() - p.rhs[s]
        if inner not in tightest or bound < tightest[inner]:
            tightest[inner] = bound
    rows = sorted(tightest.items())
    rows.extend((1 << e, 1) for e in range(p.host.m))
    return rows


def max_xS(p: GsecPolytope, s_mask: int, cap: int | None = None):
    """Exact maximum of x(S) over P(f), with an optimal point.

    Returns (value, x) where x is a tuple of Fractions indexed by edge id.
    """
    check_cap(p.host, cap)
    m = p.host.m
    within = edges_within_table(p.host)
    objective_mask = within[s_mask]
    c = [Fraction(1 if objective_mask >> e & 1 else 0) for e in range(m)]
    rows = _lp_constraints(p)
    A = [[Fraction(1 if mask >> e & 1 else 0) for e in range(m)]
         for mask, _ in rows]
    b = [Fraction(bound) for _, bound in rows]
    value, x = simplex_max(c, A, b)
    return value, tuple(x)


def polytope_contains(outer: GsecPolytope, inner: GsecPolytope,
                      cap: int | None = None):
    """(verdict, certificate): is inner a subset of outer?

    Both polytopes share the box [0,1]^E, so only outer's GSECs can
    separate; each is checked by maximizing x(S) over inner.  When outer's
    RHS at S is at most inner's, inner's own GSEC already implies outer's
    and the LP is skipped.  The certificate is a point of inner violating
    outer's GSEC at S.
    """
    if outer.host != inner.host:
        raise BadParams("polytopes live on different hosts")
    check_cap(outer.host, cap)
    within = edges_within_table(outer.host)
    for s in range(1, 1 << outer.host.n):
        if outer.rhs[s] <= inner.rhs[s]:
            continue
        if within[s] == 0:
            continue
        bound = s.bit_count() - outer.rhs[s]
        value, x = max_xS(inner, s, cap)
        if value > bound:
            return False, ("separating_point", s, x, value, bound)
    return True, None
