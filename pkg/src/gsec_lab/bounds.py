"""Minimal infeasible forests and the admissible-RHS bounds ell and u.

ell may exceed |S| for pathological families (for instance when an edgeless
forest is infeasible), so it is returned as a plain integer table with a
validity flag rather than forced into the RHS-table invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyFamily
from .graphs import (
    Forest,
    Graph,
    edges_within_table,
    enumerate_forests,
    forest_components_count,
    submasks,
)
from .families import (
    ForestFamilyBase,
    Omega,
    cover_subgraphs,
    family_member_set,
    family_members,
    is_downward_closed,
)
from .setfuncs import RhsTable


def _all_proper_subgraphs_feasible(g: Graph, f: Forest, member_set) -> bool:
    # full fallback for families that are not downward closed
    within = edges_within_table(g)
    for vsub in submasks(f.verts):
        for esub in submasks(f.edges & within[vsub]):
            if vsub == f.verts and esub == f.edges:
                continue
            if Forest(vsub, esub) not in member_set:
                return False
    return True


def minimal_infeasible(fam: ForestFamilyBase,
                       cond: ForestFamilyBase | None = None,
                       cap: int | None = None) -> tuple[Forest, ...]:
    """M(fam) intersected with `cond` (all forests when omitted).

    A forest is minimal infeasible when it lies outside the family but every
    proper subgraph is a member.  For downward closed families it suffices
    to test the maximal proper subgraphs; otherwise the slow full-subgraph
    check runs instead.
    """
    g = fam.host
    member_set = family_member_set(fam, cap)
    downward, _ = is_downward_closed(fam, cap)
    if cond is None:
        cond = Omega(g)
    out = []
    for f in enumerate_forests(g, cap):
        if f in member_set or not cond.contains(f):
            continue
        if downward:
            if all(sub in member_set for sub in cover_subgraphs(g, f)):
                out.append(f)
        elif _all_proper_subgraphs_feasible(g, f, member_set):
            out.append(f)
    return tuple(out)


@dataclass(frozen=True)
class LowerBound:
    """The table ell_{F,C} plus the blocking vertex sets B(F,C).

    `valid_rhs` reports whether ell fits the RHS-table range (ell(S) <= |S|
    everywhere); it always does when the family is nonempty, downward closed
    and edge-consistent.
    """

    host: Graph
    values: tuple[int, ...]
    blocking: tuple[int, ...]
    valid_rhs: bool

    def __getitem__(self, mask: int) -> int:
        return self.values[mask]

    def as_rhs_table(self) -> RhsTable:
        return RhsTable(self.host, self.values)


def lower_bound_table(fam: ForestFamilyBase,
                      cond: ForestFamilyBase | None = None,
                      cap: int | None = None) -> LowerBound:
    """ell_{F,C}(S) = 1 + max components over minimal infeasible forests
    spanning S (inside C), or 1 when S blocks nothing; ell(emptyset) = 0."""
    g = fam.host
    best: dict[int, int] = {}
    for f in minimal_infeasible(fam, cond, cap):
        if f.verts == 0:
            continue
        t = forest_components_count(f)
        if t > best.get(f.verts, 0):
            best[f.verts] = t
    values = [0] * (1 << g.n)
    for mask in range(1, 1 << g.n):
        values[mask] = 1 + best.get(mask, 0)
    valid = all(values[mask] <= mask.bit_count()
                for mask in range(1, 1 << g.n))
    return LowerBound(g, tuple(values), tuple(sorted(best)), valid)


def upper_bound_table(fam: ForestFamilyBase, cap: int | None = None) -> RhsTable:
    """u_F(S) = min over members of |S| - |E(F) within S|."""
    g = fam.host
    member_masks = {f.edges for f in family_members(fam, cap)}
    if not member_masks:
        raise EmptyFamily("u_F needs a nonempty family")
    within = edges_within_table(g)
    values = [0] * (1 << g.n)
    for mask in range(1, 1 << g.n):
        inside = within[mask]
        size = mask.bit_count()
        values[mask] = min(size - (emask & inside).bit_count()
                           for emask in member_masks)
    return RhsTable(g, tuple(values))
