"""Characterization engine: minimal infeasibility, Phi-membership, the
representability theorem, the RHS sandwich, and the conditioned variant.

Every theorem-based verdict that has an enumeration counterpart is
cross-validated against it; a disagreement raises InternalMismatch and is
never swallowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalMismatch, PreconditionFailed
from .graphs import (
    Forest,
    Graph,
    PathSeq,
    edges_within_table,
    enumerate_forests,
    enumerate_paths,
    forest_components_count,
    mask_of,
    submasks,
    tree_as_path,
)
from .families import (
    ForestFamilyBase,
    TreeClosure,
    contains_trivial_paths,
    edge_consistent_closure,
    family_member_set,
    family_members,
    is_downward_closed,
    is_edge_consistent,
    is_subpath_closed,
    is_subsequence_closed,
)
from .bounds import LowerBound, lower_bound_table, minimal_infeasible, upper_bound_table
from .polytope import GsecPolytope, polytope_contains, integer_points, represents
from .setfuncs import RhsTable

# re-exported here because they belong to this layer conceptually
__all__ = [
    "minimal_infeasible",
    "phi_contains",
    "phi_contains_naive",
    "PhiFamily",
    "has_mip_property",
    "ReprReport",
    "is_representable",
    "rhs_admissible",
    "ConditionedReport",
    "conditioned_representable",
    "path_star_property",
    "GhosalReport",
    "ghosal_conditions",
    "claim_equal_components",
]


def phi_contains(f_values, g: Graph, forest: Forest) -> bool:
    """Is the forest in Phi(f) = {F : |F'| >= f(V(F')) for all F' <= F}?

    Reduced form: for a fixed vertex set S inside V(F), the subgraph with
    the fewest components takes every edge of F inside S, so it suffices
    that |S| - |E(F) within S| >= f(S) for every nonempty S within V(F).
    (Property-tested against the naive all-subgraphs quantifier.)
    """
    within = edges_within_table(g)
    for s in submasks(forest.verts):
        if s == 0:
            continue
        if s.bit_count() - (forest.edges & within[s]).bit_count() < f_values[s]:
            return False
    return True


def phi_contains_naive(f_values, g: Graph, forest: Forest) -> bool:
    """Literal quantifier over every subgraph F' of F (slow; for testing)."""
    within = edges_within_table(g)
    for vsub in submasks(forest.verts):
        for esub in submasks(forest.edges & within[vsub]):
            if vsub.bit_count() - esub.bit_count() < f_values[vsub]:
                return False
    return True


@dataclass(frozen=True)
class PhiFamily(ForestFamilyBase):
    """The family Phi(f) for an arbitrary integer table f."""

    values: tuple[int, ...]

    def contains(self, f: Forest) -> bool:
        return phi_contains(self.values, self.host, f)


def has_mip_property(fam: ForestFamilyBase, cap: int | None = None):
    """(verdict, certificate, ell): every member needs at least
    ell(V(F)) components; the certificate is a member falling short."""
    ell = lower_bound_table(fam, None, cap)
    for f in family_members(fam, cap):
        if forest_components_count(f) < ell[f.verts]:
            return False, (f, forest_components_count(f), ell[f.verts]), ell
    return True, None, ell


@dataclass
class ReprReport:
    """Outcome of the representability characterization.

    All structural flags refer to the edge-consistent closure of the input
    (identical to the input when it is already edge-consistent, which the
    theorem assumes); `edge_consistent` records the input's own status.
    """

    nonempty: bool
    edge_consistent: bool
    downward_closed: bool
    contains_edgeless: bool
    mip_property: bool
    representable: bool
    ell: LowerBound
    u: Optional[RhsTable]
    certificates: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    checked_family: Optional[ForestFamilyBase] = None


def _contains_all_edgeless(fam: ForestFamilyBase, cap) -> bool:
    member_set = family_member_set(fam, cap)
    return all(Forest(vmask, 0) in member_set
               for vmask in range(1 << fam.host.n))


def is_representable(fam: ForestFamilyBase, cap: int | None = None,
                     cross_validate: bool = True) -> ReprReport:
    """Decide representability via nonempty + downward closed + minimal
    infeasibility, and (when positive) confirm by enumerating the integer
    points of P(ell)."""
    certificates = []
    warnings = []
    ec, ec_cert = is_edge_consistent(fam, cap)
    work = fam
    if not ec:
        certificates.append(("not_edge_consistent",) + ec_cert)
        warnings.append("family is not edge-consistent; "
                        "checking its edge-consistent closure instead")
        work = edge_consistent_closure(fam, cap)

    nonempty = bool(family_members(work, cap))
    downward, dc_cert = is_downward_closed(work, cap)
    if not downward:
        certificates.append(("not_downward_closed",) + dc_cert)
    mip, mip_cert, ell = has_mip_property(work, cap)
    if not mip:
        certificates.append(("mip_violation",) + mip_cert)
    edgeless = _contains_all_edgeless(work, cap)
    representable = nonempty and downward and mip

    if representable and cross_validate:
        if not ell.valid_rhs:
            raise InternalMismatch(
                "ell exceeds |S| on a nonempty downward closed family")
        ok, cert = represents(GsecPolytope(work.host, ell.as_rhs_table()),
                              work, cap)
        if not ok:
            raise InternalMismatch(
                f"theorem says representable but P(ell) disagrees: {cert}")

    u = upper_bound_table(work, cap) if nonempty else None
    return ReprReport(nonempty, ec, downward, edgeless, mip,
                      representable, ell, u, certificates, warnings, work)


def rhs_admissible(fam: ForestFamilyBase, f: RhsTable,
                   cap: int | None = None):
    """(verdict, certificates): does P(f) represent the family?

    Theorem route: representability plus the exact-LP sandwich
    P(u) <= P(f) <= P(ell).  Enumeration route: direct integer-point
    comparison.  The two must agree.
    """
    report = is_representable(fam, cap)
    certificates = list(report.certificates)
    theorem = report.representable
    if theorem:
        p_f = GsecPolytope(fam.host, f)
        p_ell = GsecPolytope(fam.host, report.ell.as_rhs_table())
        p_u = GsecPolytope(fam.host, report.u)
        ok_low, cert_low = polytope_contains(p_f, p_u, cap)
        if not ok_low:
            theorem = False
            certificates.append(cert_low)
        else:
            ok_high, cert_high = polytope_contains(p_ell, p_f, cap)
            if not ok_high:
                theorem = False
                certificates.append(cert_high)

    enum_ok, enum_cert = represents(GsecPolytope(fam.host, f), fam, cap)
    if enum_ok != theorem:
        raise InternalMismatch(
            f"sandwich theorem verdict {theorem} but enumeration says {enum_ok}")
    if not enum_ok and enum_cert is not None:
        certificates.append(enum_cert)
    return theorem, certificates


@dataclass
class ConditionedReport:
    condition_i: bool
    condition_ii: Optional[bool]
    representable: bool
    ell: LowerBound
    u: Optional[RhsTable]
    certificates: list = field(default_factory=list)


def conditioned_representable(h: ForestFamilyBase, c: ForestFamilyBase,
                              f: RhsTable | None = None,
                              cap: int | None = None) -> ConditionedReport:
    """Representation of h inside a conditioning family c.

    Condition (i): h equals Phi(ell_{h,c}) intersected with c, by
    enumeration over c.  Condition (ii), when an RHS table is supplied:
    P(u_h) <= P(f) <= P(ell_{h,c}) by exact LP.  With f supplied the
    combined verdict is cross-validated against the direct integer-point
    comparison of P(f) restricted to c's indicators.
    """
    if h.host != c.host:
        raise PreconditionFailed("h and c must share a host graph")
    c_members = family_members(c, cap)
    if not c_members:
        raise PreconditionFailed("conditioning family is empty")
    ec_c, _ = is_edge_consistent(c, cap)
    if not ec_c:
        raise PreconditionFailed("conditioning family is not edge-consistent")
    dc_c, _ = is_downward_closed(c, cap)
    if not dc_c:
        raise PreconditionFailed("conditioning family is not downward closed")
    ec_h, _ = is_edge_consistent(h, cap)
    if not ec_h:
        raise PreconditionFailed("target family is not edge-consistent")
    h_set = family_member_set(h, cap)
    if not h_set <= family_member_set(c, cap):
        raise PreconditionFailed("target family is not a subset of the "
                                 "conditioning family")

    ell = lower_bound_table(h, c, cap)
    u = upper_bound_table(h, cap) if h_set else None
    certificates = []

    condition_i = True
    for forest in c_members:
        lhs = phi_contains(ell, h.host, forest)
        if lhs != (forest in h_set):
            condition_i = False
            certificates.append(("phi_mismatch", forest, lhs))
            break

    condition_ii: Optional[bool] = None
    if f is not None:
        condition_ii = False
        if condition_i and u is not None:
            # (i) guarantees h contains the edgeless forests of c, so ell
            # stays within the RHS range
            if not ell.valid_rhs:
                raise InternalMismatch("condition (i) holds but ell is not "
                                       "a valid RHS table")
            p_f = GsecPolytope(h.host, f)
            ok_low, cert_low = polytope_contains(p_f, GsecPolytope(h.host, u), cap)
            ok_high, cert_high = (polytope_contains(
                GsecPolytope(h.host, ell.as_rhs_table()), p_f, cap)
                if ok_low else (False, None))
            condition_ii = ok_low and ok_high
            for cert in (cert_low, cert_high):
                if cert is not None:
                    certificates.append(cert)
        verdict = condition_i and condition_ii
        pts = set(integer_points(GsecPolytope(h.host, f), cap))
        c_masks = {forest.edges for forest in c_members}
        h_masks = {forest.edges for forest in h_set}
        enum_ok = (pts & c_masks) == h_masks
        if enum_ok != verdict:
            raise InternalMismatch(
                f"conditioned theorem verdict {verdict} but enumeration "
                f"says {enum_ok}")
    else:
        verdict = condition_i

    return ConditionedReport(condition_i, condition_ii, verdict, ell, u,
                             certificates)


def path_star_property(r, cap: int | None = None):
    """Property (*): a minimal infeasible path blocks every path on its
    vertex set.  The certificate is (minimal infeasible path, feasible
    path on the same vertices)."""
    g = r.host
    closure = TreeClosure(g, r)
    paths = enumerate_paths(g, cap)
    by_verts: dict[int, list[PathSeq]] = {}
    for p in paths:
        by_verts.setdefault(mask_of(p), []).append(p)
    for forest in minimal_infeasible(closure, None, cap):
        seq = tree_as_path(g, forest)
        if seq is None:
            continue
        for other in by_verts.get(forest.verts, ()):
            if r.contains_path(other):
                return False, (seq, other)
    return True, None


@dataclass
class GhosalReport:
    """The route-family conditions behind the VRP corollary.

    `corollary_applies` uses the subgraph (contiguous-subpath) closure: the
    stronger subsequence closure is reported for reference but provably
    fails for rebalancing routes, which the corollary still covers.
    """

    contains_trivial_paths: bool
    subpath_closed: bool
    subsequence_closed: bool
    star_property: bool
    corollary_applies: bool
    certificates: list = field(default_factory=list)


def ghosal_conditions(r, cap: int | None = None) -> GhosalReport:
    certificates = []
    trivial = contains_trivial_paths(r, cap)
    subpath, c1 = is_subpath_closed(r, cap)
    if c1:
        certificates.append(("subpath_violation",) + c1)
    subseq, c2 = is_subsequence_closed(r, cap)
    if c2:
        certificates.append(("subsequence_violation",) + c2)
    star, c3 = path_star_property(r, cap)
    if c3:
        certificates.append(("star_violation",) + c3)
    return GhosalReport(trivial, subpath, subseq, star,
                        trivial and subpath and star, certificates)


def claim_equal_components(fam: ForestFamilyBase, cap: int | None = None) -> bool:
    """All minimal infeasible forests on a common vertex set share a
    component count (requires the minimal infeasibility property)."""
    mip, _, _ = has_mip_property(fam, cap)
    if not mip:
        raise PreconditionFailed(
            "equal-components claim needs the minimal infeasibility property")
    sizes: dict[int, int] = {}
    for f in minimal_infeasible(fam, None, cap):
        t = forest_components_count(f)
        prev = sizes.setdefault(f.verts, t)
        if prev != t:
            raise InternalMismatch(
                f"minimal infeasible forests on mask {f.verts:#b} have "
                f"component counts {prev} and {t}")
    return True
