import itertools
import random
from fractions import Fraction as F

import pytest

from gsec_lab import (
    Cmst,
    DegreeBounded,
    EdgeMaskFamily,
    EmptyFamily,
    ExplicitForests,
    Forest,
    Omega,
    TreeClosure,
    BrpPaths,
    complete_graph,
    enumerate_forests,
    forest_components_count,
    is_representable,
    lower_bound_table,
    minimal_infeasible,
    path_forests,
    path_to_forest,
    pointwise_leq,
    upper_bound_table,
)
from gsec_lab.graphs import mask_of, submasks, edges_within_table


def test_minimal_infeasible_degree_family():
    g = complete_graph(4)
    fam = DegreeBounded(g, (2, 2, 2, 2))
    M = minimal_infeasible(fam)
    assert len(M) == 4  # one star per center
    assert all(forest_components_count(f) == 1 for f in M)
    assert all(f.verts == 0b1111 and f.edges.bit_count() == 3 for f in M)
    assert path_to_forest(g, (0, 1, 2, 3)) not in M


def test_minimal_infeasible_omega_empty():
    g = complete_graph(4)
    assert minimal_infeasible(Omega(g)) == ()


def test_minimal_infeasible_brp_inside_paths():
    g = complete_graph(3)
    fam = TreeClosure(g, BrpPaths(g, (F(1), F(1), F(-1)), F(1)))
    M = minimal_infeasible(fam, path_forests(g))
    assert M == (Forest(0b011, 1 << g.edge_id(0, 1)),)


def test_minimal_infeasible_full_fallback_on_non_dc_family():
    # family that keeps a long path but drops a middle-sized subgraph:
    # minimality must be judged against all subgraphs, not just covers
    g = complete_graph(3)
    path = path_to_forest(g, (0, 1, 2))
    keep = set()
    for f in enumerate_forests(g):
        keep.add(f)
    single = Forest(0b011, 1 << g.edge_id(0, 1))
    keep.discard(single)
    fam = ExplicitForests(g, frozenset(keep))
    M = minimal_infeasible(fam)
    # brute-force definition
    expected = []
    within = edges_within_table(g)
    for f in enumerate_forests(g):
        if fam.contains(f):
            continue
        proper = []
        for vs in submasks(f.verts):
            for es in submasks(f.edges & within[vs]):
                if (vs, es) != (f.verts, f.edges):
                    proper.append(Forest(vs, es))
        if all(fam.contains(p) for p in proper):
            expected.append(f)
    assert list(M) == expected


def test_lower_bound_degree_example():
    g = complete_graph(4)
    ell = lower_bound_table(DegreeBounded(g, (2, 2, 2, 2)))
    assert ell[0b1111] == 2
    assert ell.valid_rhs
    assert 0b1111 in ell.blocking
    assert ell[0] == 0


def test_lower_bound_cmst_at_most_two():
    rng = random.Random(17)
    for _ in range(10):
        g = complete_graph(rng.randint(3, 5))
        Q = F(rng.randint(1, 4))
        d = tuple(F(rng.randint(0, int(Q) * 2), 2) for _ in range(g.n))
        d = tuple(min(x, Q) for x in d)
        ell = lower_bound_table(Cmst(g, d, Q))
        assert all(v in (0, 1, 2) for v in ell.values)


def test_lower_bound_omega_all_ones():
    g = complete_graph(4)
    ell = lower_bound_table(Omega(g))
    assert all(ell[m] == 1 for m in range(1, 1 << g.n))
    assert ell.blocking == ()


def test_lower_bound_invalid_when_singletons_infeasible():
    g = complete_graph(2)
    # demand above capacity: the singleton tree at vertex 0 is infeasible
    fam = Cmst(g, (F(3), F(1)), F(2))
    ell = lower_bound_table(fam)
    assert ell[0b01] == 2  # exceeds |S| = 1
    assert not ell.valid_rhs


def test_upper_bound_examples():
    g = complete_graph(3)
    u = upper_bound_table(Omega(g))
    assert all(u[m] == 1 for m in range(1, 8))

    edgeless = EdgeMaskFamily(g, frozenset({0}))
    u2 = upper_bound_table(edgeless)
    assert all(u2[m] == m.bit_count() for m in range(1, 8))

    cm = upper_bound_table(Cmst(g, (F(1), F(1), F(1)), F(2)))
    assert cm[0b111] == 2


def test_upper_bound_empty_family():
    g = complete_graph(2)
    with pytest.raises(EmptyFamily):
        upper_bound_table(EdgeMaskFamily(g, frozenset()))


def test_slack_instance_ell_below_u():
    # unit demands with unit capacity: every edge is too heavy, members are
    # exactly the edgeless forests, and the full set has ell=1 < u=3
    g = complete_graph(3)
    fam = Cmst(g, (F(1), F(1), F(1)), F(1))
    report = is_representable(fam)
    assert report.representable
    ell, u = report.ell, report.u
    assert ell[0b111] == 1 and u[0b111] == 3
    assert pointwise_leq(ell.values, u.values)
    assert not pointwise_leq(u, ell.as_rhs_table())


def test_ell_leq_u_on_representable_families():
    rng = random.Random(29)
    for _ in range(15):
        g = complete_graph(rng.randint(3, 4))
        masks = {0}
        for _ in range(rng.randint(1, 3)):
            (f,) = rng.sample(enumerate_forests(g), 1)
            masks.update(submasks(f.edges))
        fam = EdgeMaskFamily(g, frozenset(masks))
        report = is_representable(fam)
        if report.representable:
            assert pointwise_leq(report.ell.values, report.u.values)
