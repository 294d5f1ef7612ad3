import random
from fractions import Fraction as F

from gsec_lab import (
    Cmst,
    DegreeBounded,
    Forest,
    Graph,
    GsecPolytope,
    Omega,
    RhsTable,
    complete_graph,
    enumerate_forests,
    indicator_in_polytope,
    integer_points,
    integer_points_scan,
    is_representable,
    lower_bound_table,
    max_xS,
    path_to_forest,
    polytope_contains,
    represents,
    rhs_cardinality,
    rhs_from_g,
    rhs_ones,
    upper_bound_table,
    xos_from_demands,
)
from gsec_lab.graphs import edges_within_table, iter_bits, submasks
from gsec_lab.verify import polytope_vertices, rand_rhs_table


def test_indicator_secs_accept_all_forests():
    g = complete_graph(4)
    p = GsecPolytope(g, rhs_ones(g))
    for f in enumerate_forests(g):
        assert indicator_in_polytope(p, f) == (True, None)


def test_indicator_degree_example_violation():
    g = complete_graph(4)
    ell = lower_bound_table(DegreeBounded(g, (2, 2, 2, 2))).as_rhs_table()
    p = GsecPolytope(g, ell)
    path = path_to_forest(g, (0, 1, 2, 3))
    ok, s = indicator_in_polytope(p, path)
    assert not ok and s == 0b1111  # 3 > 4 - 2


def test_indicator_empty_forest_always_inside():
    g = complete_graph(3)
    for rhs in (rhs_ones(g), rhs_cardinality(g)):
        assert indicator_in_polytope(GsecPolytope(g, rhs), Forest(0, 0))[0]


def test_integer_points_cardinality_rhs_only_origin():
    g = complete_graph(3)
    assert integer_points(GsecPolytope(g, rhs_cardinality(g))) == (0,)


def test_integer_points_secs_are_acyclic_sets():
    g = complete_graph(3)
    p = GsecPolytope(g, rhs_ones(g))
    pts = integer_points(p)
    assert len(pts) == 7
    assert pts == integer_points_scan(p)


def test_integer_points_brp_example_excludes_heavy_pair():
    g = complete_graph(3)
    rhs = rhs_from_g(xos_from_demands((F(1), F(1), F(-1)), F(1)), g)
    pts = integer_points(GsecPolytope(g, rhs))
    assert (1 << g.edge_id(0, 1)) not in pts
    assert (1 << g.edge_id(0, 2)) in pts


def test_scan_equals_filtered_enumeration_randomized():
    rng = random.Random(31)
    for _ in range(20):
        g = Graph(4, tuple(e for e in complete_graph(4).edges
                           if rng.random() < 0.8))
        p = GsecPolytope(g, rand_rhs_table(rng, g))
        assert integer_points(p) == integer_points_scan(p)


def test_integer_points_downward_closed():
    rng = random.Random(37)
    for _ in range(20):
        g = complete_graph(rng.randint(2, 4))
        pts = set(integer_points(GsecPolytope(g, rand_rhs_table(rng, g))))
        for mask in pts:
            assert all(sub in pts for sub in submasks(mask))


def test_represents_cmst_true_and_degree_false():
    g = complete_graph(4)
    cm = Cmst(g, (F(1), F(1), F(1), F(1)), F(2))
    ell = lower_bound_table(cm).as_rhs_table()
    assert represents(GsecPolytope(g, ell), cm) == (True, None)

    deg = DegreeBounded(g, (2, 2, 2, 2))
    ell_deg = lower_bound_table(deg).as_rhs_table()
    ok, cert = represents(GsecPolytope(g, ell_deg), deg)
    assert not ok
    tag, emask, s, lhs, rhs_val = cert
    # a degree-feasible spanning path is cut off: 3 > |V| - 2 = 2
    assert tag == "violating_gsec"
    assert s == 0b1111 and lhs == 3 and rhs_val == 2
    assert deg.contains(Forest(0b1111, emask))


def test_represents_secs_omega():
    g = complete_graph(3)
    assert represents(GsecPolytope(g, rhs_ones(g)), Omega(g)) == (True, None)


def test_represents_missing_member_certificate():
    g = complete_graph(2)
    # f(V) = 2 cuts off the single edge, so Omega is not represented
    ok, cert = represents(GsecPolytope(g, rhs_cardinality(g)), Omega(g))
    assert not ok
    tag, emask, s, lhs, rhs_val = cert
    assert tag == "violating_gsec"
    assert emask == 1 and s == 0b11 and lhs == 1 and rhs_val == 0


def test_max_xs_k3_examples():
    g = complete_graph(3)
    val, x = max_xS(GsecPolytope(g, rhs_ones(g)), 0b111)
    assert val == 2

    val, _ = max_xS(GsecPolytope(g, rhs_cardinality(g)), 0b111)
    assert val == 0

    two = RhsTable(g, (0, 1, 1, 1, 1, 1, 1, 2))
    val, _ = max_xS(GsecPolytope(g, two), 0b111)
    assert val == 1


def test_max_xs_matches_vertex_enumeration():
    rng = random.Random(41)
    within_cache = {}
    for _ in range(15):
        g = Graph(3, tuple(e for e in complete_graph(3).edges
                           if rng.random() < 0.9))
        if g.m == 0:
            continue
        p = GsecPolytope(g, rand_rhs_table(rng, g))
        verts = polytope_vertices(p)
        within = edges_within_table(g)
        for s in range(1, 1 << g.n):
            val, point = max_xS(p, s)
            best = max((sum(x[e] for e in iter_bits(within[s]))
                        for x in verts), default=F(0))
            assert val == best
            assert sum(point[e] for e in iter_bits(within[s])) == val


def test_max_xs_monotone_and_bounded():
    rng = random.Random(43)
    g = complete_graph(4)
    p = GsecPolytope(g, rand_rhs_table(rng, g))
    within = edges_within_table(g)
    vals = {}
    for s in range(1, 1 << g.n):
        vals[s], _ = max_xS(p, s)
        assert vals[s] <= min(s.bit_count() - p.rhs[s],
                              within[s].bit_count())
    for s in range(1, 1 << g.n):
        for v in range(g.n):
            if not s >> v & 1:
                assert vals[s] <= vals[s | (1 << v)]


def test_polytope_contains_sandwich():
    g = complete_graph(3)
    cm = Cmst(g, (F(1), F(1), F(1)), F(2))
    ell = lower_bound_table(cm).as_rhs_table()
    u = upper_bound_table(cm)
    outer = GsecPolytope(g, ell)
    inner = GsecPolytope(g, u)
    assert polytope_contains(outer, inner) == (True, None)
    assert polytope_contains(outer, outer) == (True, None)


def test_polytope_contains_failure_certificate():
    g = complete_graph(2)
    tight = GsecPolytope(g, rhs_cardinality(g))  # {0}
    loose = GsecPolytope(g, rhs_ones(g))         # [0,1]
    assert polytope_contains(loose, tight) == (True, None)
    ok, cert = polytope_contains(tight, loose)
    assert not ok
    tag, s, x, lhs, rhs_val = cert
    assert tag == "separating_point"
    assert s == 0b11 and x == (F(1),) and lhs == 1 and rhs_val == 0


def test_containment_without_pointwise_dominance():
    # on a path host, S = {0, 2} spans no edges, so raising f there changes
    # nothing: containment holds although the RHS tables are incomparable
    g = Graph(3, ((0, 1), (1, 2)))
    values = list(rhs_ones(g).values)
    values[0b101] = 2
    bumped = RhsTable(g, tuple(values))
    outer = GsecPolytope(g, bumped)
    inner = GsecPolytope(g, rhs_ones(g))
    assert polytope_contains(outer, inner) == (True, None)
    assert polytope_contains(inner, outer) == (True, None)
    from gsec_lab import pointwise_leq
    assert not pointwise_leq(bumped, rhs_ones(g))


def test_pointwise_dominance_implies_containment():
    rng = random.Random(47)
    for _ in range(10):
        g = complete_graph(3)
        a = rand_rhs_table(rng, g)
        bumped = tuple(
            0 if m == 0 else min(m.bit_count(),
                                 a[m] + rng.randint(0, 1))
            for m in range(1 << g.n))
        b = RhsTable(g, bumped)
        # a <= b pointwise, so P(b) is inside P(a)
        assert polytope_contains(GsecPolytope(g, a), GsecPolytope(g, b))[0]
