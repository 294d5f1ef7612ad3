import random

import pytest

from gsec_lab import (
    CapExceeded,
    Forest,
    Graph,
    canonical_path,
    complete_graph,
    components,
    enumerate_forests,
    enumerate_paths,
    enumerate_trees,
    forest_components_count,
    induced_subforest,
    is_valid_forest,
    path_to_forest,
    tree_as_path,
)
from gsec_lab.graphs import bits_of, mask_of, submasks

from oracles import acyclic_by_leaf_pruning, count_forests_bruteforce, all_path_tuples


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(2, ((1, 0),))
    with pytest.raises(ValueError):
        Graph(2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        Graph(0, ())


def test_single_vertex_graph():
    g = Graph(1, ())
    assert enumerate_forests(g) == (Forest(0, 0), Forest(1, 0))


def test_k3_forest_count_frozen():
    # 1 empty + 3 singletons + 3*2 pairs + 7 on the triangle = 17
    assert len(enumerate_forests(complete_graph(3))) == 17


def test_k4_forest_count_vs_bruteforce():
    g = complete_graph(4)
    expected = count_forests_bruteforce(4, g.edges)
    assert expected == 83  # frozen from the independent filter
    assert len(enumerate_forests(g)) == expected


def test_random_graph_forest_count_vs_bruteforce():
    rng = random.Random(7)
    for _ in range(5):
        n = rng.randint(2, 5)
        edges = tuple(e for e in complete_graph(n).edges if rng.random() < 0.7)
        g = Graph(n, edges)
        assert len(enumerate_forests(g)) == count_forests_bruteforce(n, edges)


def test_forests_sorted_unique_and_valid():
    g = complete_graph(4)
    forests = enumerate_forests(g)
    assert list(forests) == sorted(set(forests))
    for f in forests:
        assert is_valid_forest(g, f)
        assert forest_components_count(f) == len(components(g, f))


def test_forests_closed_under_induced_subforest():
    g = complete_graph(4)
    table = set(enumerate_forests(g))
    for f in table:
        for s in submasks(f.verts):
            assert induced_subforest(g, f, s) in table


def test_induced_subforest_examples():
    g = complete_graph(3)
    path = path_to_forest(g, (0, 1, 2))
    sub = induced_subforest(g, path, 0b011)
    assert sub == Forest(0b011, 1 << g.edge_id(0, 1))
    assert induced_subforest(g, path, 0) == Forest(0, 0)
    g4 = complete_graph(4)
    star = Forest(0b1111, mask_of(g4.edge_id(0, v) for v in (1, 2, 3)))
    leaves = induced_subforest(g4, star, 0b1110)
    assert leaves == Forest(0b1110, 0)
    assert forest_components_count(leaves) == 3


def test_induced_subforest_identity_and_monotone():
    g = complete_graph(4)
    rng = random.Random(3)
    forests = enumerate_forests(g)
    for f in rng.sample(forests, 20):
        assert induced_subforest(g, f, f.verts) == f
        s1 = rng.randrange(1 << g.n)
        s2 = s1 | rng.randrange(1 << g.n)
        small = induced_subforest(g, f, s1)
        big = induced_subforest(g, f, s2)
        assert small.edges & ~big.edges == 0


def test_components_examples():
    g = complete_graph(4)
    assert components(g, Forest(0, 0)) == []
    assert len(components(g, Forest(0b1111, 0))) == 4
    two = Forest(0b1111, mask_of([g.edge_id(0, 1), g.edge_id(2, 3)]))
    assert len(components(g, two)) == 2


def test_paths_k2_and_k3():
    g2 = complete_graph(2)
    assert enumerate_paths(g2) == ((), (0,), (1,), (0, 1))
    g3 = complete_graph(3)
    paths = enumerate_paths(g3)
    assert len(paths) == 10
    assert paths == tuple(sorted(all_path_tuples(3, g3.edges),
                                 key=lambda p: (len(p), p)))


def test_paths_on_sparse_graph_vs_bruteforce():
    rng = random.Random(11)
    for _ in range(5):
        n = rng.randint(2, 5)
        edges = tuple(e for e in complete_graph(n).edges if rng.random() < 0.6)
        g = Graph(n, edges)
        assert set(enumerate_paths(g)) == all_path_tuples(n, edges)


def test_every_path_is_canonical_and_single_component():
    g = complete_graph(4)
    for p in enumerate_paths(g):
        assert canonical_path(p) == p
        if p:
            assert forest_components_count(path_to_forest(g, p)) == 1


def test_trees_k3():
    g = complete_graph(3)
    trees = enumerate_trees(g)
    assert len(trees) == 9  # 3 singletons + 3 edges + 3 two-edge paths
    assert all(forest_components_count(t) == 1 for t in trees)


def test_tree_as_path_roundtrip():
    g = complete_graph(4)
    for p in enumerate_paths(g):
        if p:
            assert tree_as_path(g, path_to_forest(g, p)) == p
    star = Forest(0b1111, mask_of(g.edge_id(0, v) for v in (1, 2, 3)))
    assert tree_as_path(g, star) is None


def test_cap_exceeded():
    g = complete_graph(5)
    with pytest.raises(CapExceeded):
        enumerate_forests(g, cap=4)
    with pytest.raises(CapExceeded):
        enumerate_paths(g, cap=4)
    with pytest.raises(CapExceeded):
        enumerate_trees(g, cap=4)


def test_acyclicity_agrees_with_leaf_pruning():
    g = complete_graph(5)
    rng = random.Random(23)
    listed = {f.edges for f in enumerate_forests(g) if f.verts == g.all_verts}
    for _ in range(200):
        emask = rng.randrange(1 << g.m)
        edges = [g.edges[j] for j in bits_of(emask)]
        assert (emask in listed) == acyclic_by_leaf_pruning(edges)
