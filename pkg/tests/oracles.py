"""Independent brute-force oracles shared by the test modules.

These deliberately avoid the library's own machinery (union-find, bitmask
enumeration): acyclicity is decided by leaf pruning, subset iteration by
itertools, so agreement is evidence and not tautology.
"""

import itertools
from fractions import Fraction


def acyclic_by_leaf_pruning(edges):
    """True iff the edge list has no cycle: repeatedly strip degree-1
    vertices; a cycle is whatever refuses to die."""
    edges = [set(e) for e in edges]
    while True:
        degree = {}
        for e in edges:
            for v in e:
                degree[v] = degree.get(v, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1}
        if not leaves:
            break
        edges = [e for e in edges if not e & leaves]
    return not edges


def count_forests_bruteforce(n, edge_list):
    """Number of pairs (vertex subset, acyclic interior edge subset)."""
    total = 0
    for r in range(n + 1):
        for verts in itertools.combinations(range(n), r):
            vset = set(verts)
            inner = [e for e in edge_list if set(e) <= vset]
            for size in range(len(inner) + 1):
                for sub in itertools.combinations(inner, size):
                    if acyclic_by_leaf_pruning(sub):
                        total += 1
    return total


def all_path_tuples(n, edge_list):
    """Every simple path as a canonical tuple, via raw permutations."""
    eset = {frozenset(e) for e in edge_list}
    found = {()}
    for r in range(1, n + 1):
        for perm in itertools.permutations(range(n), r):
            if all(frozenset(p) in eset for p in zip(perm, perm[1:])):
                found.add(min(perm, perm[::-1]))
    return found


def budgeted_max_bruteforce(dbar, dhat, gamma, subset):
    """Max of dbar(S) + sum(xi * dhat over S) over the budget polytope,
    enumerated at its vertices: 0/1 entries plus one fractional leftover."""
    idx = sorted(subset)
    whole = int(gamma)
    frac = gamma - whole
    best = sum(dbar[v] for v in idx) if idx else Fraction(0)
    base = sum(dbar[v] for v in idx)
    for ones in range(min(whole, len(idx)) + 1):
        for chosen in itertools.combinations(idx, ones):
            bump = sum(dhat[v] for v in chosen)
            value = base + bump
            if value > best:
                best = value
            if ones == whole and frac:
                for extra in idx:
                    if extra not in chosen:
                        value2 = base + bump + frac * dhat[extra]
                        if value2 > best:
                            best = value2
    return best


def tsp_bruteforce(n, depot_costs, cost_of):
    """Cheapest Hamiltonian depot cycle by scanning all orderings."""
    best = None
    for perm in itertools.permutations(range(n)):
        cost = depot_costs[perm[0]] + depot_costs[perm[-1]]
        for a, b in zip(perm, perm[1:]):
            cost += cost_of(a, b)
        if best is None or cost < best:
            best = cost
    return best
