import random
from fractions import Fraction as F

import pytest

from gsec_lab import (
    BadParams,
    BrpPaths,
    BudgetedRobustFunction,
    CvrpPaths,
    ExplicitPaths,
    Graph,
    Infeasible,
    MalformedX,
    RcmstInstance,
    ScenarioFunction,
    VrpInstance,
    complete_graph,
    cvrp_g,
    decode_x_to_cycles,
    oracle_solve_vrp,
    rhs_from_g,
    rhs_ones,
    route_cost,
    solve_rcmst,
    solve_vrp_form,
    xos_from_demands,
)
from gsec_lab.verify import (
    rand_rcmst_instance,
    rand_vrp_instance,
    rcmst_agreement_trial,
    trial_rng,
    vrp_agreement_trial,
)

from oracles import tsp_bruteforce


def big_q_routes(host):
    n = host.n
    return CvrpPaths(host, (F(0),) * n, F(1))


def make_vrp(n, k, depot, edges, routes=None, rhs=None):
    host = complete_graph(n)
    routes = routes or big_q_routes(host)
    rhs = rhs or rhs_ones(host)
    return VrpInstance(n, k, tuple(F(x) for x in depot),
                       tuple(F(x) for x in edges), routes, rhs)


def test_all_singletons_forced():
    inst = make_vrp(3, 3, (2, 3, 4), (1, 1, 1))
    for solver in (solve_vrp_form, oracle_solve_vrp):
        sol = solver(inst)
        assert sol.cost == 2 * (2 + 3 + 4)
        assert sol.routes == ((0,), (1,), (2,))


def test_brp_example_k1_uses_feasible_ordering():
    host = complete_graph(3)
    d, Q = (F(1), F(1), F(-1)), F(1)
    routes = BrpPaths(host, d, Q)
    rhs = rhs_from_g(xos_from_demands(d, Q), host)
    inst = VrpInstance(3, 1, (F(1),) * 3, (F(1),) * 3, routes, rhs)
    a = solve_vrp_form(inst)
    b = oracle_solve_vrp(inst)
    assert a.cost == b.cost == 4
    assert a.routes == ((0, 2, 1),)


def test_cvrp_capacity_infeasible_with_one_vehicle():
    host = complete_graph(3)
    d, Q = (F(1), F(1), F(1)), F(2)
    routes = CvrpPaths(host, d, Q)
    rhs = rhs_from_g(cvrp_g(d, Q), host)
    inst = VrpInstance(3, 1, (F(1),) * 3, (F(1),) * 3, routes, rhs)
    for solver in (solve_vrp_form, oracle_solve_vrp):
        with pytest.raises(Infeasible):
            solver(inst)
    inst2 = VrpInstance(3, 2, (F(1),) * 3, (F(1),) * 3, routes, rhs)
    assert solve_vrp_form(inst2).cost == oracle_solve_vrp(inst2).cost


def test_tsp_reduction_matches_permutation_bruteforce():
    rng = random.Random(19)
    for _ in range(5):
        n = rng.randint(3, 6)
        host = complete_graph(n)
        depot = [F(rng.randint(0, 9)) for _ in range(n)]
        edges = [F(rng.randint(0, 9)) for _ in range(host.m)]
        inst = make_vrp(n, 1, depot, edges)
        expected = tsp_bruteforce(
            n, depot, lambda a, b: edges[host.edge_id(a, b)])
        assert solve_vrp_form(inst).cost == expected
        assert oracle_solve_vrp(inst).cost == expected


def test_route_cost_single_customer_doubles_depot_edge():
    inst = make_vrp(2, 2, (5, 7), (1,))
    assert route_cost(inst, (0,)) == 10
    assert route_cost(inst, (0, 1)) == 5 + 1 + 7


def test_exactly_k_routes_even_when_fewer_would_be_cheaper():
    # splitting into 2 routes costs more than one loop, but k = 2 forces it
    inst = make_vrp(2, 2, (1, 1), (0,))
    sol = oracle_solve_vrp(inst)
    assert sol.cost == 4
    assert solve_vrp_form(inst).cost == 4
    one = make_vrp(2, 1, (1, 1), (0,))
    assert oracle_solve_vrp(one).cost == 2


def test_explicit_routes_must_contain_trivial_paths():
    host = complete_graph(2)
    with pytest.raises(BadParams):
        VrpInstance(2, 1, (F(1), F(1)), (F(1),),
                    ExplicitPaths(host, frozenset({(0, 1)})), rhs_ones(host))


def test_instance_validation():
    host = complete_graph(2)
    routes = big_q_routes(host)
    with pytest.raises(BadParams):
        VrpInstance(2, 3, (F(1), F(1)), (F(1),), routes, rhs_ones(host))
    with pytest.raises(BadParams):
        VrpInstance(2, 1, (F(-1), F(1)), (F(1),), routes, rhs_ones(host))


# --------------------------------------------------------------------------
# decoding


def test_decode_round_trip_single_customer():
    assert decode_x_to_cycles(1, [2], [], 1) == ((0,),)


def test_decode_two_customer_cycle():
    host = complete_graph(2)
    routes = decode_x_to_cycles(2, [1, 1], [1], 1, host)
    assert routes == ((0, 1),)


def test_decode_rejects_depot_free_cycle():
    host = complete_graph(3)
    with pytest.raises(MalformedX):
        decode_x_to_cycles(3, [0, 0, 0], [1, 1, 1], 0, host)


def test_decode_rejects_bad_degree():
    with pytest.raises(MalformedX):
        decode_x_to_cycles(2, [1, 2], [0], 1)
    with pytest.raises(MalformedX):
        decode_x_to_cycles(1, [2], [], 2)


# --------------------------------------------------------------------------
# VRP solver vs oracle, randomized


def test_vrp_agreement_small_batch():
    for t in range(10):
        assert vrp_agreement_trial(trial_rng(7, t), "cvrp") is None
    for t in range(10):
        assert vrp_agreement_trial(trial_rng(8, t), "brp") is None


# --------------------------------------------------------------------------
# RCMST


def wheel_instance(capacity):
    g0 = Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)))
    costs = tuple(F(c) for c in (5, 5, 5, 5, 1, 1, 1))
    u = ScenarioFunction(((F(1),) * 4,), F(capacity))
    return RcmstInstance(g0, costs, u)


def test_rcmst_singleton_wheel():
    sol = solve_rcmst(wheel_instance(2))
    # two depot spokes and two cheap rim edges: subtrees {1,2} and {3,4}
    assert sol.cost == 12
    sol4 = solve_rcmst(wheel_instance(4))
    assert sol4.cost == 5 + 1 + 1 + 1


def test_rcmst_infeasible_when_capacity_below_singleton():
    g0 = Graph(3, ((0, 1), (0, 2), (1, 2)))
    u = ScenarioFunction(((F(3), F(1)),), F(2))
    inst = RcmstInstance(g0, (F(1), F(1), F(1)), u)
    with pytest.raises(Infeasible):
        solve_rcmst(inst)


def test_rcmst_gamma_zero_matches_singleton():
    g0 = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (2, 3)))
    costs = (F(4), F(4), F(4), F(1), F(1))
    dbar = (F(1), F(1), F(1))
    dhat = (F(2), F(2), F(2))
    frozen = RcmstInstance(g0, costs,
                           BudgetedRobustFunction(dbar, dhat, F(0), F(2)))
    nominal = RcmstInstance(g0, costs, ScenarioFunction((dbar,), F(2)))
    assert solve_rcmst(frozen).cost == solve_rcmst(nominal).cost


def test_rcmst_full_budget_forces_star():
    g0 = complete_graph(4)  # depot 0, customers 1..3
    costs = tuple(F(3) if 0 in e else F(1) for e in g0.edges)
    # deviations so large that any two customers together overflow
    u = BudgetedRobustFunction((F(1),) * 3, (F(10),) * 3, F(3), F(11))
    sol = solve_rcmst(RcmstInstance(g0, costs, u))
    assert sol.cost == 9
    assert all(0 in e for e in sol.edges)


def test_rcmst_separate_subtrees_may_share_total_above_q():
    # regression guard: loads pooled through the depot must not be merged
    sol = solve_rcmst(wheel_instance(2))
    # total demand 4 > Q = 2 is fine split across two depot subtrees
    assert sol.cost == 12


def test_rcmst_agreement_small_batch():
    for t in range(10):
        assert rcmst_agreement_trial(trial_rng(9, t)) is None


def test_rcmst_validation():
    g0 = Graph(3, ((0, 1),))  # disconnected: vertex 2 unreachable
    u = ScenarioFunction(((F(1), F(1)),), F(2))
    with pytest.raises(BadParams):
        RcmstInstance(g0, (F(1),), u)
    from gsec_lab import TableFunction
    g0b = Graph(3, ((0, 1), (0, 2)))
    with pytest.raises(BadParams):
        RcmstInstance(g0b, (F(1), F(1)),
                      TableFunction((F(0), F(1), F(1), F(1))))
