"""Desk-scale exact solvers.

VRP: the edge formulation (depot degree 2k, customer degree 2, GSECs on
customer subsets, depot edges up to 2) solved by depth-first search over
edge values with degree propagation and monotone GSEC pruning, plus an
independent route-partition enumeration oracle.

RCMST: minimum spanning tree with robust subtree capacities, solved both
by spanning-tree enumeration and by branch-and-bound with lazy capacity
checks; the two must agree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParams,
    CapExceeded,
    Infeasible,
    InternalMismatch,
    MalformedX,
)
from .graphs import (
    Forest,
    Graph,
    PathSeq,
    bits_of,
    canonical_path,
    complete_graph,
    edges_within_table,
    iter_bits,
    mask_of,
)
from .setfuncs import BudgetedRobustFunction, RhsTable, ScenarioFunction, SetFunction
from .families import contains_trivial_paths

# --------------------------------------------------------------------------
# VRP instances


@dataclass(frozen=True)
class VrpInstance:
    """Customers are 0-based internally; the depot is implicit.

    `edge_costs` is indexed by the canonical edge id of the complete
    customer graph; `depot_costs[v]` prices the depot edge to customer v.
    """

    n: int
    k: int
    depot_costs: tuple[Fraction, ...]
    edge_costs: tuple[Fraction, ...]
    routes: object
    rhs: RhsTable

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise BadParams("need 1 <= k <= number of customers")
        if len(self.depot_costs) != self.n:
            raise BadParams("depot_costs must have one entry per customer")
        g = self.graph
        if len(self.edge_costs) != g.m:
            raise BadParams("edge_costs must cover the complete customer graph")
        if any(x < 0 for x in self.depot_costs + self.edge_costs):
            raise BadParams("costs must be nonnegative")
        if self.rhs.host != g:
            raise BadParams("rhs table host mismatch")
        if not contains_trivial_paths(self.routes):
            raise BadParams("route family must contain all paths with "
                            "at most one vertex")

    @property
    def graph(self) -> Graph:
        return complete_graph(self.n)


@dataclass(frozen=True)
class VrpSolution:
    """Exactly k routes, one per vehicle, each a tuple of customer ids."""

    routes: tuple[PathSeq, ...]
    cost: Fraction
    x_depot: tuple[int, ...]
    x_edges: tuple[int, ...]


def route_cost(inst: VrpInstance, seq: PathSeq) -> Fraction:
    if not seq:
        raise BadParams("routes must be nonempty")
    g = inst.graph
    cost = inst.depot_costs[seq[0]] + inst.depot_costs[seq[-1]]
    for a, b in zip(seq, seq[1:]):
        cost += inst.edge_costs[g.edge_id(a, b)]
    return cost


def _solution_from_routes(inst: VrpInstance, routes) -> VrpSolution:
    g = inst.graph
    x_depot = [0] * inst.n
    x_edges = [0] * g.m
    total = Fraction(0)
    for seq in routes:
        x_depot[seq[0]] += 1
        x_depot[seq[-1]] += 1
        for a, b in zip(seq, seq[1:]):
            x_edges[g.edge_id(a, b)] += 1
        total += route_cost(inst, seq)
    ordered = tuple(sorted((canonical_path(tuple(r)) for r in routes),
                           key=lambda r: r[0]))
    return VrpSolution(ordered, total, tuple(x_depot), tuple(x_edges))


def oracle_solve_vrp(inst: VrpInstance) -> VrpSolution:
    """Exhaustive optimum of the route-partition problem.

    Partitions the customers into exactly k nonempty blocks; each block is
    routed by its cheapest feasible ordering.  (The VRP fixes exactly k
    vehicles: the depot-degree constraint cannot encode an empty cycle.)
    """
    n = inst.n
    full = (1 << n) - 1
    best_seq: dict[int, PathSeq] = {}
    best_cost: dict[int, Fraction] = {}
    for mask in range(1, full + 1):
        verts = bits_of(mask)
        for perm in itertools.permutations(verts):
            if perm[0] > perm[-1]:
                continue  # reversal has identical cost and membership
            if not inst.routes.contains_path(perm):
                continue
            cost = route_cost(inst, perm)
            if mask not in best_cost or cost < best_cost[mask]:
                best_cost[mask] = cost
                best_seq[mask] = perm

    # dp over (vehicles used, covered mask), carving the block of the
    # lowest uncovered customer
    dp: list[dict[int, tuple[Fraction, int]]] = [dict() for _ in range(inst.k + 1)]
    dp[0][0] = (Fraction(0), 0)
    for j in range(1, inst.k + 1):
        for covered, (cost, _) in dp[j - 1].items():
            rest = full ^ covered
            if rest == 0:
                continue
            low = rest & -rest
            sub = rest
            while sub:
                if sub & low and sub in best_cost:
                    cand = cost + best_cost[sub]
                    cur = dp[j].get(covered | sub)
                    if cur is None or cand < cur[0]:
                        dp[j][covered | sub] = (cand, sub)
                sub = (sub - 1) & rest
    if full not in dp[inst.k]:
        raise Infeasible("no partition into k feasible routes")
    routes = []
    covered, j = full, inst.k
    while j > 0:
        _, block = dp[j][covered]
        routes.append(best_seq[block])
        covered ^= block
        j -= 1
    return _solution_from_routes(inst, routes)


def decode_x_to_cycles(n: int, x_depot, x_edges, k: int,
                       g: Graph | None = None) -> tuple[PathSeq, ...]:
    """Split an integer vector satisfying the degree system into k routes.

    Raises MalformedX when the vector has wrong degrees or contains a
    depot-free cycle (a GSEC violation upstream).
    """
    g = g or complete_graph(n)
    deg = [0] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    for e, val in enumerate(x_edges):
        if val not in (0, 1):
            raise MalformedX(f"customer edge {g.edges[e]} has value {val}")
        if val:
            u, v = g.edges[e]
            deg[u] += 1
            deg[v] += 1
            adj[u].append(v)
            adj[v].append(u)
    for v in range(n):
        if x_depot[v] not in (0, 1, 2):
            raise MalformedX(f"depot edge to {v} has value {x_depot[v]}")
        if deg[v] + x_depot[v] != 2:
            raise MalformedX(f"customer {v} has degree {deg[v] + x_depot[v]}")
    if sum(x_depot) != 2 * k:
        raise MalformedX(f"depot degree is {sum(x_depot)}, expected {2 * k}")

    routes = []
    seen = [False] * n
    for start in range(n):
        if seen[start] or deg[start] == 2:
            continue
        # start is a route endpoint (depot-adjacent)
        seq = [start]
        seen[start] = True
        prev = -1
        while True:
            nxt = [w for w in adj[seq[-1]] if w != prev]
            if not nxt:
                break
            prev = seq[-1]
            seq.append(nxt[0])
            seen[nxt[0]] = True
        routes.append(canonical_path(tuple(seq)))
    if not all(seen):
        bad = min(v for v in range(n) if not seen[v])
        raise MalformedX(f"depot-free cycle through customer {bad}")
    return tuple(sorted(routes, key=lambda r: r[0]))


def solve_vrp_form(inst: VrpInstance) -> VrpSolution:
    """Exact optimum of the edge formulation by depth-first search.

    Variables follow cost-ascending order (ties by edge id, depot edges
    first); values are tried ascending.  Degree propagation forces edges
    around saturated vertices, partial GSEC counters prune monotonically,
    and the committed cost bounds the search.
    """
    n = inst.n
    g = inst.graph
    within = edges_within_table(g)
    gsec_room = [s.bit_count() - inst.rhs[s] for s in range(1 << n)]

    # variable table: (cost, tie id, kind, payload)
    variables = []
    for v in range(n):
        variables.append((inst.depot_costs[v], v, "depot", v))
    for e, (u, v) in enumerate(g.edges):
        variables.append((inst.edge_costs[e], n + e, "edge", e))
    variables.sort(key=lambda t: (t[0], t[1]))
    nvars = len(variables)
    max_val = [2 if kind == "depot" else 1 for _, _, kind, _ in variables]
    var_at_vertex: list[list[int]] = [[] for _ in range(n)]
    for idx, (_, _, kind, payload) in enumerate(variables):
        if kind == "depot":
            var_at_vertex[payload].append(idx)
        else:
            u, v = g.edges[payload]
            var_at_vertex[u].append(idx)
            var_at_vertex[v].append(idx)

    value = [-1] * nvars
    deg = [0] * n
    rem = [sum(max_val[i] for i in var_at_vertex[v]) for v in range(n)]
    depot_deg = 0
    depot_rem = 2 * n  # each depot edge contributes up to 2
    gsec_cnt = [0] * (1 << n)
    state = {"cost": Fraction(0), "best": None, "best_sol": None}

    def assign(idx, val, trail):
        kind, payload = variables[idx][2], variables[idx][3]
        value[idx] = val
        trail.append(idx)
        state["cost"] += variables[idx][0] * val
        nonlocal depot_deg, depot_rem
        if kind == "depot":
            v = payload
            deg[v] += val
            rem[v] -= 2
            depot_deg += val
            depot_rem -= 2
            if deg[v] > 2 or deg[v] + rem[v] < 2:
                return False
            if depot_deg > 2 * inst.k or depot_deg + depot_rem < 2 * inst.k:
                return False
        else:
            u, v = g.edges[payload]
            deg[u] += val
            deg[v] += val
            rem[u] -= 1
            rem[v] -= 1
            if deg[u] > 2 or deg[u] + rem[u] < 2:
                return False
            if deg[v] > 2 or deg[v] + rem[v] < 2:
                return False
            if val:
                pair = (1 << u) | (1 << v)
                sup = pair
                universe = (1 << n) - 1
                # enumerate supersets of {u, v}
                free = universe ^ pair
                sub = 0
                while True:
                    s = sub | pair
                    gsec_cnt[s] += 1
                    if gsec_cnt[s] > gsec_room[s]:
                        return False
                    if sub == free:
                        break
                    sub = (sub - free) & free
        return True

    def undo(idx):
        kind, payload = variables[idx][2], variables[idx][3]
        val = value[idx]
        value[idx] = -1
        state["cost"] -= variables[idx][0] * val
        nonlocal depot_deg, depot_rem
        if kind == "depot":
            v = payload
            deg[v] -= val
            rem[v] += 2
            depot_deg -= val
            depot_rem += 2
        else:
            u, v = g.edges[payload]
            deg[u] -= val
            deg[v] -= val
            rem[u] += 1
            rem[v] += 1
            if val:
                pair = (1 << u) | (1 << v)
                free = ((1 << n) - 1) ^ pair
                sub = 0
                while True:
                    gsec_cnt[sub | pair] -= 1
                    if sub == free:
                        break
                    sub = (sub - free) & free

    def propagate(trail):
        # force edges around saturated / starved vertices to a fixpoint
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if deg[v] == 2:
                    forced = 0
                elif deg[v] + rem[v] == 2:
                    forced = None  # each undecided incident at its max
                else:
                    continue
                for idx in var_at_vertex[v]:
                    if value[idx] == -1:
                        val = max_val[idx] if forced is None else 0
                        if not assign(idx, val, trail):
                            return False
                        changed = True
            if depot_deg == 2 * inst.k or depot_deg + depot_rem == 2 * inst.k:
                target = 0 if depot_deg == 2 * inst.k else None
                for v in range(n):
                    idx_list = [i for i in var_at_vertex[v]
                                if variables[i][2] == "depot" and value[i] == -1]
                    for idx in idx_list:
                        val = max_val[idx] if target is None else 0
                        if not assign(idx, val, trail):
                            return False
                        changed = True
        return True

    def at_leaf():
        if depot_deg != 2 * inst.k or any(d != 2 for d in deg):
            return
        x_edges = [0] * g.m
        x_depot = [0] * n
        for idx, (_, _, kind, payload) in enumerate(variables):
            if kind == "depot":
                x_depot[payload] = value[idx]
            else:
                x_edges[payload] = value[idx]
        emask = mask_of(e for e in range(g.m) if x_edges[e])
        for s in range(1, 1 << n):
            if (emask & within[s]).bit_count() > gsec_room[s]:
                return
        routes = decode_x_to_cycles(n, x_depot, x_edges, inst.k, g)
        sol = _solution_from_routes(inst, routes)
        if state["best"] is None or sol.cost < state["best"]:
            state["best"] = sol.cost
            state["best_sol"] = sol

    def dfs():
        if state["best"] is not None and state["cost"] >= state["best"]:
            return
        idx = next((i for i in range(nvars) if value[i] == -1), None)
        if idx is None:
            at_leaf()
            return
        for val in range(max_val[idx] + 1):
            trail: list[int] = []
            ok = assign(idx, val, trail) and propagate(trail)
            if ok and (state["best"] is None or state["cost"] < state["best"]):
                dfs()
            while trail:
                undo(trail.pop())

    dfs()
    if state["best_sol"] is None:
        raise Infeasible("the edge formulation has no feasible point")
    return state["best_sol"]


# --------------------------------------------------------------------------
# robust capacitated minimum spanning tree


@dataclass(frozen=True)
class RcmstInstance:
    """Vertex 0 of `g0` is the depot; customer v maps to demand index v-1.

    `g` is the robust load g(S) = max over the uncertainty set of d(S)/Q,
    evaluated on customer bitmasks.  Only scenario (including singleton)
    and budgeted uncertainty is accepted: both are maxima of nonnegative
    additive functions, which keeps the load monotone and subadditive and
    makes the capacity view and the GSEC view of feasibility coincide.
    """

    g0: Graph
    costs: tuple[Fraction, ...]
    g: SetFunction

    def __post_init__(self):
        if len(self.costs) != self.g0.m:
            raise BadParams("one cost per edge required")
        if any(c < 0 for c in self.costs):
            raise BadParams("costs must be nonnegative")
        if not isinstance(self.g, (ScenarioFunction, BudgetedRobustFunction)):
            raise BadParams("uncertainty must be scenario-based or budgeted")
        if self.g.n != self.g0.n - 1:
            raise BadParams("uncertainty dimension must match the customers")
        if not self._connected():
            raise BadParams("instance graph must be connected")

    def _connected(self) -> bool:
        adj = [[] for _ in range(self.g0.n)]
        for u, v in self.g0.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.g0.n

    @property
    def n_customers(self) -> int:
        return self.g0.n - 1


@dataclass(frozen=True)
class RcmstSolution:
    edges: tuple[tuple[int, int], ...]
    cost: Fraction


def _g_table(inst: RcmstInstance) -> tuple[list[Fraction], bool]:
    n = inst.n_customers
    table = [inst.g.eval(mask) for mask in range(1 << n)]
    monotone = all(table[mask] <= table[mask | (1 << v)]
                   for mask in range(1 << n) for v in range(n)
                   if not mask >> v & 1)
    return table, monotone


def _tree_feasible(inst: RcmstInstance, edge_ids, gtab, monotone) -> bool:
    """Every subtree hanging from the depot satisfies the robust capacity."""
    n0 = inst.g0.n
    adj = [[] for _ in range(n0)]
    chosen = [inst.g0.edges[e] for e in edge_ids]
    for u, v in chosen:
        if u != 0 and v != 0:
            adj[u].append(v)
            adj[v].append(u)
    seen = [False] * n0
    seen[0] = True
    for start in range(1, n0):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in adj[x]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comp_mask = mask_of(v - 1 for v in comp)
        if monotone:
            if gtab[comp_mask] > 1:
                return False
        else:
            # full Theta check: every vertex set connected inside the subtree
            comp_edges = [(u - 1, v - 1) for u, v in chosen
                          if u != 0 and v != 0
                          and comp_mask >> (u - 1) & 1 and comp_mask >> (v - 1) & 1]
            sub = 0
            while True:
                sub = (sub - comp_mask) & comp_mask
                if sub == 0:
                    break
                inner = sum(1 for u, v in comp_edges
                            if sub >> u & 1 and sub >> v & 1)
                if sub.bit_count() - inner == 1 and gtab[sub] > 1:
                    return False
    return True


def _rcmst_by_enumeration(inst: RcmstInstance, gtab, monotone,
                          tree_cap: int = 10 ** 6):
    """Scan every spanning tree; returns (cost, edge ids) or None."""
    g0 = inst.g0
    n0 = g0.n
    m = g0.m
    need = n0 - 1
    best: tuple[Fraction, tuple[int, ...]] | None = None
    count = 0

    def rec(next_edge, chosen, parent):
        nonlocal best, count
        if len(chosen) == need:
            count += 1
            if count > tree_cap:
                raise CapExceeded(count, tree_cap)
            if _tree_feasible(inst, chosen, gtab, monotone):
                cost = sum((inst.costs[e] for e in chosen), Fraction(0))
                if best is None or cost < best[0]:
                    best = (cost, tuple(chosen))
            return
        if m - next_edge < need - len(chosen):
            return
        for e in range(next_edge, m):
            u, v = g0.edges[e]
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
            chosen.append(e)
            rec(e + 1, chosen, upd)
            chosen.pop()

    rec(0, [], list(range(n0)))
    return best


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def _gsec_leaf_ok(inst: RcmstInstance, edge_ids, gtab) -> bool:
    """The formulation view: the customer-edge part of the tree must
    satisfy every GSEC with RHS max(1, ceil(g(S)))."""
    n = inst.n_customers
    cust_edges = [(u - 1, v - 1) for u, v in
                  (inst.g0.edges[e] for e in edge_ids) if u != 0 and v != 0]
    for s in range(1, 1 << n):
        room = s.bit_count() - max(1, math.ceil(gtab[s]))
        inside = sum(1 for u, v in cust_edges
                     if s >> u & 1 and s >> v & 1)
        if inside > room:
            return False
    return True


def _rcmst_by_bnb(inst: RcmstInstance, gtab, monotone):
    """Include/exclude search over cost-sorted edges with lazy GSEC checks
    at spanning leaves and a monotone load prune along the way.

    Loads are tracked per customer-edge-connected component (a separate
    union-find): components joined only through the depot stay separate
    subtrees of T - 0 and must not pool their demand.
    """
    g0 = inst.g0
    n0 = g0.n
    order = sorted(range(g0.m), key=lambda e: (inst.costs[e], e))
    need = n0 - 1
    best: dict = {"cost": None, "edges": None}

    def rec(pos, chosen, cost, parent, cust_parent, loads):
        if best["cost"] is not None and cost >= best["cost"]:
            return
        if len(chosen) == need:
            if _gsec_leaf_ok(inst, chosen, gtab):
                if best["cost"] is None or cost < best["cost"]:
                    best["cost"] = cost
                    best["edges"] = tuple(sorted(chosen))
            return
        if pos == len(order) or len(chosen) + (len(order) - pos) < need:
            return
        e = order[pos]
        u, v = g0.edges[e]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            prune = False
            upd = list(parent)
            upd[ru] = rv
            new_cust = cust_parent
            new_loads = loads
            if u != 0 and v != 0:
                cru, crv = _find(cust_parent, u), _find(cust_parent, v)
                merged = loads.get(cru, 1 << (u - 1)) | loads.get(crv, 1 << (v - 1))
                if monotone and gtab[merged] > 1:
                    prune = True
                else:
                    new_cust = list(cust_parent)
                    new_cust[cru] = crv
                    new_loads = dict(loads)
                    new_loads.pop(cru, None)
                    new_loads[crv] = merged
            if not prune:
                chosen.append(e)
                rec(pos + 1, chosen, cost + inst.costs[e], upd, new_cust,
                    new_loads)
                chosen.pop()
        rec(pos + 1, chosen, cost, parent, cust_parent, loads)

    rec(0, [], Fraction(0), list(range(n0)), list(range(n0)), {})
    if best["cost"] is None:
        return None
    return best["cost"], best["edges"]


def solve_rcmst(inst: RcmstInstance, tree_cap: int = 10 ** 6) -> RcmstSolution:
    """Minimum spanning tree whose depot subtrees satisfy the robust
    capacity; the enumeration oracle and the search must agree exactly."""
    gtab, monotone = _g_table(inst)
    by_enum = _rcmst_by_enumeration(inst, gtab, monotone, tree_cap)
    by_bnb = _rcmst_by_bnb(inst, gtab, monotone)
    if (by_enum is None) != (by_bnb is None):
        raise InternalMismatch("oracle and search disagree on feasibility")
    if by_enum is None:
        raise Infeasible("no capacity-feasible spanning tree")
    if by_enum[0] != by_bnb[0]:
        raise InternalMismatch(
            f"oracle cost {by_enum[0]} differs from search cost {by_bnb[0]}")
    edges = tuple(inst.g0.edges[e] for e in by_bnb[1])
    return RcmstSolution(edges, by_bnb[0])
