"""Parsing and emission of the JSON interchange formats.

Rationals travel as "p/q" strings (plain integers allowed on input), so no
float ever enters or leaves the library.  Vertices are 0-based in graph and
family files; VRP and RCMST instance files use 0 for the depot and 1..n for
customers.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .graphs import Forest, Graph, bits_of, complete_graph, iter_bits, mask_of
from .families import (
    BrpPaths,
    Cmst,
    CvrpPaths,
    DegreeBounded,
    ExplicitForests,
    ExplicitPaths,
    ExplicitTrees,
    Omega,
    PathRestriction,
    ThetaTrees,
    TreeClosure,
)
from .setfuncs import (
    BudgetedRobustFunction,
    RhsTable,
    ScenarioFunction,
    TableFunction,
    XosFunction,
    as_fraction,
    rhs_from_g,
    xos_from_demands,
    cvrp_g,
)
from .solvers import RcmstInstance, RcmstSolution, VrpInstance, VrpSolution


def parse_fraction(value, field="") -> Fraction:
    try:
        if isinstance(value, bool):
            raise ValueError(value)
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ParseError(f"expected a rational like '3/4', got {value!r}", field)


def fraction_str(x: Fraction) -> str:
    return str(Fraction(x))


def _require(obj, key, field=""):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field '{key}'", field)
    return obj[key]


# --------------------------------------------------------------------------
# graphs and forests


def graph_from_json(obj, field="graph") -> Graph:
    n = _require(obj, "n", field)
    edges = _require(obj, "edges", field)
    if not isinstance(n, int) or n < 1:
        raise ParseError("'n' must be a positive integer", field)
    out = []
    for e in edges:
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) for x in e) or e[0] >= e[1]):
            raise ParseError(f"edge {e} must be [u, v] with u < v", field)
        out.append((e[0], e[1]))
    try:
        return Graph(n, tuple(sorted(out)))
    except ValueError as exc:
        raise ParseError(str(exc), field) from None


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def forest_from_json(obj, g: Graph, field="forest") -> Forest:
    verts = mask_of(_require(obj, "verts", field))
    emask = 0
    for e in _require(obj, "edges", field):
        try:
            emask |= 1 << g.edge_id(e[0], e[1])
        except (ValueError, IndexError, TypeError):
            raise ParseError(f"unknown edge {e}", field) from None
    f = Forest(verts, emask)
    from .graphs import is_valid_forest
    if not is_valid_forest(g, f):
        raise ParseError(f"{obj} is not a forest of the host graph", field)
    return f


def forest_to_json(f: Forest, g: Graph) -> dict:
    return {"verts": list(bits_of(f.verts)),
            "edges": [list(g.edges[j]) for j in iter_bits(f.edges)]}


# --------------------------------------------------------------------------
# set functions


def setfunction_from_json(obj, field="g"):
    kind = _require(obj, "kind", field)
    if kind == "xos":
        weights = tuple(
            tuple(parse_fraction(x, field) for x in w)
            for w in _require(obj, "weights", field))
        return XosFunction(weights)
    if kind == "table":
        raw = _require(obj, "values", field)
        n = obj.get("n")
        if n is None:
            n = max((int(k) for k in raw), default=0).bit_length()
        values = [Fraction(0)] * (1 << n)
        for key, val in raw.items():
            values[int(key)] = parse_fraction(val, field)
        return TableFunction(tuple(values))
    if kind == "scenarios":
        ds = tuple(tuple(parse_fraction(x, field) for x in d)
                   for d in _require(obj, "ds", field))
        return ScenarioFunction(ds, parse_fraction(_require(obj, "Q", field)))
    if kind == "singleton":
        d = tuple(parse_fraction(x, field) for x in _require(obj, "d", field))
        return ScenarioFunction((d,), parse_fraction(_require(obj, "Q", field)))
    if kind == "budgeted":
        return BudgetedRobustFunction(
            tuple(parse_fraction(x, field) for x in _require(obj, "dbar", field)),
            tuple(parse_fraction(x, field) for x in _require(obj, "dhat", field)),
            parse_fraction(_require(obj, "gamma", field)),
            parse_fraction(_require(obj, "Q", field)))
    raise ParseError(f"unknown set-function kind {kind!r}", field)


def setfunction_to_json(g) -> dict:
    if isinstance(g, XosFunction):
        return {"kind": "xos",
                "weights": [[fraction_str(x) for x in w] for w in g.weights]}
    if isinstance(g, TableFunction):
        return {"kind": "table", "n": g.n,
                "values": {str(m): fraction_str(v)
                           for m, v in enumerate(g.values) if v != 0}}
    if isinstance(g, ScenarioFunction):
        return {"kind": "scenarios",
                "ds": [[fraction_str(x) for x in d] for d in g.scenarios],
                "Q": fraction_str(g.Q)}
    if isinstance(g, BudgetedRobustFunction):
        return {"kind": "budgeted",
                "dbar": [fraction_str(x) for x in g.dbar],
                "dhat": [fraction_str(x) for x in g.dhat],
                "gamma": fraction_str(g.gamma), "Q": fraction_str(g.Q)}
    raise ParseError(f"cannot serialize {type(g).__name__}")


def rhs_to_json(t: RhsTable) -> dict:
    return {"kind": "table",
            "values": {str(m): t.values[m] for m in range(1, len(t.values))}}


def rhs_from_json(obj, host: Graph, field="rhs") -> RhsTable:
    raw = _require(obj, "values", field)
    values = [1] * (1 << host.n)
    values[0] = 0
    for key, val in raw.items():
        if not isinstance(val, int):
            raise ParseError(f"RHS values must be integers, got {val!r}", field)
        values[int(key)] = val
    try:
        return RhsTable(host, tuple(values))
    except Exception as exc:
        raise ParseError(str(exc), field) from None


# --------------------------------------------------------------------------
# families


def family_from_json(obj, field="family"):
    kind = _require(obj, "kind", field)
    if kind == "path_restriction":
        base = family_from_json(_require(obj, "base", field), field + ".base")
        return PathRestriction(base.host, base)
    g = graph_from_json(_require(obj, "graph", field), field + ".graph")
    if kind == "omega":
        return Omega(g)
    if kind == "cmst":
        d = tuple(parse_fraction(x, field) for x in _require(obj, "d", field))
        return Cmst(g, d, parse_fraction(_require(obj, "Q", field), field))
    if kind == "degree":
        b = tuple(_require(obj, "b", field))
        if len(b) != g.n or not all(isinstance(x, int) and x >= 0 for x in b):
            raise ParseError("'b' must list one nonnegative bound per vertex",
                             field)
        return DegreeBounded(g, b)
    if kind == "brp":
        d = tuple(parse_fraction(x, field) for x in _require(obj, "d", field))
        Q = parse_fraction(_require(obj, "Q", field), field)
        return TreeClosure(g, BrpPaths(g, d, Q))
    if kind == "theta":
        gfun = setfunction_from_json(_require(obj, "g", field), field + ".g")
        return TreeClosure(g, ThetaTrees(g, gfun))
    if kind == "explicit":
        forests = frozenset(forest_from_json(o, g, field)
                            for o in _require(obj, "forests", field))
        return ExplicitForests(g, forests)
    if kind == "tree_closure":
        trees = frozenset(forest_from_json(o, g, field)
                          for o in _require(obj, "trees", field))
        return TreeClosure(g, ExplicitTrees(g, trees))
    raise ParseError(f"unknown family kind {kind!r}", field)


def family_to_json(fam) -> dict:
    if isinstance(fam, PathRestriction):
        return {"kind": "path_restriction", "base": family_to_json(fam.base)}
    g = fam.host
    base = {"graph": graph_to_json(g)}
    if isinstance(fam, Omega):
        return {**base, "kind": "omega"}
    if isinstance(fam, Cmst):
        return {**base, "kind": "cmst",
                "d": [fraction_str(x) for x in fam.d],
                "Q": fraction_str(fam.Q)}
    if isinstance(fam, DegreeBounded):
        return {**base, "kind": "degree", "b": list(fam.b)}
    if isinstance(fam, TreeClosure) and isinstance(fam.trees, BrpPaths):
        return {**base, "kind": "brp",
                "d": [fraction_str(x) for x in fam.trees.d],
                "Q": fraction_str(fam.trees.Q)}
    if isinstance(fam, TreeClosure) and isinstance(fam.trees, ThetaTrees):
        return {**base, "kind": "theta",
                "g": setfunction_to_json(fam.trees.g)}
    if isinstance(fam, TreeClosure) and isinstance(fam.trees, ExplicitTrees):
        return {**base, "kind": "tree_closure",
                "trees": [forest_to_json(t, g)
                          for t in sorted(fam.trees.trees)]}
    if isinstance(fam, ExplicitForests):
        return {**base, "kind": "explicit",
                "forests": [forest_to_json(f, g) for f in sorted(fam.forests)]}
    raise ParseError(f"cannot serialize family {type(fam).__name__}")


# --------------------------------------------------------------------------
# certificates


def mask_to_verts(mask: int) -> list[int]:
    return list(bits_of(mask))


def certificate_to_json(cert, g: Graph) -> dict:
    tag = cert[0]
    if tag == "extra_integer_point":
        return {"type": tag,
                "edges": [list(g.edges[j]) for j in iter_bits(cert[1])]}
    if tag == "violating_gsec":
        _, emask, s, lhs, rhs = cert
        return {"type": tag,
                "edges": [list(g.edges[j]) for j in iter_bits(emask)],
                "S": mask_to_verts(s), "lhs": fraction_str(Fraction(lhs)),
                "rhs_value": rhs}
    if tag == "separating_point":
        _, s, x, lhs, rhs = cert
        return {"type": tag, "S": mask_to_verts(s),
                "x": {f"{u}-{v}": fraction_str(val)
                      for (u, v), val in zip(g.edges, x) if val != 0},
                "lhs": fraction_str(lhs), "rhs_value": rhs}
    if tag in ("not_downward_closed", "not_edge_consistent"):
        names = {"not_downward_closed": ("member", "subgraph"),
                 "not_edge_consistent": ("member", "non_member")}[tag]
        return {"type": tag,
                names[0]: forest_to_json(cert[1], g),
                names[1]: forest_to_json(cert[2], g)}
    if tag == "mip_violation":
        _, forest, comps, ell = cert
        return {"type": tag, "forest": forest_to_json(forest, g),
                "components": comps, "ell": ell}
    if tag == "phi_mismatch":
        return {"type": tag, "forest": forest_to_json(cert[1], g),
                "in_phi": cert[2]}
    if tag in ("subpath_violation", "subsequence_violation", "star_violation"):
        return {"type": tag, "path": list(cert[1]), "other": list(cert[2])}
    raise ParseError(f"unknown certificate tag {tag!r}")


# --------------------------------------------------------------------------
# VRP / RCMST instances (depot = 0, customers = 1..n in the files)


def _edge_cost_map(obj, n, field, offset=1):
    """Parse {"u-v": cost} with JSON ids into a dense internal cost tuple."""
    g = complete_graph(n)
    costs = [None] * g.m
    for key, val in obj.items():
        try:
            a, b = (int(x) - offset for x in key.split("-"))
        except ValueError:
            raise ParseError(f"bad edge key {key!r}", field) from None
        if not (0 <= a < n and 0 <= b < n and a != b):
            raise ParseError(f"edge key {key!r} out of range", field)
        costs[g.edge_id(a, b)] = parse_fraction(val, field)
    missing = [g.edges[e] for e in range(g.m) if costs[e] is None]
    if missing:
        u, v = missing[0]
        raise ParseError(f"missing cost for edge {u + offset}-{v + offset}",
                         field)
    return tuple(costs)


def path_family_from_json(obj, host: Graph, field="routes"):
    kind = _require(obj, "kind", field)
    if kind == "brp":
        d = tuple(parse_fraction(x, field) for x in _require(obj, "d", field))
        return BrpPaths(host, d, parse_fraction(_require(obj, "Q", field)))
    if kind == "cvrp":
        d = tuple(parse_fraction(x, field) for x in _require(obj, "d", field))
        return CvrpPaths(host, d, parse_fraction(_require(obj, "Q", field)))
    if kind == "explicit":
        from .graphs import canonical_path
        paths = frozenset(canonical_path(tuple(v - 1 for v in p))
                          for p in _require(obj, "paths", field))
        return ExplicitPaths(host, paths)
    raise ParseError(f"unknown route-family kind {kind!r}", field)


def path_family_to_json(fam) -> dict:
    if isinstance(fam, BrpPaths):
        return {"kind": "brp", "d": [fraction_str(x) for x in fam.d],
                "Q": fraction_str(fam.Q)}
    if isinstance(fam, CvrpPaths):
        return {"kind": "cvrp", "d": [fraction_str(x) for x in fam.d],
                "Q": fraction_str(fam.Q)}
    if isinstance(fam, ExplicitPaths):
        return {"kind": "explicit",
                "paths": [[v + 1 for v in p] for p in sorted(fam.paths)]}
    raise ParseError(f"cannot serialize route family {type(fam).__name__}")


def vrp_instance_from_json(obj, field="instance") -> VrpInstance:
    n = _require(obj, "n", field)
    k = _require(obj, "k", field)
    if not isinstance(n, int) or not isinstance(k, int):
        raise ParseError("'n' and 'k' must be integers", field)
    depot = tuple(parse_fraction(x, field)
                  for x in _require(obj, "depot_costs", field))
    if len(depot) != n:
        raise ParseError("'depot_costs' must have n entries", field)
    edge_costs = _edge_cost_map(_require(obj, "edge_costs", field), n, field) \
        if n > 1 else ()
    host = complete_graph(n)
    routes = path_family_from_json(_require(obj, "routes", field), host, field)
    rhs_obj = _require(obj, "rhs", field)
    if rhs_obj == "auto":
        if isinstance(routes, BrpPaths):
            rhs = rhs_from_g(xos_from_demands(routes.d, routes.Q), host)
        elif isinstance(routes, CvrpPaths):
            rhs = rhs_from_g(cvrp_g(routes.d, routes.Q), host)
        else:
            raise ParseError("'auto' rhs needs a brp or cvrp route family",
                             field)
    else:
        rhs = rhs_from_json(rhs_obj, host, field + ".rhs")
    try:
        return VrpInstance(n, k, depot, edge_costs, routes, rhs)
    except Exception as exc:
        raise ParseError(str(exc), field) from None


def vrp_solution_to_json(sol: VrpSolution) -> dict:
    return {"cost": fraction_str(sol.cost),
            "cycles": [[0] + [v + 1 for v in route] + [0]
                       for route in sol.routes]}


def rcmst_instance_from_json(obj, field="instance") -> RcmstInstance:
    n = _require(obj, "n", field)
    if not isinstance(n, int) or n < 1:
        raise ParseError("'n' must be a positive integer", field)
    g0 = graph_from_json({"n": n + 1, "edges": _require(obj, "edges", field)},
                         field + ".edges")
    cost_map = _require(obj, "costs", field)
    costs = [None] * g0.m
    for key, val in cost_map.items():
        try:
            a, b = (int(x) for x in key.split("-"))
            costs[g0.edge_id(a, b)] = parse_fraction(val, field)
        except (ValueError, IndexError):
            raise ParseError(f"bad cost key {key!r}", field) from None
    if any(c is None for c in costs):
        raise ParseError("every edge needs a cost", field)
    g = setfunction_from_json(_require(obj, "uncertainty", field),
                              field + ".uncertainty")
    try:
        return RcmstInstance(g0, tuple(costs), g)
    except Exception as exc:
        raise ParseError(str(exc), field) from None


def rcmst_solution_to_json(sol: RcmstSolution) -> dict:
    return {"cost": fraction_str(sol.cost),
            "edges": [list(e) for e in sol.edges]}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
