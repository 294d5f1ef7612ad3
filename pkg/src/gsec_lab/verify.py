"""Seeded randomized suites exercising the library's theorem-level claims.

Each suite is deterministic in (seed, trials): per-trial generators are
seeded with "seed:trial".  A suite reports per-trial failures; an empty
failure list means full agreement.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import Infeasible, InternalMismatch
from .graphs import (
    Forest,
    Graph,
    bits_of,
    complete_graph,
    edges_within_table,
    enumerate_paths,
    iter_bits,
    mask_of,
    submasks,
)
from .families import (
    BrpPaths,
    Cmst,
    CvrpPaths,
    EdgeMaskFamily,
    ExplicitPaths,
    ThetaTrees,
    TreeClosure,
    brp_band_feasible,
    brp_interval_feasible,
    family_members,
    path_forests,
)
from .graphs import canonical_path
from .setfuncs import is_subadditive
from .bounds import lower_bound_table, minimal_infeasible
from .polytope import GsecPolytope, integer_points, max_xS, represents
from .representability import (
    conditioned_representable,
    claim_equal_components,
    has_mip_property,
    is_representable,
    rhs_admissible,
)
from .setfuncs import (
    RhsTable,
    ScenarioFunction,
    BudgetedRobustFunction,
    XosFunction,
    cvrp_g,
    rhs_from_g,
    xos_from_demands,
)
from .simplex import gauss_solve
from .solvers import (
    RcmstInstance,
    VrpInstance,
    oracle_solve_vrp,
    solve_rcmst,
    solve_vrp_form,
)


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"suite": self.name, "trials": self.trials,
                "failures": [list(f) for f in self.failures],
                "info": {k: self.info[k] for k in sorted(self.info)},
                "passed": self.passed}


# --------------------------------------------------------------------------
# random generators


def rand_fraction(rng, lo, hi, max_den=4) -> Fraction:
    den = rng.randint(1, max_den)
    num = rng.randint(int(lo * den), int(hi * den))
    return Fraction(num, den)


def rand_graph(rng, n_lo=3, n_hi=6, p=0.7) -> Graph:
    n = rng.randint(n_lo, n_hi)
    edges = tuple(e for e in complete_graph(n).edges if rng.random() < p)
    return Graph(n, edges)


def rand_forest_mask(rng, g: Graph, p_vert=0.8, p_edge=0.7) -> Forest:
    vmask = mask_of(v for v in range(g.n) if rng.random() < p_vert)
    ids = [j for j, (u, v) in enumerate(g.edges)
           if vmask >> u & 1 and vmask >> v & 1]
    rng.shuffle(ids)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    emask = 0
    for j in ids:
        if rng.random() >= p_edge:
            continue
        u, v = g.edges[j]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            emask |= 1 << j
    return Forest(vmask, emask)


def rand_downclosed_family(rng, g: Graph, seeds=3) -> EdgeMaskFamily:
    """Down-closure of a random antichain of forests, edge-consistent by
    construction (membership is a function of the edge set)."""
    masks = {0}
    for _ in range(rng.randint(1, seeds)):
        f = rand_forest_mask(rng, g)
        masks.update(submasks(f.edges))
    return EdgeMaskFamily(g, frozenset(masks))


def rand_rhs_table(rng, g: Graph) -> RhsTable:
    values = [0] * (1 << g.n)
    for mask in range(1, 1 << g.n):
        values[mask] = rng.randint(1, mask.bit_count())
    return RhsTable(g, tuple(values))


def rand_xos(rng, n: int, max_vectors=4) -> XosFunction:
    weights = tuple(
        tuple(rand_fraction(rng, -1, 1) for _ in range(n))
        for _ in range(rng.randint(1, max_vectors)))
    return XosFunction(weights)


# --------------------------------------------------------------------------
# shared checks


def integer_points_downward_closed(p: GsecPolytope) -> bool:
    """If x is an integer point then so is every 0/1 vector below it."""
    pts = set(integer_points(p))
    return all(sub in pts for mask in pts for sub in submasks(mask))


# --------------------------------------------------------------------------
# suite: theorem-1 equivalence (combinatorial verdict vs enumeration)


def suite_thm1(trials=200, seed=0, cap=8) -> SuiteResult:
    res = SuiteResult("thm1", trials)
    verdicts = {"representable": 0, "not_representable": 0}
    for t in range(trials):
        rng = trial_rng(seed, t)
        g = rand_graph(rng)
        fam = rand_downclosed_family(rng, g)
        report = is_representable(fam, cap, cross_validate=False)
        if not report.ell.valid_rhs:
            res.failures.append((t, "ell exceeded |S| on a DC+EC family"))
            continue
        poly = GsecPolytope(g, report.ell.as_rhs_table())
        enum_ok, _ = represents(poly, fam, cap)
        if enum_ok != report.representable:
            res.failures.append(
                (t, f"theorem={report.representable} enumeration={enum_ok}"))
        if not integer_points_downward_closed(poly):
            res.failures.append((t, "integer points not downward closed"))
        verdicts["representable" if report.representable
                 else "not_representable"] += 1
    res.info.update(verdicts)
    return res


# --------------------------------------------------------------------------
# suite: RHS sandwich (theorem-2)


def _rhs_box(ell, u):
    """Iterator over every RHS table with ell <= f <= u pointwise; None when
    the box has more than 512 points."""
    size = 1
    ranges = []
    for mask in range(len(ell.values)):
        lo = ell.values[mask]
        hi = u.values[mask]
        if mask == 0:
            ranges.append((0, 0))
            continue
        ranges.append((lo, hi))
        size *= hi - lo + 1
        if size > 512:
            return None
    return itertools.product(*[range(lo, hi + 1) for lo, hi in ranges])


def suite_thm2(trials=100, seed=0, cap=8) -> SuiteResult:
    res = SuiteResult("thm2", trials)
    boxes = 0
    admissible_true = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        fam = None
        for attempt in range(200):
            g = rand_graph(rng, 3, 5)
            cand = rand_downclosed_family(rng, g)
            report = is_representable(cand, cap, cross_validate=False)
            if not report.representable:
                continue
            box = _rhs_box(report.ell, report.u)
            if box is not None:
                fam = cand
                break
        if fam is None:
            res.failures.append((t, "no representable family with a small box"))
            continue
        if not all(lo <= hi for lo, hi in zip(report.ell.values,
                                              report.u.values)):
            res.failures.append((t, "ell exceeds u on a representable family"))
            continue
        # (a) every f in the sandwich box represents the family
        for values in box:
            table = RhsTable(g, values)
            ok, _ = represents(GsecPolytope(g, table), fam, cap)
            boxes += 1
            if not ok:
                res.failures.append(
                    (t, f"boxed f {values} fails to represent"))
                break
        # (b) a random RHS table: theorem verdict vs enumeration verdict
        f = rand_rhs_table(rng, g)
        try:
            verdict, _ = rhs_admissible(fam, f, cap)
            if verdict:
                admissible_true += 1
        except InternalMismatch as exc:
            res.failures.append((t, f"admissibility mismatch: {exc}"))
        if not integer_points_downward_closed(GsecPolytope(g, f)):
            res.failures.append((t, "integer points not downward closed"))
    res.info.update({"boxed_tables_checked": boxes,
                     "random_tables_admissible": admissible_true})
    return res


# --------------------------------------------------------------------------
# suite: conditioned representation inside C_path


def rand_path_family(rng, g: Graph):
    """Route families of mixed character: capacity-style, rebalancing-style,
    random subpath-closed explicit sets, and occasional closure violators."""
    style = rng.randrange(4)
    if style == 0:
        Q = Fraction(rng.randint(2, 5))
        d = tuple(rand_fraction(rng, 0, int(Q)) for _ in range(g.n))
        return CvrpPaths(g, d, Q)
    if style == 1:
        Q = Fraction(rng.randint(1, 4))
        d = tuple(rand_fraction(rng, -int(Q), int(Q)) for _ in range(g.n))
        return BrpPaths(g, d, Q)
    paths = set()
    pool = [p for p in enumerate_paths(g) if len(p) >= 2]
    for p in rng.sample(pool, min(len(pool), rng.randint(1, 4))):
        for i in range(len(p)):
            for j in range(i, len(p) + 1):
                paths.add(canonical_path(p[i:j]))
    paths.add(())
    paths.update((v,) for v in range(g.n))
    if style == 3 and len(paths) > g.n + 2:
        # break closure or property (*) by dropping one longer member
        victim = rng.choice(sorted(p for p in paths if len(p) >= 2))
        paths.discard(victim)
    return ExplicitPaths(g, frozenset(paths))


def suite_prop4(trials=100, seed=0, cap=8) -> SuiteResult:
    res = SuiteResult("prop4", trials)
    verdicts = {"representable": 0, "not_representable": 0}
    for t in range(trials):
        rng = trial_rng(seed, t)
        g = rand_graph(rng, 3, 6)
        routes = rand_path_family(rng, g)
        h = TreeClosure(g, routes)
        c = path_forests(g)
        if rng.random() < 0.5 and isinstance(routes, (BrpPaths, CvrpPaths)):
            gfun = (xos_from_demands(routes.d, routes.Q)
                    if isinstance(routes, BrpPaths)
                    else cvrp_g(routes.d, routes.Q))
            f = rhs_from_g(gfun, g)
        else:
            f = rand_rhs_table(rng, g)
        try:
            report = conditioned_representable(h, c, f, cap)
            verdicts["representable" if report.representable
                     else "not_representable"] += 1
        except InternalMismatch as exc:
            res.failures.append((t, f"conditioned mismatch: {exc}"))
        if not integer_points_downward_closed(GsecPolytope(g, f)):
            res.failures.append((t, "integer points not downward closed"))
    res.info.update(verdicts)
    return res


# --------------------------------------------------------------------------
# suite: subadditive / XOS construction


def prop5_check(g: Graph, gfun) -> tuple[str, object]:
    """One trial body: subadditivity is a precondition, the representation
    equality is the claim under test."""
    ok, pair = is_subadditive(gfun, g)
    if not ok:
        return "precondition_violation", pair
    f = rhs_from_g(gfun, g)
    fam = TreeClosure(g, ThetaTrees(g, gfun))
    represented, cert = represents(GsecPolytope(g, f), fam)
    if not represented:
        return "theorem_failure", cert
    if not integer_points_downward_closed(GsecPolytope(g, f)):
        return "theorem_failure", "integer points not downward closed"
    return "ok", None


def suite_prop5(trials=100, seed=0, cap=8) -> SuiteResult:
    res = SuiteResult("prop5", trials)
    outcomes = {"ok": 0, "precondition_violation": 0}
    for t in range(trials):
        rng = trial_rng(seed, t)
        g = rand_graph(rng, 3, 6)
        gfun = rand_xos(rng, g.n)
        status, detail = prop5_check(g, gfun)
        if status == "theorem_failure":
            res.failures.append((t, f"representation failed: {detail}"))
        elif status == "precondition_violation":
            # impossible for XOS inputs; a violation means the fact is wrong
            res.failures.append((t, f"XOS function not subadditive: {detail}"))
        else:
            outcomes["ok"] += 1
    res.info.update(outcomes)
    return res


# --------------------------------------------------------------------------
# suite: BRP evaluator equivalence


def suite_brp(trials=50, seed=0, customers=7) -> SuiteResult:
    """All path tuples over `customers` vertices, by both evaluators.

    Demands are drawn as rationals with |d_v| <= Q, then rescaled to a
    common denominator so the sweep runs on exact integers; a sampled
    slice re-runs on the raw rationals to pin the two views together.
    """
    res = SuiteResult("brp", trials)
    paths_checked = 0
    g = complete_graph(customers)
    all_paths = enumerate_paths(g)
    for t in range(trials):
        rng = trial_rng(seed, t)
        Q = Fraction(rng.randint(1, 4))
        d = tuple(rand_fraction(rng, -int(Q), int(Q)) for _ in range(customers))
        scale = lcm(Q.denominator, *[x.denominator for x in d])
        d_int = tuple(int(x * scale) for x in d)
        q_int = int(Q * scale)
        for p in all_paths:
            a = brp_band_feasible(d_int, q_int, p)
            b = brp_interval_feasible(d_int, q_int, p)
            paths_checked += 1
            if a != b:
                res.failures.append((t, f"evaluators disagree on {p}"))
                break
            if rng.random() < 0.02:
                if brp_band_feasible(d, Q, p) != a:
                    res.failures.append((t, f"rescaling changed verdict on {p}"))
                    break
    res.info["paths_checked"] = paths_checked
    return res


# --------------------------------------------------------------------------
# suite: structural claims (equal components, tree-closure levels)


def suite_claim(trials=200, seed=0, cap=8) -> SuiteResult:
    res = SuiteResult("claim", trials)
    checked = 0
    tree_closures = 0
    t = 0
    budget = trials * 20
    while checked < trials and budget > 0:
        budget -= 1
        rng = trial_rng(seed, t)
        t += 1
        g = rand_graph(rng)
        style = rng.randrange(3)
        if style == 0:
            fam = rand_downclosed_family(rng, g)
        elif style == 1:
            Q = Fraction(rng.randint(2, 5))
            d = tuple(rand_fraction(rng, 0, int(Q)) for _ in range(g.n))
            fam = Cmst(g, d, Q)
        else:
            fam = TreeClosure(g, ThetaTrees(g, rand_xos(rng, g.n)))
        mip, _, ell = has_mip_property(fam, cap)
        if not mip:
            continue
        checked += 1
        try:
            claim_equal_components(fam, cap)
        except InternalMismatch as exc:
            res.failures.append((t - 1, str(exc)))
        if isinstance(fam, TreeClosure):
            tree_closures += 1
            if any(v not in (0, 1, 2) for v in ell.values):
                res.failures.append((t - 1, "tree closure ell outside {1,2}"))
            bad = [f for f in minimal_infeasible(fam, None, cap)
                   if f.verts.bit_count() - f.edges.bit_count() != 1]
            if bad:
                res.failures.append(
                    (t - 1, f"minimal infeasible non-tree {bad[0]}"))
    res.info.update({"families_with_mip": checked,
                     "tree_closures": tree_closures})
    if checked < trials:
        res.failures.append((-1, f"only {checked} MIP families generated"))
    return res


# --------------------------------------------------------------------------
# solver agreement and LP cross-checks (used by the acceptance tests)


def rand_vrp_instance(rng, kind: str) -> VrpInstance:
    n = rng.randint(3, 7)
    k = rng.randint(1, min(3, n))
    host = complete_graph(n)
    depot = tuple(rand_fraction(rng, 0, 8) for _ in range(n))
    edges = tuple(rand_fraction(rng, 0, 8) for _ in range(host.m))
    Q = Fraction(rng.randint(2, 4))
    if kind == "brp":
        d = tuple(rand_fraction(rng, -int(Q), int(Q)) for _ in range(n))
        routes = BrpPaths(host, d, Q)
        rhs = rhs_from_g(xos_from_demands(d, Q), host)
    else:
        d = tuple(rand_fraction(rng, 0, int(Q)) for _ in range(n))
        routes = CvrpPaths(host, d, Q)
        rhs = rhs_from_g(cvrp_g(d, Q), host)
    return VrpInstance(n, k, depot, edges, routes, rhs)


def vrp_agreement_trial(rng, kind: str):
    """Returns a failure message or None; also validates decoded routes."""
    inst = rand_vrp_instance(rng, kind)
    try:
        by_form = solve_vrp_form(inst)
    except Infeasible:
        by_form = None
    try:
        by_oracle = oracle_solve_vrp(inst)
    except Infeasible:
        by_oracle = None
    if (by_form is None) != (by_oracle is None):
        return (f"feasibility mismatch on n={inst.n} k={inst.k}: "
                f"form={by_form} oracle={by_oracle}")
    if by_form is None:
        return None
    if by_form.cost != by_oracle.cost:
        return (f"cost mismatch on n={inst.n} k={inst.k}: "
                f"{by_form.cost} vs {by_oracle.cost}")
    for sol in (by_form, by_oracle):
        used = 0
        for route in sol.routes:
            if not inst.routes.contains_path(route):
                return f"decoded route {route} infeasible"
            used |= mask_of(route)
        if used != (1 << inst.n) - 1 or len(sol.routes) != inst.k:
            return "decoded routes do not partition the customers"
    return None


def rand_rcmst_instance(rng) -> RcmstInstance:
    n = rng.randint(3, 7)
    n0 = n + 1
    edges = set()
    for v in range(1, n0):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n0):
        for v in range(u + 1, n0):
            if rng.random() < 0.35:
                edges.add((u, v))
    g0 = Graph(n0, tuple(sorted(edges)))
    costs = tuple(rand_fraction(rng, 0, 8) for _ in range(g0.m))
    Q = Fraction(rng.randint(2, 6))
    if rng.random() < 0.5:
        dbar = tuple(rand_fraction(rng, 0, int(Q)) for _ in range(n))
        dhat = tuple(rand_fraction(rng, 0, max(1, int(Q) // 2))
                     for _ in range(n))
        gamma = Fraction(rng.randint(0, 2 * n), 2)
        gamma = min(gamma, Fraction(n))
        g = BudgetedRobustFunction(dbar, dhat, gamma, Q)
    else:
        ds = tuple(tuple(rand_fraction(rng, 0, int(Q)) for _ in range(n))
                   for _ in range(rng.randint(1, 3)))
        g = ScenarioFunction(ds, Q)
    return RcmstInstance(g0, costs, g)


def rcmst_agreement_trial(rng):
    """solve_rcmst already runs both routes and raises on mismatch; this
    also pins gamma = 0 to the nominal-demand optimum."""
    inst = rand_rcmst_instance(rng)
    try:
        solve_rcmst(inst)
    except Infeasible:
        pass
    except InternalMismatch as exc:
        return f"rcmst mismatch: {exc}"
    if isinstance(inst.g, BudgetedRobustFunction):
        frozen = RcmstInstance(
            inst.g0, inst.costs,
            BudgetedRobustFunction(inst.g.dbar, inst.g.dhat, Fraction(0),
                                   inst.g.Q))
        nominal = RcmstInstance(
            inst.g0, inst.costs, ScenarioFunction((inst.g.dbar,), inst.g.Q))
        try:
            a = solve_rcmst(frozen).cost
        except Infeasible:
            a = None
        try:
            b = solve_rcmst(nominal).cost
        except Infeasible:
            b = None
        if a != b:
            return f"gamma=0 cost {a} differs from singleton cost {b}"
    return None


def polytope_vertices(p: GsecPolytope):
    """Vertex enumeration for tiny polytopes: every basis of m active
    constraints, solved exactly and filtered by feasibility."""
    g = p.host
    m = g.m
    within = edges_within_table(g)
    rows = []
    for s in range(1, 1 << g.n):
        coeffs = [Fraction(1 if within[s] >> e & 1 else 0) for e in range(m)]
        rows.append((coeffs, Fraction(s.bit_count() - p.rhs[s])))
    for e in range(m):
        unit = [Fraction(1 if i == e else 0) for i in range(m)]
        rows.append((unit, Fraction(1)))
        rows.append(([-x for x in unit], Fraction(0)))
    vertices = []
    for combo in itertools.combinations(range(len(rows)), m):
        A = [rows[i][0] for i in combo]
        b = [rows[i][1] for i in combo]
        x = gauss_solve(A, b)
        if x is None:
            continue
        if all(sum(c * xi for c, xi in zip(coeffs, x)) <= rhs
               for coeffs, rhs in rows):
            vertices.append(tuple(x))
    return vertices


def lp_cross_check_trial(rng):
    """max_xS against exhaustive vertex enumeration on a <= 4 edge host."""
    while True:
        g = rand_graph(rng, 2, 4, p=0.8)
        if 1 <= g.m <= 4:
            break
    f = rand_rhs_table(rng, g)
    p = GsecPolytope(g, f)
    verts = polytope_vertices(p)
    within = edges_within_table(g)
    for s in range(1, 1 << g.n):
        lp_val, point = max_xS(p, s)
        best = max((sum(x[e] for e in iter_bits(within[s])) for x in verts),
                   default=Fraction(0))
        if lp_val != best:
            return f"LP says {lp_val}, vertices say {best} at S mask {s}"
        lhs = sum(point[e] for e in iter_bits(within[s]))
        if lhs != lp_val:
            return f"optimal point does not attain the optimum at S mask {s}"
    return None


SUITES = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "prop4": suite_prop4,
    "prop5": suite_prop5,
    "brp": suite_brp,
    "claim": suite_claim,
}


def run_suite(name: str, trials: int, seed: int, cap: int = 8) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    if name == "brp":
        return suite_brp(trials, seed)
    return SUITES[name](trials, seed, cap)
