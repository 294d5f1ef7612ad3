"""gsec_lab: which families of forests do GSECs represent, and with which
right-hand sides — plus desk-scale exact solvers built on the answer."""

from .errors import (
    BadParams,
    CapExceeded,
    EmptyFamily,
    GsecLabError,
    Infeasible,
    InternalMismatch,
    InvalidDemand,
    MalformedX,
    OutOfRange,
    ParseError,
    PreconditionFailed,
)
from .graphs import (
    DEFAULT_CAP,
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
    is_valid_path,
    path_to_forest,
    tree_as_path,
)
from .setfuncs import (
    BudgetedRobustFunction,
    RhsTable,
    ScenarioFunction,
    TableFunction,
    XosFunction,
    cvrp_g,
    is_subadditive,
    pointwise_leq,
    rhs_cardinality,
    rhs_from_g,
    rhs_ones,
    xos_from_demands,
)
from .families import (
    BrpPaths,
    Cmst,
    CvrpPaths,
    DegreeBounded,
    EdgeMaskFamily,
    ExplicitForests,
    ExplicitPaths,
    ExplicitTrees,
    Omega,
    PathRestriction,
    ThetaTrees,
    TreeClosure,
    brp_band_feasible,
    brp_interval_feasible,
    brp_path_feasible,
    brp_forest_family,
    contains_trivial_paths,
    edge_consistent_closure,
    family_members,
    is_downward_closed,
    is_edge_consistent,
    is_subpath_closed,
    is_subsequence_closed,
    is_vertex_consistent,
    path_forests,
)
from .bounds import LowerBound, lower_bound_table, minimal_infeasible, upper_bound_table
from .polytope import (
    GsecPolytope,
    indicator_in_polytope,
    integer_points,
    integer_points_scan,
    max_xS,
    polytope_contains,
    represents,
)
from .representability import (
    ConditionedReport,
    GhosalReport,
    PhiFamily,
    ReprReport,
    claim_equal_components,
    conditioned_representable,
    ghosal_conditions,
    has_mip_property,
    is_representable,
    path_star_property,
    phi_contains,
    phi_contains_naive,
    rhs_admissible,
)
from .solvers import (
    RcmstInstance,
    RcmstSolution,
    VrpInstance,
    VrpSolution,
    decode_x_to_cycles,
    oracle_solve_vrp,
    route_cost,
    solve_rcmst,
    solve_vrp_form,
)
