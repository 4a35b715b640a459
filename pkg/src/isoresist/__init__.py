"""Effective resistance, isoperimetric band sums and random-walk commute times on finite multigraphs."""

from .electrical import (
    ConvergenceError,
    DisconnectedError,
    GroundedSolver,
    LevelSet,
    VoltageProfile,
    check_maximum_principle,
    effective_resistance,
    level_order,
    level_set,
    solve_voltages,
    vertex_current,
)
from .graph import (
    Graph,
    GraphError,
    GraphParseError,
    VertexSet,
    disjoint_union,
    external_boundary,
    generate,
    is_connected_subset,
    parse_family,
    read_graph,
    write_graph,
)
from .isoperimetry import (
    BandTerm,
    GateError,
    IsoBound,
    L_v,
    L_v_modified_band,
    ball_profile,
    band_term,
    cheeger,
    enumerate_connected_sets,
    r_n,
)
from .report import Report
from .walks import commute_time, exact_hitting, simulate_hitting, tau_star

__version__ = "0.1.0"
