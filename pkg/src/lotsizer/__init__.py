"""Lot-sizing toolkit: dynamic lot-sizing and economic lot-scheduling MIPs,
an embedded branch-and-bound solver and exact reference oracles."""
from .formulations import (
    BUILDERS,
    MipModel,
    VariableCatalog,
    build_dls_1p,
    build_dls_mp,
    build_dls_mp_cs,
    build_elsp_bomberger,
    build_general_dls,
    extract_schedule,
)
from .model import (
    CostBreakdown,
    DlsInstance,
    ElspInstance,
    FeasibilityReport,
    InstanceError,
    Schedule,
    check_elsp_feasibility,
    check_schedule,
    eoq,
    evaluate_cost,
    propagate_inventory,
    safety_buffer,
)
from .oracle import brute_force_batch_schedules, brute_force_single_product, wagner_whitin_dp
from .solver import MipSolution, SolveOptions, branch_and_bound, solve_lp

__version__ = "0.1.0"
