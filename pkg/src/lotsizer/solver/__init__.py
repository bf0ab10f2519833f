"""Embedded MIP solver: bounded simplex, presolve, cover cuts, branch-and-bound."""
from .bnb import MipSolution, SolveOptions, branch_and_bound, solve, solve_lp
from .cuts import derive_cover_cuts, separate_cover_cuts
from .heuristics import rounding_heuristic
from .presolve import PresolveResult, presolve

__all__ = [
    "MipSolution", "SolveOptions", "branch_and_bound", "solve", "solve_lp",
    "derive_cover_cuts", "separate_cover_cuts", "rounding_heuristic",
    "PresolveResult", "presolve",
]
