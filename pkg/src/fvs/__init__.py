"""Exact feedback vertex set solvers: branch and reduce, cycle ILP, and a benchmark harness."""

from .approx import approximate, shortest_cycle_warm_start
from .branch import BranchConfig, SearchStats, SolveResult, decide, solve_min
from .graph import ContractViolation, Instance, MultiGraph, Solution, is_acyclic, verify_solution
from .ilp import solve_ilp
from .oracle import min_fvs_bruteforce
from .pace_io import parse_instance, write_solution

__all__ = [
    "BranchConfig",
    "ContractViolation",
    "Instance",
    "MultiGraph",
    "SearchStats",
    "Solution",
    "SolveResult",
    "approximate",
    "decide",
    "is_acyclic",
    "min_fvs_bruteforce",
    "parse_instance",
    "shortest_cycle_warm_start",
    "solve_ilp",
    "solve_min",
    "verify_solution",
    "write_solution",
]
