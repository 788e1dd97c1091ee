# weakrank/solver/__init__.py
from weakrank.schemas.solve import SolveConfig, SolveResult, SolveStatus, optima_count_label

from .costs import CostTable
from .engine import enumerate_optima, solve, strategy_for
from .oracle import brute_force_solve
from .tail import solve_head, tail_cost

__all__ = [
    "SolveConfig", "SolveResult", "SolveStatus", "optima_count_label",
    "CostTable", "enumerate_optima", "solve", "strategy_for", "brute_force_solve",
    "solve_head", "tail_cost",
]
