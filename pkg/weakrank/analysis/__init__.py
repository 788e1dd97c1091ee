# weakrank/analysis/__init__.py
from .bench import BenchEntry, load_manifest, parse_manifest, run_bench, run_entry
from .bounds import bound_report
from .counterexamples import candidate_tails, counterexample_report, tail_matching_optimum, truncated_split_value
from .sweeps import neighbour_orders, p_sweep, tcu_sweep
from .trajectory import fairness_trajectory

__all__ = [
    "BenchEntry", "load_manifest", "parse_manifest", "run_bench", "run_entry",
    "bound_report",
    "candidate_tails", "counterexample_report", "tail_matching_optimum", "truncated_split_value",
    "neighbour_orders", "p_sweep", "tcu_sweep",
    "fairness_trajectory",
]
