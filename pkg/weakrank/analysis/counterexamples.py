# weakrank/analysis/counterexamples.py
"""Evaluators comparing tail-collapsed optima with orders derived from the
unconstrained optimum."""
import itertools
import logging
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from weakrank.core.errors import VariantError
from weakrank.models.matrix import PairOrderMatrix, distance
from weakrank.models.order import BucketOrder
from weakrank.schemas.report import CounterexampleReport
from weakrank.schemas.solve import SolveConfig, SolveStatus
from weakrank.schemas.variant import ObopVariant, PrescribedSizesVariant, TcuVariant
from weakrank.solver.costs import CostTable
from weakrank.solver.engine import solve
from weakrank.solver.incumbent import Incumbent, SearchBudget
from weakrank.solver.tail import solve_head

logger = logging.getLogger(__name__)


def tail_matching_optimum(
    matrix: PairOrderMatrix,
    tail: Iterable[int],
    cfg: Optional[SolveConfig] = None,
) -> tuple[Fraction, tuple[BucketOrder, ...]]:
    """Best orders whose last bucket is exactly `tail` (0-based items)."""
    cfg = cfg or SolveConfig()
    tail = sorted(set(tail))
    if not tail or tail[0] < 0 or tail[-1] >= matrix.n:
        raise VariantError(f"tail must be a non-empty subset of 1..{matrix.n}")
    table = CostTable(matrix)
    incumbent = Incumbent(cap=cfg.optima_cap, collect=True)
    solve_head(table, tail, incumbent, SearchBudget(cfg.time_limit, cfg.node_limit))
    return table.value(incumbent.best), incumbent.optima()


def candidate_tails(order: BucketOrder, k: int) -> Iterator[frozenset[int]]:
    """Item sets left after the first k positions of some permutation consistent
    with `order`."""
    if not 1 <= k < order.n:
        raise VariantError(f"k={k} must lie in 1..{order.n - 1}")
    seen = 0
    for u, bucket in enumerate(order.buckets):
        if seen + len(bucket) > k:
            below = frozenset().union(*order.buckets[u + 1:])
            for kept in itertools.combinations(sorted(bucket), k - seen):
                yield (bucket - frozenset(kept)) | below
            return
        seen += len(bucket)


def truncated_split_value(matrix: PairOrderMatrix, order: BucketOrder, k: int) -> Fraction:
    """Smallest distance of a two-bucket order cutting a permutation consistent
    with `order` after k items."""
    n = matrix.n
    best = None
    for tail in candidate_tails(order, k):
        head = frozenset(range(n)) - tail
        value = distance(BucketOrder.trusted([head, tail]), matrix)
        if best is None or value < best:
            best = value
    return best


def counterexample_report(matrix: PairOrderMatrix, k: int, cfg: Optional[SolveConfig] = None) -> CounterexampleReport:
    cfg = cfg or SolveConfig()
    n = matrix.n
    if not 1 <= k < n:
        raise VariantError(f"k={k} must lie in 1..{n - 1}")
    tcu = solve(matrix, TcuVariant(k=k), cfg)
    obop = solve(matrix, ObopVariant(), cfg)
    two_bucket = solve(matrix, PrescribedSizesVariant(sizes=(k, n - k)), cfg)
    for result in (tcu, obop):
        if result.status != SolveStatus.OPTIMAL:
            raise VariantError(f"{result.variant} not solved to optimality ({result.status.value})")

    matching_value, matching_tail = None, ()
    for tail in sorted({tail for order in obop.optima for tail in candidate_tails(order, k)}, key=sorted):
        value, _ = tail_matching_optimum(matrix, tail, cfg)
        if matching_value is None or value < matching_value:
            matching_value, matching_tail = value, tuple(item + 1 for item in sorted(tail))
    truncated = min(truncated_split_value(matrix, order, k) for order in obop.optima)
    logger.info("k=%d: tcu %s, tail matching %s, truncated %s", k, tcu.objective, matching_value, truncated)
    return CounterexampleReport(
        k=k,
        tcu_objective=tcu.objective,
        tcu_optima=tcu.optima,
        obop_objective=obop.objective,
        tail_matching_objective=matching_value,
        tail_matching_tail=matching_tail,
        two_bucket_objective=two_bucket.objective,
        truncated_split_objective=truncated,
    )
