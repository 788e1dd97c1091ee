# weakrank/solver/oracle.py
"""Exhaustive enumeration, used to cross-check the searches on small instances."""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from weakrank.models.enumeration import check_enumeration_cap, surjections
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import BucketOrder
from weakrank.schemas.solve import SolveConfig, SolveResult, SolveStatus
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairVariant,
    FixedBucketsVariant,
    PrescribedSizesVariant,
    VariantSpec,
)
from weakrank.solver.costs import CostTable

logger = logging.getLogger(__name__)


def bucket_count_range(variant: VariantSpec, n: int) -> range:
    """Bucket counts an admissible order can have."""
    if isinstance(variant, (FixedBucketsVariant, EqualSizesVariant, PrescribedSizesVariant)):
        return range(variant.p, variant.p + 1)
    if isinstance(variant, FairVariant):
        p = variant.fixed_p()
        if p is not None:
            return range(p, p + 1)
        return range(variant.min_buckets or 1, variant.slots(n) + 1)
    return range(1, n + 1)


def _scan(table: CostTable, variant: VariantSpec, count: int) -> tuple[Optional[int], list[BucketOrder], int]:
    """Minimum over orders with exactly `count` buckets, all its admissible minimizers."""
    best: Optional[int] = None
    found: list[BucketOrder] = []
    seen = 0
    for vector in surjections(table.n, count):
        seen += 1
        total = table.assignment_cost(vector)
        if best is not None and total > best:
            continue
        order = _order(vector, count)
        if not variant.admits(order):
            continue
        if best is None or total < best:
            best, found = total, [order]
        else:
            found.append(order)
    return best, found, seen


def _order(vector: tuple[int, ...], count: int) -> BucketOrder:
    buckets: list[list[int]] = [[] for _ in range(count)]
    for item, bucket in enumerate(vector):
        buckets[bucket].append(item)
    return BucketOrder.trusted(buckets)


def _scan_task(args):
    return _scan(*args)


def brute_force_solve(matrix: PairOrderMatrix, variant: VariantSpec, cfg: Optional[SolveConfig] = None) -> SolveResult:
    """Minimum over every admissible weak order, with all of its minimizers."""
    cfg = cfg or SolveConfig()
    n = matrix.n
    variant.validate_for(n)
    check_enumeration_cap(n, cfg.enumeration_threshold)
    started = time.monotonic()
    table = CostTable(matrix)
    counts = list(bucket_count_range(variant, n))

    if cfg.workers > 1 and len(counts) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_scan_task, [(table, variant, count) for count in counts]))
    else:
        parts = [_scan(table, variant, count) for count in counts]

    nodes = sum(seen for _, _, seen in parts)
    values = [best for best, _, _ in parts if best is not None]
    elapsed = time.monotonic() - started
    if not values:
        logger.info("brute force: no admissible order for %s (%d orders)", variant.label, nodes)
        return SolveResult(status=SolveStatus.INFEASIBLE, nodes=nodes, elapsed=elapsed, strategy="brute", variant=variant.label)

    best = min(values)
    optima = sorted(
        (order for value, orders, _ in parts if value == best for order in orders),
        key=BucketOrder.sort_key,
    )
    objective = table.value(best)
    logger.info("brute force: %s = %s over %d orders", variant.label, objective, nodes)
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        objective=objective,
        incumbent=objective,
        optima=tuple(optima),
        bound=objective,
        nodes=nodes,
        elapsed=elapsed,
        strategy="brute",
        variant=variant.label,
    )
