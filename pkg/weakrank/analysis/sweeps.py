# weakrank/analysis/sweeps.py
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator, Optional, Sequence

from weakrank.core.errors import VariantError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import BucketOrder
from weakrank.schemas.report import SweepPoint, SweepResult
from weakrank.schemas.solve import SolveConfig, SolveResult
from weakrank.schemas.variant import FixedBucketsVariant, TcuVariant
from weakrank.solver.engine import solve

logger = logging.getLogger(__name__)


def neighbour_orders(order: BucketOrder) -> Iterator[BucketOrder]:
    """Orders one bucket away: two adjacent buckets merged, or one item split off
    ahead of the rest of its bucket."""
    buckets = list(order.buckets)
    for u in range(len(buckets) - 1):
        yield BucketOrder.trusted(buckets[:u] + [buckets[u] | buckets[u + 1]] + buckets[u + 2:])
    for u, bucket in enumerate(buckets):
        if len(bucket) < 2:
            continue
        for item in sorted(bucket):
            yield BucketOrder.trusted(buckets[:u] + [{item}, bucket - {item}] + buckets[u + 1:])


def _check_values(values: Sequence[int], n: int, name: str) -> list[int]:
    values = sorted(set(values))
    if not values or values[0] < 1 or values[-1] > n:
        raise VariantError(f"{name} values must lie in 1..{n}")
    return values


def _point(value: int, result: SolveResult, annotations: Iterable[str] = ()) -> SweepPoint:
    return SweepPoint(
        value=value,
        status=result.status,
        objective=result.objective,
        optima=result.optima,
        annotations=tuple(annotations),
    )


def _solve_task(args) -> SolveResult:
    matrix, variant, cfg = args
    return solve(matrix, variant, cfg)


def _sweep(matrix: PairOrderMatrix, variants: list, cfg: SolveConfig) -> list[SolveResult]:
    if cfg.workers > 1 and len(variants) > 1:
        single = cfg.model_copy(update={"workers": 1})
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_solve_task, [(matrix, variant, single) for variant in variants]))

    results = []
    hints: list[BucketOrder] = []
    for variant in variants:
        result = solve(matrix, variant, cfg, hints=hints)
        results.append(result)
        logger.debug("%s -> %s %s", variant.label, result.status.value, result.objective)
        if result.optima:
            hints = [neighbour for order in result.optima for neighbour in neighbour_orders(order)]
    return results


def p_sweep(matrix: PairOrderMatrix, values: Optional[Sequence[int]] = None, cfg: Optional[SolveConfig] = None) -> SweepResult:
    """Optimal value for each fixed bucket count."""
    cfg = cfg or SolveConfig()
    n = matrix.n
    values = _check_values(values or range(1, n + 1), n, "p")
    results = _sweep(matrix, [FixedBucketsVariant(p=p) for p in values], cfg)
    sweep = SweepResult(parameter="p", points=tuple(_point(p, result) for p, result in zip(values, results)))
    logger.info("p sweep over %d values, minima at %s", len(values), sweep.minima)
    return sweep


def tcu_sweep(matrix: PairOrderMatrix, values: Optional[Sequence[int]] = None, cfg: Optional[SolveConfig] = None) -> SweepResult:
    """Optimal tail-collapsed value for each k.

    `full` marks k = n, `worst-bucket` the k whose tail is the last bucket of an
    unconstrained optimum.
    """
    cfg = cfg or SolveConfig()
    n = matrix.n
    values = _check_values(values or range(1, n + 1), n, "k")
    results = _sweep(matrix, [TcuVariant(k=k) for k in values], cfg)

    full = results[-1] if values[-1] == n else solve(matrix, TcuVariant(k=n), cfg)
    worst = {n - len(order.buckets[-1]) for order in full.optima if order.bucket_count > 1}
    points = []
    for k, result in zip(values, results):
        notes = []
        if k == n:
            notes.append("full")
        if k in worst:
            notes.append("worst-bucket")
        points.append(_point(k, result, notes))
    sweep = SweepResult(parameter="k", points=tuple(points))
    logger.info("k sweep over %d values, minima at %s", len(values), sweep.minima)
    return sweep
