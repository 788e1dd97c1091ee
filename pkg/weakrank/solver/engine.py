# weakrank/solver/engine.py
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional

from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import BucketOrder
from weakrank.schemas.solve import SolveConfig, SolveResult, SolveStatus
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairVariant,
    FixedBucketsVariant,
    ObopVariant,
    PrescribedSizesVariant,
    TcuVariant,
    VariantSpec,
)
from weakrank.solver.buckets import BucketRules, BucketSearch
from weakrank.solver.costs import CostTable
from weakrank.solver.incumbent import BudgetExhausted, Incumbent, SearchBudget, SearchTrace
from weakrank.solver.oracle import brute_force_solve
from weakrank.solver.pairs import PairSearch, root_state
from weakrank.solver.tail import TailSearch

logger = logging.getLogger(__name__)

SUBTREES_PER_WORKER = 4


def strategy_for(variant: VariantSpec, n: int) -> str:
    if isinstance(variant, (ObopVariant, FixedBucketsVariant)):
        return "pairs"
    if isinstance(variant, TcuVariant):
        return "pairs" if variant.k == n else "tail"
    if isinstance(variant, (EqualSizesVariant, PrescribedSizesVariant, FairVariant)):
        return "buckets"
    raise TypeError(f"unknown variant {variant!r}")


def solve(
    matrix: PairOrderMatrix,
    variant: VariantSpec,
    cfg: Optional[SolveConfig] = None,
    hints: Iterable[BucketOrder] = (),
) -> SolveResult:
    """Optimal bucket order(s) for `variant`.

    `hints` are candidate orders; those the variant admits seed the incumbent.
    """
    cfg = cfg or SolveConfig()
    n = matrix.n
    variant.validate_for(n)
    if cfg.strategy == "brute" or (cfg.strategy == "auto" and n < cfg.enumeration_threshold):
        return brute_force_solve(matrix, variant, cfg)

    table = CostTable(matrix)
    incumbent = Incumbent(cap=cfg.optima_cap if cfg.collect_optima else 1, collect=cfg.collect_optima)
    for hint in hints:
        if hint.n == n and variant.admits(hint):
            incumbent.offer(table.order_cost(hint), hint)
    budget = SearchBudget(cfg.time_limit, cfg.node_limit)
    strategy = strategy_for(variant, n)
    open_bound: Optional[int] = None

    with SearchTrace(cfg.trace_path, table.scale) as trace:
        try:
            if strategy == "pairs":
                _run_pairs(table, variant, incumbent, budget, trace, cfg)
            elif strategy == "tail":
                TailSearch(table, variant.k, incumbent, budget, trace, variant.tail_bounds).run()
            else:
                BucketSearch(table, BucketRules.for_variant(variant, n), incumbent, budget, trace).run()
        except BudgetExhausted as exc:
            open_bound = exc.bound
            logger.warning("%s: search limit reached after %d nodes", variant.label, budget.nodes)

    return _result(table, variant, incumbent, budget, strategy, open_bound, limited=budget.exhausted)


def _run_pairs(table, variant, incumbent, budget, trace, cfg) -> None:
    p = variant.p if isinstance(variant, FixedBucketsVariant) else None
    if isinstance(variant, TcuVariant) and variant.tail_bounds and not variant.tail_bounds.admits(frozenset()):
        return
    search = PairSearch(table, incumbent, budget, trace, p=p)
    root = root_state(table.n)
    search.dive(root)
    if cfg.workers <= 1:
        search.run(root)
        return

    frontier = search.frontier(root, cfg.workers * SUBTREES_PER_WORKER)
    logger.info("splitting %d subtrees over %d workers", len(frontier), cfg.workers)
    tasks = [
        (table, p, state, incumbent.best, incumbent.cap, incumbent.collect, budget.remaining, cfg.node_limit)
        for state in frontier
    ]
    bounds = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for best, orders, nodes, bound in pool.map(_solve_subtree, tasks):
            budget.nodes += nodes
            if best is not None:
                incumbent.merge(best, orders)
            if bound is not None:
                bounds.append(bound)
    if bounds:
        budget.exhausted = True
        raise BudgetExhausted(min(bounds))


def _solve_subtree(task) -> tuple[Optional[int], list[BucketOrder], int, Optional[int]]:
    table, p, state, best, cap, collect, time_limit, node_limit = task
    incumbent = Incumbent(cap=cap, collect=collect, best=best)
    budget = SearchBudget(time_limit, node_limit)
    search = PairSearch(table, incumbent, budget, p=p)
    bound = None
    try:
        search.run(state)
    except BudgetExhausted as exc:
        bound = exc.bound
    return incumbent.best, list(incumbent.orders.values()), budget.nodes, bound


def _result(
    table: CostTable,
    variant: VariantSpec,
    incumbent: Incumbent,
    budget: SearchBudget,
    strategy: str,
    open_bound: Optional[int],
    limited: bool,
) -> SolveResult:
    best = incumbent.best if incumbent.orders else None
    common = dict(nodes=budget.nodes, elapsed=budget.elapsed, strategy=strategy, variant=variant.label)
    if limited:
        candidates = [value for value in (open_bound, best) if value is not None]
        bound = min(candidates) if candidates else None
        return SolveResult(
            status=SolveStatus.LIMIT,
            incumbent=table.value(best) if best is not None else None,
            optima=incumbent.optima(),
            bound=table.value(bound) if bound is not None else None,
            **common,
        )
    if best is None:
        logger.info("%s: infeasible after %d nodes", variant.label, budget.nodes)
        return SolveResult(status=SolveStatus.INFEASIBLE, **common)
    objective = table.value(best)
    logger.info("%s: optimum %s, %d optima, %d nodes", variant.label, objective, len(incumbent.orders), budget.nodes)
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        objective=objective,
        incumbent=objective,
        optima=incumbent.optima(),
        bound=objective,
        **common,
    )


def enumerate_optima(matrix: PairOrderMatrix, variant: VariantSpec, cfg: Optional[SolveConfig] = None) -> list[BucketOrder]:
    """All optimal orders up to `cfg.optima_cap`, canonically sorted."""
    cfg = (cfg or SolveConfig()).model_copy(update={"collect_optima": True})
    return list(solve(matrix, variant, cfg).optima)
