# weakrank/analysis/bounds.py
import logging
from typing import Optional

from weakrank.models.matrix import PairOrderMatrix, utopian
from weakrank.schemas.report import BoundReport
from weakrank.schemas.solve import SolveConfig
from weakrank.schemas.variant import ObopVariant, VariantSpec
from weakrank.solver.engine import solve

logger = logging.getLogger(__name__)


def bound_report(matrix: PairOrderMatrix, variant: VariantSpec, cfg: Optional[SolveConfig] = None) -> BoundReport:
    """Optimum next to the utopian bound; the bound only relaxes the unconstrained
    problem, so other variants get no utopian fields."""
    result = solve(matrix, variant, cfg)
    if not isinstance(variant, ObopVariant):
        return BoundReport(variant=variant.label, status=result.status, objective=result.objective)

    relaxed = utopian(matrix)
    gap = result.objective - relaxed.bound if result.objective is not None else None
    if gap is not None and gap < 0:
        logger.error("optimum %s below utopian bound %s", result.objective, relaxed.bound)
    return BoundReport(
        variant=variant.label,
        status=result.status,
        objective=result.objective,
        utopian_bound=relaxed.bound,
        gap_to_utopian=gap,
        utopian_transitive=relaxed.is_transitive,
    )
