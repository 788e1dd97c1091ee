# weakrank/schemas/solve.py
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from weakrank.core.config import settings
from weakrank.models.order import BucketOrder
from weakrank.models.rational import Rational, round_2dp

Strategy = Literal["auto", "search", "brute"]

GAP_CONVENTION = "assumed: 100*(incumbent-bound)/bound"


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    LIMIT = "Limit"


class SolveConfig(BaseModel):
    """Search limits; unset fields take their defaults from settings."""

    model_config = ConfigDict(frozen=True)

    time_limit: Optional[float] = Field(default_factory=lambda: settings.DEFAULT_TIME_LIMIT, gt=0)
    node_limit: Optional[int] = Field(default_factory=lambda: settings.DEFAULT_NODE_LIMIT, ge=1)
    enumeration_threshold: int = Field(default_factory=lambda: settings.ENUMERATION_THRESHOLD, ge=1)
    optima_cap: int = Field(default_factory=lambda: settings.OPTIMA_CAP, ge=1)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    collect_optima: bool = True
    strategy: Strategy = "auto"
    trace_path: Optional[Path] = None


def optima_count_label(count: int) -> str:
    """1, 2, 3 or >3."""
    return str(count) if count <= 3 else ">3"


class SolveResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: SolveStatus
    objective: Optional[Rational] = None  # set iff Optimal
    incumbent: Optional[Rational] = None
    optima: tuple[BucketOrder, ...] = ()
    bound: Optional[Rational] = None
    nodes: int = 0
    elapsed: float = 0.0
    strategy: str = ""
    variant: str = ""

    @property
    def bucket_counts(self) -> tuple[int, ...]:
        return tuple(order.bucket_count for order in self.optima)

    @property
    def optima_count(self) -> str:
        return optima_count_label(len(self.optima))

    @property
    def gap(self) -> Optional[Fraction]:
        if self.incumbent is None or self.bound is None:
            return None
        if self.bound == 0:
            return Fraction(0) if self.incumbent == 0 else None
        return 100 * (self.incumbent - self.bound) / self.bound

    def report(self) -> dict:
        """JSON-ready report; exact values as p/q plus 2dp renderings."""
        data = self.model_dump(mode="json")
        data["bucket_counts"] = list(self.bucket_counts)
        data["optima_count"] = self.optima_count
        data["objective_2dp"] = round_2dp(self.objective) if self.objective is not None else None
        data["bound_2dp"] = round_2dp(self.bound) if self.bound is not None else None
        gap = self.gap
        data["gap"] = round_2dp(gap) if gap is not None else None
        data["gap_convention"] = GAP_CONVENTION
        data["schema_version"] = settings.REPORT_SCHEMA_VERSION
        return data
