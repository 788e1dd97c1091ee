# weakrank/schemas/report.py
import csv
import io
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, computed_field

from weakrank.core.config import settings
from weakrank.models.order import BucketOrder
from weakrank.models.rational import Rational, format_fraction, round_2dp
from weakrank.schemas.solve import SolveStatus

SWEEP_COLUMNS = ["param", "objective_exact", "objective_2dp", "status", "is_min"]
TRAJECTORY_COLUMNS = ["group", "prefix", "T", "S", "proportion_exact", "target", "within_bounds"]
BENCH_COLUMNS = [
    "instance", "n", "m", "variant", "status", "objective_2dp", "objective_exact",
    "utopian_bound", "time", "optima_count", "bucket_counts", "error",
]


def _csv(columns: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


class SweepPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    status: SolveStatus
    objective: Optional[Rational] = None
    optima: tuple[BucketOrder, ...] = ()
    annotations: tuple[str, ...] = ()

    @property
    def bucket_counts(self) -> tuple[int, ...]:
        return tuple(order.bucket_count for order in self.optima)


class SweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameter: Literal["p", "k"]
    points: tuple[SweepPoint, ...]

    @computed_field
    @property
    def minima(self) -> list[int]:
        solved = [point for point in self.points if point.objective is not None]
        if not solved:
            return []
        low = min(point.objective for point in solved)
        return [point.value for point in solved if point.objective == low]

    @computed_field
    @property
    def non_unimodal(self) -> bool:
        """Some value has a strictly smaller value on each side."""
        values = [point.objective for point in self.points if point.objective is not None]
        for j in range(1, len(values) - 1):
            if min(values[:j]) < values[j] and min(values[j + 1:]) < values[j]:
                return True
        return False

    def value_at(self, parameter: int):
        for point in self.points:
            if point.value == parameter:
                return point.objective
        raise KeyError(parameter)

    def to_csv(self) -> str:
        minima = set(self.minima)
        rows = [
            [
                point.value,
                format_fraction(point.objective) if point.objective is not None else "",
                round_2dp(point.objective) if point.objective is not None else "",
                point.status.value,
                "1" if point.value in minima else "0",
            ]
            for point in self.points
        ]
        return _csv(SWEEP_COLUMNS, rows)

    def report(self) -> dict:
        return {"schema_version": settings.REPORT_SCHEMA_VERSION, **self.model_dump(mode="json")}


class TrajectoryRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: int  # 1-based
    prefix: int
    total: int
    count: int
    proportion: Rational
    target: Rational
    within_bounds: bool


class FairnessTrajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: BucketOrder
    rows: tuple[TrajectoryRow, ...]

    @property
    def within_bounds(self) -> bool:
        return all(row.within_bounds for row in self.rows)

    def row(self, group: int, prefix: int) -> TrajectoryRow:
        for row in self.rows:
            if row.group == group and row.prefix == prefix:
                return row
        raise KeyError((group, prefix))

    def to_csv(self) -> str:
        rows = [
            [row.group, row.prefix, row.total, row.count, format_fraction(row.proportion),
             format_fraction(row.target), "1" if row.within_bounds else "0"]
            for row in self.rows
        ]
        return _csv(TRAJECTORY_COLUMNS, rows)

    def report(self) -> dict:
        return {"schema_version": settings.REPORT_SCHEMA_VERSION, **self.model_dump(mode="json")}


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    variant: str
    status: SolveStatus
    objective: Optional[Rational] = None
    utopian_bound: Optional[Rational] = None
    gap_to_utopian: Optional[Rational] = None  # objective minus utopian bound
    utopian_transitive: Optional[bool] = None

    def report(self) -> dict:
        return {"schema_version": settings.REPORT_SCHEMA_VERSION, **self.model_dump(mode="json")}


class CounterexampleReport(BaseModel):
    """Tail-collapsed optimum of one k next to the orders it is often confused with."""

    model_config = ConfigDict(frozen=True)

    k: int
    tcu_objective: Rational
    tcu_optima: tuple[BucketOrder, ...]
    obop_objective: Rational
    tail_matching_objective: Rational
    tail_matching_tail: tuple[int, ...]  # 1-based
    two_bucket_objective: Optional[Rational] = None
    truncated_split_objective: Rational

    def report(self) -> dict:
        return {"schema_version": settings.REPORT_SCHEMA_VERSION, **self.model_dump(mode="json")}


class BenchRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance: str
    n: Optional[int] = None
    m: Optional[int] = None
    variant: str
    status: str
    objective: Optional[Rational] = None  # set iff Optimal
    utopian_bound: Optional[Rational] = None
    time: float = 0.0
    optima_count: str = ""
    bucket_counts: tuple[int, ...] = ()
    error: str = ""

    def csv_row(self) -> list:
        def show(value):
            return "" if value is None else value

        return [
            self.instance,
            show(self.n),
            show(self.m),
            self.variant,
            self.status,
            round_2dp(self.objective) if self.objective is not None else "",
            format_fraction(self.objective) if self.objective is not None else "",
            round_2dp(self.utopian_bound) if self.utopian_bound is not None else "",
            f"{self.time:.2f}",
            self.optima_count,
            ";".join(map(str, self.bucket_counts)),
            self.error,
        ]
