# weakrank/models/matrix.py
import math
import random
from fractions import Fraction
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from weakrank.core.errors import DimensionError, MatrixError
from weakrank.models.order import HALF, BucketOrder, bucket_order_from_matrix, order_entries
from weakrank.models.rational import Rational, to_fraction

UPPER_THRESHOLD = Fraction(3, 4)
LOWER_THRESHOLD = Fraction(1, 4)


class PairOrderMatrix(BaseModel):
    """Exact pair order matrix: c_rr = 1/2 and c_rs + c_sr = 1."""

    model_config = ConfigDict(frozen=True)

    entries: tuple[tuple[Rational, ...], ...]
    labels: Optional[tuple[str, ...]] = None

    @model_validator(mode="after")
    def _check_entries(self):
        n = len(self.entries)
        if n == 0:
            raise DimensionError("pair order matrix is empty")
        for r, row in enumerate(self.entries):
            if len(row) != n:
                raise DimensionError(f"row {r + 1} has {len(row)} entries, expected {n}")
        if self.labels is not None and len(self.labels) != n:
            raise DimensionError(f"{len(self.labels)} labels for {n} items")
        for r in range(n):
            if self.entries[r][r] != HALF:
                raise MatrixError("diagonal entry must be 1/2", index=(r + 1, r + 1))
            for s in range(n):
                value = self.entries[r][s]
                if not 0 <= value <= 1:
                    raise MatrixError(f"entry {value} outside [0,1]", index=(r + 1, s + 1))
                if r < s and value + self.entries[s][r] != 1:
                    raise MatrixError("c_rs + c_sr must equal 1", index=(r + 1, s + 1))
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Optional[Sequence[str]] = None) -> "PairOrderMatrix":
        return cls(
            entries=tuple(tuple(to_fraction(v) for v in row) for row in rows),
            labels=tuple(labels) if labels is not None else None,
        )

    @classmethod
    def from_percentages(cls, rows: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> "PairOrderMatrix":
        return cls.from_rows([[Fraction(v, 100) for v in row] for row in rows], labels)

    @classmethod
    def uniform(cls, n: int) -> "PairOrderMatrix":
        return cls(entries=tuple(tuple(HALF for _ in range(n)) for _ in range(n)))

    @classmethod
    def sample(cls, n: int, rng: random.Random, denominator: int = 20) -> "PairOrderMatrix":
        """Entries drawn uniformly from {0, 1/d, ..., 1} above the diagonal."""
        rows = [[HALF] * n for _ in range(n)]
        for r in range(n):
            for s in range(r + 1, n):
                value = Fraction(rng.randint(0, denominator), denominator)
                rows[r][s], rows[s][r] = value, 1 - value
        return cls(entries=tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        r, s = index
        return self.entries[r][s]

    def denominator_lcm(self) -> int:
        lcm = 1
        for row in self.entries:
            for value in row:
                lcm = math.lcm(lcm, value.denominator)
        return lcm

    def submatrix(self, items: Sequence[int]) -> "PairOrderMatrix":
        labels = tuple(self.labels[i] for i in items) if self.labels else None
        return PairOrderMatrix.model_construct(
            entries=tuple(tuple(self.entries[r][s] for s in items) for r in items),
            labels=labels,
        )


class UtopianResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    matrix: tuple[tuple[Rational, ...], ...]
    bound: Rational

    @property
    def order(self) -> Optional[BucketOrder]:
        """The bucket order the utopian matrix encodes, when it is transitive."""
        return bucket_order_from_matrix(self.matrix)

    @property
    def is_transitive(self) -> bool:
        return self.order is not None


def distance(order: BucketOrder, matrix: PairOrderMatrix) -> Fraction:
    if order.n != matrix.n:
        raise DimensionError(f"bucket order has {order.n} items, matrix has {matrix.n}")
    b = order_entries(order)
    c = matrix.entries
    n = matrix.n
    return sum((abs(b[r][s] - c[r][s]) for r in range(n) for s in range(n) if r != s), Fraction(0))


def utopian_entry(c: Fraction) -> Fraction:
    if c > UPPER_THRESHOLD:
        return Fraction(1)
    if c < LOWER_THRESHOLD:
        return Fraction(0)
    return HALF


def utopian(matrix: PairOrderMatrix) -> UtopianResult:
    n = matrix.n
    u = tuple(
        tuple(HALF if r == s else utopian_entry(matrix.entries[r][s]) for s in range(n))
        for r in range(n)
    )
    bound = sum(
        (abs(u[r][s] - matrix.entries[r][s]) for r in range(n) for s in range(n) if r != s),
        Fraction(0),
    )
    return UtopianResult.model_construct(matrix=u, bound=bound)
