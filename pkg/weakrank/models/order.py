# weakrank/models/order.py
import re
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_serializer, model_validator

from weakrank.core.errors import DimensionError, InputError
from weakrank.models.rational import Rational

HALF = Fraction(1, 2)
_SEPARATOR = re.compile(r"\|\|?")


class BucketOrder(BaseModel):
    """Ordered partition of items 0..n-1 into non-empty buckets.

    Text form is 1-based, e.g. `4 | 1 3 | 2 5`; `||` is accepted as a separator
    so tail-collapsed orders can be written as printed.
    """

    model_config = ConfigDict(frozen=True)

    buckets: tuple[frozenset[int], ...]

    @model_validator(mode="before")
    @classmethod
    def _from_text(cls, data):
        if isinstance(data, str):
            return {"buckets": _parse_buckets(data)}
        if isinstance(data, (list, tuple)):
            return {"buckets": [frozenset(bucket) for bucket in data]}
        return data

    @model_validator(mode="after")
    def _check_partition(self):
        if not self.buckets:
            raise InputError("bucket order has no buckets")
        seen: set[int] = set()
        for bucket in self.buckets:
            if not bucket:
                raise InputError("bucket order has an empty bucket")
            if seen & bucket:
                raise InputError(f"item {min(seen & bucket) + 1} appears in two buckets")
            seen |= bucket
        if seen != set(range(len(seen))):
            missing = sorted(set(range(max(seen) + 1)) - seen)
            raise InputError(f"bucket order does not cover items {[m + 1 for m in missing]}")
        return self

    @model_serializer
    def _to_text(self) -> str:
        return self.to_text()

    @classmethod
    def parse(cls, text: str, labels: Optional[Sequence[str]] = None) -> "BucketOrder":
        return cls(buckets=_parse_buckets(text, labels))

    @classmethod
    def from_assignment(cls, assignment: Sequence[int]) -> "BucketOrder":
        """Order from a surjective item -> bucket-index vector (0-based)."""
        count = max(assignment) + 1
        buckets: list[set[int]] = [set() for _ in range(count)]
        for item, bucket in enumerate(assignment):
            buckets[bucket].add(item)
        return cls(buckets=tuple(frozenset(b) for b in buckets))

    @classmethod
    def trusted(cls, buckets: Iterable[Iterable[int]]) -> "BucketOrder":
        # skips validation; callers guarantee an ordered partition
        return cls.model_construct(buckets=tuple(frozenset(b) for b in buckets))

    @classmethod
    def single_bucket(cls, n: int) -> "BucketOrder":
        return cls.trusted([range(n)])

    @classmethod
    def strict(cls, permutation: Sequence[int]) -> "BucketOrder":
        return cls(buckets=tuple(frozenset([item]) for item in permutation))

    @cached_property
    def n(self) -> int:
        return sum(len(bucket) for bucket in self.buckets)

    @property
    def bucket_count(self) -> int:
        return len(self.buckets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(bucket) for bucket in self.buckets)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for index, bucket in enumerate(self.buckets):
            for item in bucket:
                pos[item] = index
        return tuple(pos)

    def assignment(self) -> tuple[int, ...]:
        return self.position

    def sort_key(self) -> tuple:
        return (self.bucket_count, self.position)

    def to_text(self, labels: Optional[Sequence[str]] = None) -> str:
        def name(item: int) -> str:
            return labels[item] if labels else str(item + 1)

        return " | ".join(" ".join(name(i) for i in sorted(bucket)) for bucket in self.buckets)

    def __str__(self) -> str:
        return self.to_text()

    def __eq__(self, other) -> bool:
        return isinstance(other, BucketOrder) and self.buckets == other.buckets

    def __hash__(self) -> int:
        return hash(self.buckets)


class BucketMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: tuple[tuple[Rational, ...], ...]

    @model_validator(mode="after")
    def _check_weak_order(self):
        if bucket_order_from_matrix(self.entries) is None:
            raise InputError("matrix does not encode a bucket order")
        return self

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        r, s = index
        return self.entries[r][s]


def order_entries(order: BucketOrder) -> tuple[tuple[Fraction, ...], ...]:
    pos = order.position
    one, zero = Fraction(1), Fraction(0)
    return tuple(
        tuple(HALF if pos[r] == pos[s] else (one if pos[r] < pos[s] else zero) for s in range(order.n))
        for r in range(order.n)
    )


def bucket_matrix(order: BucketOrder) -> BucketMatrix:
    return BucketMatrix.model_construct(entries=order_entries(order))


def bucket_order_from_matrix(entries: Sequence[Sequence[Fraction]]) -> Optional[BucketOrder]:
    """The bucket order a {0, 1/2, 1} matrix encodes, or None if it encodes none."""
    n = len(entries)
    if n == 0 or any(len(row) != n for row in entries):
        return None
    allowed = {Fraction(0), HALF, Fraction(1)}
    if any(value not in allowed for row in entries for value in row):
        return None
    # items of one bucket share the number of items ranked strictly above them
    above = [sum(1 for s in range(n) if entries[s][r] == 1) for r in range(n)]
    levels = sorted(set(above))
    candidate = BucketOrder.trusted(
        [r for r in range(n) if above[r] == level] for level in levels
    )
    if order_entries(candidate) != tuple(tuple(row) for row in entries):
        return None
    return candidate


def check_same_size(order: BucketOrder, n: int) -> None:
    if order.n != n:
        raise DimensionError(f"bucket order has {order.n} items, expected {n}")


def _parse_buckets(text: str, labels: Optional[Sequence[str]] = None) -> list[frozenset[int]]:
    lookup = {label: index for index, label in enumerate(labels)} if labels else {}
    buckets = []
    for chunk in _SEPARATOR.split(text.strip()):
        items = set()
        for token in chunk.replace(",", " ").split():
            if token in lookup:
                items.add(lookup[token])
                continue
            try:
                item = int(token)
            except ValueError:
                raise InputError(f"unknown item {token!r} in bucket order {text!r}") from None
            if item < 1:
                raise InputError(f"item ids are 1-based, got {item} in {text!r}")
            items.add(item - 1)
        buckets.append(frozenset(items))
    return buckets
