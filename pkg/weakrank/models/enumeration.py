# weakrank/models/enumeration.py
from functools import lru_cache
from itertools import chain, permutations, product
from math import comb
from typing import Iterator, Optional

from weakrank.core.config import settings
from weakrank.core.errors import EnumerationLimitError
from weakrank.models.order import BucketOrder


@lru_cache(maxsize=None)
def ordered_bell(n: int) -> int:
    """Number of weak orders on n items: a(n) = sum_k C(n, k) a(n - k), a(0) = 1."""
    if n == 0:
        return 1
    return sum(comb(n, k) * ordered_bell(n - k) for k in range(1, n + 1))


def surjections(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Item -> bucket vectors onto k buckets, in lexicographic order."""
    vector = [0] * n
    used = [0] * k

    def extend(i: int, missing: int):
        if n - i < missing:
            return
        if i == n:
            yield tuple(vector)
            return
        for bucket in range(k):
            vector[i] = bucket
            fresh = used[bucket] == 0
            used[bucket] += 1
            yield from extend(i + 1, missing - fresh)
            used[bucket] -= 1

    yield from extend(0, k)


def enumerate_assignments(n: int, cap: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Assignment vectors of every weak order: bucket count ascending, then lexicographic."""
    check_enumeration_cap(n, cap)
    return chain.from_iterable(surjections(n, k) for k in range(1, n + 1))


def enumerate_weak_orders(n: int, cap: Optional[int] = None) -> Iterator[BucketOrder]:
    return _orders(enumerate_assignments(n, cap))


def _orders(vectors: Iterator[tuple[int, ...]]) -> Iterator[BucketOrder]:
    for vector in vectors:
        buckets: list[list[int]] = [[] for _ in range(max(vector) + 1)]
        for item, bucket in enumerate(vector):
            buckets[bucket].append(item)
        yield BucketOrder.trusted(buckets)


def check_enumeration_cap(n: int, cap: Optional[int] = None) -> None:
    limit = settings.ENUMERATION_HARD_CAP if cap is None else min(cap, settings.ENUMERATION_HARD_CAP)
    if n > limit:
        raise EnumerationLimitError(n, limit, ordered_bell(n))


def consistent_linear_extensions(order: BucketOrder) -> Iterator[tuple[int, ...]]:
    """Every permutation that orders items within each bucket freely."""
    pieces = [permutations(sorted(bucket)) for bucket in order.buckets]
    for choice in product(*pieces):
        yield tuple(chain.from_iterable(choice))
