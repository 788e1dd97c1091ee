# weakrank/analysis/trajectory.py
from fractions import Fraction
from typing import Optional

from weakrank.models.order import BucketOrder
from weakrank.schemas.report import FairnessTrajectory, TrajectoryRow
from weakrank.schemas.variant import FairnessSpec


def fairness_trajectory(order: BucketOrder, spec: FairnessSpec, slots: Optional[int] = None) -> FairnessTrajectory:
    """Share of each group among the items of the top-l buckets, l = 1..slots.

    Prefixes past the last bucket repeat the full order; `slots` defaults to the
    bucket count.
    """
    n = order.n
    spec.check_partition(n)
    slots = slots or order.bucket_count
    members = [frozenset(item - 1 for item in group) for group in spec.groups]
    rows = []
    total = 0
    counts = [0] * len(members)
    for prefix in range(1, slots + 1):
        bucket = order.buckets[prefix - 1] if prefix <= order.bucket_count else frozenset()
        total += len(bucket)
        for i, group in enumerate(members):
            counts[i] += len(bucket & group)
            rows.append(
                TrajectoryRow(
                    group=i + 1,
                    prefix=prefix,
                    total=total,
                    count=counts[i],
                    proportion=Fraction(counts[i], total),
                    target=Fraction(len(group), n),
                    within_bounds=spec.share_ok(i, prefix, total, counts[i]) and spec.counts_ok(i, prefix, counts[i]),
                )
            )
    return FairnessTrajectory(order=order, rows=tuple(rows))
