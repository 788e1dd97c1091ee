# weakrank/solver/buckets.py
"""Top-down bucket placement for variants that constrain bucket sizes or prefixes."""
import logging
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from weakrank.models.order import BucketOrder
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairnessSpec,
    FairVariant,
    PrescribedSizesVariant,
)
from weakrank.solver.costs import CostTable, bits
from weakrank.solver.incumbent import BudgetExhausted, Incumbent, SearchBudget, SearchTrace

logger = logging.getLogger(__name__)


class BucketRules:
    """Sizes per position, bucket-count limits and prefix counters an order must meet."""

    def __init__(
        self,
        n: int,
        slots: int,
        sizes: Optional[Sequence[int]] = None,
        fixed_p: Optional[int] = None,
        min_buckets: Optional[int] = None,
        fairness: Optional[FairnessSpec] = None,
    ):
        self.n = n
        self.slots = slots
        self.sizes = tuple(sizes) if sizes is not None else None
        self.fixed_p = fixed_p if fixed_p is not None else (len(sizes) if sizes is not None else None)
        self.min_buckets = min_buckets or 1
        self.fairness = fairness
        self.masks = fairness.masks() if fairness else []

    @classmethod
    def for_variant(cls, variant, n: int) -> "BucketRules":
        if isinstance(variant, EqualSizesVariant):
            return cls(n, slots=variant.p, sizes=variant.sizes)
        if isinstance(variant, PrescribedSizesVariant):
            return cls(n, slots=variant.p, sizes=variant.sizes)
        if isinstance(variant, FairVariant):
            return cls(
                n,
                slots=variant.slots(n),
                sizes=variant.capacities,
                fixed_p=variant.fixed_p(),
                min_buckets=variant.min_buckets,
                fairness=variant.fairness,
            )
        raise TypeError(f"bucket placement does not handle {type(variant).__name__}")

    def candidate_sizes(self, depth: int, remaining: int) -> range:
        """Sizes the bucket at 0-based `depth` may take with `remaining` items left."""
        if self.sizes is not None:
            size = self.sizes[depth]
            return range(size, size + 1) if size <= remaining else range(0)
        last = self.fixed_p if self.fixed_p is not None else self.slots
        later = last - depth - 1  # positions after this one
        if later == 0:
            return range(remaining, remaining + 1)
        need_after = (later if self.fixed_p is not None else max(self.min_buckets - depth - 1, 0))
        return range(1, remaining - need_after + 1)

    def prefix_ok(self, prefix: int, bucket: int, total: int, counts: Sequence[int]) -> bool:
        """Checks for the 1-based prefix ending with `bucket` (a mask, empty allowed)."""
        spec = self.fairness
        if spec is None:
            return True
        for i, members in enumerate(self.masks):
            inside = (bucket & members).bit_count()
            low, high = spec.bucket_count_bounds(i, prefix)
            if inside < low or (high is not None and inside > high):
                return False
            if not spec.share_ok(i, prefix, total, counts[i]) or not spec.counts_ok(i, prefix, counts[i]):
                return False
        return True

    def closing_ok(self, used: int, total: int, counts: Sequence[int]) -> bool:
        """Bucket count limits and the empty prefixes after the last bucket."""
        if used < self.min_buckets or (self.fixed_p is not None and used != self.fixed_p):
            return False
        return all(self.prefix_ok(prefix, 0, total, counts) for prefix in range(used + 1, self.slots + 1))


class BucketState(NamedTuple):
    remaining: int  # mask of unplaced items
    buckets: tuple[int, ...]
    counts: tuple[int, ...]  # group items placed so far
    cost: int
    rest: int  # utopian cost of pairs inside `remaining`


class BucketSearch:
    def __init__(
        self,
        table: CostTable,
        rules: BucketRules,
        incumbent: Incumbent,
        budget: SearchBudget,
        trace: Optional[SearchTrace] = None,
    ):
        self.table = table
        self.rules = rules
        self.incumbent = incumbent
        self.budget = budget
        self.trace = trace or SearchTrace()

    def root(self) -> BucketState:
        n = self.table.n
        return BucketState(
            remaining=(1 << n) - 1,
            buckets=(),
            counts=(0,) * len(self.rules.masks),
            cost=0,
            rest=self.table.utopian_total,
        )

    @staticmethod
    def bound(state: BucketState) -> int:
        return state.cost + state.rest

    def children(self, state: BucketState) -> list[BucketState]:
        table, rules = self.table, self.rules
        before, tie, utop = table.before, table.tie, table.utop
        items = list(bits(state.remaining))
        depth = len(state.buckets)
        prefix = depth + 1
        placed = self.table.n - len(items)
        result = []
        for size in rules.candidate_sizes(depth, len(items)):
            for chosen in combinations(items, size):
                bucket = sum(1 << t for t in chosen)
                rest_mask = state.remaining & ~bucket
                counts = tuple(c + (bucket & m).bit_count() for c, m in zip(state.counts, rules.masks))
                if not rules.prefix_ok(prefix, bucket, placed + size, counts):
                    continue
                others = [y for y in items if not (bucket >> y) & 1]
                step = table.subset_tie(chosen)
                shed = 0  # utopian cost of pairs that leave `remaining`
                for t in chosen:
                    row_before, row_utop = before[t], utop[t]
                    for y in others:
                        step += row_before[y]
                        shed += row_utop[y]
                shed += table.subset_utop(chosen)
                result.append(BucketState(
                    remaining=rest_mask,
                    buckets=state.buckets + (bucket,),
                    counts=counts,
                    cost=state.cost + step,
                    rest=state.rest - shed,
                ))
        result.sort(key=self.bound)
        return result

    def leaf(self, state: BucketState) -> None:
        placed = self.table.n
        if not self.rules.closing_ok(len(state.buckets), placed, state.counts):
            return
        order = BucketOrder.trusted([list(bits(mask)) for mask in state.buckets])
        if self.incumbent.offer(state.cost, order):
            self.trace.event("incumbent", total=state.cost, nodes=self.budget.nodes)

    def run(self) -> None:
        stack = [self.root()]
        while stack:
            state = stack.pop()
            bound = self.bound(state)
            if not self.incumbent.admits_bound(bound):
                if self.trace.enabled:
                    self.trace.event("prune", bound=bound, depth=len(state.buckets))
                continue
            if not self.budget.tick():
                raise BudgetExhausted(min([bound] + [self.bound(other) for other in stack]))
            if self.trace.enabled:
                self.trace.event("open", bound=bound, depth=len(state.buckets))
            if not state.remaining:
                self.leaf(state)
                continue
            stack.extend(reversed(self.children(state)))
