# weakrank/solver/tail.py
"""Tail-collapsed orders: choose the n - k items of the last bucket, then rank the head."""
import logging
from typing import NamedTuple, Optional, Sequence

from weakrank.models.order import BucketOrder
from weakrank.schemas.variant import TailBounds
from weakrank.solver.costs import CostTable, bits
from weakrank.solver.incumbent import BudgetExhausted, Incumbent, SearchBudget, SearchTrace
from weakrank.solver.pairs import PairSearch, root_state

logger = logging.getLogger(__name__)


class TailState(NamedTuple):
    index: int  # next position of the branching order
    tail: int
    head: int


def tail_cost(table: CostTable, tail: Sequence[int], head: Sequence[int]) -> int:
    """Cost of every pair touching the tail: tail pairs tied, head items ahead."""
    return table.subset_tie(tail) + table.block_before(head, tail)


def solve_head(
    table: CostTable,
    tail: Sequence[int],
    incumbent: Incumbent,
    budget: SearchBudget,
    trace: Optional[SearchTrace] = None,
) -> None:
    """Best orders whose last bucket is exactly `tail`, offered to `incumbent`."""
    tail = sorted(tail)
    head = [r for r in range(table.n) if r not in set(tail)]
    offset = tail_cost(table, tail, head)
    if not head:
        incumbent.offer(offset, BucketOrder.trusted([tail]))
        return
    search = PairSearch(
        table.restricted(head),
        incumbent,
        budget,
        trace,
        items=head,
        offset=offset,
        suffix=tail,
    )
    search.run(root_state(len(head)))


class TailSearch:
    def __init__(
        self,
        table: CostTable,
        k: int,
        incumbent: Incumbent,
        budget: SearchBudget,
        trace: Optional[SearchTrace] = None,
        tail_bounds: Optional[TailBounds] = None,
    ):
        self.table = table
        self.k = k
        self.size = table.n - k
        self.incumbent = incumbent
        self.budget = budget
        self.trace = trace or SearchTrace()
        self.group_limits = list(zip(tail_bounds.masks(), tail_bounds.lower, tail_bounds.upper)) if tail_bounds else []
        n = table.n
        # items that are expensive to rank ahead are tried in the tail first
        self.order = sorted(range(n), key=lambda r: (-sum(table.before[r]), r))

    def bound(self, state: TailState) -> int:
        table = self.table
        before, tie, utop = table.before, table.tie, table.utop
        n = table.n
        total = 0
        for r in range(n):
            r_tail, r_head = (state.tail >> r) & 1, (state.head >> r) & 1
            for s in range(r + 1, n):
                s_tail, s_head = (state.tail >> s) & 1, (state.head >> s) & 1
                if r_tail and s_tail:
                    total += tie[r][s]
                elif r_tail and s_head:
                    total += before[s][r]
                elif r_head and s_tail:
                    total += before[r][s]
                elif r_tail and not s_head:
                    total += min(tie[r][s], before[s][r])
                elif s_tail and not r_head:
                    total += min(tie[r][s], before[r][s])
                else:
                    total += utop[r][s]
        return total

    def feasible(self, state: TailState) -> bool:
        count = state.tail.bit_count()
        undecided = self.table.n - state.index
        if count > self.size or count + undecided < self.size:
            return False
        open_mask = ((1 << self.table.n) - 1) & ~(state.tail | state.head)
        for mask, low, high in self.group_limits:
            inside = (state.tail & mask).bit_count()
            if inside > high or inside + (open_mask & mask).bit_count() < low:
                return False
        return True

    def children(self, state: TailState) -> list[TailState]:
        item = self.order[state.index]
        options = [
            TailState(state.index + 1, state.tail | (1 << item), state.head),
            TailState(state.index + 1, state.tail, state.head | (1 << item)),
        ]
        return sorted((child for child in options if self.feasible(child)), key=self.bound)

    def run(self) -> None:
        stack = [TailState(0, 0, 0)]
        while stack:
            state = stack.pop()
            bound = self.bound(state)
            if not self.incumbent.admits_bound(bound):
                if self.trace.enabled:
                    self.trace.event("prune", bound=bound, depth=state.index)
                continue
            if not self.budget.tick():
                raise BudgetExhausted(min([bound] + [self.bound(other) for other in stack]))
            if self.trace.enabled:
                self.trace.event("open", bound=bound, depth=state.index)
            if state.tail.bit_count() == self.size:
                if self._tail_within(state.tail):
                    try:
                        solve_head(self.table, list(bits(state.tail)), self.incumbent, self.budget, self.trace)
                    except BudgetExhausted as exc:
                        raise BudgetExhausted(min([exc.bound] + [self.bound(other) for other in stack])) from None
                continue
            stack.extend(reversed(self.children(state)))

    def _tail_within(self, tail: int) -> bool:
        return all(low <= (tail & mask).bit_count() <= high for mask, low, high in self.group_limits)
