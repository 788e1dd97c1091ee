# weakrank/solver/pairs.py
"""Pair branching over weak orders.

Every node fixes more unordered pairs {r, s} to one of r ahead of s, tied, s ahead
of r, closing the relation transitively. The bound adds, for each undecided pair,
the cheapest of its three states, so it never exceeds the cost of a completion.
"""
import logging
from typing import NamedTuple, Optional, Sequence

from weakrank.models.order import BucketOrder
from weakrank.solver.costs import CostTable, bits
from weakrank.solver.incumbent import BudgetExhausted, Incumbent, SearchBudget, SearchTrace

logger = logging.getLogger(__name__)


class PairState(NamedTuple):
    tied: tuple[int, ...]  # bitmask of each item's class
    above: tuple[int, ...]  # items strictly ahead
    below: tuple[int, ...]  # items strictly behind
    decided: int
    excess: int  # cost of decided pairs over their cheapest state
    classes: int
    cursor: int  # first position of pair_order that may be undecided


def root_state(n: int) -> PairState:
    return PairState(
        tied=tuple(1 << r for r in range(n)),
        above=(0,) * n,
        below=(0,) * n,
        decided=0,
        excess=0,
        classes=n,
        cursor=0,
    )


def place_before(table: CostTable, state: PairState, r: int, s: int) -> PairState:
    tied, above, below = list(state.tied), list(state.above), list(state.below)
    before, utop = table.before, table.utop
    upper = tied[r] | above[r]
    lower = tied[s] | below[s]
    excess, decided = state.excess, state.decided
    for a in bits(upper):
        fresh = lower & ~below[a]
        if fresh:
            below[a] |= fresh
            row_before, row_utop = before[a], utop[a]
            for b in bits(fresh):
                excess += row_before[b] - row_utop[b]
                decided += 1
    for b in bits(lower):
        above[b] |= upper
    return PairState(tuple(tied), tuple(above), tuple(below), decided, excess, state.classes, state.cursor)


def place_tie(table: CostTable, state: PairState, r: int, s: int) -> PairState:
    tied, above, below = list(state.tied), list(state.above), list(state.below)
    before, tie, utop = table.before, table.tie, table.utop
    left, right = tied[r], tied[s]
    group = left | right
    upper = above[r] | above[s]
    lower = below[r] | below[s]
    excess, decided = state.excess, state.decided

    for a in bits(left):
        for b in bits(right):
            excess += tie[a][b] - utop[a][b]
            decided += 1
    for a in bits(upper):
        fresh = (group | lower) & ~below[a]
        if fresh:
            below[a] |= fresh
            for b in bits(fresh):
                excess += before[a][b] - utop[a][b]
                decided += 1
    for a in bits(group):
        fresh = lower & ~below[a]
        if fresh:
            for b in bits(fresh):
                excess += before[a][b] - utop[a][b]
                decided += 1
        below[a] = lower
        above[a] = upper
        tied[a] = group
    for b in bits(lower):
        above[b] |= upper | group
    return PairState(tuple(tied), tuple(above), tuple(below), decided, excess, state.classes - 1, state.cursor)


def is_open(state: PairState, r: int, s: int) -> bool:
    return not ((state.tied[r] | state.above[r] | state.below[r]) >> s) & 1


def chain_height(state: PairState) -> int:
    """Longest chain of classes; a lower bound on the final bucket count."""
    # `above` is transitively closed, so every item ahead of i has fewer items ahead of it
    height = [0] * len(state.above)
    for i in sorted(range(len(state.above)), key=lambda i: state.above[i].bit_count()):
        height[i] = 1 + max((height[j] for j in bits(state.above[i])), default=0)
    return max(height)


def state_order(state: PairState, items: Optional[Sequence[int]] = None) -> list[list[int]]:
    """Buckets of a completed state, mapped through `items` when given."""
    seen, classes = set(), []
    for mask in state.tied:
        if mask not in seen:
            seen.add(mask)
            classes.append(mask)
    first = [mask.bit_length() - 1 for mask in classes]
    classes = [mask for _, mask in sorted(zip((state.above[i].bit_count() for i in first), classes))]
    return [[items[i] if items is not None else i for i in bits(mask)] for mask in classes]


class PairSearch:
    """Depth-first search over pair states.

    `items`, `offset` and `suffix` let the search solve the head of a larger order:
    item i of the table is `items[i]` in the full order, `offset` is the fixed cost of
    everything outside the head and `suffix` is appended as the last bucket.
    """

    def __init__(
        self,
        table: CostTable,
        incumbent: Incumbent,
        budget: SearchBudget,
        trace: Optional[SearchTrace] = None,
        p: Optional[int] = None,
        items: Optional[Sequence[int]] = None,
        offset: int = 0,
        suffix: Optional[Sequence[int]] = None,
    ):
        self.table = table
        self.incumbent = incumbent
        self.budget = budget
        self.trace = trace or SearchTrace()
        self.p = p
        self.items = items
        self.offset = offset
        self.suffix = list(suffix) if suffix else None
        self.pair_total = table.n * (table.n - 1) // 2

    def bound(self, state: PairState) -> int:
        return self.offset + self.table.utopian_total + state.excess

    def feasible(self, state: PairState) -> bool:
        if self.p is None:
            return True
        return state.classes >= self.p and chain_height(state) <= self.p

    def next_pair(self, state: PairState) -> tuple[Optional[tuple[int, int]], int]:
        order = self.table.pair_order
        cursor = state.cursor
        while cursor < len(order):
            r, s = order[cursor]
            if is_open(state, r, s):
                return (r, s), cursor
            cursor += 1
        return None, cursor

    def children(self, state: PairState) -> list[PairState]:
        pair, cursor = self.next_pair(state)
        r, s = pair
        state = state._replace(cursor=cursor)
        options = [
            place_before(self.table, state, r, s),
            place_tie(self.table, state, r, s),
            place_before(self.table, state, s, r),
        ]
        return sorted(options, key=lambda child: child.excess)

    def complete(self, state: PairState) -> bool:
        return state.decided == self.pair_total

    def leaf(self, state: PairState) -> None:
        if self.p is not None and state.classes != self.p:
            return
        buckets = state_order(state, self.items)
        if self.suffix:
            buckets.append(self.suffix)
        total = self.bound(state)
        if self.incumbent.offer(total, BucketOrder.trusted(buckets)):
            self.trace.event("incumbent", total=total, nodes=self.budget.nodes)

    def run(self, root: PairState) -> None:
        stack = [root]
        while stack:
            state = stack.pop()
            bound = self.bound(state)
            if not self.incumbent.admits_bound(bound) or not self.feasible(state):
                if self.trace.enabled:
                    self.trace.event("prune", bound=bound, depth=state.decided)
                continue
            if not self.budget.tick():
                raise BudgetExhausted(min([bound] + [self.bound(other) for other in stack]))
            if self.trace.enabled:
                self.trace.event("open", bound=bound, depth=state.decided)
            if self.complete(state):
                self.leaf(state)
                continue
            stack.extend(reversed(self.children(state)))

    def dive(self, root: PairState) -> None:
        """Follow the cheapest child down to one completion."""
        state = root
        while not self.complete(state):
            options = [child for child in self.children(state) if self.feasible(child)]
            if not options:
                return
            state = options[0]
        self.leaf(state)

    def frontier(self, root: PairState, size: int) -> list[PairState]:
        """Open nodes covering the whole tree, at least `size` of them when possible."""
        layer = [root]
        while len(layer) < size:
            expanded, grew = [], False
            for state in layer:
                if self.complete(state):
                    expanded.append(state)
                    continue
                grew = True
                expanded += [child for child in self.children(state) if self.feasible(child)]
            layer = expanded
            if not grew:
                break
        return layer
