# weakrank/solver/costs.py
from fractions import Fraction
from typing import Sequence

from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import BucketOrder


class CostTable:
    """Pair costs scaled to integers.

    With L the lcm of the matrix denominators, an unordered pair {r, s} costs
    `before[r][s]` when r is ranked ahead of s, `before[s][r]` the other way and
    `tie[r][s]` when tied. Totals divided by L are distances.
    """

    def __init__(self, matrix: PairOrderMatrix):
        self.n = n = matrix.n
        self.scale = scale = matrix.denominator_lcm()
        c = [[int(matrix[r, s] * scale) for s in range(n)] for r in range(n)]
        self.before = [[2 * (scale - c[r][s]) if r != s else 0 for s in range(n)] for r in range(n)]
        self.tie = [[abs(scale - 2 * c[r][s]) if r != s else 0 for s in range(n)] for r in range(n)]
        self.utop = [
            [min(self.before[r][s], self.before[s][r], self.tie[r][s]) if r != s else 0 for s in range(n)]
            for r in range(n)
        ]
        self.utopian_total = sum(self.utop[r][s] for r in range(n) for s in range(r + 1, n))
        self.pair_order = _decisive_first(self)

    def value(self, total: int) -> Fraction:
        return Fraction(total, self.scale)

    def order_cost(self, order: BucketOrder) -> int:
        return self.assignment_cost(order.position)

    def assignment_cost(self, position: Sequence[int]) -> int:
        n, before, tie = self.n, self.before, self.tie
        total = 0
        for r in range(n):
            pr = position[r]
            row_before, row_tie = before[r], tie[r]
            for s in range(r + 1, n):
                ps = position[s]
                if pr < ps:
                    total += row_before[s]
                elif pr > ps:
                    total += before[s][r]
                else:
                    total += row_tie[s]
        return total

    def subset_tie(self, items: Sequence[int]) -> int:
        tie = self.tie
        return sum(tie[a][b] for i, a in enumerate(items) for b in items[i + 1:])

    def subset_utop(self, items: Sequence[int]) -> int:
        utop = self.utop
        return sum(utop[a][b] for i, a in enumerate(items) for b in items[i + 1:])

    def block_before(self, upper: Sequence[int], lower: Sequence[int]) -> int:
        before = self.before
        return sum(before[a][b] for a in upper for b in lower)

    def restricted(self, items: Sequence[int]) -> "CostTable":
        """Table over `items` only, indexed 0..len(items)-1, same scale."""
        sub = object.__new__(CostTable)
        sub.n = len(items)
        sub.scale = self.scale
        sub.before = [[self.before[a][b] for b in items] for a in items]
        sub.tie = [[self.tie[a][b] for b in items] for a in items]
        sub.utop = [[self.utop[a][b] for b in items] for a in items]
        sub.utopian_total = sum(sub.utop[r][s] for r in range(sub.n) for s in range(r + 1, sub.n))
        sub.pair_order = _decisive_first(sub)
        return sub


def _decisive_first(table: CostTable) -> list[tuple[int, int]]:
    # tie cost is L*|2c - 1|, so this sorts by |c - 1/2| descending, then (r, s)
    n = table.n
    return sorted(
        ((r, s) for r in range(n) for s in range(r + 1, n)),
        key=lambda pair: (-table.tie[pair[0]][pair[1]], pair),
    )


def bits(mask: int):
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
