# weakrank/solver/incumbent.py
import json
import logging
import time
from pathlib import Path
from typing import Optional

from weakrank.models.order import BucketOrder

logger = logging.getLogger(__name__)


class Incumbent:
    """Best total found so far and the orders attaining it.

    While collecting optima, subtrees whose bound equals the best total stay open
    so that every tie is found, up to `cap` orders.
    """

    def __init__(self, cap: int = 1, collect: bool = False, best: Optional[int] = None):
        self.cap = cap
        self.collect = collect
        self.best = best
        self.orders: dict[str, BucketOrder] = {}

    def admits_bound(self, bound: int) -> bool:
        if self.best is None:
            return True
        if self.collect and len(self.orders) < self.cap:
            return bound <= self.best
        return bound < self.best

    def offer(self, total: int, order: BucketOrder) -> bool:
        if self.best is None or total < self.best:
            self.best = total
            self.orders = {order.to_text(): order}
            logger.debug("new incumbent %s (scaled total %d)", order, total)
            return True
        if total == self.best and (self.collect or not self.orders) and len(self.orders) < self.cap:
            text = order.to_text()
            if text not in self.orders:
                self.orders[text] = order
                return True
        return False

    def merge(self, best: Optional[int], orders) -> None:
        for order in orders:
            self.offer(best, order)

    def optima(self) -> tuple[BucketOrder, ...]:
        return tuple(sorted(self.orders.values(), key=BucketOrder.sort_key))


class BudgetExhausted(Exception):
    """Raised out of a search when a limit hits; `bound` is the smallest open bound."""

    def __init__(self, bound: Optional[int]):
        super().__init__("search budget exhausted")
        self.bound = bound


class SearchBudget:
    CLOCK_EVERY = 64

    def __init__(self, time_limit: Optional[float] = None, node_limit: Optional[int] = None):
        self.started = time.monotonic()
        self.deadline = self.started + time_limit if time_limit else None
        self.node_limit = node_limit
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        """Count a node; False once a limit is reached."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes % self.CLOCK_EVERY == 0 and time.monotonic() > self.deadline:
            self.exhausted = True
        return not self.exhausted

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    @property
    def remaining(self) -> Optional[float]:
        if self.deadline is None:
            return None
        return max(self.deadline - time.monotonic(), 0.001)


class SearchTrace:
    """Line-delimited JSON events (open, prune, incumbent); the format may change."""

    def __init__(self, path: Optional[Path] = None, scale: int = 1):
        self._file = open(path, "a", encoding="utf-8") if path else None
        if self._file:
            self.event("start", scale=scale)

    @property
    def enabled(self) -> bool:
        return self._file is not None

    def event(self, kind: str, **fields) -> None:
        if self._file is None:
            return
        self._file.write(json.dumps({"event": kind, **fields}) + "\n")

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
