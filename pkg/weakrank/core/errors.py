# weakrank/core/errors.py
from typing import Optional


class WeakRankError(Exception):
    """Base error. `exit_code` is what the command line returns for it."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return self.detail


class InputError(WeakRankError):
    def __init__(self, detail: str, source: Optional[str] = None, line: Optional[int] = None):
        self.source = source
        self.line = line
        where = []
        if source:
            where.append(source)
        if line is not None:
            where.append(f"line {line}")
        if where:
            detail = f"{':'.join(where)}: {detail}"
        super().__init__(detail)


class ProfileParseError(InputError):
    pass


class MatrixError(InputError):
    """Pair order matrix violation; `index` is the 1-based (row, column) involved."""

    def __init__(self, detail: str, index: Optional[tuple] = None, source: Optional[str] = None):
        self.index = index
        if index is not None:
            detail = f"{detail} at {tuple(index)}"
        super().__init__(detail, source=source)


class DimensionError(InputError):
    pass


class VariantError(WeakRankError):
    pass


class ModelError(WeakRankError):
    pass


class IncompatibleSolutionError(WeakRankError):
    pass


class EnumerationLimitError(WeakRankError):
    def __init__(self, n: int, cap: int, count: int):
        self.n = n
        self.cap = cap
        self.count = count
        super().__init__(
            f"refusing to enumerate weak orders on {n} items (cap {cap}): {count} orders"
        )
