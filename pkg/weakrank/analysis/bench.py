# weakrank/analysis/bench.py
"""Benchmark harness: one solve per manifest line, results as CSV rows.

Manifest lines read `name path variant [key=value ...] timelimit`, e.g.

    ex1   data/eight_items.csv  obop              -
    ex1p5 data/eight_items.csv  fixed-p  p=5      60
    ex1f  data/eight_items.csv  fair groups=mod3  60

Paths are relative to the manifest, `-` leaves the time limit unset and `#`
starts a comment.
"""
import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, TextIO

from pydantic import ValidationError

from weakrank.core.config import settings
from weakrank.core.errors import InputError, WeakRankError
from weakrank.ingest import load_instance
from weakrank.models.matrix import utopian
from weakrank.schemas.report import BENCH_COLUMNS, BenchRow
from weakrank.schemas.solve import SolveConfig, SolveStatus, optima_count_label
from weakrank.schemas.variant import make_variant
from weakrank.solver.engine import solve

logger = logging.getLogger(__name__)


class BenchEntry(NamedTuple):
    name: str
    path: Path
    variant: str
    params: dict
    time_limit: Optional[float]

    @property
    def label(self) -> str:
        if not self.params:
            return self.variant
        return self.variant + "(" + ",".join(f"{key}={value}" for key, value in self.params.items()) + ")"


def _param_value(text: str):
    return int(text) if text.isdigit() else text


def parse_manifest(text: str, base: Path = Path("."), source: Optional[str] = None) -> list[BenchEntry]:
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 4:
            raise InputError("expected 'name path variant [key=value ...] timelimit'", source=source, line=number)
        name, path, variant, *params, limit = tokens
        values = {}
        for token in params:
            key, sep, value = token.partition("=")
            if not sep or not key or not value:
                raise InputError(f"bad parameter {token!r}", source=source, line=number)
            values[key.replace("-", "_")] = _param_value(value)
        try:
            time_limit = None if limit == "-" else float(limit)
        except ValueError:
            raise InputError(f"bad time limit {limit!r}", source=source, line=number) from None
        if time_limit is not None and time_limit <= 0:
            raise InputError("time limit must be positive", source=source, line=number)
        entries.append(BenchEntry(name, base / path, variant, values, time_limit))
    return entries


def load_manifest(path: Path) -> list[BenchEntry]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read manifest: {exc.strerror}", source=str(path)) from None
    return parse_manifest(text, base=Path(path).parent, source=str(path))


def run_entry(entry: BenchEntry, cfg: Optional[SolveConfig] = None) -> BenchRow:
    """One row; failures are recorded in the `error` column instead of raised."""
    cfg = cfg or SolveConfig()
    if entry.time_limit is not None:
        cfg = cfg.model_copy(update={"time_limit": entry.time_limit})
    started = time.monotonic()
    n = m = None
    try:
        matrix, profile = load_instance(entry.path)
        n = matrix.n
        m = profile.m if profile is not None else None
        variant = make_variant(entry.variant, n, **entry.params)
        result = solve(matrix, variant, cfg)
    except (WeakRankError, ValidationError) as exc:
        logger.warning("%s: %s", entry.name, exc)
        return BenchRow(
            instance=entry.name, n=n, m=m, variant=entry.label, status="Error",
            time=time.monotonic() - started, error=str(exc),
        )
    except Exception as exc:
        logger.exception("%s: unexpected failure", entry.name)
        return BenchRow(
            instance=entry.name, n=n, m=m, variant=entry.label, status="Error",
            time=time.monotonic() - started, error=f"{type(exc).__name__}: {exc}",
        )

    relaxed = utopian(matrix).bound if entry.variant == "obop" else None
    row = BenchRow(
        instance=entry.name,
        n=n,
        m=m,
        variant=variant.label,
        status=result.status.value,
        objective=result.objective,
        utopian_bound=relaxed,
        time=time.monotonic() - started,
        optima_count=optima_count_label(len(result.optima)) if result.status == SolveStatus.OPTIMAL else "",
        bucket_counts=tuple(sorted(result.bucket_counts)),
    )
    logger.info("%s %s: %s %s in %.2fs", entry.name, row.variant, row.status, result.objective, row.time)
    return row


def _run_task(args) -> BenchRow:
    return run_entry(*args)


def run_bench(
    entries: Iterable[BenchEntry],
    out: TextIO,
    cfg: Optional[SolveConfig] = None,
    jobs: int = 1,
) -> list[BenchRow]:
    """Writes the header, then rows in manifest order as they finish."""
    cfg = cfg or SolveConfig()
    entries = list(entries)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    out.flush()

    rows: list[BenchRow] = []
    if jobs > 1 and len(entries) > 1:
        single = cfg.model_copy(update={"workers": 1})
        pool = ProcessPoolExecutor(max_workers=jobs)
        produced = pool.map(_run_task, [(entry, single) for entry in entries])
    else:
        pool = None
        produced = (run_entry(entry, cfg) for entry in entries)
    try:
        for row in produced:
            rows.append(row)
            writer.writerow(row.csv_row())
            if len(rows) % settings.BENCH_FLUSH_EVERY == 0:
                out.flush()
    finally:
        if pool is not None:
            pool.shutdown()
    out.flush()
    return rows
