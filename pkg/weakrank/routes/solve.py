# weakrank/routes/solve.py
import csv
import io
import logging
import random
from pathlib import Path

import click

from weakrank.analysis.bounds import bound_report
from weakrank.core.config import settings
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.rational import format_fraction, round_2dp
from weakrank.routes.options import (
    STATUS_EXIT_CODES,
    build_variant,
    emit_json,
    handle_errors,
    input_options,
    load_input,
    state,
    variant_options,
)
from weakrank.schemas.solve import SolveResult, SolveStatus, optima_count_label
from weakrank.schemas.variant import make_variant
from weakrank.solver.engine import enumerate_optima, solve
from weakrank.solver.oracle import brute_force_solve

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["variant", "status", "objective_exact", "objective_2dp", "bound_exact", "optimum", "buckets"]


def _result_csv(result: SolveResult, labels=None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    objective = format_fraction(result.objective) if result.objective is not None else ""
    objective_2dp = round_2dp(result.objective) if result.objective is not None else ""
    bound = format_fraction(result.bound) if result.bound is not None else ""
    for order in result.optima or [None]:
        writer.writerow([
            result.variant, result.status.value, objective, objective_2dp, bound,
            order.to_text(labels) if order is not None else "",
            order.bucket_count if order is not None else "",
        ])
    return buffer.getvalue()


def _result_text(result: SolveResult, labels=None) -> str:
    lines = [f"{result.variant}: {result.status.value}"]
    if result.objective is not None:
        lines.append(f"objective {round_2dp(result.objective)} ({format_fraction(result.objective)})")
    elif result.incumbent is not None:
        gap = result.gap
        lines.append(
            f"incumbent {round_2dp(result.incumbent)}, bound {round_2dp(result.bound)}"
            + (f", gap {round_2dp(gap)}% (assumed convention)" if gap is not None else "")
        )
    lines.append(f"optima {result.optima_count}")
    lines.extend(f"  {order.to_text(labels)}" for order in result.optima)
    lines.append(f"nodes {result.nodes}, {result.elapsed:.2f}s ({result.strategy})")
    return "\n".join(lines)


def _emit_result(ctx: click.Context, result: SolveResult, matrix: PairOrderMatrix) -> None:
    fmt = state(ctx).format_or("json")
    if fmt == "csv":
        click.echo(_result_csv(result, matrix.labels), nl=False)
    elif fmt == "text":
        click.echo(_result_text(result, matrix.labels))
    else:
        emit_json(result.report())
    ctx.exit(STATUS_EXIT_CODES[result.status])


@click.command("solve")
@input_options
@variant_options
@click.option("--strategy", type=click.Choice(["auto", "search", "brute"]), default="auto")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False, path_type=Path), help="Write search events as JSON lines.")
@click.option("--single", is_flag=True, help="Stop at the first optimal order.")
@click.pass_context
@handle_errors
def solve_cmd(ctx, matrix_path, profile_path, kind, variant_json, strategy, trace_path, single, **params):
    """Optimal bucket order for one variant. Exit 0 optimal, 2 limit, 3 infeasible."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    variant = build_variant(matrix.n, kind, variant_json, **params)
    cfg = cli.cfg.model_copy(update={"strategy": strategy, "trace_path": trace_path, "collect_optima": not single})
    result = solve(matrix, variant, cfg)
    _emit_result(ctx, result, matrix)


@click.command("optima")
@input_options
@variant_options
@click.option("--cap", type=int, help="Most optima to list.")
@click.pass_context
@handle_errors
def optima_cmd(ctx, matrix_path, profile_path, kind, variant_json, cap, **params):
    """Every optimal order, up to the cap, in canonical order."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    variant = build_variant(matrix.n, kind, variant_json, **params)
    cfg = cli.cfg if cap is None else cli.cfg.model_copy(update={"optima_cap": cap})
    orders = enumerate_optima(matrix, variant, cfg)
    texts = [order.to_text(matrix.labels) for order in orders]
    if cli.format_or("json") == "json":
        emit_json({
            "variant": variant.label,
            "optima": texts,
            "optima_count": optima_count_label(len(orders)),
            "bucket_counts": [order.bucket_count for order in orders],
        })
    else:
        click.echo("\n".join(texts))
    ctx.exit(0 if orders else STATUS_EXIT_CODES[SolveStatus.INFEASIBLE])


@click.command("oracle")
@input_options
@variant_options
@click.option("--compare", is_flag=True, help="Also run the search and require identical optima.")
@click.option("--random", "random_count", type=int, help="Cross-check this many random matrices instead of an input.")
@click.option("--size", type=int, default=6, show_default=True, help="Items per random matrix.")
@click.pass_context
@handle_errors
def oracle_cmd(ctx, matrix_path, profile_path, kind, variant_json, compare, random_count, size, **params):
    """Exhaustive enumeration over all weak orders (small n only)."""
    cli = state(ctx)
    if random_count is not None:
        rng = random.Random(cli.seed)
        mismatches = 0
        for index in range(random_count):
            matrix = PairOrderMatrix.sample(size, rng)
            variant = make_variant(kind or "obop", size, **{k: v for k, v in params.items() if v is not None})
            if not _agree(matrix, variant, cli):
                mismatches += 1
                logger.error("instance %d disagrees: %s", index, matrix.model_dump_json())
        click.echo(f"{random_count - mismatches}/{random_count} instances agree")
        ctx.exit(1 if mismatches else 0)

    matrix, _ = load_input(matrix_path, profile_path)
    variant = build_variant(matrix.n, kind, variant_json, **params)
    if compare and not _agree(matrix, variant, cli):
        click.echo("error: search and enumeration disagree", err=True)
        ctx.exit(1)
    _emit_result(ctx, brute_force_solve(matrix, variant, _oracle_config(cli)), matrix)


def _oracle_config(cli):
    return cli.cfg.model_copy(update={"enumeration_threshold": settings.ENUMERATION_HARD_CAP})


def _agree(matrix: PairOrderMatrix, variant, cli) -> bool:
    expected = brute_force_solve(matrix, variant, _oracle_config(cli))
    found = solve(matrix, variant, cli.cfg.model_copy(update={"strategy": "search"}))
    return expected.status == found.status and expected.objective == found.objective and set(expected.optima) == set(found.optima)


@click.command("bounds")
@input_options
@variant_options
@click.pass_context
@handle_errors
def bounds_cmd(ctx, matrix_path, profile_path, kind, variant_json, **params):
    """Optimum next to the utopian bound."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    variant = build_variant(matrix.n, kind, variant_json, **params)
    report = bound_report(matrix, variant, cli.cfg)
    if cli.format_or("json") == "json":
        emit_json(report.report())
        return
    fields = [("objective", report.objective), ("utopian_bound", report.utopian_bound), ("gap_to_utopian", report.gap_to_utopian)]
    for name, value in fields:
        if value is not None:
            click.echo(f"{name} {round_2dp(value)} ({format_fraction(value)})")
    if report.utopian_transitive is not None:
        click.echo(f"utopian_transitive {str(report.utopian_transitive).lower()}")
