# weakrank/routes/sweep.py
import json
from pathlib import Path

import click

from weakrank.analysis.counterexamples import counterexample_report
from weakrank.analysis.sweeps import p_sweep, tcu_sweep
from weakrank.models.rational import format_fraction, round_2dp
from weakrank.routes.options import emit_json, handle_errors, input_options, load_input, state, write_or_echo


@click.command("sweep")
@input_options
@click.option("--sweep", "parameter", type=click.Choice(["p", "k"]), required=True)
@click.option("--from", "start", type=int, default=1, show_default=True)
@click.option("--to", "stop", type=int, help="Last value (default n).")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
@handle_errors
def sweep_cmd(ctx, matrix_path, profile_path, parameter, start, stop, output):
    """Optimal value for every bucket count p or every tail cut k."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    values = range(start, (stop or matrix.n) + 1)
    run = p_sweep if parameter == "p" else tcu_sweep
    result = run(matrix, values, cli.cfg)
    fmt = cli.format_or("csv")
    if fmt == "json":
        write_or_echo(json.dumps(result.report(), indent=2) + "\n", output)
    elif fmt == "text":
        lines = []
        minima = set(result.minima)
        for point in result.points:
            value = round_2dp(point.objective) if point.objective is not None else point.status.value
            marks = list(point.annotations) + (["min"] if point.value in minima else [])
            lines.append(f"{parameter}={point.value} {value}" + (f" [{', '.join(marks)}]" if marks else ""))
        if result.non_unimodal:
            lines.append("not unimodal")
        write_or_echo("\n".join(lines) + "\n", output)
    else:
        write_or_echo(result.to_csv(), output)


@click.command("tails")
@input_options
@click.option("--k", type=int, required=True, help="Items ranked ahead of the tail.")
@click.pass_context
@handle_errors
def tails_cmd(ctx, matrix_path, profile_path, k):
    """Tail-collapsed optimum against orders cut from the unconstrained optimum."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    report = counterexample_report(matrix, k, cli.cfg)
    if cli.format_or("json") == "json":
        emit_json(report.report())
        return
    rows = [
        ("tcu", report.tcu_objective),
        ("obop", report.obop_objective),
        ("tail-matching", report.tail_matching_objective),
        ("two-bucket", report.two_bucket_objective),
        ("truncated-split", report.truncated_split_objective),
    ]
    for name, value in rows:
        shown = f"{round_2dp(value)} ({format_fraction(value)})" if value is not None else "infeasible"
        click.echo(f"{name} {shown}")
    for order in report.tcu_optima:
        click.echo(f"  {order.to_text(matrix.labels)}")
