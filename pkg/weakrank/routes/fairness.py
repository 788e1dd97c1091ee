# weakrank/routes/fairness.py
from pathlib import Path

import click

from weakrank.analysis.trajectory import fairness_trajectory
from weakrank.core.errors import VariantError
from weakrank.formulations.fairness import validate_fairness_params
from weakrank.models.order import BucketOrder, check_same_size
from weakrank.models.rational import format_fraction
from weakrank.routes.options import (
    emit_json,
    handle_errors,
    input_options,
    load_input,
    read_text,
    state,
    write_or_echo,
)
from weakrank.schemas.solve import SolveStatus
from weakrank.schemas.variant import FairnessSpec, FairVariant, ObopVariant, parse_groups
from weakrank.solver.engine import solve

fairness = click.Group("fairness", help="Group representation in the top buckets of a ranking.")


@fairness.command("trajectory")
@input_options
@click.option("--groups", required=True, help="'split', 'mod3' or groups like '1,3;2,4'.")
@click.option("--order", "order_text", help="Ranking to inspect; default is the optimum of --solve.")
@click.option("--solve", "solve_kind", type=click.Choice(["obop", "fair"]), default="obop", show_default=True)
@click.option("--p", type=int, help="Bucket count for --solve fair.")
@click.option("--max-buckets", type=int, help="Bucket positions for --solve fair.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
@handle_errors
def trajectory_cmd(ctx, matrix_path, profile_path, groups, order_text, solve_kind, p, max_buckets, output):
    """Share of each group among the items of the top-l buckets."""
    cli = state(ctx)
    matrix, _ = load_input(matrix_path, profile_path)
    spec = parse_groups(groups, matrix.n)
    slots = None
    if order_text is not None:
        order = BucketOrder.parse(order_text, matrix.labels)
        check_same_size(order, matrix.n)
    else:
        variant = ObopVariant() if solve_kind == "obop" else FairVariant(fairness=spec, p=p, max_buckets=max_buckets)
        if solve_kind == "fair":
            slots = variant.slots(matrix.n)
        result = solve(matrix, variant, cli.cfg)
        if result.status != SolveStatus.OPTIMAL:
            raise VariantError(f"{variant.label}: no optimal ranking ({result.status.value})")
        order = result.optima[0]

    trajectory = fairness_trajectory(order, spec, slots)
    fmt = cli.format_or("csv")
    if fmt == "json":
        emit_json(trajectory.report())
    elif fmt == "text":
        lines = [order.to_text(matrix.labels)]
        for row in trajectory.rows:
            flag = "" if row.within_bounds else "  out of bounds"
            lines.append(
                f"G{row.group} l={row.prefix} S={row.count}/T={row.total} = {format_fraction(row.proportion)}"
                f" (target {format_fraction(row.target)}){flag}"
            )
        write_or_echo("\n".join(lines) + "\n", output)
    else:
        write_or_echo(trajectory.to_csv(), output)


@fairness.command("diagnostics")
@click.option("--groups", help="'split', 'mod3' or groups like '1,3;2,4', with proportional bounds.")
@click.option("--spec", "spec_json", help="Fairness spec as JSON, inline or @file.")
@click.option("--n", "n", type=int, required=True, help="Number of items.")
@click.pass_context
@handle_errors
def diagnostics_cmd(ctx, groups, spec_json, n):
    """Warnings about share bounds that cannot all be met."""
    if (groups is None) == (spec_json is None):
        raise VariantError("give exactly one of --groups and --spec")
    if spec_json is not None:
        if spec_json.startswith("@"):
            spec_json = read_text(Path(spec_json[1:]))
        spec = FairnessSpec.model_validate_json(spec_json)
    else:
        spec = parse_groups(groups, n)
    spec.check_partition(n)
    diagnostics = validate_fairness_params(spec, n)
    if state(ctx).format_or("json") == "json":
        emit_json([diagnostic.model_dump() for diagnostic in diagnostics])
    else:
        for diagnostic in diagnostics:
            click.echo(f"{diagnostic.code}: {diagnostic.message}")
