# weakrank/routes/export.py
from pathlib import Path

import click

from weakrank.core.errors import IncompatibleSolutionError, VariantError
from weakrank.formulations import build_variant_model, check_solution, encode_solution, export_lp
from weakrank.models.order import BucketOrder, check_same_size
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
    write_or_echo,
)
from weakrank.schemas.solve import SolveStatus
from weakrank.schemas.variant import EqualSizesVariant, FixedBucketsVariant, PrescribedSizesVariant

ASSIGNMENT_SWITCHES = ("add_comparability", "add_transitivity", "add_base_valid_inequalities", "relax_x")
REPRESENTATIVE_SWITCHES = ("add_tie_rep", "substitute_tie_rep")


def _model_options(variant, formulation: str, switches: dict) -> dict:
    chosen = {name: True for name, on in switches.items() if on}
    if not isinstance(variant, (FixedBucketsVariant, EqualSizesVariant, PrescribedSizesVariant)):
        if chosen or formulation != "assignment":
            raise VariantError(f"{variant.label} has a single formulation without switches")
        return {}
    allowed = REPRESENTATIVE_SWITCHES if formulation == "representative" else ASSIGNMENT_SWITCHES
    wrong = sorted(set(chosen) - set(allowed))
    if wrong:
        flags = ", ".join("--" + name.replace("_", "-") for name in wrong)
        raise VariantError(f"{flags} do not apply to the {formulation} formulation")
    return chosen


@click.command("export")
@input_options
@variant_options
@click.option("--formulation", type=click.Choice(["assignment", "representative"]), default="assignment", show_default=True)
@click.option("--add-comparability", is_flag=True, help="Add x_rs + x_sr >= 1 rows.")
@click.option("--add-transitivity", is_flag=True, help="Add x_rs + x_st - x_rt <= 1 rows.")
@click.option("--add-base-valid-inequalities", is_flag=True, help="Both of the above.")
@click.option("--relax-x", is_flag=True, help="Continuous x variables.")
@click.option("--add-tie-rep", is_flag=True, help="Add the tie/representative coupling rows.")
@click.option("--substitute-tie-rep", is_flag=True, help="Use the coupling rows in place of the tie rows.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--check", "check_order", help="Encode this ranking and check it against the model.")
@click.pass_context
@handle_errors
def export_cmd(ctx, matrix_path, profile_path, kind, variant_json, formulation, add_comparability, add_transitivity,
               add_base_valid_inequalities, relax_x, add_tie_rep, substitute_tie_rep, output, check_order, **params):
    """Write the integer model of a variant in LP format."""
    matrix, _ = load_input(matrix_path, profile_path)
    variant = build_variant(matrix.n, kind, variant_json, **params)
    switches = {
        "add_comparability": add_comparability,
        "add_transitivity": add_transitivity,
        "add_base_valid_inequalities": add_base_valid_inequalities,
        "relax_x": relax_x,
        "add_tie_rep": add_tie_rep,
        "substitute_tie_rep": substitute_tie_rep,
    }
    model = build_variant_model(matrix, variant, formulation, **_model_options(variant, formulation, switches))
    write_or_echo(export_lp(model), output)
    if check_order is None:
        return

    order = BucketOrder.parse(check_order, matrix.labels)
    check_same_size(order, matrix.n)
    try:
        verdict = check_solution(model, encode_solution(order, model))
        report = {
            "order": order.to_text(matrix.labels),
            "feasible": verdict.feasible,
            "violated": list(verdict.violated),
            "objective": format_fraction(verdict.objective),
            "objective_2dp": round_2dp(verdict.objective),
        }
    except IncompatibleSolutionError as exc:
        report = {"order": order.to_text(matrix.labels), "feasible": False, "violated": [], "reason": str(exc)}

    if state(ctx).format_or("json") == "json":
        emit_json(report)
    else:
        verdict_text = "feasible" if report["feasible"] else "infeasible"
        extra = f" {report['objective_2dp']}" if "objective_2dp" in report else f" ({report.get('reason', '')})"
        click.echo(f"{verdict_text}{extra}")
    ctx.exit(0 if report["feasible"] else STATUS_EXIT_CODES[SolveStatus.INFEASIBLE])
