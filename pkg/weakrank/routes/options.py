# weakrank/routes/options.py
"""Options and helpers shared by the command modules."""
import functools
import json
import logging
from pathlib import Path
from typing import Literal, Optional

import click
from pydantic import BaseModel, ConfigDict, ValidationError

from weakrank.core.errors import InputError, VariantError, WeakRankError
from weakrank.ingest import load_matrix_csv, pair_order_matrix, parse_profile, preference_counts
from weakrank.models.matrix import PairOrderMatrix
from weakrank.schemas.profile import PreferenceProfile
from weakrank.schemas.solve import SolveConfig, SolveStatus
from weakrank.schemas.variant import VariantSpec, make_variant, parse_variant

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "text"]

STATUS_EXIT_CODES = {
    SolveStatus.OPTIMAL: 0,
    SolveStatus.LIMIT: 2,
    SolveStatus.INFEASIBLE: 3,
}

VARIANT_KINDS = ["obop", "fixed-p", "equal-sizes", "prescribed-sizes", "tcu", "fair"]


class CliState(BaseModel):
    """Global flags, handed to every command through the click context."""

    model_config = ConfigDict(frozen=True)

    cfg: SolveConfig
    fmt: Optional[OutputFormat] = None
    seed: Optional[int] = None
    jobs: int = 1

    def format_or(self, default: OutputFormat) -> OutputFormat:
        return self.fmt or default


def handle_errors(command):
    """Report domain and validation errors on stderr and exit with their code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except WeakRankError as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(exc.exit_code) from None
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(1) from None

    return wrapper


def input_options(command):
    command = click.option(
        "--profile", "profile_path", type=click.Path(dir_okay=False, path_type=Path),
        help="PrefLib profile (.soc/.soi/.toc/.toi).",
    )(command)
    command = click.option(
        "--matrix", "matrix_path", type=click.Path(dir_okay=False, path_type=Path),
        help="Pair order matrix as CSV.",
    )(command)
    return command


def variant_options(command):
    options = [
        click.option("--variant", "kind", type=click.Choice(VARIANT_KINDS), default=None),
        click.option("--p", type=int, help="Number of buckets."),
        click.option("--q", type=int, help="Bucket size for equal-sizes."),
        click.option("--sizes", help="Comma-separated bucket sizes."),
        click.option("--k", type=int, help="Items ranked ahead of the collapsed tail."),
        click.option("--groups", help="Fairness groups: 'split', 'mod3' or '1,3;2,4'."),
        click.option("--max-buckets", type=int),
        click.option("--min-buckets", type=int),
        click.option("--capacities", help="Comma-separated bucket capacities (fair)."),
        click.option("--variant-json", help="Variant as JSON, inline or @file."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", source=str(path)) from None


def load_input(matrix_path: Optional[Path], profile_path: Optional[Path]) -> tuple[PairOrderMatrix, Optional[PreferenceProfile]]:
    if (matrix_path is None) == (profile_path is None):
        raise InputError("give exactly one of --matrix and --profile")
    path = matrix_path or profile_path
    text = read_text(path)
    if matrix_path is not None:
        return load_matrix_csv(text, source=str(path)), None
    profile = parse_profile(text, source=str(path))
    return pair_order_matrix(preference_counts(profile)), profile


def build_variant(n: int, kind: Optional[str], variant_json: Optional[str] = None, **params) -> VariantSpec:
    given = {key: value for key, value in params.items() if value is not None}
    if variant_json is not None:
        if kind is not None or given:
            raise VariantError("--variant-json cannot be combined with other variant flags")
        text = variant_json
        if text.startswith("@"):
            text = read_text(Path(text[1:]))
        variant = parse_variant(text)
        variant.validate_for(n)
        return variant
    return make_variant(kind or "obop", n, **given)


def state(ctx: click.Context) -> CliState:
    return ctx.find_object(CliState) or CliState(cfg=SolveConfig())


def emit_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def write_or_echo(text: str, output: Optional[Path]) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    try:
        output.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write output: {exc.strerror}", source=str(output)) from None
    logger.info("wrote %s", output)
