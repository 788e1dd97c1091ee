# weakrank/main.py
from typing import Optional

import click

from weakrank.core.config import settings
from weakrank.core.logging import configure_logging
from weakrank.routes.bench import bench_cmd
from weakrank.routes.export import export_cmd
from weakrank.routes.fairness import fairness
from weakrank.routes.options import CliState
from weakrank.routes.solve import bounds_cmd, optima_cmd, oracle_cmd, solve_cmd
from weakrank.routes.sweep import sweep_cmd, tails_cmd
from weakrank.schemas.solve import SolveConfig


@click.group(help="Exact weak-order rank aggregation.")
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
@click.option("--time-limit", type=click.FloatRange(min=0, min_open=True), help="Seconds per solve.")
@click.option("--node-limit", type=click.IntRange(min=1), help="Search nodes per solve.")
@click.option("--jobs", type=click.IntRange(min=1), default=settings.WORKERS, show_default=True, help="Worker processes.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), help="Output format (default per command).")
@click.option("--seed", type=int, help="Seed for randomized checks.")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Overrides WEAKRANK_LOG_LEVEL.",
)
@click.pass_context
def cli(ctx, time_limit: Optional[float], node_limit: Optional[int], jobs: int, fmt: Optional[str], seed: Optional[int], log_level: Optional[str]):
    configure_logging(log_level)
    limits = {"time_limit": time_limit, "node_limit": node_limit}
    cfg = SolveConfig(workers=jobs, **{key: value for key, value in limits.items() if value is not None})
    ctx.obj = CliState(cfg=cfg, fmt=fmt, seed=seed, jobs=jobs)


# Commands
cli.add_command(solve_cmd)
cli.add_command(optima_cmd)
cli.add_command(oracle_cmd)
cli.add_command(bounds_cmd)
cli.add_command(sweep_cmd)
cli.add_command(tails_cmd)
cli.add_command(fairness)
cli.add_command(export_cmd)
cli.add_command(bench_cmd)


if __name__ == "__main__":
    cli()
