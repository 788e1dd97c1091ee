# weakrank/routes/bench.py
import sys
from pathlib import Path

import click

from weakrank.analysis.bench import load_manifest, run_bench
from weakrank.core.errors import InputError
from weakrank.routes.options import handle_errors, state


@click.command("bench")
@click.argument("manifest", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), help="CSV file (default stdout).")
@click.pass_context
@handle_errors
def bench_cmd(ctx, manifest, output):
    """Solve every manifest entry and write one CSV row per entry, in manifest order."""
    cli = state(ctx)
    entries = load_manifest(manifest)
    if output is None:
        rows = run_bench(entries, sys.stdout, cli.cfg, jobs=cli.jobs)
    else:
        try:
            handle = output.open("w", encoding="utf-8", newline="")
        except OSError as exc:
            raise InputError(f"cannot write output: {exc.strerror}", source=str(output)) from None
        with handle:
            rows = run_bench(entries, handle, cli.cfg, jobs=cli.jobs)
    failed = sum(1 for row in rows if row.error)
    if failed:
        click.echo(f"{failed} of {len(rows)} entries failed", err=True)
