"""
`treefit delta`: hyperbolicity of an input (exact, smoothed or batched).
"""

import click

from treefit.cli.options import emit, input_format_option, output_format_option
from treefit.common.error_handlers import handle_cli_errors
from treefit.constants import DeltaModes, FitDefaults
from treefit.services.run_service import RunService


@click.command("delta")
@click.argument("input_path", metavar="INPUT", type=click.Path(dir_okay=False))
@click.option(
    "--mode",
    type=click.Choice(DeltaModes.all()),
    default=DeltaModes.EXACT,
    show_default=True,
)
@click.option("--lambda", "lam", type=float, default=FitDefaults.LAMBDA, show_default=True)
@click.option("--batches", type=int, default=1, show_default=True, help="Number of batches (K).")
@click.option("--batch-size", type=int, default=None, help="Points per batch (m, default n).")
@click.option("--seed", type=click.IntRange(min=0), default=FitDefaults.SEED, show_default=True)
@click.option("--runs", type=click.IntRange(min=1), default=1, show_default=True, help="Repeated batched estimates.")
@click.option("--override-size-guard", is_flag=True, help="Allow exact mode above the size guard.")
@input_format_option
@output_format_option
@handle_cli_errors("delta")
def delta_command(
    input_path: str,
    mode: str,
    lam: float,
    batches: int,
    batch_size: int | None,
    seed: int,
    runs: int,
    override_size_guard: bool,
    input_format: str | None,
    output_format: str,
) -> None:
    """Print the hyperbolicity of INPUT."""
    report = RunService().delta(
        input_path,
        fmt=input_format,
        mode=mode,
        lam=lam,
        k=batches,
        m=batch_size,
        seed=seed,
        runs=runs,
        override_size_guard=override_size_guard,
    )
    emit(report, output_format)
