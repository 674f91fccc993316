"""
`treefit pipeline`: fit, then embed the fitted matrix against the input.
"""

import click

from treefit.cli.options import (
    build_fit_config,
    build_root_selection,
    emit,
    fit_options,
    input_format_option,
    output_format_option,
    output_prefix_option,
    root_options,
)
from treefit.common.error_handlers import handle_cli_errors
from treefit.services.run_service import RunService


@click.command("pipeline")
@click.argument("input_path", metavar="INPUT", type=click.Path(dir_okay=False))
@output_prefix_option
@fit_options
@root_options
@input_format_option
@output_format_option
@handle_cli_errors("pipeline")
def pipeline_command(
    input_path: str,
    output_prefix: str,
    explicit_roots: tuple[int, ...],
    root_count: int,
    root_seed: int,
    input_format: str | None,
    output_format: str,
    **flags: float,
) -> None:
    """Fit INPUT and embed the result at the selected roots."""
    report = RunService().pipeline(
        input_path,
        fmt=input_format,
        cfg=build_fit_config(**flags),
        roots=build_root_selection(explicit_roots, root_count, root_seed),
        prefix=output_prefix,
    )
    emit(report, output_format)
