"""
`treefit fit`: optimize the input matrix and persist matrix, trace and report.
"""

import click

from treefit.cli.options import (
    build_fit_config,
    emit,
    fit_options,
    input_format_option,
    output_format_option,
    output_prefix_option,
)
from treefit.common.error_handlers import handle_cli_errors
from treefit.services.run_service import RunService


@click.command("fit")
@click.argument("input_path", metavar="INPUT", type=click.Path(dir_okay=False))
@output_prefix_option
@fit_options
@input_format_option
@output_format_option
@handle_cli_errors("fit")
def fit_command(
    input_path: str,
    output_prefix: str,
    input_format: str | None,
    output_format: str,
    **flags: float,
) -> None:
    """
    Fit INPUT and write <prefix>.matrix.csv, <prefix>.trace.csv and
    <prefix>.report.json.
    """
    cfg = build_fit_config(**flags)
    report = RunService().fit(input_path, fmt=input_format, cfg=cfg, prefix=output_prefix)
    emit(report, output_format)
