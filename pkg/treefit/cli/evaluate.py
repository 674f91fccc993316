"""
`treefit eval`: distortion between two matrices.
"""

import click

from treefit.cli.options import emit, output_format_option
from treefit.common.error_handlers import handle_cli_errors
from treefit.services.run_service import RunService


@click.command("eval")
@click.argument("path_a", metavar="A", type=click.Path(dir_okay=False))
@click.argument("path_b", metavar="B", type=click.Path(dir_okay=False))
@output_format_option
@handle_cli_errors("eval")
def eval_command(path_a: str, path_b: str, output_format: str) -> None:
    """Print the l-infinity and average l1 distortion between A and B."""
    emit(RunService().evaluate(path_a, path_b), output_format)
