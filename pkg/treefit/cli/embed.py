"""
`treefit embed`: Gromov tree embeddings of a matrix at one or more roots.
"""

import click

from treefit.cli.options import (
    build_root_selection,
    emit,
    input_format_option,
    output_format_option,
    output_prefix_option,
    root_options,
)
from treefit.common.error_handlers import handle_cli_errors
from treefit.services.run_service import RunService


@click.command("embed")
@click.argument("input_path", metavar="MATRIX", type=click.Path(dir_okay=False))
@output_prefix_option
@root_options
@click.option(
    "--reference",
    type=click.Path(dir_okay=False),
    default=None,
    help="Matrix the distortions are measured against (default: MATRIX).",
)
@input_format_option
@output_format_option
@handle_cli_errors("embed")
def embed_command(
    input_path: str,
    output_prefix: str,
    explicit_roots: tuple[int, ...],
    root_count: int,
    root_seed: int,
    reference: str | None,
    input_format: str | None,
    output_format: str,
) -> None:
    """Write <prefix>.root<w>.nwk and .tree.tsv per root, plus the report."""
    report = RunService().embed(
        input_path,
        fmt=input_format,
        roots=build_root_selection(explicit_roots, root_count, root_seed),
        prefix=output_prefix,
        reference_path=reference,
        reference_fmt=input_format,
    )
    emit(report, output_format)
