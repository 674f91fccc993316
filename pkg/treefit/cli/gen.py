"""
`treefit gen`: seeded synthetic graphs in the edge-list format.
"""

import click

from treefit.cli.options import emit, output_format_option
from treefit.common.error_handlers import handle_cli_errors
from treefit.constants import ErrorMessages, GeneratorConstants, GeneratorKinds
from treefit.exceptions import InvalidGeneratorParamsError
from treefit.services.run_service import RunService


def parse_sizes(text: str | None) -> list[int]:
    """Parse "50,50,50" into block sizes (empty when not given)."""
    if not text:
        return []
    try:
        return [int(token) for token in text.split(",")]
    except ValueError:
        detail = f"--sizes must be comma separated integers, got {text!r}"
        raise InvalidGeneratorParamsError(ErrorMessages.GENERATOR_PARAM.format(detail=detail)) from None


@click.command("gen")
@click.argument("kind", type=click.Choice(GeneratorKinds.all()))
@click.argument("output", type=click.Path(dir_okay=False))
@click.option("--n", "n", type=int, default=None, help="Node count (tree, cycle, er).")
@click.option("--rows", type=int, default=None)
@click.option("--cols", type=int, default=None)
@click.option("--p", "p", type=float, default=None, help="Edge probability (er).")
@click.option("--sizes", default=None, help="Comma separated block sizes (sbm).")
@click.option("--p-in", type=float, default=None)
@click.option("--p-out", type=float, default=None)
@click.option(
    "--weights",
    type=(float, float),
    default=GeneratorConstants.DEFAULT_WEIGHT_RANGE,
    show_default=True,
    help="Uniform edge weight range (tree).",
)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@output_format_option
@handle_cli_errors("gen")
def gen_command(
    kind: str,
    output: str,
    n: int | None,
    rows: int | None,
    cols: int | None,
    p: float | None,
    sizes: str | None,
    p_in: float | None,
    p_out: float | None,
    weights: tuple[float, float],
    seed: int,
    output_format: str,
) -> None:
    """Generate a KIND graph and write it to OUTPUT."""
    graph = RunService().generate(
        kind,
        output,
        n=n,
        rows=rows,
        cols=cols,
        p=p,
        block_sizes=parse_sizes(sizes),
        p_in=p_in,
        p_out=p_out,
        weight_range=weights,
        seed=seed,
    )
    emit(
        {"kind": kind, "output": output, "nodes": graph.node_count, "edges": len(graph.edges), "seed": seed},
        output_format,
    )
