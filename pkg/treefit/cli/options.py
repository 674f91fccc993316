"""
Shared click options and the builders that turn them into value objects.
"""

from collections.abc import Callable
from typing import Any

import click
from pydantic import BaseModel

from treefit.common.format_utils import dump_csv, dump_json
from treefit.constants import FitDefaults, InputFormats
from treefit.models.fit import FitConfig
from treefit.services.run_service import DEFAULT_ROOT_COUNT, RootSelection

OUTPUT_FORMATS = ("json", "csv")

FuncT = Callable[..., Any]


def _apply(func: FuncT, decorators: list[Callable[[FuncT], FuncT]]) -> FuncT:
    # 引数の表示順を宣言順にそろえるため逆順に適用する
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def fit_options(func: FuncT) -> FuncT:
    """Hyperparameter flags of the fitting loop."""
    return _apply(
        func,
        [
            click.option("--mu", type=float, default=FitDefaults.MU, show_default=True, help="Fidelity weight."),
            click.option(
                "--lambda",
                "lam",
                type=float,
                default=FitDefaults.LAMBDA,
                show_default=True,
                help="Smoothing temperature.",
            ),
            click.option(
                "--batches",
                type=int,
                default=FitDefaults.BATCHES,
                show_default=True,
                help="Batches per epoch (K).",
            ),
            click.option(
                "--batch-size",
                type=int,
                default=FitDefaults.BATCH_SIZE,
                show_default=True,
                help="Points per batch (m).",
            ),
            click.option("--lr", type=float, default=FitDefaults.LR, show_default=True, help="Adam step size."),
            click.option("--epochs", type=int, default=FitDefaults.MAX_EPOCHS, show_default=True),
            click.option("--patience", type=int, default=FitDefaults.PATIENCE, show_default=True),
            click.option("--seed", type=click.IntRange(min=0), default=FitDefaults.SEED, show_default=True),
            click.option(
                "--floor",
                type=float,
                default=FitDefaults.WEIGHT_FLOOR,
                show_default=True,
                help="Lower clamp of weights before projection.",
            ),
            click.option(
                "--accum-chunks",
                type=int,
                default=FitDefaults.ACCUM_CHUNKS,
                show_default=True,
                help="Batch chunks accumulated per epoch.",
            ),
        ],
    )


def build_fit_config(
    *,
    mu: float,
    lam: float,
    batches: int,
    batch_size: int,
    lr: float,
    epochs: int,
    patience: int,
    seed: int,
    floor: float,
    accum_chunks: int,
) -> FitConfig:
    """
    Build a FitConfig from flag values.

    Raises:
        pydantic.ValidationError: If a value is out of range.
    """
    return FitConfig(
        mu=mu,
        lam=lam,
        batches=batches,
        batch_size=batch_size,
        lr=lr,
        max_epochs=epochs,
        patience=patience,
        seed=seed,
        weight_floor=floor,
        accum_chunks=accum_chunks,
    )


def root_options(func: FuncT) -> FuncT:
    """Explicit roots (repeatable --root) or a sampled count."""
    return _apply(
        func,
        [
            click.option("--root", "explicit_roots", type=int, multiple=True, help="Root point id (repeatable)."),
            click.option(
                "--roots",
                "root_count",
                type=click.IntRange(min=1),
                default=DEFAULT_ROOT_COUNT,
                show_default=True,
                help="Number of sampled roots when no --root is given.",
            ),
            click.option("--root-seed", type=click.IntRange(min=0), default=0, show_default=True),
        ],
    )


def build_root_selection(explicit_roots: tuple[int, ...], root_count: int, root_seed: int) -> RootSelection:
    """Root selection from flag values."""
    return RootSelection(explicit=tuple(explicit_roots), count=root_count, seed=root_seed)


input_format_option = click.option(
    "--input-format",
    type=click.Choice(InputFormats.all()),
    default=None,
    help="Input kind (default: .csv is a matrix, anything else an edge list).",
)

output_format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(OUTPUT_FORMATS),
    default="json",
    show_default=True,
    help="Report format on stdout.",
)

output_prefix_option = click.option(
    "-o",
    "--output-prefix",
    required=True,
    help="Prefix of the written files.",
)


def emit(report: BaseModel | dict[str, Any], output_format: str) -> None:
    """Print a report on stdout."""
    if output_format == "csv":
        click.echo(dump_csv(report), nl=False)
    else:
        click.echo(dump_json(report))
