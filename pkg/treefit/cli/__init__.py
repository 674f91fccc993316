"""
Command-line interface.

`cli` is a click group; each subcommand lives in its own module and is
registered here. The group callback installs settings and logging once per
invocation.
"""

import click
from pydantic import ValidationError

from treefit import __version__
from treefit.cli.delta import delta_command
from treefit.cli.embed import embed_command
from treefit.cli.evaluate import eval_command
from treefit.cli.fit import fit_command
from treefit.cli.gen import gen_command
from treefit.cli.pipeline import pipeline_command
from treefit.common.error_handlers import error_payload
from treefit.common.logging_setup import setup_logging
from treefit.common.parallel import use_settings
from treefit.config import get_config, is_testing
from treefit.constants import ExitCodes


@click.group()
@click.version_option(__version__, prog_name="treefit")
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Fit tree metrics by smoothed Gromov-hyperbolicity minimization."""
    try:
        settings = get_config(testing=is_testing())
    except ValidationError as e:
        click.echo(error_payload(ExitCodes.INPUT_ERROR, "ValidationError", str(e.errors()[0]["msg"])), err=True)
        ctx.exit(ExitCodes.INPUT_ERROR)

    # 設定をライブラリ全体に反映してからロギングを初期化
    use_settings(settings)
    setup_logging(settings)


# Register subcommands
cli.add_command(delta_command)
cli.add_command(fit_command)
cli.add_command(embed_command)
cli.add_command(eval_command)
cli.add_command(gen_command)
cli.add_command(pipeline_command)


def main() -> None:
    """Console script entry point."""
    cli()
