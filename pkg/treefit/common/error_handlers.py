import functools
import json
import logging
from collections.abc import Callable
from typing import Any

import click
from pydantic import ValidationError

from treefit.common.logging_setup import log_command
from treefit.constants import ErrorMessages, ExitCodes
from treefit.exceptions import TreefitError

logger = logging.getLogger(__name__)


def error_payload(code: int, name: str, message: str) -> str:
    """
    Build the JSON error object written to stderr.

    Args:
        code: Process exit code.
        name: Error class name.
        message: Human-readable message.

    Returns:
        Compact JSON text.

    """
    return json.dumps({"error": {"code": code, "name": name, "message": message}})


def _validation_message(e: ValidationError) -> str:
    """最初の検証エラーを1行にまとめる"""
    first = e.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or e.title
    return f"{location}: {first.get('msg', 'invalid value')}"


def handle_cli_errors(name: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """
    Wrap a click command so library errors become JSON + exit codes.

    TreefitError carries its own exit code (2 or 3); pydantic ValidationError
    and OSError map to 2; anything else is logged with a traceback and maps
    to 1. click's own exceptions pass through untouched.

    Args:
        name: Command name for the timing log line.

    Returns:
        Decorator.

    """

    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            with log_command(name) as status:
                try:
                    return func(*args, **kwargs)
                except (click.exceptions.ClickException, click.exceptions.Exit, click.exceptions.Abort):
                    raise
                except TreefitError as e:
                    status.exit_code = e.exit_code
                    click.echo(error_payload(e.exit_code, type(e).__name__, str(e)), err=True)
                except ValidationError as e:
                    status.exit_code = ExitCodes.INPUT_ERROR
                    click.echo(
                        error_payload(status.exit_code, "ValidationError", _validation_message(e)),
                        err=True,
                    )
                except OSError as e:
                    status.exit_code = ExitCodes.INPUT_ERROR
                    click.echo(error_payload(status.exit_code, type(e).__name__, str(e)), err=True)
                except Exception:
                    # Log the exception with traceback
                    logger.exception("Unhandled error in command %s", name)
                    status.exit_code = ExitCodes.INTERNAL_ERROR
                    click.echo(
                        error_payload(status.exit_code, "InternalError", ErrorMessages.INTERNAL_ERROR),
                        err=True,
                    )
            raise SystemExit(status.exit_code)

        return wrapper

    return decorator
