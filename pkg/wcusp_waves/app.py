import sys
import traceback
from typing import List, Optional

import click
from marshmallow.exceptions import ValidationError

from . import __version__
from .config.logging import get_logger
from .commands import register_commands
from .shared.errors import (
    Inconclusive,
    LemmaConditionFailed,
    NumericalError,
    PreconditionError,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_NUMERICAL = 3


@click.group()
@click.version_option(__version__, prog_name="wcusp")
def cli():
    """Waves of the winged-cusp three-scale reaction-diffusion model."""


# Wire up the commands
register_commands(cli)


def handle_errors(e: Exception) -> int:
    """Log `e` and map it to the CLI exit code of its family."""
    if isinstance(e, click.exceptions.Exit):
        return e.exit_code
    if isinstance(e, click.ClickException):
        e.show()
        logger.error(f"usage: {e.format_message()}")
        return EXIT_USAGE
    if isinstance(e, click.Abort):
        logger.error("aborted")
        return EXIT_USAGE
    if isinstance(e, ValidationError):
        message = f"invalid configuration: {e.messages}"
        code = EXIT_USAGE
    elif isinstance(e, LemmaConditionFailed):
        message = f"lemma condition failed: {e}"
        code = EXIT_PRECONDITION
    elif isinstance(e, Inconclusive):
        message = f"pattern is inconclusive: {e.diagnostics}"
        code = EXIT_PRECONDITION
    elif isinstance(e, PreconditionError):
        message = f"{type(e).__name__}: {e}"
        code = EXIT_PRECONDITION
    elif isinstance(e, NumericalError):
        message = f"{type(e).__name__}: {e}"
        code = EXIT_NUMERICAL
    else:
        # Not one of ours, so print the traceback for debugging purposes.
        traceback.print_exception(type(e), e, e.__traceback__)
        logger.error(f"unexpected {type(e).__name__}: {e}")
        return EXIT_NUMERICAL

    logger.error(message)
    click.echo(f"error: {message}", err=True)
    return code


def main(args: Optional[List[str]] = None) -> int:
    """Run the CLI on `args` (default: sys.argv) and return its exit code."""
    try:
        result = cli.main(args=args, prog_name="wcusp", standalone_mode=False)
    except Exception as e:
        return handle_errors(e)
    # `--help` and `--version` come back as their exit code
    return result if isinstance(result, int) else EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
