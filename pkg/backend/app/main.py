"""
ConsensusFlow command-line entry point.

    python -m app.main classify --input chain.json -T 2000 --eps 1e-6
"""

import logging
import sys

import click

from app.cli.router import register
from app.config import EXIT_INVALID


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
def cli(verbose: bool) -> None:
    """Consensus and time-inhomogeneous Markov chain analysis."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


register(cli)


def main() -> None:
    # usage errors are validation errors too (exit 1); 2 is kept for --strict
    try:
        code = cli.main(standalone_mode=False)
    except click.exceptions.Abort:
        code = EXIT_INVALID
    except click.ClickException as e:
        e.show()
        code = EXIT_INVALID
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
