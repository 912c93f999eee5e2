"""
Command dispatch and the click commands that feed it.

Every command shares one option set; options a command does not use are
still echoed in the report's config block.
"""

import logging
from typing import Any, Callable, Optional

import click

from app.cli.chain_file import parse_chain_file
from app.cli.classify import run_classify, run_dsdecompose
from app.cli.flow import run_islands, run_scanjets
from app.cli.gen import run_gen
from app.cli.match import run_match, run_normalize
from app.cli.pstar import run_pstar
from app.cli.report import render, write_text
from app.cli.simulate import run_simulate
from app.config import (
    Command,
    OutputFormat,
    Verdict,
    EXIT_INCONCLUSIVE,
    EXIT_INVALID,
    EXIT_OK,
)
from app.errors import DomainError
from app.models.chain import ChainSpec
from app.models.run_config import CommandOutcome, RunConfig

logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig, Optional[ChainSpec]], CommandOutcome]

# Command dispatch table
_COMMANDS: dict[Command, Handler] = {
    Command.SIMULATE: run_simulate,
    Command.CLASSIFY: run_classify,
    Command.ISLANDS: run_islands,
    Command.PSTAR: run_pstar,
    Command.MATCH: run_match,
    Command.NORMALIZE: run_normalize,
    Command.DSDECOMPOSE: run_dsdecompose,
    Command.SCANJETS: run_scanjets,
    Command.GEN: run_gen,
}

# Commands with a per-step series (the only ones that can emit CSV)
_SERIES_COMMANDS = {Command.SIMULATE, Command.SCANJETS}

_HELP = {
    Command.SIMULATE: "Iterate X(n+1) = A(n) X(n) from --x0 (default: agent labels).",
    Command.CLASSIFY: "Ergodic / class-ergodic / inconclusive verdict from backward products.",
    Command.ISLANDS: "Connected components of the flow graph with weights >= theta.",
    Command.PSTAR: "Estimate the lower bound on absolute probabilities.",
    Command.MATCH: "Permutation tau with A[tau(i), i] >= delta for one step.",
    Command.NORMALIZE: "Self-confident normalization B(n) of a balanced asymmetric chain.",
    Command.DSDECOMPOSE: "Jet decomposition with cluster masses and cross-jet flows.",
    Command.SCANJETS: "Minimum cumulative cut over constant subsets.",
    Command.GEN: "Write a seeded chain file for a named family.",
}


def _split(value: Optional[str], cast, name: str) -> Optional[list]:
    if value is None:
        return None
    try:
        return [cast(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"--{name} expects a comma-separated list, got '{value}'") from None


def build_config(command: Command, options: dict[str, Any]) -> RunConfig:
    values = dict(options)
    values["x0"] = _split(values.get("x0"), float, "x0")
    values["within"] = _split(values.get("within"), int, "within")
    return RunConfig(command=command, **{k: v for k, v in values.items() if v is not None})


def run(config: RunConfig) -> int:
    """Execute one command and write its report; returns the exit code."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        click.echo(f"error: unknown command '{config.command}'", err=True)
        return EXIT_INVALID

    try:
        if config.format == OutputFormat.CSV and config.command not in _SERIES_COMMANDS:
            raise DomainError(f"{config.command.value} has no per-step series; use --format json")
        spec = None
        if config.command != Command.GEN:
            if config.input is None:
                raise DomainError(f"{config.command.value} needs --input")
            spec = parse_chain_file(config.input, config.row_tol)
        outcome = handler(config, spec)
        write_text(render(config, outcome), config.out)
    except (ValueError, OSError) as e:
        logger.debug("%s failed", config.command.value, exc_info=True)
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID

    for w in outcome.warnings:
        logger.warning("%s: %s", config.command.value, w)
    if outcome.failed:
        return EXIT_INVALID
    if config.strict and outcome.verdict == Verdict.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _shared_options(f):
    options = [
        click.option("--input", "input_path", type=click.Path(), help="Chain file (JSON)."),
        click.option("--out", type=click.Path(), help="Report path (default: stdout)."),
        click.option("--format", "fmt", default=OutputFormat.JSON.value, help="json or csv."),
        click.option("-T", "--horizon", type=int, help="Horizon T."),
        click.option("--eps", type=float, help="Cluster / convergence tolerance."),
        click.option("--theta", type=float, help="Island threshold on flow weights."),
        click.option("--row-tol", type=float, help="Row-sum tolerance for input matrices."),
        click.option("--psi", type=float, help="Balance bound Psi >= 1."),
        click.option("--seed", type=int, help="Seed for probes and generators."),
        click.option("--probes", type=int, help="dsdecompose: probe count (>= N)."),
        click.option("--strict", is_flag=True, help="Exit 2 when the verdict is inconclusive."),
        click.option("--x0", help="simulate: initial state, comma-separated."),
        click.option("--step", type=int, help="match: which A(n)."),
        click.option("--within", help="scanjets: restrict to these agents, comma-separated."),
        click.option("--family", help="gen: chain family name."),
        click.option("-n", "--agents", type=int, help="gen: agent count N."),
        click.option("--delta", type=float, help="gen: minimum diagonal entry."),
        click.option("--weight", type=float, help="gen: gossip averaging weight."),
        click.option("--blocks", type=int, help="gen: contiguous agent blocks."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _make_command(command: Command) -> click.Command:
    @click.command(name=command.value, help=_HELP[command])
    @_shared_options
    @click.pass_context
    def _command(ctx: click.Context, input_path, fmt, **options):
        options.update(input=input_path, format=fmt)
        options["strict"] = options["strict"] or None
        try:
            config = build_config(command, options)
        except ValueError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INVALID)
        ctx.exit(run(config))

    return _command


def register(group: click.Group) -> None:
    for command in Command:
        group.add_command(_make_command(command))
