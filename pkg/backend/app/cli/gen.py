"""
CLI command: emit a seeded chain file for a named family.
"""

from typing import Optional

from app.cli.chain_file import chain_to_dict
from app.engine.generators import generate, rejection_counts
from app.errors import DomainError
from app.models.chain import ChainSpec
from app.models.generators import GeneratorParams
from app.models.run_config import CommandOutcome, RunConfig


def run_gen(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    if config.family is None or config.agents is None:
        raise DomainError("gen needs --family and -n/--agents")
    params = GeneratorParams(
        family=config.family,
        n=config.agents,
        seed=config.seed,
        delta=config.delta,
        psi=config.psi,
        weight=config.weight,
        blocks=config.blocks,
    )
    chain = generate(params)
    rejected = rejection_counts(chain, config.horizon)
    return CommandOutcome(
        result={
            "chain": chain_to_dict(chain),
            "rejected_samples": sum(rejected),
            "steps_with_rejections": sum(1 for r in rejected if r),
        },
    )
