"""
Named chain families used as fixtures.

Each gen_* function returns a generator ChainSpec; matrices are drawn lazily
per step from (seed, step), so any horizon can be queried in any order.
Fixtures with a fixed matrix (swap, two-leader with N = 2) come back as static
chains.
"""

import logging

import numpy as np

from app.config import (
    ChainKind,
    GeneratorFamily,
    DEFAULT_DELTA,
    DEFAULT_DENSITY,
    DEFAULT_GOSSIP_WEIGHT,
    DEFAULT_PSI,
)
from app.engine.chain_core import static_chain, generator_params
from app.engine.families import get_family
from app.engine.families.periodic_swap import SWAP
from app.errors import DomainError
from app.models.chain import ChainSpec
from app.models.generators import GeneratorParams

logger = logging.getLogger(__name__)


def make_generator(params: GeneratorParams) -> ChainSpec:
    """Validate params against the family and wrap them in a ChainSpec."""
    get_family(params.family).validate(params)
    spec = ChainSpec(
        n=params.n,
        kind=ChainKind.GENERATOR,
        family=params.family,
        params=params.chain_params(),
        seed=params.seed,
    )
    logger.debug("generator %s, N=%d, seed=%d", params.family.value, params.n, params.seed)
    return spec


def gen_doubly_stochastic(n: int, seed: int = 0) -> ChainSpec:
    return make_generator(
        GeneratorParams(family=GeneratorFamily.DOUBLY_STOCHASTIC, n=n, seed=seed)
    )


def gen_self_confident_cut_balanced(
    n: int,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
    psi: float = DEFAULT_PSI,
    density: float = DEFAULT_DENSITY,
    connectivity: float = 0.0,
    blocks: int = 1,
) -> ChainSpec:
    return make_generator(GeneratorParams(
        family=GeneratorFamily.SELF_CONFIDENT_CUT_BALANCED,
        n=n,
        seed=seed,
        delta=delta,
        psi=psi,
        density=density,
        connectivity=connectivity,
        blocks=blocks,
    ))


def gen_two_leader(n: int, seed: int = 0) -> ChainSpec:
    params = GeneratorParams(family=GeneratorFamily.TWO_LEADER, n=n, seed=seed)
    get_family(params.family).validate(params)
    if n == 2:
        return static_chain(np.eye(2))
    return make_generator(params)


def gen_periodic_swap(n: int = 2) -> ChainSpec:
    params = GeneratorParams(family=GeneratorFamily.PERIODIC_SWAP, n=n)
    get_family(params.family).validate(params)
    return static_chain(SWAP)


def gen_balanced_asymmetric(
    n: int, seed: int = 0, psi: float = DEFAULT_PSI, perturbation: float = 0.0
) -> ChainSpec:
    return make_generator(GeneratorParams(
        family=GeneratorFamily.BALANCED_ASYMMETRIC,
        n=n,
        seed=seed,
        psi=psi,
        perturbation=perturbation,
    ))


def gen_gossip(n: int, seed: int = 0, weight: float = DEFAULT_GOSSIP_WEIGHT) -> ChainSpec:
    return make_generator(GeneratorParams(
        family=GeneratorFamily.GOSSIP, n=n, seed=seed, weight=weight
    ))


def generate(params: GeneratorParams) -> ChainSpec:
    """Family dispatch by name, as used by the `gen` command."""
    if params.family == GeneratorFamily.PERIODIC_SWAP:
        return gen_periodic_swap(params.n)
    if params.family == GeneratorFamily.TWO_LEADER:
        return gen_two_leader(params.n, params.seed)
    return make_generator(params)


def rejection_counts(spec: ChainSpec, T: int) -> list[int]:
    """Rejected candidates per step n < T; zeros for non-generator chains."""
    if T < 0:
        raise DomainError(f"horizon must be >= 0, got {T}")
    if spec.kind != ChainKind.GENERATOR:
        return [0] * T
    family = get_family(spec.family)
    params = generator_params(spec)
    counts = [family.draw(params, n)[1] for n in range(T)]
    if any(counts):
        logger.info(
            "%s: %d rejected samples over %d steps", spec.family.value, sum(counts), T
        )
    return counts
