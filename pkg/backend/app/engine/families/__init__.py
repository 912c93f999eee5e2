"""
Generator families addressable by name.
"""

from app.config import GeneratorFamily
from app.engine.families.base import ChainFamily
from app.engine.families.balanced_asymmetric import BalancedAsymmetricFamily
from app.engine.families.cut_balanced import SelfConfidentCutBalancedFamily
from app.engine.families.doubly_stochastic import DoublyStochasticFamily
from app.engine.families.gossip import GossipFamily
from app.engine.families.periodic_swap import PeriodicSwapFamily
from app.engine.families.two_leader import TwoLeaderFamily

# Family dispatch table: family names to family instances
_FAMILIES: dict[GeneratorFamily, ChainFamily] = {
    GeneratorFamily.DOUBLY_STOCHASTIC: DoublyStochasticFamily(),
    GeneratorFamily.SELF_CONFIDENT_CUT_BALANCED: SelfConfidentCutBalancedFamily(),
    GeneratorFamily.TWO_LEADER: TwoLeaderFamily(),
    GeneratorFamily.PERIODIC_SWAP: PeriodicSwapFamily(),
    GeneratorFamily.BALANCED_ASYMMETRIC: BalancedAsymmetricFamily(),
    GeneratorFamily.GOSSIP: GossipFamily(),
}


def get_family(name: GeneratorFamily) -> ChainFamily:
    family = _FAMILIES.get(GeneratorFamily(name))
    if family is None:
        raise ValueError(f"Generator family '{name}' is not implemented.")
    return family
