"""
CLI commands: self-confident permutations (match) and chain normalization.

A failed matching is a result, not a crash: the Hall-violator certificate is
written into the report and the run exits 1.
"""

from typing import Optional

import numpy as np

from app.engine.absprob import backward_abs_prob
from app.engine.chain_core import array_at, realize
from app.engine.matching import (
    normalize_chain,
    normalized_spec,
    pullback_abs_prob,
    self_confident_permutation,
)
from app.errors import MatchingStepError, NoPerfectMatchingError
from app.models.chain import ChainSpec
from app.models.matching import HallCertificate
from app.models.run_config import CommandOutcome, RunConfig


def _certificate(e: NoPerfectMatchingError) -> dict:
    return HallCertificate(
        violator=e.violator, neighbourhood=e.neighbourhood, delta=e.delta
    ).model_dump(mode="json")


def run_match(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    A = array_at(spec, config.step)
    try:
        match = self_confident_permutation(A, config.psi)
    except NoPerfectMatchingError as e:
        return CommandOutcome(
            result={"step": config.step, "matched": False, "hall": _certificate(e)},
            warnings=[str(e)],
            failed=True,
        )
    return CommandOutcome(
        result={"step": config.step, "matched": True, **match.model_dump(mode="json")},
        residuals={"margin": min(match.matched_entries) - match.delta},
    )


def run_normalize(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    T = config.horizon
    try:
        chain = normalize_chain(spec, config.psi, T)
    except MatchingStepError as e:
        return CommandOutcome(
            result={"matched": False, "step": e.step, "hall": _certificate(e.cause)},
            warnings=[str(e)],
            failed=True,
        )

    B = chain.as_array()
    pi_B = backward_abs_prob(normalized_spec(chain), T)
    pi_A = pullback_abs_prob(pi_B, chain.perms, spec)
    seq = pi_A.as_array()
    residual = float(np.max(np.abs(seq[:-1] - np.einsum("ni,nij->nj", seq[1:], realize(spec, T)))))
    return CommandOutcome(
        result={
            "horizon": T,
            "delta": chain.delta,
            "perms": chain.perms,
            "min_diagonal": float(np.min(np.diagonal(B, axis1=1, axis2=2))),
            "pi0": pi_A.pi[0],
        },
        residuals={"pullback": residual},
    )
