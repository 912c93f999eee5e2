"""
CLI command: estimate P* from an absolute probability sequence and audit the
duality with its forward chain.
"""

from typing import Optional

import numpy as np

from app.engine.absprob import backward_abs_prob, check_duality, forward_chain
from app.models.chain import ChainSpec
from app.models.run_config import CommandOutcome, RunConfig

PSTAR_NOTE = (
    "minimum of pi(n) propagated back from a uniform terminal; "
    "an estimate of the P* bound, not a certificate"
)


def run_pstar(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    pi = backward_abs_prob(spec, config.horizon)
    seq = pi.as_array()
    step, agent = np.unravel_index(int(np.argmin(seq)), seq.shape)
    duality = check_duality(spec, pi, forward_chain(spec, pi))

    warnings = []
    if not duality.passed:
        warnings.append(
            f"duality residual {duality.max_residual:.3g} exceeds {duality.tolerance:g}"
        )
    return CommandOutcome(
        result={
            "horizon": pi.horizon,
            "kind": "estimate",
            "note": PSTAR_NOTE,
            "pstar": float(seq[step, agent]),
            "argmin": {"step": int(step), "agent": int(agent) + 1},
            "pi0": pi.pi[0],
            "terminal": pi.terminal,
            "duality": duality.model_dump(mode="json"),
        },
        residuals={"duality": duality.max_residual},
        warnings=warnings,
    )
