"""
CLI command: simulate the state recursion X(n+1) = A(n) X(n).
"""

from typing import Optional

import numpy as np

from app.engine.analysis import sorted_state_convergence
from app.engine.chain_core import simulate
from app.models.chain import ChainSpec, StateVector
from app.models.run_config import CommandOutcome, RunConfig

# sorted-state convergence needs a few quarters to look at
_SORTED_MIN_HORIZON = 8


def run_simulate(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    x0 = config.x0 if config.x0 is not None else list(np.arange(1.0, spec.n + 1))
    traj = simulate(spec, StateVector(values=tuple(x0)), config.horizon)

    result = {
        "horizon": traj.horizon,
        "initial_state": list(traj.states[0].values),
        "final_state": list(traj.states[-1].values),
        "final_spread": traj.spread[-1],
        "sorted_final": traj.sorted_states[-1],
        "states": [list(s.values) for s in traj.states],
    }
    if traj.horizon >= _SORTED_MIN_HORIZON:
        result["sorted_convergence"] = sorted_state_convergence(traj, config.eps).model_dump(mode="json")

    header = ["step"] + [f"x_{i}" for i in range(1, spec.n + 1)] + ["spread"]
    rows = [[n, *s.values, traj.spread[n]] for n, s in enumerate(traj.states)]
    return CommandOutcome(
        result=result,
        residuals={"spread": traj.spread[-1]},
        series_header=header,
        series=rows,
    )
