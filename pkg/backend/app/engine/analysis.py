"""
Finite-horizon consensus verdicts.

Verdicts are read off backward products and probe trajectories:

    ergodic         one class and rows Cauchy over the trailing quarter
    class-ergodic   two or more classes, rows Cauchy
    inconclusive    anything else (oscillation, slow convergence, ...)

ds_decompose builds a jet decomposition J^0, J^1..J^c from probe
trajectories (the N unit vectors plus seeded random probes). J^0 collects the
agents that do not settle; the others are grouped around the terminal cluster
values. Two agents share a cluster when their probe values differ by at most
eps * max(1, initial probe spread) on every probe.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from app.config import Verdict, DEFAULT_PROBES_EXTRA, DEFAULT_THETA
from app.engine.absprob import backward_abs_prob_array, uniform
from app.engine.chain_core import backward_product, realize
from app.engine.flow import (
    flow_weights,
    interaction_series,
    islands_from_weights,
    mass_weighted_stack,
    partition_blocks,
)
from app.errors import DimensionMismatchError, DomainError
from app.models.analysis import (
    ClusterReport,
    CrossFlow,
    DecompositionReport,
    JetTrack,
    SortedConvergenceReport,
)
from app.models.chain import ChainSpec, TrajectoryRecord

logger = logging.getLogger(__name__)


def _check_eps(eps: float) -> None:
    if eps <= 0:
        raise DomainError(f"epsilon must be positive, got {eps}")


def _trailing_start(T: int) -> int:
    """First step of the trailing quarter [T - max(1, T//4), T]."""
    return T - max(1, T // 4)


def row_distances(M: np.ndarray) -> np.ndarray:
    """Pairwise infinity-norm distances between rows."""
    return np.max(np.abs(M[:, None, :] - M[None, :, :]), axis=2)


def cluster_rows(M: np.ndarray, eps: float) -> list[list[int]]:
    """Transitive closure of ||row_i - row_j||_inf <= eps."""
    return partition_blocks(row_distances(M) <= eps)


def _within_residual(M: np.ndarray, clusters: list[list[int]]) -> float:
    worst = 0.0
    for block in clusters:
        idx = np.array(block) - 1
        if idx.size > 1:
            worst = max(worst, float(np.max(row_distances(M[idx]))))
    return worst


def ergodic_classes(
    spec: ChainSpec,
    T: int,
    eps: float,
    n0: int = 0,
    probe: Optional[Sequence[float]] = None,
) -> ClusterReport:
    """
    Group agents whose rows of A(T)...A(n0) agree within eps. Limits are the
    cluster-averaged rows applied to `probe` (default: the labels 1..N).

    Masses are read at step T, the time index of the rows being clustered:
    pi(T) comes from a uniform terminal at 2T - n0 + 1 pushed back through
    A(2T - n0)...A(T), so the terminal sits as far past T as n0 sits before it.
    """
    if not T > n0 >= 0:
        raise DomainError(f"need T > n0 >= 0, got T={T}, n0={n0}")
    _check_eps(eps)
    x = np.arange(1.0, spec.n + 1) if probe is None else np.asarray(probe, dtype=float)
    if x.shape != (spec.n,):
        raise DimensionMismatchError(f"probe has {x.size} entries, chain has {spec.n} agents")

    Pi = backward_product(spec, n0, T).as_array()
    clusters = cluster_rows(Pi, eps)
    mass_by_agent = uniform(spec.n) @ backward_product(spec, T, 2 * T - n0).as_array()
    limits, masses = [], []
    for block in clusters:
        idx = np.array(block) - 1
        limits.append(float(Pi[idx].mean(axis=0) @ x))
        masses.append(float(mass_by_agent[idx].sum()))

    residual = _within_residual(Pi, clusters)
    warnings = []
    if residual > eps:
        warnings.append(
            f"within-cluster row spread {residual:.3g} exceeds epsilon {eps:g} "
            f"(clusters joined through intermediate rows)"
        )
        logger.warning("ergodic_classes: residual %.3g > eps %g", residual, eps)
    return ClusterReport(
        horizon=T,
        epsilon=eps,
        clusters=clusters,
        limits=limits,
        masses=masses,
        residual=residual,
        warnings=warnings,
    )


def classify(
    spec: ChainSpec, T: int, eps: float, theta: float = DEFAULT_THETA
) -> DecompositionReport:
    """
    Verdict from the products A(t)...A(0), t < T, and an island cross-check.

    The horizon covers steps n < T, as the flow graph does, so the classes
    are those of ergodic_classes(spec, T - 1, eps).
    """
    if T < 2:
        raise DomainError(f"horizon must be >= 2, got {T}")
    _check_eps(eps)

    stack = realize(spec, T)
    start = _trailing_start(T - 1)
    product = np.eye(spec.n)
    window = []
    for t, A in enumerate(stack):
        product = A @ product
        if t >= start:
            window.append(product)
    final = window[-1]
    cauchy = float(max(np.max(np.abs(P - final)) for P in window))

    classes = ergodic_classes(spec, T - 1, eps)
    clusters = classes.clusters
    converged = cauchy <= eps
    if converged and len(clusters) == 1:
        verdict = Verdict.ERGODIC
    elif converged:
        verdict = Verdict.CLASS_ERGODIC
    else:
        verdict = Verdict.INCONCLUSIVE

    everyone = list(range(1, spec.n + 1))
    if verdict == Verdict.INCONCLUSIVE:
        jets = [JetTrack(index=0, subsets=[everyone], settled_step=0)]
    else:
        jets = [JetTrack(index=0, subsets=[[]], settled_step=0)] + [
            JetTrack(index=k, subsets=[block], settled_step=0)
            for k, block in enumerate(clusters, start=1)
        ]

    island_blocks = islands_from_weights(flow_weights(stack), theta)
    agree = island_blocks == clusters
    warnings = []
    if not converged:
        warnings.append(
            f"backward products not Cauchy over the trailing quarter "
            f"(max change {cauchy:.3g} > {eps:g})"
        )
    if not agree:
        warnings.append(
            f"clusters {clusters} differ from islands {island_blocks} at theta={theta:g}"
        )
    warnings.extend(classes.warnings)
    logger.info("classify: %s at T=%d (%d classes)", verdict.value, T, len(clusters))
    return DecompositionReport(
        verdict=verdict,
        horizon=T,
        epsilon=eps,
        recorded_steps=[T],
        clusters=clusters,
        jets=jets,
        cauchy_residual=cauchy,
        islands=island_blocks,
        islands_agree=agree,
        warnings=warnings,
    )


def _settled_step(subsets: list[list[int]]) -> int:
    last = 0
    for n in range(1, len(subsets)):
        if len(subsets[n]) != len(subsets[n - 1]):
            last = n
    return last


def ds_decompose(
    spec: ChainSpec,
    T: int,
    eps: float,
    probes: Optional[int] = None,
    seed: int = 0,
) -> tuple[DecompositionReport, ClusterReport]:
    if T < 1:
        raise DomainError(f"horizon must be >= 1, got {T}")
    _check_eps(eps)
    n = spec.n
    probes = n + DEFAULT_PROBES_EXTRA if probes is None else probes
    if probes < n:
        raise DomainError(f"need at least N = {n} probes, got {probes}")

    rng = np.random.default_rng(seed)
    X0 = np.hstack([np.eye(n), rng.random((n, probes - n))])
    gap = eps * np.maximum(1.0, X0.max(axis=0) - X0.min(axis=0))

    # masses are read at T from a sequence propagated back from 2T
    stack = realize(spec, 2 * T)
    X = np.empty((T + 1, n, probes))
    X[0] = X0
    for k in range(T):
        X[k + 1] = stack[k] @ X[k]

    terminal = X[T]
    scaled = np.max(np.abs(terminal[:, None, :] - terminal[None, :, :]) / gap, axis=2)
    clusters = partition_blocks(scaled <= 1.0)
    centres = np.array([terminal[np.array(b) - 1].mean(axis=0) for b in clusters])

    assign = np.empty((T + 1, n), dtype=int)
    for step in range(T + 1):
        dist = np.max(np.abs(X[step][:, None, :] - centres[None, :, :]) / gap, axis=2)
        assign[step] = np.argmin(dist, axis=1)

    start = _trailing_start(T)
    stable = np.all(assign[start:] == assign[T], axis=0)
    cauchy_by_agent = np.max(np.abs(X[start:] - terminal) / gap, axis=(0, 2))
    null = ~(stable & (cauchy_by_agent <= 1.0))
    null_members = [i + 1 for i in np.flatnonzero(null)]

    label_limits = terminal[:, :n] @ np.arange(1.0, n + 1)
    pi = backward_abs_prob_array(stack, uniform(n))[: T + 1]
    pi_T = pi[T]

    jets = [JetTrack(
        index=0,
        subsets=[null_members] * (T + 1),
        settled_step=0,
        mass=float(pi_T[null].sum()),
    )]
    indicators = [np.broadcast_to(null.astype(float), (T + 1, n))]
    for k, block in enumerate(clusters, start=1):
        members = (assign == k - 1) & ~null[None, :]
        subsets = [[i + 1 for i in np.flatnonzero(row)] for row in members]
        mass = float(pi_T[members[T]].sum())
        jets.append(JetTrack(
            index=k,
            subsets=subsets,
            settled_step=_settled_step(subsets),
            limit=float(label_limits[np.array(block) - 1].mean()),
            mass=mass,
            vanishing=mass < eps,
        ))
        indicators.append(members.astype(float))

    weighted = mass_weighted_stack(stack[:T], pi)
    active = [k for k, ind in enumerate(indicators) if ind.any()]
    cross_flows = [
        CrossFlow(
            first=a,
            second=b,
            partial_sums=np.cumsum(
                interaction_series(weighted, indicators[a], indicators[b])
            ).tolist(),
        )
        for i, a in enumerate(active)
        for b in active[i + 1 :]
    ]

    c = sum(1 for j in jets[1:] if j.subsets[-1])
    if c == 1 and not null_members:
        verdict = Verdict.ERGODIC
    elif c >= 2 and not null_members:
        verdict = Verdict.CLASS_ERGODIC
    else:
        verdict = Verdict.INCONCLUSIVE

    spread = np.zeros(probes)
    for block in clusters:
        idx = np.array(block) - 1
        spread = np.maximum(spread, terminal[idx].max(axis=0) - terminal[idx].min(axis=0))
    residual = float(np.max(spread / (gap / eps)))
    cauchy_residual = float(np.max(cauchy_by_agent) * eps)

    warnings = []
    if c == 0:
        warnings.append("no agent settles into a cluster at this horizon")
    if null_members:
        warnings.append(f"agents {null_members} do not stabilize over the trailing quarter")
    for j in jets[1:]:
        if j.vanishing and j.subsets[-1]:
            warnings.append(f"jet {j.index} carries vanishing mass {j.mass:.3g}")
    if residual > eps:
        warnings.append(f"within-cluster spread {residual:.3g} exceeds epsilon {eps:g}")
    logger.info("ds_decompose: %s at T=%d, c=%d, |J0|=%d", verdict.value, T, c, len(null_members))

    report = DecompositionReport(
        verdict=verdict,
        horizon=T,
        epsilon=eps,
        recorded_steps=list(range(T + 1)),
        clusters=clusters,
        jets=jets,
        cross_flows=cross_flows,
        cauchy_residual=cauchy_residual,
        warnings=warnings,
    )
    cluster_masses = [
        float(pi_T[[i - 1 for i in block if not null[i - 1]]].sum()) for block in clusters
    ]
    summary = ClusterReport(
        horizon=T,
        epsilon=eps,
        clusters=clusters,
        limits=[float(label_limits[np.array(b) - 1].mean()) for b in clusters],
        masses=cluster_masses,
        residual=residual,
        warnings=[w for w in warnings if "spread" in w],
    )
    return report, summary


def sorted_state_convergence(traj: TrajectoryRecord, eps: float) -> SortedConvergenceReport:
    """Tail oscillation of each sorted rank z_i(n) over the last quarter."""
    if traj.horizon < 8:
        raise DomainError(f"trajectory horizon must be >= 8, got {traj.horizon}")
    _check_eps(eps)
    z = np.array(traj.sorted_states, dtype=float)
    start = _trailing_start(traj.horizon)
    oscillation = np.max(np.abs(z[start:] - z[-1]), axis=0)
    return SortedConvergenceReport(
        passed=bool(np.all(oscillation <= eps)),
        epsilon=eps,
        window_start=start,
        oscillation=oscillation.tolist(),
    )
