"""
Flow quantities over a finite horizon.

    W_ij(T) = sum_{n<T} (A_ij(n) + A_ji(n))          flow graph; islands are the
                                                     components of {W_ij >= theta}
    U_n(Js, Jk) = sum_{i in Js(n+1), j in Jk(n)} A_ij(n)
                + sum_{i in Jk(n+1), j in Js(n)} A_ij(n)
    V_n(Js, Jk) = the same with A_ij(n) weighted by pi_i(n+1), i.e. r_ji(n)

Divergence of U or W is never claimed: every series is reported up to T and
"unbounded" is read as "at least theta at the horizon".
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.config import EXHAUSTIVE_CUT_MAX_N, LEADER_PAIR_MAX_N
from app.engine.chain_core import MatrixLike, realize, to_array
from app.engine.subsets import (
    indicator,
    iter_proper_subsets,
    to_indices,
    to_labels,
)
from app.errors import DomainError, NonDisjointJetsError, SizeBudgetError
from app.models.absprob import AbsProbApprox
from app.models.chain import ChainSpec
from app.models.flow import (
    FlowGraph,
    FlowSeries,
    IslandPartition,
    Jet,
    JetFlowScan,
    LeaderPairReport,
    LeaderReport,
)

logger = logging.getLogger(__name__)


def _check_horizon(T: int) -> None:
    if T < 1:
        raise DomainError(f"horizon must be >= 1, got {T}")


def partition_blocks(adjacency: np.ndarray) -> list[list[int]]:
    """Connected components of a symmetric boolean adjacency, sorted by smallest label."""
    _, labels = connected_components(csr_matrix(adjacency), directed=False)
    blocks: dict[int, list[int]] = {}
    for agent, label in enumerate(labels):
        blocks.setdefault(int(label), []).append(agent + 1)
    return sorted(blocks.values(), key=lambda b: b[0])


# ---------------------------------------------------------------------------
# Flow graph and islands
# ---------------------------------------------------------------------------

def flow_weights(stack: np.ndarray) -> np.ndarray:
    C = stack.sum(axis=0)
    W = C + C.T
    np.fill_diagonal(W, 0.0)
    return W


def flow_graph(spec: ChainSpec, T: int) -> FlowGraph:
    _check_horizon(T)
    return FlowGraph(horizon=T, weights=flow_weights(realize(spec, T)).tolist())


def islands_from_weights(W: np.ndarray, theta: float) -> list[list[int]]:
    if theta <= 0:
        raise DomainError(f"divergence threshold must be positive, got {theta}")
    adjacency = W >= theta
    np.fill_diagonal(adjacency, False)
    return partition_blocks(adjacency)


def islands(spec: ChainSpec, T: int, theta: float) -> IslandPartition:
    _check_horizon(T)
    blocks = islands_from_weights(flow_weights(realize(spec, T)), theta)
    logger.debug("islands at T=%d, theta=%g: %s", T, theta, blocks)
    return IslandPartition(blocks=blocks, threshold=theta, horizon=T)


# ---------------------------------------------------------------------------
# Jet interactions
# ---------------------------------------------------------------------------

def _check_disjoint(Js: np.ndarray, Jk: np.ndarray) -> None:
    """Js, Jk are (T+1, N) indicator rows."""
    overlap = (Js > 0.5) & (Jk > 0.5)
    steps = np.flatnonzero(overlap.any(axis=1))
    if steps.size:
        n = int(steps[0])
        raise NonDisjointJetsError(n, to_labels(np.flatnonzero(overlap[n])))


def interaction_series(stack: np.ndarray, Js: np.ndarray, Jk: np.ndarray) -> np.ndarray:
    """Per-step U_n for n < T given (T+1, N) indicator rows."""
    forward = np.einsum("ni,nij,nj->n", Js[1:], stack, Jk[:-1])
    backward = np.einsum("ni,nij,nj->n", Jk[1:], stack, Js[:-1])
    return forward + backward


def jet_interaction_step(
    A: MatrixLike,
    Js_now: Sequence[int],
    Js_next: Sequence[int],
    Jk_now: Sequence[int],
    Jk_next: Sequence[int],
    step: int = 0,
) -> float:
    """U_n for a single matrix; subsets are 1-based label lists."""
    M = to_array(A)
    n = M.shape[0]
    Js = np.stack([indicator(Js_now, n), indicator(Js_next, n)])
    Jk = np.stack([indicator(Jk_now, n), indicator(Jk_next, n)])
    try:
        _check_disjoint(Js, Jk)
    except NonDisjointJetsError as e:
        raise NonDisjointJetsError(step + e.step, e.overlap) from None
    return float(interaction_series(M[None], Js, Jk)[0])


def _jet_pair(Js: Jet, Jk: Jet, T: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    if Js.n != n or Jk.n != n:
        raise DomainError(f"jets over {Js.n} and {Jk.n} agents for a chain of {n}")
    a, b = Js.indicators(T), Jk.indicators(T)
    _check_disjoint(a, b)
    return a, b


def jet_interaction_total(spec: ChainSpec, Js: Jet, Jk: Jet, T: int) -> FlowSeries:
    """Partial sums U(t) = sum_{n<t} U_n for t = 1..T."""
    _check_horizon(T)
    a, b = _jet_pair(Js, Jk, T, spec.n)
    steps = interaction_series(realize(spec, T), a, b)
    return FlowSeries(horizon=T, partial_sums=np.cumsum(steps).tolist())


def mass_weighted_stack(stack: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """pi_i(n+1) A_ij(n); its (i, j) entry is the joint flow r_ji(n)."""
    return pi[1 : stack.shape[0] + 1, :, None] * stack


def jet_v_total(
    spec: ChainSpec, pi: AbsProbApprox, Js: Jet, Jk: Jet, T: int
) -> FlowSeries:
    """Partial sums V(t) using joint flows r_ij(n) = pi_j(n+1) A_ji(n)."""
    _check_horizon(T)
    if pi.horizon < T:
        raise DomainError(f"absolute probabilities cover {pi.horizon} steps, need {T}")
    a, b = _jet_pair(Js, Jk, T, spec.n)
    weighted = mass_weighted_stack(realize(spec, T), pi.as_array())
    steps = interaction_series(weighted, a, b)
    return FlowSeries(horizon=T, partial_sums=np.cumsum(steps).tolist())


def is_leader(spec: ChainSpec, J: Jet, T: int, budget: float) -> LeaderReport:
    """Influence of the complement on J: sum_{i in J(n+1), j notin J(n)} A_ij(n)."""
    _check_horizon(T)
    if not J.proper:
        raise DomainError("leader detection needs a proper jet")
    inside = J.indicators(T)
    steps = np.einsum("ni,nij,nj->n", inside[1:], realize(spec, T), 1.0 - inside[:-1])
    influence = np.cumsum(steps)
    leader = bool(influence[-1] <= budget)
    return LeaderReport(
        horizon=T,
        budget=budget,
        influence=influence.tolist(),
        leader=leader,
        verdict="leader-at-horizon" if leader else "not-leader",
    )


# ---------------------------------------------------------------------------
# Constant-jet scans
# ---------------------------------------------------------------------------

def static_jet_flow_scan(
    spec: ChainSpec, T: int, within: Optional[Sequence[int]] = None
) -> JetFlowScan:
    """
    U(S, complement) at T for every constant proper subset S of M (or of the
    island `within`, complement taken inside it). Entries among island
    members are used as they are, without renormalization.
    """
    _check_horizon(T)
    members = np.arange(spec.n) if within is None else to_indices(within, spec.n)
    m = members.size
    if m < 2:
        raise DomainError("need at least two agents to cut")
    if m > EXHAUSTIVE_CUT_MAX_N:
        raise SizeBudgetError(
            f"constant-jet scan enumerates 2^{m} subsets; limited to {EXHAUSTIVE_CUT_MAX_N} agents"
        )

    stack = realize(spec, T)[:, members][:, :, members]
    C = stack.sum(axis=0)
    Csym = C + C.T

    best_value, best_row = np.inf, None
    by_size = np.full(m, np.inf)
    scanned = 0
    for _, S in iter_proper_subsets(m):
        cut = ((S @ Csym) * (1.0 - S)).sum(axis=1)
        sizes = S.sum(axis=1).astype(int)
        np.minimum.at(by_size, sizes, cut)
        r = int(np.argmin(cut))
        if cut[r] < best_value:
            best_value, best_row = float(cut[r]), S[r].copy()
        scanned += S.shape[0]

    inside = np.broadcast_to(best_row, (T + 1, m))
    series = np.cumsum(interaction_series(stack, inside, 1.0 - inside))
    minimizer = sorted(int(members[i]) + 1 for i in np.flatnonzero(best_row > 0.5))
    return JetFlowScan(
        horizon=T,
        within=None if within is None else to_labels(members),
        minimizer=minimizer,
        minimum=best_value,
        min_by_size={k: float(by_size[k]) for k in range(1, m)},
        series=series.tolist(),
        subsets_scanned=scanned,
    )


def find_disjoint_leaders(spec: ChainSpec, T: int, budget: float) -> LeaderPairReport:
    """
    Two disjoint constant subsets that each receive at most `budget` total
    influence from their complement up to T. Finding a pair refutes
    ergodicity at this horizon; not finding one proves nothing.
    """
    _check_horizon(T)
    n = spec.n
    if n > LEADER_PAIR_MAX_N:
        raise SizeBudgetError(f"leader-pair scan is limited to N <= {LEADER_PAIR_MAX_N}")
    C = realize(spec, T).sum(axis=0)

    masks, influences = [], []
    for chunk_masks, S in iter_proper_subsets(n):
        inflow = ((S @ C) * (1.0 - S)).sum(axis=1)
        keep = inflow <= budget
        masks.append(chunk_masks[keep])
        influences.append(inflow[keep])
    leaders = np.concatenate(masks) if masks else np.empty(0, dtype=np.int64)
    values = np.concatenate(influences) if influences else np.empty(0)

    for idx, m1 in enumerate(leaders):
        partners = np.flatnonzero((leaders[idx + 1 :] & m1) == 0)
        if partners.size:
            jdx = idx + 1 + int(partners[0])
            first = _mask_labels(int(m1), n)
            second = _mask_labels(int(leaders[jdx]), n)
            logger.info("disjoint leaders at T=%d: %s and %s", T, first, second)
            return LeaderPairReport(
                horizon=T,
                budget=budget,
                found=True,
                first=first,
                second=second,
                influence_first=float(values[idx]),
                influence_second=float(values[jdx]),
                leaders_scanned=int(leaders.size),
            )
    return LeaderPairReport(
        horizon=T, budget=budget, found=False, leaders_scanned=int(leaders.size)
    )


def _mask_labels(mask: int, n: int) -> list[int]:
    return [j + 1 for j in range(n) if mask >> j & 1]
