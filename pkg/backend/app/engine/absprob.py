"""
Absolute probability sequences and the forward chain they induce.

An absolute probability sequence satisfies

    pi^t(n) = pi^t(n+1) A(n)

and is approximated here by propagating a chosen terminal pi(T) backward. The
forward chain

    P_ij(n) = pi_j(n+1) A_ji(n) / pi_i(n)

moves the same mass forward in time; rows with pi_i(n) <= ZERO_MASS_TOL carry no
mass and are set to uniform. Joint flows r_ij(n) = pi_i(n) P_ij(n) =
pi_j(n+1) A_ji(n).
"""

import logging
from typing import Optional, Sequence

import numpy as np

from app.config import ZERO_MASS_TOL, ROW_SUM_TOL, DUALITY_TOL, TailPolicy
from app.engine.chain_core import (
    MatrixLike,
    realize,
    validate_stochastic,
    explicit_chain,
)
from app.errors import DimensionMismatchError, DomainError
from app.models.absprob import AbsProbApprox, ForwardChain, DualityReport, TerminalSensitivity
from app.models.chain import ChainSpec, StochasticMatrix

logger = logging.getLogger(__name__)


def _probability_vector(values, n: int, name: str = "terminal") -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise DimensionMismatchError(f"{name} has shape {v.shape}, expected ({n},)")
    if np.any(v < 0.0) or not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be a nonnegative finite vector")
    if abs(v.sum() - 1.0) > ROW_SUM_TOL:
        raise DomainError(f"{name} sums to {v.sum():.12g}, expected 1")
    return v


def uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def backward_abs_prob_array(stack: np.ndarray, terminal: np.ndarray) -> np.ndarray:
    """pi(0..T) as a (T+1, N) array for a realized stack A(0..T-1)."""
    T = stack.shape[0]
    pi = np.empty((T + 1, terminal.size))
    pi[T] = terminal
    for n in range(T - 1, -1, -1):
        pi[n] = pi[n + 1] @ stack[n]
    return pi


def backward_abs_prob(
    spec: ChainSpec, T: int, terminal: Optional[Sequence[float]] = None
) -> AbsProbApprox:
    """Propagate pi(T) = terminal (default uniform) back to n = 0."""
    if T < 0:
        raise DomainError(f"horizon must be >= 0, got {T}")
    term = uniform(spec.n) if terminal is None else _probability_vector(terminal, spec.n)
    pi = backward_abs_prob_array(realize(spec, T), term)
    return AbsProbApprox(horizon=T, pi=pi.tolist(), terminal=term.tolist())


def forward_matrix(A: np.ndarray, pi_now: np.ndarray, pi_next: np.ndarray) -> np.ndarray:
    """P(n) from A(n), pi(n) and pi(n+1); zero-mass rows are uniform."""
    n = A.shape[0]
    massive = pi_now > ZERO_MASS_TOL
    P = np.full((n, n), 1.0 / n)
    P[massive] = (A.T[massive] * pi_next[None, :]) / pi_now[massive, None]
    return P


def forward_transition(spec: ChainSpec, pi: AbsProbApprox, n: int) -> StochasticMatrix:
    if not 0 <= n < pi.horizon:
        raise DomainError(f"step must lie in [0, {pi.horizon}), got {n}")
    seq = pi.as_array()
    A = realize(spec, 1, start=n)[0]
    return validate_stochastic(forward_matrix(A, seq[n], seq[n + 1]))


def forward_chain_array(stack: np.ndarray, pi: np.ndarray) -> np.ndarray:
    P = np.empty_like(stack)
    for n, A in enumerate(stack):
        P[n] = forward_matrix(A, pi[n], pi[n + 1])
    return P


def joint_flow_array(pi: np.ndarray, P: np.ndarray) -> np.ndarray:
    """r(n)_ij = pi_i(n) P_ij(n) for every n < T, shape (T, N, N)."""
    return pi[:-1, :, None] * P


def forward_chain(spec: ChainSpec, pi: AbsProbApprox) -> ForwardChain:
    """All P(n) and r(n) for n < T."""
    seq = pi.as_array()
    P = forward_chain_array(realize(spec, pi.horizon), seq)
    return ForwardChain(matrices=P.tolist(), rij=joint_flow_array(seq, P).tolist())


def forward_chain_from(pi: AbsProbApprox, matrices: Sequence[MatrixLike]) -> ForwardChain:
    """Wrap user-supplied P(0..T-1); each is validated as row-stochastic."""
    if len(matrices) != pi.horizon:
        raise DimensionMismatchError(
            f"{len(matrices)} forward matrices for a horizon of {pi.horizon}"
        )
    seq = pi.as_array()
    if not matrices:
        return ForwardChain(matrices=[], rij=[])
    P = np.stack([validate_stochastic(m).as_array() for m in matrices])
    if P.shape[1] != seq.shape[1]:
        raise DimensionMismatchError(f"forward matrices are {P.shape[1]}x{P.shape[1]}")
    return ForwardChain(matrices=P.tolist(), rij=joint_flow_array(seq, P).tolist())


def joint_flow(pi: AbsProbApprox, P: ForwardChain, n: int) -> np.ndarray:
    """r(n) as an N x N array."""
    if not 0 <= n < pi.horizon:
        raise DomainError(f"step must lie in [0, {pi.horizon}), got {n}")
    seq = pi.as_array()
    return seq[n][:, None] * np.array(P.matrices[n], dtype=float)


def duality_residuals(stack: np.ndarray, pi: np.ndarray, P: np.ndarray) -> np.ndarray:
    """
    |pi_i(n+1) A_ij(n) - pi_j(n) P_ji(n)|, shape (T, N, N); columns j with
    pi_j(n) <= ZERO_MASS_TOL are zeroed since their P rows are arbitrary.
    """
    lhs = pi[1:, :, None] * stack
    rhs = np.transpose(pi[:-1, :, None] * P, (0, 2, 1))
    res = np.abs(lhs - rhs)
    res[np.broadcast_to((pi[:-1] <= ZERO_MASS_TOL)[:, None, :], res.shape)] = 0.0
    return res


def check_duality(
    spec: ChainSpec, pi: AbsProbApprox, P: ForwardChain, T: Optional[int] = None
) -> DualityReport:
    """Largest violation of pi_i(n+1) A_ij(n) = pi_j(n) P_ji(n) over n < T."""
    T = pi.horizon if T is None else T
    if T > pi.horizon or T > len(P.matrices):
        raise DimensionMismatchError(
            f"horizon {T} exceeds pi ({pi.horizon}) or P ({len(P.matrices)})"
        )
    if T == 0:
        return DualityReport(max_residual=0.0, passed=True, location=None, tolerance=DUALITY_TOL)
    seq = pi.as_array()[: T + 1]
    res = duality_residuals(realize(spec, T), seq, P.as_array()[:T])
    n, i, j = np.unravel_index(int(np.argmax(res)), res.shape)
    worst = float(res[n, i, j])
    passed = worst <= DUALITY_TOL
    if not passed:
        logger.warning("duality residual %.3g at n=%d, (%d,%d)", worst, n, i + 1, j + 1)
    return DualityReport(
        max_residual=worst,
        passed=passed,
        location=(int(n), int(i) + 1, int(j) + 1),
        tolerance=DUALITY_TOL,
    )


def terminal_sensitivity(
    spec: ChainSpec,
    horizons: Sequence[int],
    terminal_a: Sequence[float],
    terminal_b: Sequence[float],
) -> TerminalSensitivity:
    """||pi_a(0) - pi_b(0)||_inf for each horizon; reported, never asserted."""
    a = _probability_vector(terminal_a, spec.n, "terminal_a")
    b = _probability_vector(terminal_b, spec.n, "terminal_b")
    horizons = sorted(int(t) for t in horizons)
    if horizons and horizons[0] < 0:
        raise DomainError("horizons must be >= 0")
    stack = realize(spec, horizons[-1] if horizons else 0)
    gaps = []
    for T in horizons:
        pa = backward_abs_prob_array(stack[:T], a)[0]
        pb = backward_abs_prob_array(stack[:T], b)[0]
        gaps.append(float(np.max(np.abs(pa - pb))))
    return TerminalSensitivity(horizons=horizons, gaps=gaps)


def backward_chain_from_forward(
    P: Sequence[MatrixLike], m0: Sequence[float]
) -> tuple[ChainSpec, AbsProbApprox]:
    """
    Cup construction: given a forward chain P(0..T-1) and initial masses m(0),
    masses evolve as m(n+1) = m(n) P(n) and the backward chain is

        A_ij(n) = P_ji(n) m_j(n) / m_i(n+1)

    with identity rows where m_i(n+1) <= ZERO_MASS_TOL. Returns the explicit
    chain (identity tail) and the masses as an AbsProbApprox adapted to it.
    """
    if not P:
        raise DomainError("need at least one forward matrix")
    Ps = [validate_stochastic(p).as_array() for p in P]
    n = Ps[0].shape[0]
    m = [_probability_vector(m0, n, "m0")]
    matrices = []
    for Pn in Ps:
        if Pn.shape != (n, n):
            raise DimensionMismatchError(f"forward matrix of shape {Pn.shape}, expected {(n, n)}")
        m_next = m[-1] @ Pn
        A = np.eye(n)
        massive = m_next > ZERO_MASS_TOL
        A[massive] = (Pn.T[massive] * m[-1][None, :]) / m_next[massive, None]
        matrices.append(A)
        m.append(m_next)
    spec = explicit_chain(matrices, TailPolicy.IDENTITY)
    masses = AbsProbApprox(
        horizon=len(Ps), pi=np.array(m).tolist(), terminal=m[-1].tolist()
    )
    return spec, masses
