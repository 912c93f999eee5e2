"""
Permutations that make a balanced asymmetric matrix self-confident.

For A balanced asymmetric with bound psi, the bipartite graph with an edge
(row r, column c) whenever A_rc >= delta, delta = 4 / (psi N^2 + 4N - 4), has a
perfect matching tau, so P A (rows of P are e_{tau(i)}) has diagonal >= delta.
A chain is normalized step by step:

    B(n) = P(n) A(n) P(n-1)^t,   P(-1) = I

where P(n) is matched on A(n) P(n-1)^t; absolute probabilities of B pull back
to A as pi_A(n) = pi_B(n) P(n-1).
"""

import logging
from collections import deque
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from app.config import ABSPROB_TOL, TailPolicy
from app.engine.chain_core import MatrixLike, explicit_chain, realize, to_array
from app.errors import (
    DomainError,
    MatchingStepError,
    NoPerfectMatchingError,
    ResidualError,
)
from app.models.absprob import AbsProbApprox
from app.models.chain import ChainSpec
from app.models.matching import MatchingResult, NormalizedChain, permutation_matrix

logger = logging.getLogger(__name__)


def delta_bound(psi: float, n: int) -> float:
    if psi < 1.0:
        raise DomainError(f"psi must be >= 1, got {psi}")
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")
    return 4.0 / (psi * n * n + 4.0 * n - 4.0)


def _row_for_each_column(edges: np.ndarray) -> np.ndarray:
    """Maximum matching (Hopcroft-Karp); entry c is the row matched to column c or -1."""
    return maximum_bipartite_matching(csr_matrix(edges.astype(np.int8)), perm_type="row")


def _hall_violator(edges: np.ndarray, row_of: np.ndarray) -> tuple[list[int], list[int]]:
    """
    Alternating-tree search from an unmatched row of a maximum matching: the
    rows reached only see the columns reached, which are all matched, so
    |columns| = |rows| - 1.
    """
    n = edges.shape[0]
    matched_rows = set(int(r) for r in row_of if r >= 0)
    root = next(r for r in range(n) if r not in matched_rows)
    seen_rows, seen_cols = {root}, set()
    queue = deque([root])
    while queue:
        r = queue.popleft()
        for c in np.flatnonzero(edges[r]):
            c = int(c)
            if c in seen_cols:
                continue
            seen_cols.add(c)
            partner = int(row_of[c])
            if partner >= 0 and partner not in seen_rows:
                seen_rows.add(partner)
                queue.append(partner)
    return sorted(r + 1 for r in seen_rows), sorted(c + 1 for c in seen_cols)


def _has_perfect_matching(edges: np.ndarray) -> bool:
    if edges.shape[0] == 0:
        return True
    return bool(np.all(_row_for_each_column(edges) >= 0))


def _lexicographic_matching(edges: np.ndarray) -> list[int]:
    """
    Lexicographically smallest (tau(1), ..., tau(N)): each column in turn takes
    the smallest row that still leaves a perfect matching on the rest.
    """
    n = edges.shape[0]
    free_rows = list(range(n))
    tau = []
    for c in range(n):
        rest_cols = np.arange(c + 1, n)
        for r in free_rows:
            if not edges[r, c]:
                continue
            rest_rows = [x for x in free_rows if x != r]
            if _has_perfect_matching(edges[np.ix_(rest_rows, rest_cols)]):
                tau.append(r)
                free_rows = rest_rows
                break
    return tau


def matching_above(A: MatrixLike, delta: float) -> MatchingResult:
    """Perfect matching on the edges A_rc >= delta, or NoPerfectMatchingError."""
    M = to_array(A)
    edges = M >= delta
    row_of = _row_for_each_column(edges)
    if np.any(row_of < 0):
        violator, neighbourhood = _hall_violator(edges, row_of)
        raise NoPerfectMatchingError(violator, neighbourhood, delta)
    tau = _lexicographic_matching(edges)
    return MatchingResult(
        tau=[r + 1 for r in tau],
        delta=delta,
        matched_entries=[float(M[r, c]) for c, r in enumerate(tau)],
    )


def self_confident_permutation(A: MatrixLike, psi: float) -> MatchingResult:
    M = to_array(A)
    return matching_above(M, delta_bound(psi, M.shape[0]))


def normalize_chain(spec: ChainSpec, psi: float, T: int) -> NormalizedChain:
    if T < 1:
        raise DomainError(f"horizon must be >= 1, got {T}")
    delta = delta_bound(psi, spec.n)
    previous = np.eye(spec.n)
    B, perms = [], []
    for n, A in enumerate(realize(spec, T)):
        C = A @ previous.T
        try:
            result = matching_above(C, delta)
        except NoPerfectMatchingError as e:
            raise MatchingStepError(n, e) from e
        P = result.as_matrix()
        B.append(P @ C)
        perms.append(result.tau)
        previous = P
    logger.debug("normalized %d steps with delta=%.6g", T, delta)
    return NormalizedChain(
        horizon=T, delta=delta, B=np.array(B).tolist(), perms=perms
    )


def normalized_spec(chain: NormalizedChain) -> ChainSpec:
    """B(0..T-1) as an explicit chain with identity tail."""
    return explicit_chain(chain.as_array(), TailPolicy.IDENTITY)


def pullback_abs_prob(
    pi_B: AbsProbApprox,
    perms: Sequence[Sequence[int]],
    spec: Optional[ChainSpec] = None,
) -> AbsProbApprox:
    """
    pi_A(n) = pi_B(n) P(n-1) with P(-1) = I. When `spec` is given, the
    residual max |pi_A(n) - pi_A(n+1) A(n)| is checked against ABSPROB_TOL.
    """
    T = pi_B.horizon
    if len(perms) < T:
        raise DomainError(f"{len(perms)} permutations for a horizon of {T}")
    seq = pi_B.as_array()
    pulled = np.empty_like(seq)
    pulled[0] = seq[0]
    for n in range(1, T + 1):
        pulled[n] = seq[n] @ permutation_matrix(list(perms[n - 1]))

    if spec is not None and T > 0:
        stack = realize(spec, T)
        residual = float(np.max(np.abs(pulled[:-1] - np.einsum("ni,nij->nj", pulled[1:], stack))))
        if residual > ABSPROB_TOL:
            raise ResidualError(residual, ABSPROB_TOL)

    return AbsProbApprox(horizon=T, pi=pulled.tolist(), terminal=pulled[-1].tolist())
