"""
Subset enumeration and cross-flow helpers shared by the certifiers, the
generator families and the flow scans.

Subsets of M are handled as bitmasks (bit j set <=> agent j+1 in the subset)
and as float indicator rows, so a whole chunk of subsets is evaluated with a
couple of matrix products.
"""

from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from app.config import SUBSET_CHUNK, CERT_TOL


def to_labels(indices) -> list[int]:
    """0-based agent indices -> sorted 1-based labels."""
    return sorted(int(i) + 1 for i in indices)


def to_indices(agents, n: int) -> np.ndarray:
    """1-based agent labels -> sorted 0-based index array (validated)."""
    idx = sorted({int(a) - 1 for a in agents})
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"agent labels must lie in 1..{n}, got {sorted(agents)}")
    return np.array(idx, dtype=int)


def indicator(agents, n: int) -> np.ndarray:
    """1-based agent labels -> float indicator vector of length n."""
    v = np.zeros(n)
    v[to_indices(agents, n)] = 1.0
    return v


def mask_indicators(masks: np.ndarray, n: int) -> np.ndarray:
    bits = 1 << np.arange(n, dtype=np.int64)
    return ((masks[:, None] & bits[None, :]) != 0).astype(float)


def indicator_labels(row: np.ndarray) -> list[int]:
    return to_labels(np.flatnonzero(row > 0.5))


def iter_proper_subsets(n: int, chunk: int = SUBSET_CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (masks, indicators) for every nonempty proper subset, ascending mask order."""
    total = (1 << n) - 1
    start = 1
    while start < total:
        stop = min(start + chunk, total)
        masks = np.arange(start, stop, dtype=np.int64)
        yield masks, mask_indicators(masks, n)
        start = stop


def random_proper_subsets(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Indicator rows of `count` uniformly drawn nonempty proper subsets."""
    rows = rng.random((count, n)) < 0.5
    sizes = rows.sum(axis=1)
    bad = (sizes == 0) | (sizes == n)
    while bad.any():
        rows[bad] = rng.random((int(bad.sum()), n)) < 0.5
        sizes = rows.sum(axis=1)
        bad = (sizes == 0) | (sizes == n)
    return rows.astype(float)


def cut_flows(A: np.ndarray, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    For indicator rows S: inflow = sum_{i not in S, j in S} A_ij and
    outflow = sum_{i in S, j not in S} A_ij.
    """
    inflow = (((1.0 - S) @ A) * S).sum(axis=1)
    outflow = ((S @ A) * (1.0 - S)).sum(axis=1)
    return inflow, outflow


def k_subsets(n: int, k: int) -> np.ndarray:
    """Indicator rows of all k-subsets in lexicographic order."""
    combos = list(combinations(range(n), k))
    S = np.zeros((len(combos), n))
    for r, c in enumerate(combos):
        S[r, list(c)] = 1.0
    return S


def pair_flows(A: np.ndarray, S1: np.ndarray, S2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    lhs[p, q] = sum_{i not in S1_p, j in S2_q} A_ij
    rhs[p, q] = sum_{i in S1_p, j not in S2_q} A_ij
    """
    lhs = (1.0 - S1) @ A @ S2.T
    rhs = S1 @ A @ (1.0 - S2).T
    return lhs, rhs


def first_cut_violation(
    A: np.ndarray, psi: float, tol: float = CERT_TOL
) -> Optional[tuple[np.ndarray, float, float]]:
    """Exhaustive cut-balance scan; first violating subset in mask order, or None."""
    n = A.shape[0]
    for _, S in iter_proper_subsets(n):
        inflow, outflow = cut_flows(A, S)
        bad = np.flatnonzero(inflow > psi * outflow + tol)
        if bad.size:
            r = bad[0]
            return S[r], float(inflow[r]), float(outflow[r])
    return None


def first_balance_violation(
    A: np.ndarray, psi: float, tol: float = CERT_TOL
) -> Optional[tuple[np.ndarray, np.ndarray, float, float]]:
    """
    Exhaustive balanced-asymmetry scan over equal-cardinality pairs (M1, M2),
    cardinality ascending; first violation or None. Cardinalities 0 and N
    give 0 <= 0 and are skipped.
    """
    n = A.shape[0]
    for k in range(1, n):
        S = k_subsets(n, k)
        lhs, rhs = pair_flows(A, S, S)
        bad = np.argwhere(lhs > psi * rhs + tol)
        if bad.size:
            p, q = bad[0]
            return S[p], S[q], float(lhs[p, q]), float(rhs[p, q])
    return None


def first_sampled_cut_violation(
    A: np.ndarray, psi: float, count: int, rng: np.random.Generator, tol: float = CERT_TOL
) -> Optional[tuple[np.ndarray, float, float]]:
    """Cut-balance scan over `count` uniformly drawn proper subsets."""
    n = A.shape[0]
    if n < 2:
        return None
    S = random_proper_subsets(n, count, rng)
    inflow, outflow = cut_flows(A, S)
    bad = np.flatnonzero(inflow > psi * outflow + tol)
    if bad.size:
        r = bad[0]
        return S[r], float(inflow[r]), float(outflow[r])
    return None


def first_sampled_balance_violation(
    A: np.ndarray, psi: float, count: int, rng: np.random.Generator, tol: float = CERT_TOL
) -> Optional[tuple[np.ndarray, np.ndarray, float, float]]:
    """Balanced-asymmetry scan over `count` random equal-cardinality pairs."""
    n = A.shape[0]
    if n < 2:
        return None
    sizes = rng.integers(1, n, size=count)
    S1 = np.zeros((count, n))
    S2 = np.zeros((count, n))
    for r, k in enumerate(sizes):
        S1[r, rng.choice(n, k, replace=False)] = 1.0
        S2[r, rng.choice(n, k, replace=False)] = 1.0
    lhs = (((1.0 - S1) @ A) * S2).sum(axis=1)
    rhs = ((S1 @ A) * (1.0 - S2)).sum(axis=1)
    bad = np.flatnonzero(lhs > psi * rhs + tol)
    if bad.size:
        r = bad[0]
        return S1[r], S2[r], float(lhs[r]), float(rhs[r])
    return None
