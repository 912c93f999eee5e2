"""
Certifiers for the per-matrix chain classes.

    self-confidence       A_ii(n) >= delta
    cut-balance           sum_{i notin S, j in S} A_ij <= psi * sum_{i in S, j notin S} A_ij
    balanced asymmetry    same with an independent M_2 of equal cardinality on the
                          column side
    weak aperiodicity     for i != j there is l with A_li A_lj >= gamma A_ij

A single bound is applied uniformly over the horizon. Subset checks are
exhaustive up to EXHAUSTIVE_CUT_MAX_N / EXHAUSTIVE_BALANCED_MAX_N agents and
sampled above; the certificate carries the method.
"""

import logging
from typing import Literal

import numpy as np

from app.config import (
    CertificateMethod,
    CERT_TOL,
    DEFAULT_SAMPLE_COUNT,
    EXHAUSTIVE_CUT_MAX_N,
    EXHAUSTIVE_BALANCED_MAX_N,
)
from app.engine.absprob import backward_abs_prob
from app.engine.chain_core import MatrixLike, realize, to_array
from app.engine.subsets import (
    cut_flows,
    first_cut_violation,
    first_balance_violation,
    first_sampled_cut_violation,
    first_sampled_balance_violation,
    indicator_labels,
    iter_proper_subsets,
)
from app.errors import DomainError, SizeBudgetError
from app.models.chain import ChainSpec
from app.models.properties import PropertyCertificate, CertificateWitness

logger = logging.getLogger(__name__)

Mode = Literal["auto", "exhaustive", "sampled"]


def _resolve_method(mode: Mode, n: int, cap: int, what: str) -> CertificateMethod:
    if mode == "sampled":
        return CertificateMethod.SAMPLED
    if n <= cap:
        return CertificateMethod.EXHAUSTIVE
    if mode == "exhaustive":
        raise SizeBudgetError(
            f"exhaustive {what} is limited to N <= {cap}, got N = {n}"
        )
    logger.info("%s: N=%d above exhaustive cap %d, sampling subsets", what, n, cap)
    return CertificateMethod.SAMPLED


SAMPLED_NOTE = "subsets were sampled; a pass is evidence, not a proof"


def _check_bound(psi: float) -> None:
    if psi < 1.0:
        raise DomainError(
            f"bound must be >= 1 (a subset and its complement force psi >= 1), got {psi}"
        )


def self_confidence(spec: ChainSpec, T: int) -> PropertyCertificate:
    """delta = min over n < T and i of A_ii(n); the witness locates the minimum."""
    if T < 1:
        raise DomainError(f"horizon must be >= 1, got {T}")
    diagonals = np.diagonal(realize(spec, T), axis1=1, axis2=2)
    n, i = np.unravel_index(int(np.argmin(diagonals)), diagonals.shape)
    delta = float(diagonals[n, i])
    return PropertyCertificate(
        property_name="self_confidence",
        holds=delta > 0.0,
        bound=delta,
        witness=CertificateWitness(step=int(n), agent=int(i) + 1, lhs=delta),
    )


def check_cut_balance(
    A: MatrixLike,
    psi: float,
    mode: Mode = "auto",
    samples: int = DEFAULT_SAMPLE_COUNT,
    seed: int = 0,
) -> PropertyCertificate:
    _check_bound(psi)
    M = to_array(A)
    n = M.shape[0]
    method = _resolve_method(mode, n, EXHAUSTIVE_CUT_MAX_N, "cut-balance")
    if method == CertificateMethod.EXHAUSTIVE:
        violation = first_cut_violation(M, psi)
    else:
        violation = first_sampled_cut_violation(M, psi, samples, np.random.default_rng(seed))

    witness = None
    if violation is not None:
        S, inflow, outflow = violation
        witness = CertificateWitness(subset=indicator_labels(S), lhs=inflow, rhs=outflow)
    return PropertyCertificate(
        property_name="cut_balance",
        holds=violation is None,
        bound=psi,
        witness=witness,
        method=method,
        samples=samples if method == CertificateMethod.SAMPLED else None,
        note=SAMPLED_NOTE if method == CertificateMethod.SAMPLED else None,
    )


def min_cut_balance(A: MatrixLike) -> float:
    """Tightest psi (>= 1) for cut-balance; inf if a cut has inflow but no outflow."""
    M = to_array(A)
    n = M.shape[0]
    if n > EXHAUSTIVE_CUT_MAX_N:
        raise SizeBudgetError(
            f"min_cut_balance enumerates 2^N subsets; limited to N <= {EXHAUSTIVE_CUT_MAX_N}"
        )
    worst = 1.0
    for _, S in iter_proper_subsets(n):
        inflow, outflow = cut_flows(M, S)
        if np.any((inflow > CERT_TOL) & (outflow <= CERT_TOL)):
            return float("inf")
        flowing = outflow > CERT_TOL
        if flowing.any():
            worst = max(worst, float(np.max(inflow[flowing] / outflow[flowing])))
    return worst


def check_balanced_asymmetry(
    A: MatrixLike,
    psi: float,
    mode: Mode = "auto",
    samples: int = DEFAULT_SAMPLE_COUNT,
    seed: int = 0,
) -> PropertyCertificate:
    _check_bound(psi)
    M = to_array(A)
    n = M.shape[0]
    method = _resolve_method(mode, n, EXHAUSTIVE_BALANCED_MAX_N, "balanced asymmetry")
    if method == CertificateMethod.EXHAUSTIVE:
        violation = first_balance_violation(M, psi)
    else:
        violation = first_sampled_balance_violation(
            M, psi, samples, np.random.default_rng(seed)
        )

    witness = None
    if violation is not None:
        S1, S2, lhs, rhs = violation
        witness = CertificateWitness(
            subset=indicator_labels(S1), subset2=indicator_labels(S2), lhs=lhs, rhs=rhs
        )
    return PropertyCertificate(
        property_name="balanced_asymmetry",
        holds=violation is None,
        bound=psi,
        witness=witness,
        method=method,
        samples=samples if method == CertificateMethod.SAMPLED else None,
        note=SAMPLED_NOTE if method == CertificateMethod.SAMPLED else None,
    )


def _pair_products(M: np.ndarray) -> np.ndarray:
    """maxprod[i, j] = max_l A_li * A_lj."""
    return np.max(M[:, :, None] * M[:, None, :], axis=0)


def check_weak_aperiodicity(A: MatrixLike, gamma: float) -> PropertyCertificate:
    if gamma <= 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    M = to_array(A)
    best = _pair_products(M)
    off_diagonal = ~np.eye(M.shape[0], dtype=bool)
    bad = np.argwhere(off_diagonal & (best < gamma * M - CERT_TOL))

    witness = None
    if bad.size:
        i, j = bad[0]
        witness = CertificateWitness(
            pair=(int(i) + 1, int(j) + 1), lhs=float(best[i, j]), rhs=float(M[i, j])
        )
    return PropertyCertificate(
        property_name="weak_aperiodicity",
        holds=witness is None,
        bound=gamma,
        witness=witness,
    )


def max_weak_aperiodicity(A: MatrixLike) -> float:
    """min over i != j with A_ij > 0 of max_l A_li A_lj / A_ij; inf when vacuous."""
    M = to_array(A)
    best = _pair_products(M)
    active = ~np.eye(M.shape[0], dtype=bool) & (M > 0.0)
    if not active.any():
        return float("inf")
    return float(np.min(best[active] / M[active]))


def pstar_estimate(spec: ChainSpec, T: int) -> float:
    """
    min over n <= T and i of pi_i(n), with pi propagated back from a uniform
    terminal. An estimate of the P* lower bound, not a certificate.
    """
    if T < 1:
        raise DomainError(f"horizon must be >= 1, got {T}")
    return float(backward_abs_prob(spec, T).as_array().min())


def chain_certificate(
    spec: ChainSpec, T: int, property_name: str, bound: float, **kwargs
) -> PropertyCertificate:
    """
    Apply one per-matrix check to A(0..T-1) with a uniform bound; the first
    failing step is returned with its step index in the witness.
    """
    checks = {
        "cut_balance": check_cut_balance,
        "balanced_asymmetry": check_balanced_asymmetry,
        "weak_aperiodicity": check_weak_aperiodicity,
    }
    check = checks.get(property_name)
    if check is None:
        raise DomainError(f"unknown per-matrix property '{property_name}'")
    cert = None
    for n, A in enumerate(realize(spec, T)):
        cert = check(A, bound, **kwargs)
        if not cert.holds:
            witness = cert.witness.model_copy(update={"step": n})
            return cert.model_copy(update={"witness": witness})
    if cert is None:
        raise DomainError(f"horizon must be >= 1, got {T}")
    return cert
