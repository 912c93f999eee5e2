"""
Tests for the chain-class certifiers: self-confidence, cut-balance, balanced
asymmetry, weak aperiodicity and the P* estimate.
"""

import numpy as np
import pytest

from app.config import CertificateMethod, TailPolicy
from app.engine.chain_core import explicit_chain, identity_chain, static_chain
from app.engine.families.base import random_doubly_stochastic
from app.engine.generators import (
    gen_balanced_asymmetric,
    gen_doubly_stochastic,
    gen_self_confident_cut_balanced,
)
from app.engine.properties import (
    chain_certificate,
    check_balanced_asymmetry,
    check_cut_balance,
    check_weak_aperiodicity,
    max_weak_aperiodicity,
    min_cut_balance,
    pstar_estimate,
    self_confidence,
)
from app.errors import DomainError, SizeBudgetError

AVG = np.array([[0.5, 0.5], [0.5, 0.5]])
LAZY = np.array([[1.0, 0.0], [0.5, 0.5]])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def _random_stochastic(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(n), size=n)


# ---------------------------------------------------------------------------
# Self-confidence
# ---------------------------------------------------------------------------

class TestSelfConfidence:

    def test_identity(self):
        cert = self_confidence(identity_chain(3), 5)
        assert cert.holds
        assert cert.bound == 1.0

    def test_averaging(self):
        assert self_confidence(static_chain(AVG), 5).bound == 0.5

    def test_swap_witness(self):
        cert = self_confidence(static_chain(SWAP), 5)
        assert not cert.holds
        assert cert.bound == 0.0
        assert (cert.witness.step, cert.witness.agent) == (0, 1)

    def test_minimum_located_in_time(self):
        spec = explicit_chain([np.eye(2), np.eye(2), LAZY], TailPolicy.IDENTITY)
        cert = self_confidence(spec, 4)
        assert cert.bound == 0.5
        assert (cert.witness.step, cert.witness.agent) == (2, 2)


# ---------------------------------------------------------------------------
# Cut-balance
# ---------------------------------------------------------------------------

class TestCutBalance:

    @pytest.mark.parametrize("seed", range(5))
    def test_doubly_stochastic_psi_one(self, seed):
        A = random_doubly_stochastic(5, np.random.default_rng(seed))
        cert = check_cut_balance(A, 1.0)
        assert cert.holds
        assert cert.method == CertificateMethod.EXHAUSTIVE
        assert cert.note is None

    def test_lazy_fails_with_witness(self):
        cert = check_cut_balance(LAZY, 100.0)
        assert not cert.holds
        assert cert.witness.subset == [1]
        assert cert.witness.lhs == pytest.approx(0.5)
        assert cert.witness.rhs == pytest.approx(0.0)

    def test_identity(self):
        assert check_cut_balance(np.eye(4), 1.0).holds

    def test_psi_below_one_rejected(self):
        with pytest.raises(DomainError):
            check_cut_balance(AVG, 0.9)

    def test_sampled_mode(self):
        A = random_doubly_stochastic(6, np.random.default_rng(1))
        cert = check_cut_balance(A, 1.0, mode="sampled", samples=200, seed=3)
        assert cert.holds
        assert cert.method == CertificateMethod.SAMPLED
        assert cert.samples == 200
        assert "sampled" in cert.note

    def test_exhaustive_cap(self):
        with pytest.raises(SizeBudgetError):
            check_cut_balance(np.eye(21), 1.0, mode="exhaustive")

    def test_auto_samples_above_cap(self):
        cert = check_cut_balance(np.eye(21), 1.0, samples=64)
        assert cert.method == CertificateMethod.SAMPLED


class TestMinCutBalance:

    def test_doubly_stochastic(self):
        A = random_doubly_stochastic(4, np.random.default_rng(2))
        assert min_cut_balance(A) == pytest.approx(1.0)

    def test_lazy_infinite(self):
        assert min_cut_balance(LAZY) == float("inf")

    def test_two_by_two_ratio(self):
        assert min_cut_balance([[0.8, 0.2], [0.1, 0.9]]) == pytest.approx(2.0)

    def test_consistent_with_check(self):
        A = np.array([[0.8, 0.2], [0.1, 0.9]])
        psi = min_cut_balance(A)
        assert check_cut_balance(A, psi).holds
        assert not check_cut_balance(A, psi * 0.99).holds


# ---------------------------------------------------------------------------
# Balanced asymmetry
# ---------------------------------------------------------------------------

class TestBalancedAsymmetry:

    def test_identity(self):
        assert check_balanced_asymmetry(np.eye(2), 1.0).holds

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_permutations(self, n):
        for seed in range(4):
            P = np.eye(n)[np.random.default_rng(seed).permutation(n)]
            assert check_balanced_asymmetry(P, 1.0).holds

    def test_column_collapse_fails(self):
        cert = check_balanced_asymmetry([[1.0, 0.0], [1.0, 0.0]], 1.0)
        assert not cert.holds
        assert cert.witness.subset == [1]
        assert cert.witness.subset2 == [1]
        assert cert.witness.lhs == pytest.approx(1.0)
        assert cert.witness.rhs == pytest.approx(0.0)

    def test_sampled_above_cap(self):
        A = random_doubly_stochastic(11, np.random.default_rng(0))
        cert = check_balanced_asymmetry(A, 1.0, samples=128)
        assert cert.method == CertificateMethod.SAMPLED
        assert cert.holds
        assert cert.note is not None


# ---------------------------------------------------------------------------
# Weak aperiodicity
# ---------------------------------------------------------------------------

class TestWeakAperiodicity:

    def test_identity_vacuous(self):
        assert check_weak_aperiodicity(np.eye(3), 10.0).holds
        assert max_weak_aperiodicity(np.eye(3)) == float("inf")

    def test_averaging(self):
        assert check_weak_aperiodicity(AVG, 0.5).holds
        assert max_weak_aperiodicity(AVG) == pytest.approx(0.5)

    def test_swap_fails(self):
        cert = check_weak_aperiodicity(SWAP, 1e-3)
        assert not cert.holds
        assert cert.witness.pair == (1, 2)
        assert max_weak_aperiodicity(SWAP) == 0.0

    def test_nonpositive_gamma(self):
        with pytest.raises(DomainError):
            check_weak_aperiodicity(AVG, 0.0)


# ---------------------------------------------------------------------------
# Implication sweep: diagonal >= delta => weakly aperiodic with delta;
# balanced asymmetric with psi => cut-balanced with psi
# ---------------------------------------------------------------------------

class TestImplications:

    def setup_method(self):
        self.rng = np.random.default_rng(2024)

    def test_self_confident_implies_weakly_aperiodic(self):
        for _ in range(500):
            n = int(self.rng.integers(2, 7))
            delta = float(self.rng.uniform(0.05, 0.9))
            A = (1.0 - delta) * _random_stochastic(n, self.rng) + delta * np.eye(n)
            assert np.all(np.diagonal(A) >= delta - 1e-15)
            assert check_weak_aperiodicity(A, delta).holds

    def test_balanced_implies_cut_balanced(self):
        checked = 0
        for _ in range(500):
            n = int(self.rng.integers(2, 7))
            psi = float(self.rng.uniform(1.0, 4.0))
            if self.rng.random() < 0.5:
                A = random_doubly_stochastic(n, self.rng)
            else:
                A = _random_stochastic(n, self.rng)
            if check_balanced_asymmetry(A, psi).holds:
                checked += 1
                assert check_cut_balance(A, psi).holds
        assert checked > 0


# ---------------------------------------------------------------------------
# P* estimate and chain certificates
# ---------------------------------------------------------------------------

class TestPstar:

    def test_doubly_stochastic(self):
        assert pstar_estimate(gen_doubly_stochastic(4, seed=1), 30) == pytest.approx(0.25)

    def test_identity(self):
        assert pstar_estimate(identity_chain(5), 10) == pytest.approx(0.2)

    def test_lazy_vanishing(self):
        assert pstar_estimate(static_chain(LAZY), 20) == pytest.approx(2.0 ** -21, rel=1e-9)

    def test_horizon(self):
        with pytest.raises(DomainError):
            pstar_estimate(identity_chain(2), 0)


class TestChainCertificate:

    def test_cut_balanced_family(self):
        spec = gen_self_confident_cut_balanced(4, seed=3, delta=0.3, psi=2.0)
        assert chain_certificate(spec, 15, "cut_balance", 2.0).holds

    def test_balanced_family(self):
        spec = gen_balanced_asymmetric(3, seed=1)
        assert chain_certificate(spec, 15, "balanced_asymmetry", 1.0).holds

    def test_first_failing_step(self):
        spec = explicit_chain([AVG, AVG, SWAP], TailPolicy.REPEAT_LAST)
        cert = chain_certificate(spec, 5, "weak_aperiodicity", 0.25)
        assert not cert.holds
        assert cert.witness.step == 2

    def test_unknown_property(self):
        with pytest.raises(DomainError):
            chain_certificate(identity_chain(2), 3, "ergodicity", 1.0)


# ---------------------------------------------------------------------------
# Bounds are monotone and witnesses re-check
# ---------------------------------------------------------------------------

def _mask(labels, n):
    S = np.zeros(n, dtype=bool)
    S[np.array(labels) - 1] = True
    return S


class TestMonotoneBounds:

    @pytest.mark.parametrize("seed", range(10))
    def test_cut_balance_survives_larger_psi(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(20):
            A = _random_stochastic(int(rng.integers(2, 6)), rng)
            psi = min_cut_balance(A)
            if np.isinf(psi):
                continue
            for larger in (psi, 1.5 * psi, 10.0 * psi):
                assert check_cut_balance(A, larger).holds

    @pytest.mark.parametrize("seed", range(10))
    def test_balanced_asymmetry_survives_larger_psi(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(20):
            A = random_doubly_stochastic(int(rng.integers(2, 6)), rng)
            psi = float(rng.uniform(1.0, 3.0))
            if check_balanced_asymmetry(A, psi).holds:
                assert check_balanced_asymmetry(A, 2.0 * psi).holds
            else:
                assert not check_balanced_asymmetry(A, 1.0).holds

    @pytest.mark.parametrize("seed", range(10))
    def test_weak_aperiodicity_survives_smaller_gamma(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(20):
            A = _random_stochastic(int(rng.integers(2, 6)), rng)
            gamma = max_weak_aperiodicity(A)
            if np.isinf(gamma) or gamma <= 0.0:
                continue
            for smaller in (gamma, 0.5 * gamma, 1e-3 * gamma):
                assert check_weak_aperiodicity(A, smaller).holds


class TestWitnessesRecheck:

    @pytest.mark.parametrize("seed", range(5))
    def test_cut_balance(self, seed):
        rng = np.random.default_rng(seed)
        found = 0
        for _ in range(50):
            n = int(rng.integers(2, 6))
            A = _random_stochastic(n, rng)
            cert = check_cut_balance(A, 1.0)
            if cert.holds:
                continue
            found += 1
            S = _mask(cert.witness.subset, n)
            inflow = A[np.ix_(~S, S)].sum()
            outflow = A[np.ix_(S, ~S)].sum()
            assert inflow == pytest.approx(cert.witness.lhs)
            assert outflow == pytest.approx(cert.witness.rhs)
            assert inflow > outflow
        assert found > 0

    @pytest.mark.parametrize("seed", range(5))
    def test_balanced_asymmetry(self, seed):
        rng = np.random.default_rng(seed)
        found = 0
        for _ in range(50):
            n = int(rng.integers(2, 6))
            A = _random_stochastic(n, rng)
            cert = check_balanced_asymmetry(A, 1.0)
            if cert.holds:
                continue
            found += 1
            S1 = _mask(cert.witness.subset, n)
            S2 = _mask(cert.witness.subset2, n)
            assert S1.sum() == S2.sum()
            lhs = A[np.ix_(~S1, S2)].sum()
            rhs = A[np.ix_(S1, ~S2)].sum()
            assert lhs == pytest.approx(cert.witness.lhs)
            assert rhs == pytest.approx(cert.witness.rhs)
            assert lhs > rhs
        assert found > 0

    @pytest.mark.parametrize("seed", range(5))
    def test_weak_aperiodicity(self, seed):
        rng = np.random.default_rng(seed)
        found = 0
        for _ in range(50):
            A = _random_stochastic(int(rng.integers(2, 6)), rng)
            cert = check_weak_aperiodicity(A, 0.9)
            if cert.holds:
                continue
            found += 1
            i, j = (k - 1 for k in cert.witness.pair)
            assert i != j
            best = float(np.max(A[:, i] * A[:, j]))
            assert best == pytest.approx(cert.witness.lhs)
            assert best < 0.9 * A[i, j]
        assert found > 0
