"""
Seeded property sweeps over generated fixtures: matching bounds, the V/U
sandwich, islands as ergodic classes, two-leader counterexamples and
sorted-state convergence.

Fixtures are materialized once with `_frozen` so the per-pair jet scans do
not redraw (and re-verify) every matrix.
"""

import itertools

import numpy as np
import pytest

from app.config import TailPolicy, Verdict
from app.engine.absprob import backward_abs_prob
from app.engine.analysis import classify, sorted_state_convergence
from app.engine.chain_core import explicit_chain, realize, simulate, static_chain
from app.engine.families.two_leader import leader_blocks
from app.engine.flow import jet_interaction_total, jet_v_total
from app.engine.generators import (
    gen_balanced_asymmetric,
    gen_periodic_swap,
    gen_self_confident_cut_balanced,
    gen_two_leader,
)
from app.engine.matching import (
    delta_bound,
    normalize_chain,
    normalized_spec,
    pullback_abs_prob,
    self_confident_permutation,
)
from app.engine.properties import pstar_estimate
from app.models.chain import StateVector
from app.models.flow import Jet

CYCLE3 = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]


def _frozen(spec, T):
    return explicit_chain(realize(spec, T), TailPolicy.IDENTITY)


def _singleton_pairs(n, T):
    for i, j in itertools.combinations(range(1, n + 1), 2):
        yield Jet.constant(n, [i], T), Jet.constant(n, [j], T)


# ---------------------------------------------------------------------------
# Matching on permuted doubly stochastic fixtures
# ---------------------------------------------------------------------------

class TestMatchingSweep:

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_closed_bound(self, n):
        bound = 4.0 / (n * n + 4 * n - 4)
        assert delta_bound(1.0, n) == bound
        for A in realize(gen_balanced_asymmetric(n, seed=n), 200):
            assert min(self_confident_permutation(A, 1.0).matched_entries) >= bound

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_normalization_and_pullback(self, n):
        T = 50
        spec = _frozen(gen_balanced_asymmetric(n, seed=n), T)
        chain = normalize_chain(spec, 1.0, T)
        diagonals = np.diagonal(chain.as_array(), axis1=1, axis2=2)
        assert np.all(diagonals >= delta_bound(1.0, n))
        pi_B = backward_abs_prob(normalized_spec(chain), T)
        seq = pullback_abs_prob(pi_B, chain.perms, spec).as_array()
        stack = realize(spec, T)
        residual = np.max(np.abs(seq[:-1] - np.einsum("ni,nij->nj", seq[1:], stack)))
        assert residual <= 1e-9


# ---------------------------------------------------------------------------
# p* U <= V <= U on self-confident cut-balanced fixtures
# ---------------------------------------------------------------------------

class TestSandwichSweep:

    @pytest.mark.parametrize("seed", range(20))
    def test_singleton_jets(self, seed):
        T = 500
        n = 2 + seed % 5
        spec = _frozen(gen_self_confident_cut_balanced(n, seed=seed, psi=1.0 + seed % 3), T)
        pi = backward_abs_prob(spec, T)
        p_star = pstar_estimate(spec, T)
        for Js, Jk in _singleton_pairs(n, T):
            U = np.array(jet_interaction_total(spec, Js, Jk, T).partial_sums)
            V = np.array(jet_v_total(spec, pi, Js, Jk, T).partial_sums)
            assert np.all(p_star * U <= V + 1e-9)
            assert np.all(V <= U + 1e-9)


# ---------------------------------------------------------------------------
# Self-confident cut-balanced chains: classes are the islands
# ---------------------------------------------------------------------------

class TestIslandsAreClasses:

    @pytest.mark.parametrize("seed", range(50))
    def test_classes_match_islands(self, seed):
        n = 2 + seed % 7
        blocks = 1 + seed % 3 if n >= 3 else 1
        spec = gen_self_confident_cut_balanced(n, seed=seed, delta=0.2, blocks=blocks)
        report = classify(spec, 2000, 1e-6, theta=50.0)
        assert report.verdict in (Verdict.ERGODIC, Verdict.CLASS_ERGODIC)
        assert report.clusters == report.islands


# ---------------------------------------------------------------------------
# Two disjoint leaders rule out consensus
# ---------------------------------------------------------------------------

class TestTwoLeaderSweep:

    @pytest.mark.parametrize("n, seed", [(2, 0), (3, 1), (4, 2), (5, 3), (6, 4)])
    def test_never_ergodic(self, n, seed):
        T = 500
        spec = gen_two_leader(n, seed=seed)
        first, second = leader_blocks(n)
        x0 = [0.0] * len(first) + [1.0] * len(second)
        traj = simulate(spec, StateVector(values=tuple(x0)), T)
        assert traj.spread[-1] == pytest.approx(1.0)
        assert classify(spec, T, 1e-6).verdict != Verdict.ERGODIC

        Js, Jk = Jet.constant(n, first, T), Jet.constant(n, second, T)
        pi = backward_abs_prob(spec, T)
        assert jet_interaction_total(spec, Js, Jk, T).total == 0.0
        assert jet_v_total(spec, pi, Js, Jk, T).total == 0.0


# ---------------------------------------------------------------------------
# Sorted states converge on balanced asymmetric chains
# ---------------------------------------------------------------------------

class TestSortedConvergenceSweep:

    @pytest.mark.parametrize("seed", range(20))
    def test_generated(self, seed):
        n = 2 + seed % 5
        x0 = np.random.default_rng(seed).uniform(-1.0, 1.0, n)
        traj = simulate(gen_balanced_asymmetric(n, seed=seed), StateVector(values=tuple(x0)), 2000)
        assert sorted_state_convergence(traj, 1e-6).passed

    @pytest.mark.parametrize("spec", [gen_periodic_swap(), static_chain(CYCLE3)])
    def test_permutation_chains_not_ergodic(self, spec):
        x0 = tuple(float(i) for i in range(spec.n))
        traj = simulate(spec, StateVector(values=x0), 2000)
        assert sorted_state_convergence(traj, 1e-6).passed
        assert classify(spec, 2000, 1e-6).verdict != Verdict.ERGODIC
