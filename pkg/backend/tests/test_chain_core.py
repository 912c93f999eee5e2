"""
Tests for stochastic-matrix validation, chain realization, backward products
and state simulation.
"""

import numpy as np
import pytest

from app.config import ChainKind, TailPolicy
from app.engine.chain_core import (
    backward_product,
    explicit_chain,
    identity_chain,
    matrix_at,
    periodic_chain,
    realize,
    simulate,
    static_chain,
    step_states,
    validate_stochastic,
)
from app.engine.generators import (
    gen_balanced_asymmetric,
    gen_doubly_stochastic,
    gen_gossip,
    gen_self_confident_cut_balanced,
    gen_two_leader,
)
from app.errors import (
    DimensionMismatchError,
    DomainError,
    NegativeEntryError,
    RowSumError,
)
from app.models.chain import ChainSpec, StateVector

AVG = [[0.5, 0.5], [0.5, 0.5]]
LAZY = [[1.0, 0.0], [0.5, 0.5]]
SWAP = [[0.0, 1.0], [1.0, 0.0]]

GENERATED = [
    gen_doubly_stochastic(4, seed=0),
    gen_self_confident_cut_balanced(5, seed=1),
    gen_self_confident_cut_balanced(6, seed=2, blocks=2),
    gen_two_leader(5, seed=3),
    gen_balanced_asymmetric(4, seed=4),
    gen_gossip(6, seed=5, weight=0.3),
]


def _state(*values):
    return StateVector(values=tuple(float(v) for v in values))


# ---------------------------------------------------------------------------
# validate_stochastic
# ---------------------------------------------------------------------------

class TestValidateStochastic:

    def test_identity_ok(self):
        m = validate_stochastic([[1, 0], [0, 1]], tol=1e-9)
        assert m.n == 2
        assert m.entries == ((1.0, 0.0), (0.0, 1.0))

    def test_row_sum_error_names_row(self):
        with pytest.raises(RowSumError) as exc:
            validate_stochastic([[0.5, 0.5], [0.6, 0.5]])
        assert exc.value.row == 2
        assert exc.value.deviation == pytest.approx(0.1)
        assert "Row 2" in str(exc.value)

    def test_negative_entry_located(self):
        with pytest.raises(NegativeEntryError) as exc:
            validate_stochastic([[0.5, -0.1], [0.5, 0.5]])
        assert (exc.value.row, exc.value.col) == (1, 2)

    def test_negative_reported_before_row_sum(self):
        # row 1 also fails its sum; the sign check comes first
        with pytest.raises(NegativeEntryError):
            validate_stochastic([[0.5, -0.1], [0.6, 0.5]])

    def test_tolerance_respected(self):
        validate_stochastic([[0.5, 0.5 + 1e-10], [0.5, 0.5]])
        with pytest.raises(RowSumError):
            validate_stochastic([[0.5, 0.5 + 1e-6], [0.5, 0.5]])

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError):
            validate_stochastic([[1.0, 0.0]])

    def test_ragged(self):
        with pytest.raises(DimensionMismatchError):
            validate_stochastic([[1.0, 0.0], [1.0]])

    def test_non_finite(self):
        with pytest.raises(DomainError):
            validate_stochastic([[np.nan, 1.0], [0.0, 1.0]])

    def test_nonpositive_tolerance(self):
        with pytest.raises(DomainError):
            validate_stochastic(AVG, tol=0.0)

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            validate_stochastic([[0.5, 0.5], [0.6, 0.5]])


# ---------------------------------------------------------------------------
# Chain specs and matrix_at
# ---------------------------------------------------------------------------

class TestMatrixAt:

    def setup_method(self):
        self.A0 = np.array(AVG)
        self.A1 = np.array(LAZY)

    def test_static_constant(self):
        spec = static_chain(self.A0)
        assert matrix_at(spec, 7).as_array() == pytest.approx(self.A0)

    def test_periodic_index(self):
        spec = periodic_chain([self.A0, self.A1])
        assert matrix_at(spec, 3).as_array() == pytest.approx(self.A1)
        assert matrix_at(spec, 4).as_array() == pytest.approx(self.A0)

    def test_explicit_repeat_last(self):
        spec = explicit_chain([self.A0], TailPolicy.REPEAT_LAST)
        assert matrix_at(spec, 5).as_array() == pytest.approx(self.A0)

    def test_explicit_cycle(self):
        spec = explicit_chain([self.A0, self.A1], TailPolicy.CYCLE)
        assert matrix_at(spec, 5).as_array() == pytest.approx(self.A1)

    def test_explicit_identity_tail(self):
        spec = explicit_chain([self.A1], TailPolicy.IDENTITY)
        assert matrix_at(spec, 0).as_array() == pytest.approx(self.A1)
        assert matrix_at(spec, 1).as_array() == pytest.approx(np.eye(2))

    def test_negative_step(self):
        with pytest.raises(DomainError):
            matrix_at(static_chain(self.A0), -1)

    def test_realize_shape(self):
        stack = realize(periodic_chain([self.A0, self.A1]), 5, start=1)
        assert stack.shape == (5, 2, 2)
        assert stack[0] == pytest.approx(self.A1)
        assert stack[1] == pytest.approx(self.A0)

    def test_explicit_needs_tail(self):
        with pytest.raises(ValueError):
            ChainSpec(
                n=2,
                kind=ChainKind.EXPLICIT,
                matrices=(validate_stochastic(self.A0),),
            )

    def test_size_mismatch_in_chain(self):
        with pytest.raises(ValueError):
            periodic_chain([self.A0, np.eye(3)])


# ---------------------------------------------------------------------------
# step_states
# ---------------------------------------------------------------------------

class TestStepStates:

    def test_identity(self):
        assert step_states(np.eye(2), _state(1, 2)).values == (1.0, 2.0)

    def test_averaging(self):
        assert step_states(AVG, _state(0, 2)).values == pytest.approx((1.0, 1.0))

    def test_lazy(self):
        assert step_states(LAZY, _state(4, 0)).values == pytest.approx((4.0, 2.0))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            step_states(AVG, _state(1, 2, 3))


# ---------------------------------------------------------------------------
# backward_product
# ---------------------------------------------------------------------------

class TestBackwardProduct:

    def test_identity_powers(self):
        P = backward_product(identity_chain(3), 0, 9)
        assert P.as_array() == pytest.approx(np.eye(3))

    def test_rank_one_idempotent(self):
        P = backward_product(static_chain(AVG), 0, 1)
        assert P.as_array() == pytest.approx(np.array(AVG))

    @pytest.mark.parametrize("k", range(0, 31))
    def test_lazy_closed_form(self, k):
        P = backward_product(static_chain(LAZY), 0, k).as_array()
        expected = np.array([[1.0, 0.0], [1.0 - 2.0 ** -(k + 1), 2.0 ** -(k + 1)]])
        assert P == pytest.approx(expected, abs=1e-12)

    def test_lazy_matches_direct_multiplication(self):
        A = np.array(LAZY)
        direct = np.eye(2)
        for _ in range(5):
            direct = A @ direct
        assert backward_product(static_chain(LAZY), 0, 4).as_array() == pytest.approx(direct)

    def test_swap_parity(self):
        spec = static_chain(SWAP)
        assert backward_product(spec, 0, 3).as_array() == pytest.approx(np.eye(2))
        assert backward_product(spec, 0, 4).as_array() == pytest.approx(np.array(SWAP))

    def test_order_is_latest_on_the_left(self):
        A0, A1 = np.array(LAZY), np.array(SWAP)
        spec = explicit_chain([A0, A1], TailPolicy.IDENTITY)
        assert backward_product(spec, 0, 1).as_array() == pytest.approx(A1 @ A0)

    def test_single_factor(self):
        spec = periodic_chain([AVG, LAZY])
        assert backward_product(spec, 1, 1).as_array() == pytest.approx(np.array(LAZY))

    def test_bad_range(self):
        with pytest.raises(DomainError):
            backward_product(static_chain(AVG), 3, 2)

    @pytest.mark.parametrize("spec", GENERATED, ids=lambda s: s.family.value)
    def test_one_more_factor_on_the_left(self, spec):
        for n0, n in [(0, 0), (0, 6), (3, 10)]:
            before = backward_product(spec, n0, n).as_array()
            after = backward_product(spec, n0, n + 1).as_array()
            assert after == pytest.approx(matrix_at(spec, n + 1).as_array() @ before, abs=1e-12)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

class TestSimulate:

    def test_identity_constant(self):
        traj = simulate(identity_chain(2), _state(3, 7), 10)
        assert traj.horizon == 10
        assert len(traj.states) == 11
        assert all(s.values == (3.0, 7.0) for s in traj.states)
        assert traj.spread == [4.0] * 11

    def test_one_step_consensus(self):
        traj = simulate(static_chain(AVG), _state(0, 2), 2)
        assert traj.states[1].values == pytest.approx((1.0, 1.0))
        assert traj.states[2].values == pytest.approx((1.0, 1.0))
        assert traj.spread[-1] == pytest.approx(0.0)

    def test_swap_alternates(self):
        traj = simulate(static_chain(SWAP), _state(0, 1), 4)
        raw = [s.values for s in traj.states]
        assert raw == [(0.0, 1.0), (1.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
        assert all(z == [0.0, 1.0] for z in traj.sorted_states)

    def test_matches_backward_product(self):
        spec = periodic_chain([AVG, LAZY, SWAP])
        x0 = np.array([2.0, -1.0])
        traj = simulate(spec, _state(*x0), 7)
        P = backward_product(spec, 0, 6).as_array()
        assert traj.as_array()[-1] == pytest.approx(P @ x0)

    @pytest.mark.parametrize("spec", GENERATED, ids=lambda s: s.family.value)
    def test_spread_never_increases(self, spec):
        x0 = np.random.default_rng(spec.seed).uniform(-5.0, 5.0, spec.n)
        traj = simulate(spec, _state(*x0), 200)
        steps = np.diff(traj.spread)
        assert np.all(steps <= 1e-12)
        for z, s in zip(traj.sorted_states, traj.states):
            assert z == sorted(s.values)

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatchError):
            simulate(static_chain(AVG), _state(1, 2, 3), 3)

    def test_non_finite_state(self):
        with pytest.raises(ValueError):
            _state(np.inf, 0.0)
