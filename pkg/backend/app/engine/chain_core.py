"""
Chain realization, backward products and state simulation.

The update is X(n+1) = A(n) X(n) with every A(n) row-stochastic, so each new
state is a convex combination of the previous one. Backward products

    A(n) A(n-1) ... A(n0)

map X(n0) to X(n+1).

Public operations take and return the pydantic models; the `*_array` helpers
are the numpy fast paths the other engine modules build on.
"""

import logging
from typing import Sequence, Union

import numpy as np

from app.config import ChainKind, TailPolicy, ROW_SUM_TOL, PRODUCT_TOL_PER_STEP
from app.engine.families import get_family
from app.errors import (
    NegativeEntryError,
    RowSumError,
    DimensionMismatchError,
    DomainError,
)
from app.models.chain import ChainSpec, StochasticMatrix, StateVector, TrajectoryRecord
from app.models.generators import GeneratorParams

logger = logging.getLogger(__name__)

MatrixLike = Union[StochasticMatrix, np.ndarray, Sequence[Sequence[float]]]


def to_array(A: MatrixLike) -> np.ndarray:
    if isinstance(A, StochasticMatrix):
        return A.as_array()
    return np.asarray(A, dtype=float)


def validate_stochastic(entries: MatrixLike, tol: float = ROW_SUM_TOL) -> StochasticMatrix:
    """
    Validate a square nonnegative matrix with unit row sums.

    Raises NegativeEntryError at the first negative entry (row-major order) and
    RowSumError at the first row whose sum deviates from 1 by more than tol.
    Indices in the errors are 1-based.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    try:
        A = to_array(entries)
    except ValueError as e:
        raise DimensionMismatchError(f"entries are not a rectangular array: {e}") from e
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix entries must be finite")

    negative = np.argwhere(A < 0.0)
    if negative.size:
        i, j = negative[0]
        raise NegativeEntryError(int(i) + 1, int(j) + 1, float(A[i, j]))

    deviation = A.sum(axis=1) - 1.0
    bad = np.flatnonzero(np.abs(deviation) > tol)
    if bad.size:
        r = bad[0]
        raise RowSumError(int(r) + 1, float(deviation[r]), tol)

    return StochasticMatrix(n=A.shape[0], entries=tuple(tuple(row) for row in A.tolist()))


# ---------------------------------------------------------------------------
# Chain constructors
# ---------------------------------------------------------------------------

def _validated(matrices: Sequence[MatrixLike]) -> tuple[StochasticMatrix, ...]:
    return tuple(
        m if isinstance(m, StochasticMatrix) else validate_stochastic(m) for m in matrices
    )


def static_chain(A: MatrixLike) -> ChainSpec:
    m = _validated([A])
    return ChainSpec(n=m[0].n, kind=ChainKind.STATIC, matrices=m)


def periodic_chain(matrices: Sequence[MatrixLike]) -> ChainSpec:
    m = _validated(matrices)
    if not m:
        raise DomainError("periodic chains need at least one matrix")
    return ChainSpec(n=m[0].n, kind=ChainKind.PERIODIC, matrices=m)


def explicit_chain(matrices: Sequence[MatrixLike], tail: TailPolicy) -> ChainSpec:
    m = _validated(matrices)
    if not m:
        raise DomainError("explicit chains need at least one matrix")
    return ChainSpec(n=m[0].n, kind=ChainKind.EXPLICIT, matrices=m, tail=TailPolicy(tail))


def identity_chain(n: int) -> ChainSpec:
    return static_chain(np.eye(n))


def generator_params(spec: ChainSpec) -> GeneratorParams:
    """Validated family parameters of a generator chain."""
    params = GeneratorParams.from_chain_params(spec.family, spec.n, spec.seed, spec.params)
    get_family(spec.family).validate(params)
    return params


# ---------------------------------------------------------------------------
# Realization
# ---------------------------------------------------------------------------

def _stored_index(spec: ChainSpec, n: int) -> int | None:
    """Index into spec.matrices for step n, or None for an identity tail."""
    count = len(spec.matrices)
    if spec.kind == ChainKind.STATIC:
        return 0
    if spec.kind == ChainKind.PERIODIC:
        return n % count
    if n < count:
        return n
    if spec.tail == TailPolicy.REPEAT_LAST:
        return count - 1
    if spec.tail == TailPolicy.CYCLE:
        return n % count
    return None


def array_at(spec: ChainSpec, n: int) -> np.ndarray:
    """A(n) as a numpy array."""
    if n < 0:
        raise DomainError(f"step must be >= 0, got {n}")
    if spec.kind == ChainKind.GENERATOR:
        A, _ = get_family(spec.family).draw(generator_params(spec), n)
        return A
    idx = _stored_index(spec, n)
    if idx is None:
        return np.eye(spec.n)
    return spec.matrices[idx].as_array()


def matrix_at(spec: ChainSpec, n: int) -> StochasticMatrix:
    """Deterministic realization of A(n)."""
    if spec.kind == ChainKind.GENERATOR:
        return validate_stochastic(array_at(spec, n))
    if n < 0:
        raise DomainError(f"step must be >= 0, got {n}")
    idx = _stored_index(spec, n)
    if idx is None:
        return validate_stochastic(np.eye(spec.n))
    return spec.matrices[idx]


def realize(spec: ChainSpec, T: int, start: int = 0) -> np.ndarray:
    """Stack of A(start), ..., A(start + T - 1), shape (T, N, N)."""
    if T < 0 or start < 0:
        raise DomainError(f"need T >= 0 and start >= 0, got T={T}, start={start}")
    if spec.kind == ChainKind.GENERATOR:
        family = get_family(spec.family)
        params = generator_params(spec)
        stack = np.empty((T, spec.n, spec.n))
        for k in range(T):
            stack[k], _ = family.draw(params, start + k)
        return stack

    arrays = [m.as_array() for m in spec.matrices]
    eye = np.eye(spec.n)
    stack = np.empty((T, spec.n, spec.n))
    for k in range(T):
        idx = _stored_index(spec, start + k)
        stack[k] = eye if idx is None else arrays[idx]
    return stack


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

def step_states(A: MatrixLike, x: StateVector) -> StateVector:
    """One consensus update y = A x."""
    M = to_array(A)
    v = x.as_array()
    if M.shape != (v.size, v.size):
        raise DimensionMismatchError(
            f"matrix of shape {M.shape} cannot act on {v.size} states"
        )
    return StateVector(values=tuple((M @ v).tolist()))


def backward_product_array(stack: np.ndarray) -> np.ndarray:
    """stack[-1] @ ... @ stack[0] for a realized stack."""
    n = stack.shape[1]
    product = np.eye(n)
    for A in stack:
        product = A @ product
    return product


def backward_product(spec: ChainSpec, n0: int, n: int) -> StochasticMatrix:
    """A(n) A(n-1) ... A(n0), re-validated with a length-scaled row-sum tolerance."""
    if not n >= n0 >= 0:
        raise DomainError(f"need n >= n0 >= 0, got n0={n0}, n={n}")
    factors = n - n0 + 1
    product = backward_product_array(realize(spec, factors, start=n0))
    return validate_stochastic(product, tol=PRODUCT_TOL_PER_STEP * factors)


def simulate_array(stack: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """States X(0..T) as a (T+1, N) array for a realized stack."""
    states = np.empty((stack.shape[0] + 1, x0.size))
    states[0] = x0
    for k, A in enumerate(stack):
        states[k + 1] = A @ states[k]
    return states


def simulate(spec: ChainSpec, x0: StateVector, T: int) -> TrajectoryRecord:
    """Iterate X(n+1) = A(n) X(n) for n = 0..T-1."""
    if T < 0:
        raise DomainError(f"horizon must be >= 0, got {T}")
    x = x0.as_array()
    if x.size != spec.n:
        raise DimensionMismatchError(
            f"initial state has {x.size} entries, chain has {spec.n} agents"
        )
    logger.debug("simulating %s chain, N=%d, T=%d", spec.kind.value, spec.n, T)

    states = simulate_array(realize(spec, T), x)
    return TrajectoryRecord(
        horizon=T,
        states=[StateVector(values=tuple(row)) for row in states.tolist()],
        spread=(states.max(axis=1) - states.min(axis=1)).tolist(),
        sorted_states=np.sort(states, axis=1).tolist(),
    )
