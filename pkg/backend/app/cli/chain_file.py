"""
Chain-file ingestion.

Schema (JSON):

    {"n": 2, "kind": "static", "matrices": [[0.5, 0.5], [0.5, 0.5]]}
    {"n": 3, "kind": "explicit", "matrices": [[[...]], ...], "tail": "identity"}
    {"family": "doubly_stochastic", "n": 4, "seed": 7, "params": {...}}

`kind` may be omitted: a `family` makes it a generator, a single matrix makes
it static. A `gen` report is accepted too; its result.chain is used.
"""

import json
import logging
from pathlib import Path
from typing import Any

from app.config import ChainKind, GeneratorFamily, TailPolicy, ROW_SUM_TOL
from app.engine.chain_core import (
    explicit_chain,
    periodic_chain,
    static_chain,
    validate_stochastic,
)
from app.engine.generators import generate
from app.errors import ChainFileError
from app.models.chain import ChainSpec
from app.models.generators import GeneratorParams

logger = logging.getLogger(__name__)


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list)
        and bool(value)
        and all(isinstance(row, list) and all(isinstance(x, (int, float)) for x in row) for row in value)
    )


def _matrices(data: dict) -> list:
    raw = data.get("matrices")
    if raw is None:
        raise ChainFileError("missing", field="matrices")
    if _is_matrix(raw):
        return [raw]
    if isinstance(raw, list) and raw and all(_is_matrix(m) for m in raw):
        return raw
    raise ChainFileError("expected a matrix or a list of matrices of numbers", field="matrices")


def _enum(cls, data: dict, field: str):
    try:
        return cls(data[field])
    except ValueError:
        allowed = ", ".join(e.value for e in cls)
        raise ChainFileError(f"'{data[field]}' is not one of {allowed}", field=field) from None


def chain_to_dict(spec: ChainSpec) -> dict[str, Any]:
    """Inverse of parse_chain_dict for writing chain files."""
    if spec.kind == ChainKind.GENERATOR:
        return {
            "kind": spec.kind.value,
            "n": spec.n,
            "family": spec.family.value,
            "params": dict(spec.params),
            "seed": spec.seed,
        }
    out: dict[str, Any] = {
        "kind": spec.kind.value,
        "n": spec.n,
        "matrices": [[list(row) for row in m.entries] for m in spec.matrices],
    }
    if spec.tail is not None:
        out["tail"] = spec.tail.value
    return out


def parse_chain_dict(data: Any, tol: float = ROW_SUM_TOL) -> ChainSpec:
    if not isinstance(data, dict):
        raise ChainFileError("top level must be an object")
    if "config" in data and isinstance(data.get("result"), dict) and "chain" in data["result"]:
        data = data["result"]["chain"]

    if "kind" in data:
        kind = _enum(ChainKind, data, "kind")
    elif "family" in data:
        kind = ChainKind.GENERATOR
    else:
        kind = ChainKind.STATIC

    n = data.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        raise ChainFileError(f"expected a positive integer, got {n!r}", field="n")

    if kind == ChainKind.GENERATOR:
        if "family" not in data:
            raise ChainFileError("generator chains need a family", field="family")
        if n is None:
            raise ChainFileError("generator chains need n", field="n")
        seed = data.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ChainFileError(f"expected a nonnegative integer, got {seed!r}", field="seed")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ChainFileError("expected an object", field="params")
        family = _enum(GeneratorFamily, data, "family")
        return generate(GeneratorParams.from_chain_params(family, n, seed, params))

    matrices = [validate_stochastic(m, tol) for m in _matrices(data)]
    size = matrices[0].n
    if n is not None and n != size:
        raise ChainFileError(f"n = {n} but matrices are {size}x{size}", field="n")

    if kind == ChainKind.STATIC:
        if len(matrices) != 1:
            raise ChainFileError("static chains hold exactly one matrix", field="matrices")
        return static_chain(matrices[0])
    if kind == ChainKind.PERIODIC:
        return periodic_chain(matrices)
    if "tail" not in data:
        raise ChainFileError("explicit chains need a tail policy", field="tail")
    tail = _enum(TailPolicy, data, "tail")
    return explicit_chain(matrices, tail)


def parse_chain_file(path: str | Path, tol: float = ROW_SUM_TOL) -> ChainSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ChainFileError(e.msg, line=e.lineno) from e
    spec = parse_chain_dict(data, tol)
    logger.debug("loaded %s chain with N=%d from %s", spec.kind.value, spec.n, path)
    return spec
