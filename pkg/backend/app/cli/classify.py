"""
CLI commands: ergodicity verdicts (classify, dsdecompose).
"""

from typing import Optional

from app.engine.analysis import classify, ds_decompose
from app.models.chain import ChainSpec
from app.models.run_config import CommandOutcome, RunConfig


def run_classify(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    report = classify(spec, config.horizon, config.eps, config.theta)
    return CommandOutcome(
        result=report.model_dump(mode="json"),
        residuals={"cauchy": report.cauchy_residual},
        warnings=report.warnings,
        verdict=report.verdict,
    )


def run_dsdecompose(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    report, clusters = ds_decompose(
        spec, config.horizon, config.eps, probes=config.probes, seed=config.seed
    )
    warnings = list(report.warnings)
    warnings += [w for w in clusters.warnings if w not in warnings]
    return CommandOutcome(
        result={
            "decomposition": report.model_dump(mode="json"),
            "clusters": clusters.model_dump(mode="json"),
            "cluster_count": report.cluster_count,
            "null_jet": report.null_jet,
        },
        residuals={"cauchy": report.cauchy_residual, "cluster_spread": clusters.residual},
        warnings=warnings,
        verdict=report.verdict,
    )
