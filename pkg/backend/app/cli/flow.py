"""
CLI commands: flow-graph islands and constant-jet scans.
"""

from typing import Optional

from app.engine.flow import flow_graph, islands_from_weights, static_jet_flow_scan
from app.models.chain import ChainSpec
from app.models.run_config import CommandOutcome, RunConfig


def run_islands(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    graph = flow_graph(spec, config.horizon)
    blocks = islands_from_weights(graph.as_array(), config.theta)
    return CommandOutcome(
        result={
            "horizon": graph.horizon,
            "threshold": config.theta,
            "blocks": blocks,
            "weights": graph.weights,
        },
    )


def run_scanjets(config: RunConfig, spec: Optional[ChainSpec]) -> CommandOutcome:
    scan = static_jet_flow_scan(spec, config.horizon, within=config.within)
    return CommandOutcome(
        result=scan.model_dump(mode="json"),
        residuals={"minimum": scan.minimum},
        series_header=["t", "U"],
        series=[[t, value] for t, value in enumerate(scan.series, start=1)],
    )
