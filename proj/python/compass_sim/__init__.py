"""Deterministic simulator for cache-aware DAG workflow scheduling.

The heavy lifting lives in the compiled extension ``_compass_sim``; this
package re-exports its public surface and adds small conveniences.
"""

from ._compass_sim import (
    JobRecord,
    RunSummary,
    SimResult,
    SummaryRow,
    WorkerReport,
    builtin_dfg_ids,
    lower_bound,
    run_simulation,
    slow_down_factor,
    summarize,
)

__all__ = [
    "JobRecord",
    "RunSummary",
    "SimResult",
    "SummaryRow",
    "WorkerReport",
    "builtin_dfg_ids",
    "lower_bound",
    "run_simulation",
    "run_summary",
    "slow_down_factor",
    "summarize",
]


def run_summary(config: dict) -> RunSummary:
    """Run one simulation and return its aggregate summary."""
    return summarize(run_simulation(config))
