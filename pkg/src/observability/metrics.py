"""
Metrics Tracking Module
Per-run metrics records, the campaign CSV and the per-cell median summary.
"""
import logging
from pathlib import Path as FilePath
from typing import Iterable, List, Optional, Union

import pandas as pd
from pydantic import BaseModel, model_validator

from ..planning import PlannerKind, PlanResult
from ..world import Scenario

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "planner",
    "scenario_kind",
    "obstacle_count",
    "seed",
    "node_count",
    "total_path_cost",
    "average_path_cost",
    "success",
    "config_digest",
    "elapsed_seconds",
]

# wall-clock columns, masked when comparing runs
NONDETERMINISTIC_COLUMNS = ("elapsed_seconds", "median_elapsed_seconds")

_FLOAT_COLUMNS = ["total_path_cost", "average_path_cost", "elapsed_seconds"]


class MetricsRecord(BaseModel):
    """One CSV row: a single planner run on a single scenario."""
    planner: PlannerKind
    scenario_kind: str
    obstacle_count: int
    seed: int
    node_count: int
    elapsed_seconds: float
    total_path_cost: Optional[float] = None
    average_path_cost: Optional[float] = None
    success: bool
    config_digest: str
    scenario_digest: str = ""
    trial: int = 0

    @model_validator(mode="after")
    def _costs_match_success(self) -> "MetricsRecord":
        if not self.success and (self.total_path_cost is not None or self.average_path_cost is not None):
            raise ValueError("failed runs carry no path costs")
        if self.success and self.total_path_cost is None:
            raise ValueError("successful runs need a total path cost")
        return self

    @classmethod
    def from_result(cls, result: PlanResult, scenario: Scenario, trial: int = 0) -> "MetricsRecord":
        metrics = result.metrics
        return cls(
            planner=result.planner,
            scenario_kind=scenario.kind.value,
            obstacle_count=len(scenario.obstacles),
            seed=result.seed,
            node_count=metrics.node_count,
            elapsed_seconds=metrics.elapsed_seconds,
            total_path_cost=metrics.total_path_cost if result.success else None,
            average_path_cost=metrics.average_path_cost if result.success else None,
            success=result.success,
            config_digest=result.config_digest,
            scenario_digest=result.scenario_digest,
            trial=trial,
        )


def records_frame(records: Iterable[MetricsRecord]) -> pd.DataFrame:
    """Records as a frame in CSV column order, sorted by (kind, count, trial, planner)."""
    rows = [record.model_dump(mode="json") for record in records]
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS + ["scenario_digest", "trial"])
    # all-failure cells would otherwise leave these as object columns
    frame[_FLOAT_COLUMNS] = frame[_FLOAT_COLUMNS].astype(float)
    frame = frame.sort_values(
        ["scenario_kind", "obstacle_count", "trial", "planner"], kind="mergesort"
    ).reset_index(drop=True)
    return frame


def write_metrics_csv(records: Iterable[MetricsRecord], path: Union[str, FilePath]) -> pd.DataFrame:
    frame = records_frame(records)
    csv_frame = frame[CSV_COLUMNS].copy()
    csv_frame["success"] = csv_frame["success"].map({True: "true", False: "false"})
    csv_frame.to_csv(path, index=False, lineterminator="\n", float_format="%.6f", encoding="utf-8")
    logger.info("Wrote %d metrics rows to %s", len(csv_frame), path)
    return frame


def summarize(records: Union[pd.DataFrame, Iterable[MetricsRecord]]) -> pd.DataFrame:
    """
    Per-(kind, obstacle count, planner) medians in comparison-table layout.
    Costs are medians over successful runs only; time is the last column.
    """
    frame = records if isinstance(records, pd.DataFrame) else records_frame(records)
    grouped = frame.groupby(["scenario_kind", "obstacle_count", "planner"], sort=True)
    summary = pd.DataFrame({
        "runs": grouped.size(),
        "success_rate": grouped["success"].mean(),
        "median_node_count": grouped["node_count"].median(),
        "median_total_path_cost": grouped["total_path_cost"].median(),
        "median_average_path_cost": grouped["average_path_cost"].median(),
        "median_elapsed_seconds": grouped["elapsed_seconds"].median(),
    }).reset_index()
    return summary


def write_summary(summary: pd.DataFrame, path: Union[str, FilePath]) -> None:
    summary.to_csv(path, index=False, lineterminator="\n", float_format="%.6f", encoding="utf-8")


def node_count_wins(summary: pd.DataFrame) -> List[str]:
    """Cells where the directed planner's median node count is below the baseline's."""
    wins = []
    for (kind, count), cell in summary.groupby(["scenario_kind", "obstacle_count"], sort=True):
        by_planner = cell.set_index("planner")["median_node_count"]
        ad = by_planner.get(PlannerKind.AD_RRT_STAR.value)
        base = by_planner.get(PlannerKind.RRT_STAR.value)
        if ad is not None and base is not None and ad < base:
            wins.append(f"{kind}:{count}")
    return wins


def format_summary(summary: pd.DataFrame) -> str:
    """Human-readable summary block for the console."""
    return summary.to_string(index=False, float_format=lambda v: f"{v:.2f}")
