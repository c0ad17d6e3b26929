"""
Paired benchmark campaigns.

Every (cell, trial) generates one scenario with seed = base_seed + trial and
runs both planners on it with that same seed. Trials execute in a bounded
process pool; records are gathered behind a lock and sorted before they are
written, so output does not depend on the worker count.
"""
import logging
import threading
from concurrent.futures import Future, ProcessPoolExecutor, wait
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..observability import MetricsRecord
from ..planning import ADRRTStarConfig, PlanResult, RRTStarConfig, plan_ad_rrt_star, plan_rrt_star
from ..utils.errors import NoPathFoundError
from ..world import GenerationParams, ScenarioKind, generate_scenario

logger = logging.getLogger(__name__)


class CampaignCell(BaseModel):
    """A scenario kind with an optional obstacle-count override, written KIND or KIND:COUNT."""
    model_config = ConfigDict(frozen=True)

    kind: ScenarioKind
    obstacle_count: Optional[int] = Field(default=None, ge=0)

    @field_validator("kind")
    @classmethod
    def _generated_only(cls, value: ScenarioKind) -> ScenarioKind:
        if value == ScenarioKind.CUSTOM:
            raise ValueError("campaign cells must name a generated kind (S1-S6)")
        return value

    @classmethod
    def parse(cls, text: str) -> "CampaignCell":
        kind, _, count = text.strip().partition(":")
        return cls(kind=kind.upper(), obstacle_count=int(count) if count else None)

    @property
    def label(self) -> str:
        return self.kind.value if self.obstacle_count is None else f"{self.kind.value}:{self.obstacle_count}"


class CampaignSpec(BaseModel):
    """
    Cells, trial count, base seed and one planner configuration. The baseline
    configuration is derived from the shared fields of `planner`, so both
    planners always agree on N, step, goal radius, goal bias and near radius.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    cells: Tuple[CampaignCell, ...] = Field(min_length=1)
    trials: int = Field(default=20, ge=1)
    base_seed: int = Field(default=0, ge=0)
    planner: ADRRTStarConfig = Field(default_factory=ADRRTStarConfig)
    generation: GenerationParams = Field(default_factory=GenerationParams)

    def configs_for(self, seed: int) -> Tuple[RRTStarConfig, ADRRTStarConfig]:
        shared = {name: getattr(self.planner, name) for name in RRTStarConfig.model_fields}
        shared["seed"] = seed
        return RRTStarConfig(**shared), self.planner.model_copy(update={"seed": seed})

    def generation_for(self, cell: CampaignCell) -> GenerationParams:
        return self.generation.model_copy(update={"obstacle_count": cell.obstacle_count})

    @property
    def run_count(self) -> int:
        return len(self.cells) * self.trials * 2


def _completed(call, *args) -> PlanResult:
    try:
        return call(*args)
    except NoPathFoundError as e:
        return e.result


def run_trial(spec: CampaignSpec, cell: CampaignCell, trial: int) -> List[MetricsRecord]:
    """Generate the trial's scenario and run both planners on it."""
    seed = spec.base_seed + trial
    scenario = generate_scenario(cell.kind, seed, spec.generation_for(cell))
    rrt_cfg, ad_cfg = spec.configs_for(seed)
    records = []
    for result in (_completed(plan_rrt_star, scenario, rrt_cfg), _completed(plan_ad_rrt_star, scenario, ad_cfg)):
        records.append(MetricsRecord.from_result(result, scenario, trial=trial))
    return records


class ResultCollector:
    """Append-only record sink shared by pool callbacks."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: List[MetricsRecord] = []
        self._errors: List[BaseException] = []

    def add(self, records: List[MetricsRecord]) -> None:
        with self._lock:
            self._records.extend(records)

    def on_done(self, future: Future) -> None:
        error = future.exception()
        if error is not None:
            with self._lock:
                self._errors.append(error)
            return
        self.add(future.result())

    def raise_first_error(self) -> None:
        with self._lock:
            if self._errors:
                raise self._errors[0]

    @property
    def records(self) -> List[MetricsRecord]:
        with self._lock:
            return sorted(
                self._records,
                key=lambda r: (r.scenario_kind, r.obstacle_count, r.trial, r.planner.value),
            )


def run_campaign(spec: CampaignSpec, threads: int = 1) -> List[MetricsRecord]:
    """Run every (cell, trial) pair; returns records in deterministic order."""
    collector = ResultCollector()
    jobs = [(cell, trial) for cell in spec.cells for trial in range(spec.trials)]
    logger.info("Campaign: %d cells x %d trials on %d worker(s)", len(spec.cells), spec.trials, threads)

    if threads <= 1:
        for cell, trial in jobs:
            collector.add(run_trial(spec, cell, trial))
            logger.debug("Finished %s trial %d", cell.label, trial)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = []
            for cell, trial in jobs:
                future = pool.submit(run_trial, spec, cell, trial)
                future.add_done_callback(collector.on_done)
                futures.append(future)
            wait(futures)
        collector.raise_first_error()

    records = collector.records
    logger.info("Campaign finished: %d records", len(records))
    return records
