"""
Configuration management for the sector planning toolkit.
"""
import os
from dataclasses import dataclass, field
from dotenv import load_dotenv

load_dotenv()


@dataclass
class MapConfig:
    """Workspace used when generating scenarios."""
    width: float = 1000.0
    height: float = 1000.0
    obstacle_radius: float = 15.0


@dataclass
class PlannerDefaults:
    """Defaults shared by both planners; degrees only appear here and on the CLI."""
    iterations: int = 5000
    step: float = 30.0  # Δq, map units
    goal_radius: float = 25.0
    goal_bias: float = 0.05
    cell_size: float = 20.0
    expansion_factor: float = 10.0
    angle_increment_deg: float = 15.0
    max_half_angle_deg: float = 180.0
    stall_iterations: int = 200


@dataclass
class BenchConfig:
    """Benchmark campaign configuration."""
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "WARNING"


@dataclass
class Config:
    """Main application configuration."""
    map: MapConfig
    planner: PlannerDefaults
    bench: BenchConfig
    logging: LoggingConfig


def load_config() -> Config:
    """Load configuration from environment variables."""
    map_size = float(os.getenv("SECTORPLAN_MAP_SIZE", "1000"))
    map_config = MapConfig(
        width=map_size,
        height=map_size,
        obstacle_radius=float(os.getenv("SECTORPLAN_OBSTACLE_RADIUS", "15")),
    )

    planner_defaults = PlannerDefaults(
        iterations=int(os.getenv("SECTORPLAN_ITERATIONS", "5000")),
        step=float(os.getenv("SECTORPLAN_STEP", "30")),
        goal_radius=float(os.getenv("SECTORPLAN_GOAL_RADIUS", "25")),
        goal_bias=float(os.getenv("SECTORPLAN_GOAL_BIAS", "0.05")),
        cell_size=float(os.getenv("SECTORPLAN_CELL_SIZE", "20")),
        expansion_factor=float(os.getenv("SECTORPLAN_EXPANSION_FACTOR", "10")),
        angle_increment_deg=float(os.getenv("SECTORPLAN_ANGLE_INCREMENT_DEG", "15")),
        stall_iterations=int(os.getenv("SECTORPLAN_STALL_ITERATIONS", "200")),
    )

    bench_config = BenchConfig(
        threads=max(1, int(os.getenv("SECTORPLAN_THREADS", str(os.cpu_count() or 1)))),
    )

    logging_config = LoggingConfig(
        level=os.getenv("SECTORPLAN_LOG_LEVEL", "WARNING").upper(),
    )

    return Config(
        map=map_config,
        planner=planner_defaults,
        bench=bench_config,
        logging=logging_config,
    )
