"""
Sector-directed path planning toolkit.
Global A* routing, RRT* and angle-directed RRT*, scenario generation and a
paired benchmark harness.
"""

__version__ = "1.0.0"

# Note: import from the sub-packages directly:
#
#   from src.utils import load_config, make_rng
#   from src.world import generate_scenario, load_scenario
#   from src.planning import plan_rrt_star, plan_ad_rrt_star
#   from src.bench import run_campaign, render_svg

__all__ = [
    '__version__',
]
