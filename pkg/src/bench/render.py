"""
SVG rendering of a planner run: obstacles, tree, final path, global path,
final sector, source and destination.

Uses a bare matplotlib Figure (no pyplot state) so rendering is safe inside
worker processes, and pins the SVG hash salt and metadata so identical
inputs give identical bytes.
"""
import io
import math
from pathlib import Path as FilePath
from typing import Optional, Union

import matplotlib
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from matplotlib.patches import Circle, Rectangle, Wedge
from pydantic import BaseModel, ConfigDict, Field

from ..planning import PlanResult
from ..utils.errors import DigestMismatchError
from ..world import Scenario, scenario_digest

_SVG_RC = {
    "svg.hashsalt": "sectorplan",
    "svg.fonttype": "none",
    "path.simplify": False,
}

OBSTACLE_COLOR = "#5b5b5b"
TREE_COLOR = "#9db4c0"
PATH_COLOR = "#c8102e"
GLOBAL_PATH_COLOR = "#1f4e79"
SECTOR_COLOR = "#e0a100"


class RenderOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    size_inches: float = Field(default=8.0, gt=0.0)
    show_tree: bool = True
    show_sector: bool = True
    show_global_path: bool = True
    title: Optional[str] = None


def _draw_sector(ax, result: PlanResult) -> None:
    sector = result.final_sector
    apex = sector.apex
    if sector.half_angle == 0.0:
        end = (apex.x + sector.length * math.cos(sector.heading), apex.y + sector.length * math.sin(sector.heading))
        ax.plot([apex.x, end[0]], [apex.y, end[1]], color=SECTOR_COLOR, linewidth=1.2, gid="sector")
        return
    if sector.is_full_disc:
        patch = Circle((apex.x, apex.y), sector.length, fill=False)
    else:
        heading = math.degrees(sector.heading)
        half = math.degrees(sector.half_angle)
        patch = Wedge((apex.x, apex.y), sector.length, heading - half, heading + half, fill=False)
    patch.set_edgecolor(SECTOR_COLOR)
    patch.set_linewidth(1.2)
    patch.set_gid("sector")
    ax.add_patch(patch)


def render_svg(result: PlanResult, scenario: Scenario, options: Optional[RenderOptions] = None) -> str:
    """Render a result over its scenario as a standalone SVG document."""
    options = options or RenderOptions()
    digest = scenario_digest(scenario)
    if result.scenario_digest != digest:
        raise DigestMismatchError(
            f"result was planned on scenario {result.scenario_digest[:12]}, not {digest[:12]}"
        )

    with matplotlib.rc_context(_SVG_RC):
        aspect = scenario.height / scenario.width
        fig = Figure(figsize=(options.size_inches, options.size_inches * aspect))
        ax = fig.add_axes((0.0, 0.0, 1.0, 1.0))
        ax.set_xlim(0.0, scenario.width)
        ax.set_ylim(0.0, scenario.height)
        ax.set_aspect("equal")
        ax.set_axis_off()
        ax.add_patch(Rectangle((0.0, 0.0), scenario.width, scenario.height,
                               fill=False, edgecolor="black", linewidth=1.0, gid="map-frame"))

        for index, disc in enumerate(scenario.obstacles):
            ax.add_patch(Circle((disc.center.x, disc.center.y), disc.radius,
                                facecolor=OBSTACLE_COLOR, edgecolor="none", gid=f"obstacle-{index}"))

        if options.show_tree and result.tree.size > 1:
            positions = result.tree.positions
            parents = result.tree.parents
            segments = [
                (tuple(positions[parents[i]]), tuple(positions[i]))
                for i in range(1, result.tree.size)
            ]
            ax.add_collection(LineCollection(segments, colors=TREE_COLOR, linewidths=0.4, gid="tree-edges"))

        if options.show_global_path and result.global_path is not None:
            g = result.global_path.waypoints
            ax.plot([p.x for p in g], [p.y for p in g], linestyle="--", color=GLOBAL_PATH_COLOR,
                    linewidth=1.0, gid="global-path")

        if options.show_sector and result.final_sector is not None:
            _draw_sector(ax, result)

        if result.path is not None:
            w = result.path.waypoints
            ax.plot([p.x for p in w], [p.y for p in w], color=PATH_COLOR, linewidth=2.5,
                    solid_capstyle="round", gid="final-path")

        ax.plot([scenario.source.x], [scenario.source.y], marker="o", markersize=8,
                color="#008000", linestyle="none", gid="source")
        ax.plot([scenario.destination.x], [scenario.destination.y], marker="*", markersize=12,
                color=PATH_COLOR, linestyle="none", gid="destination")
        if options.title:
            ax.text(0.01 * scenario.width, 0.98 * scenario.height, options.title, va="top", fontsize=10)

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def save_svg(result: PlanResult, scenario: Scenario, path: Union[str, FilePath],
             options: Optional[RenderOptions] = None) -> None:
    FilePath(path).write_text(render_svg(result, scenario, options), encoding="utf-8", newline="\n")
