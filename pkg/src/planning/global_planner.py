"""
Global routing stage: occupancy-grid rasterization, 8-connected A* search and
a uniform-cost (Dijkstra) oracle over the same grid.

Path costs are tracked as (axial moves, diagonal moves) counts and converted
to a length by one fixed formula, so two searches that find the same optimal
move counts report bit-identical costs.
"""
import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..geometry import Point2
from ..utils.errors import DestinationBlockedError, NoGlobalPathError, SourceBlockedError
from ..world import Scenario

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]  # (row, col)

SQRT2 = math.sqrt(2.0)

_AXIAL = ((0, 1), (1, 0), (0, -1), (-1, 0))
_DIAGONAL = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class GridMap:
    """Occupancy grid over a scenario; blocked[row, col] is True for occupied cells."""
    cols: int
    rows: int
    cell_size: float
    blocked: np.ndarray
    width: Optional[float] = None
    height: Optional[float] = None

    def in_grid(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.rows and 0 <= cell[1] < self.cols

    def is_blocked(self, cell: Cell) -> bool:
        return bool(self.blocked[cell[0], cell[1]])

    def cell_of(self, p: Point2) -> Cell:
        row = min(max(int(p.y // self.cell_size), 0), self.rows - 1)
        col = min(max(int(p.x // self.cell_size), 0), self.cols - 1)
        return (row, col)

    def cell_center(self, cell: Cell) -> Point2:
        """Cell center, clamped onto the map edge for partial cells."""
        x = (cell[1] + 0.5) * self.cell_size
        y = (cell[0] + 0.5) * self.cell_size
        if self.width is not None:
            x = min(x, self.width)
        if self.height is not None:
            y = min(y, self.height)
        return Point2(x=x, y=y)

    def path_cost(self, axial: int, diagonal: int) -> float:
        return axial * self.cell_size + diagonal * (SQRT2 * self.cell_size)

    def heuristic(self, cell: Cell, goal: Cell) -> float:
        dr = cell[0] - goal[0]
        dc = cell[1] - goal[1]
        return math.sqrt(dr * dr + dc * dc) * self.cell_size

    def neighbors(self, cell: Cell) -> Iterator[Tuple[Cell, int, int]]:
        """Yield (neighbor, axial_step, diagonal_step); no corner cutting."""
        row, col = cell
        for dr, dc in _AXIAL:
            nxt = (row + dr, col + dc)
            if self.in_grid(nxt) and not self.is_blocked(nxt):
                yield nxt, 1, 0
        for dr, dc in _DIAGONAL:
            nxt = (row + dr, col + dc)
            if not self.in_grid(nxt) or self.is_blocked(nxt):
                continue
            if self.is_blocked((row + dr, col)) and self.is_blocked((row, col + dc)):
                continue
            yield nxt, 0, 1


class GlobalPath(BaseModel):
    """Waypoints seeding the local planner's headings."""
    model_config = ConfigDict(frozen=True)

    waypoints: Tuple[Point2, ...] = Field(min_length=1)
    grid_cost: float = Field(ge=0.0)
    cells: Tuple[Cell, ...] = ()
    fallback: bool = False


def rasterize(scenario: Scenario, cell_size: float, inflation: Optional[float] = None) -> GridMap:
    """
    Build the occupancy grid. A cell is blocked when its center is not free or
    lies within the inflation distance of a disc boundary; inflation defaults
    to each disc's own radius.
    """
    if cell_size <= 0:
        raise ValueError("cell_size must be positive")
    cols = int(math.ceil(scenario.width / cell_size))
    rows = int(math.ceil(scenario.height / cell_size))

    # centers of the last partial row and column are clamped onto the map edge
    xs = np.minimum((np.arange(cols) + 0.5) * cell_size, scenario.width)
    ys = np.minimum((np.arange(rows) + 0.5) * cell_size, scenario.height)
    cx, cy = np.meshgrid(xs, ys)  # shape (rows, cols)
    blocked = np.zeros(cx.shape, dtype=bool)

    for disc in scenario.obstacles:
        reach = disc.radius + (disc.radius if inflation is None else inflation)
        dx = cx - disc.center.x
        dy = cy - disc.center.y
        blocked |= dx * dx + dy * dy <= reach * reach

    grid = GridMap(
        cols=cols, rows=rows, cell_size=float(cell_size), blocked=blocked,
        width=float(scenario.width), height=float(scenario.height),
    )
    if grid.is_blocked(grid.cell_of(scenario.source)):
        raise SourceBlockedError(f"source cell {grid.cell_of(scenario.source)} is blocked")
    if grid.is_blocked(grid.cell_of(scenario.destination)):
        raise DestinationBlockedError(f"destination cell {grid.cell_of(scenario.destination)} is blocked")
    logger.debug("Rasterized %dx%d grid, %d blocked cells", cols, rows, int(blocked.sum()))
    return grid


def astar(
    grid: GridMap,
    src_cell: Cell,
    dst_cell: Cell,
    on_expand: Optional[Callable[[Cell, float, float], None]] = None,
) -> GlobalPath:
    """
    Minimum-cost 8-connected path with the Euclidean heuristic.
    Ties on f prefer larger g, then smaller (row, col).
    """
    _require_open(grid, src_cell, "source")
    _require_open(grid, dst_cell, "destination")

    best: Dict[Cell, Tuple[int, int]] = {src_cell: (0, 0)}
    came_from: Dict[Cell, Cell] = {}
    h0 = grid.heuristic(src_cell, dst_cell)
    open_heap = [(h0, -0.0, src_cell[0], src_cell[1], 0, 0)]

    while open_heap:
        _, neg_g, row, col, axial, diagonal = heapq.heappop(open_heap)
        cell = (row, col)
        if best[cell] != (axial, diagonal):
            continue
        if on_expand is not None:
            on_expand(cell, -neg_g, grid.heuristic(cell, dst_cell))
        if cell == dst_cell:
            return _build_path(grid, came_from, cell, axial, diagonal)
        for nxt, da, dd in grid.neighbors(cell):
            counts = (axial + da, diagonal + dd)
            ng = grid.path_cost(*counts)
            known = best.get(nxt)
            if known is not None and grid.path_cost(*known) <= ng:
                continue
            best[nxt] = counts
            came_from[nxt] = cell
            heapq.heappush(
                open_heap,
                (ng + grid.heuristic(nxt, dst_cell), -ng, nxt[0], nxt[1], counts[0], counts[1]),
            )

    raise NoGlobalPathError(f"no grid path from {src_cell} to {dst_cell}")


def dijkstra_oracle(grid: GridMap, src_cell: Cell, dst_cell: Cell) -> float:
    """Exact shortest-path cost by uniform-cost search (no heuristic)."""
    _require_open(grid, src_cell, "source")
    _require_open(grid, dst_cell, "destination")

    settled: Dict[Cell, float] = {}
    frontier = [(0.0, src_cell, 0, 0)]
    while frontier:
        cost, cell, axial, diagonal = heapq.heappop(frontier)
        if cell in settled:
            continue
        settled[cell] = cost
        if cell == dst_cell:
            return cost
        for nxt, da, dd in grid.neighbors(cell):
            if nxt not in settled:
                counts = (axial + da, diagonal + dd)
                heapq.heappush(frontier, (grid.path_cost(*counts), nxt, counts[0], counts[1]))
    raise NoGlobalPathError(f"no grid path from {src_cell} to {dst_cell}")


def plan_global_path(scenario: Scenario, cell_size: float, inflation: Optional[float] = None) -> GlobalPath:
    """Rasterize, search, and snap the end waypoints to the exact source and destination."""
    grid = rasterize(scenario, cell_size, inflation)
    raw = astar(grid, grid.cell_of(scenario.source), grid.cell_of(scenario.destination))
    interior = list(raw.waypoints[1:-1])
    waypoints = [scenario.source] + interior + [scenario.destination]
    logger.info("Global path: %d waypoints, grid cost %.2f", len(waypoints), raw.grid_cost)
    return GlobalPath(waypoints=tuple(waypoints), grid_cost=raw.grid_cost, cells=raw.cells)


def straight_line_path(scenario: Scenario) -> GlobalPath:
    """Pseudo global path used when the grid search cannot seed headings."""
    return GlobalPath(
        waypoints=(scenario.source, scenario.destination),
        grid_cost=0.0,
        fallback=True,
    )


def _require_open(grid: GridMap, cell: Cell, label: str) -> None:
    if not grid.in_grid(cell):
        raise ValueError(f"{label} cell {cell} lies outside the grid")
    if grid.is_blocked(cell):
        error = SourceBlockedError if label == "source" else DestinationBlockedError
        raise error(f"{label} cell {cell} is blocked")


def _build_path(grid: GridMap, came_from: Dict[Cell, Cell], goal: Cell, axial: int, diagonal: int) -> GlobalPath:
    cells: List[Cell] = [goal]
    while cells[-1] in came_from:
        cells.append(came_from[cells[-1]])
    cells.reverse()
    return GlobalPath(
        waypoints=tuple(grid.cell_center(c) for c in cells),
        grid_cost=grid.path_cost(axial, diagonal),
        cells=tuple(cells),
    )
