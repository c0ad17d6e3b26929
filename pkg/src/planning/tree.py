"""
RRT* tree storage T = (V, E).

Vertex positions, parents and costs live in growable numpy buffers; the
coordinate buffer doubles as the spatial index that nearest/near scan with
vectorized distance evaluation. Child lists let rewiring push cost deltas
down a subtree eagerly.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..geometry import Point2, xy_distance
from ..world import Scenario

NO_PARENT = -1

_INITIAL_CAPACITY = 1024


class Tree:
    """Single-writer RRT* tree rooted at the source."""

    def __init__(self, root: Point2, capacity: int = _INITIAL_CAPACITY):
        capacity = max(1, capacity)
        self._xy = np.empty((capacity, 2), dtype=float)
        self._parent = np.full(capacity, NO_PARENT, dtype=np.int64)
        self._cost = np.zeros(capacity, dtype=float)
        self._xy[0] = (root.x, root.y)
        self._children: List[List[int]] = [[]]
        self._size = 1

    @property
    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return self._size

    @property
    def root_index(self) -> int:
        return 0

    @property
    def positions(self) -> np.ndarray:
        """Read-only view of the (size, 2) coordinate buffer."""
        view = self._xy[: self._size]
        view.flags.writeable = False
        return view

    @property
    def parents(self) -> np.ndarray:
        return self._parent[: self._size].copy()

    @property
    def costs(self) -> np.ndarray:
        return self._cost[: self._size].copy()

    def position(self, index: int) -> Point2:
        return Point2(x=float(self._xy[index, 0]), y=float(self._xy[index, 1]))

    def xy(self, index: int) -> Tuple[float, float]:
        return float(self._xy[index, 0]), float(self._xy[index, 1])

    def parent(self, index: int) -> Optional[int]:
        value = int(self._parent[index])
        return None if value == NO_PARENT else value

    def cost(self, index: int) -> float:
        return float(self._cost[index])

    def children(self, index: int) -> Tuple[int, ...]:
        return tuple(self._children[index])

    def distances_to(self, x: float, y: float) -> np.ndarray:
        """Distances from every vertex to (x, y), same arithmetic as euclidean_distance."""
        dx = x - self._xy[: self._size, 0]
        dy = y - self._xy[: self._size, 1]
        return np.sqrt(dx * dx + dy * dy)

    def append(self, parent: int, x: float, y: float, cost: float) -> int:
        if self._size == self._xy.shape[0]:
            self._grow()
        index = self._size
        self._xy[index] = (x, y)
        self._parent[index] = parent
        self._cost[index] = cost
        self._children.append([])
        self._children[parent].append(index)
        self._size += 1
        return index

    def reparent(self, index: int, new_parent: int, new_cost: float) -> None:
        """Move a vertex under a new parent and shift its whole subtree by the cost delta."""
        old_parent = int(self._parent[index])
        self._children[old_parent].remove(index)
        self._children[new_parent].append(index)
        self._parent[index] = new_parent
        delta = new_cost - self._cost[index]
        self._cost[index] = new_cost
        stack = list(self._children[index])
        while stack:
            child = stack.pop()
            self._cost[child] += delta
            stack.extend(self._children[child])

    def path_to_root(self, index: int) -> List[int]:
        """Vertex indices from the root to `index`."""
        chain = [index]
        while self._parent[chain[-1]] != NO_PARENT:
            chain.append(int(self._parent[chain[-1]]))
        chain.reverse()
        return chain

    def snapshot(self) -> Tuple[Tuple[float, ...], Tuple[float, ...], Tuple[int, ...], Tuple[float, ...]]:
        """Exact structural fingerprint: x, y, parent and cost of every vertex."""
        n = self._size
        return (
            tuple(self._xy[:n, 0].tolist()),
            tuple(self._xy[:n, 1].tolist()),
            tuple(self._parent[:n].tolist()),
            tuple(self._cost[:n].tolist()),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.snapshot() == other.snapshot()

    __hash__ = None  # mutable

    @classmethod
    def from_records(
        cls,
        xs: Sequence[float],
        ys: Sequence[float],
        parents: Sequence[int],
        costs: Sequence[float],
    ) -> "Tree":
        """
        Rebuild a tree from stored arrays (result files); vertex 0 is the root.
        Parent indices need not precede their children; cycles are rejected.
        """
        n = len(xs)
        if not (n == len(ys) == len(parents) == len(costs)) or n == 0:
            raise ValueError("tree records must be non-empty and of equal length")
        tree = cls(Point2(x=xs[0], y=ys[0]), capacity=n)
        tree._xy[:n, 0] = xs
        tree._xy[:n, 1] = ys
        tree._parent[:n] = parents
        tree._cost[:n] = costs
        tree._children = [[] for _ in range(n)]
        tree._size = n
        for index in range(1, n):
            parent = int(tree._parent[index])
            if not 0 <= parent < n or parent == index:
                raise ValueError(f"vertex {index} has invalid parent {parent}")
            tree._children[parent].append(index)
        violations = check_tree_invariants(tree)
        if violations:
            raise ValueError(f"stored tree is inconsistent: {violations[0]}")
        return tree

    def _grow(self) -> None:
        capacity = self._xy.shape[0] * 2
        xy = np.empty((capacity, 2), dtype=float)
        xy[: self._size] = self._xy[: self._size]
        parent = np.full(capacity, NO_PARENT, dtype=np.int64)
        parent[: self._size] = self._parent[: self._size]
        cost = np.zeros(capacity, dtype=float)
        cost[: self._size] = self._cost[: self._size]
        self._xy, self._parent, self._cost = xy, parent, cost


def check_tree_invariants(tree: Tree, scenario: Optional[Scenario] = None, rel_tol: float = 1e-9) -> List[str]:
    """
    Return every violated tree invariant (empty list when healthy): single
    root with cost 0, cost consistency along parent links, acyclic parent
    links reaching the root, child lists matching parent links and, when a
    scenario is given, collision-free edges.
    """
    violations: List[str] = []
    n = tree.size
    if tree.parent(0) is not None or tree.cost(0) != 0.0:
        violations.append("root must have no parent and zero cost")

    child_count = 0
    for index in range(1, n):
        parent = tree.parent(index)
        if parent is None:
            violations.append(f"vertex {index} has no parent")
            continue
        if not 0 <= parent < n:
            violations.append(f"vertex {index} has out-of-range parent {parent}")
            continue
        if index not in tree.children(parent):
            violations.append(f"vertex {index} missing from child list of {parent}")
        px, py = tree.xy(parent)
        x, y = tree.xy(index)
        expected = tree.cost(parent) + xy_distance(px, py, x, y)
        if abs(tree.cost(index) - expected) > rel_tol * max(1.0, abs(expected)):
            violations.append(f"vertex {index} cost {tree.cost(index)} != {expected}")
        if scenario is not None and not scenario.edge_free_xy(px, py, x, y):
            violations.append(f"edge {parent}->{index} collides")
    for index in range(n):
        child_count += len(tree.children(index))
    if child_count != n - 1:
        violations.append(f"child lists hold {child_count} links for {n - 1} non-root vertices")

    reaches_root = [False] * n
    reaches_root[0] = True
    for index in range(n):
        chain: List[int] = []
        on_chain = set()
        cursor: Optional[int] = index
        while cursor is not None and 0 <= cursor < n and not reaches_root[cursor]:
            if cursor in on_chain:
                violations.append(f"vertex {index} is on a parent cycle")
                return violations
            chain.append(cursor)
            on_chain.add(cursor)
            cursor = tree.parent(cursor)
        if cursor is not None and 0 <= cursor < n:
            for vertex in chain:
                reaches_root[vertex] = True
    return violations
