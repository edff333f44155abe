"""Exhaustive search over canonical placements.

A drawing is determined up to extension-equivalence by the corners and the crossed segment of every
added edge and by the cell of every added vertex, so walking all of them walks every extension.
"""
import copy
from collections import deque
from typing import Iterator, List, Optional, Set

from drawext.constants import DEFAULT_MAX_K, DEFAULT_MAX_PLACEMENTS, DEFAULT_MAX_VERTICES
from drawext.drawing import (CellId, Edge, Node, OnePlanarDrawing, Placement, apply_placement, edge_key,
                             iter_placements, logger, place_vertex, twin, validate_ic_planar, validate_one_planar)
from drawext.exceptions import BudgetError
from drawext.instance import ExtensionInstance, is_extension


class SearchLimits:
    """Budgets and filters for the exhaustive search."""

    def __repr__(self):
        return f'SearchLimits(max_vertices={self.max_vertices}, max_k={self.max_k}, ' \
               f'max_placements={self.max_placements}, ic={self.ic}, omega={self.omega is not None})'

    @property
    def max_vertices(self) -> int:
        return getattr(self, '_max_vertices', DEFAULT_MAX_VERTICES)

    def set_max_vertices(self, count: int) -> 'SearchLimits':
        """Sets the largest number of vertices of G the search accepts. Returns itself for fluent-style chaining."""
        self._validate_budget(count)
        self._max_vertices = count

        return self

    @property
    def max_k(self) -> int:
        return getattr(self, '_max_k', DEFAULT_MAX_K)

    def set_max_k(self, k: int) -> 'SearchLimits':
        """Sets the largest number of added edges. Returns itself for fluent-style chaining."""
        self._validate_budget(k)
        self._max_k = k

        return self

    @property
    def max_placements(self) -> int:
        return getattr(self, '_max_placements', DEFAULT_MAX_PLACEMENTS)

    def set_max_placements(self, count: int) -> 'SearchLimits':
        """Sets how many edge placements may be tried before giving up. Returns itself for fluent-style chaining."""
        self._validate_budget(count)
        self._max_placements = count

        return self

    @property
    def ic(self) -> bool:
        return getattr(self, '_ic', False)

    def set_ic(self, ic: bool = True) -> 'SearchLimits':
        """Only accepts IC-planar extensions. Returns itself for fluent-style chaining."""
        self._ic = ic

        return self

    @property
    def omega(self):
        return getattr(self, '_omega', None)

    def set_omega(self, omega) -> 'SearchLimits':
        """Only accepts extensions compatible with an initial delimiter. Returns itself for fluent-style chaining."""
        self._omega = omega

        return self

    def copy(self) -> 'SearchLimits':
        return copy.copy(self)

    @staticmethod
    def _validate_budget(value: int):
        if value < 1:
            raise BudgetError(f'Expected a positive budget, found {value}.')


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.budget:
            raise BudgetError(f'Expected at most {self.budget} placements, the search needs more.')


def edge_order(instance: ExtensionInstance) -> List[Edge]:
    """Orders the added edges by breadth-first search from H, each oriented from an endpoint reached earlier."""
    visited: Set[Node] = set(instance.h_vertices)
    queue = deque(sorted(instance.h_vertices))
    remaining = set(instance.e_add)
    order: List[Edge] = []

    while remaining:
        if not queue:
            start = min(w for e in remaining for w in e if w not in visited)
            visited.add(start)
            queue.append(start)

        w = queue.popleft()
        for n in sorted(instance.graph.neighbors(w)):
            e = edge_key(w, n)
            if e in remaining:
                remaining.remove(e)
                order.append((w, n))

            if n not in visited:
                visited.add(n)
                queue.append(n)

    return order


def reachable_cells(drawing: OnePlanarDrawing, v: Node) -> List[CellId]:
    """Cells an edge from v can end in: cells at v and cells across one crossable, non-incident segment."""
    cells = list(drawing.cells_of(v))
    for cid in list(cells):
        if cid is None:
            continue

        for d in drawing.cell_by_id[cid].all_darts:
            if drawing.is_crossable(d) and v not in d:
                other = drawing.cell_of(twin(d))
                if other not in cells:
                    cells.append(other)

    return cells


def ic_compatible(drawing: OnePlanarDrawing, placement: Placement) -> bool:
    """Checks that a new crossing keeps every vertex on at most one crossed edge."""
    if placement.crossing is None:
        return True

    crossed = drawing.crossed_edges
    for e in (placement.edge, drawing.edge_of(placement.crossing)):
        for w in e:
            if sum(1 for g in crossed if w in g) > 1:
                return False

    return True


def _with_vertex(drawing: OnePlanarDrawing, v: Node, near: Optional[Node]) -> Iterator[OnePlanarDrawing]:
    if v in drawing.rotation:
        yield drawing
        return

    cells = reachable_cells(drawing, near) if near is not None else [c.id for c in drawing.cells]
    for cid in cells:
        yield place_vertex(drawing, v, cid)


def _accept(drawing: OnePlanarDrawing, instance: ExtensionInstance, limits: SearchLimits) -> bool:
    violations = validate_ic_planar(drawing) if limits.ic else validate_one_planar(drawing)
    if violations:
        logger.warning(f'Discarding a search leaf with violations: {violations[0].message}')
        return False

    if limits.omega is not None and not limits.omega.is_compatible(drawing):
        return False

    return is_extension(drawing, instance)


def _search(drawing: OnePlanarDrawing, order: List[Edge], i: int, instance: ExtensionInstance, limits: SearchLimits,
            counter: _Counter) -> Iterator[OnePlanarDrawing]:
    if i == len(order):
        if _accept(drawing, instance, limits):
            yield drawing

        return

    a, b = order[i]
    for with_a in _with_vertex(drawing, a, None):
        for with_b in _with_vertex(with_a, b, a):
            for placement in iter_placements(with_b, a, b):
                counter.tick()
                placed = apply_placement(with_b, placement)
                if limits.ic and not ic_compatible(placed, placement):
                    continue

                yield from _search(placed, order, i + 1, instance, limits, counter)


def iter_extensions(instance: ExtensionInstance, limits: Optional[SearchLimits] = None) -> Iterator[OnePlanarDrawing]:
    """Yields every validator-passing extension in a fixed order.

    :raises BudgetError: when the instance exceeds the limits or the search exceeds its placement budget.
    """
    limits = limits or SearchLimits().set_ic(instance.ic)
    n = instance.graph.number_of_nodes()
    if n > limits.max_vertices:
        raise BudgetError(f'Expected at most {limits.max_vertices} vertices, found {n}.')

    if instance.k > limits.max_k:
        raise BudgetError(f'Expected at most {limits.max_k} added edges, found {instance.k}.')

    order = edge_order(instance)
    counter = _Counter(limits.max_placements)
    logger.debug(f'Oracle search over {len(order)} edges with {limits}')

    yield from _search(instance.drawing, order, 0, instance, limits, counter)


def brute_force_solve(instance: ExtensionInstance, limits: Optional[SearchLimits] = None) -> Optional[OnePlanarDrawing]:
    """Returns the first extension found, or None after exhausting the search."""
    for solution in iter_extensions(instance, limits):
        return solution

    return None


def enumerate_all_extensions(instance: ExtensionInstance, limits: Optional[SearchLimits] = None) -> List[OnePlanarDrawing]:
    return list(iter_extensions(instance, limits))
