"""Pattern graphs: small drawings that prove a pattern can be realized, and assembly of real solutions.

Every element of a pattern becomes a cycle whose nodes follow its boundary order. Cycles sharing a vertex
of H or a crossed edge are glued, and the added part is then drawn edge by edge inside the cells, corners
and crossings the pattern names. Solutions are assembled the same way, one part at a time, each part
keeping the rotation it has in its own pattern graph.
"""
from collections import Counter, defaultdict
from itertools import count, permutations, product
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Set, Tuple, Union

import networkx as nx

from drawext.constants import CROSSING_TAG, DEFAULT_MAX_PLACEMENTS, ONE_PLANAR, SKELETON_PREFIX
from drawext.drawing import (CellId, Dart, Edge, Node, OnePlanarDrawing, Placement, apply_placement,
                             base_dart, cell_lineage, cyclic_canonical, drawing_from_rotation, edge_key,
                             iter_placements, logger, place_vertex, validate_ic_planar, validate_one_planar)
from drawext.exceptions import BudgetError, ConsistencyError, InstanceError
from drawext.instance import ExtensionInstance, is_extension
from drawext.oracle import edge_order, ic_compatible
from drawext.patterns import (Element, Pattern, PlacementAssignment, base_corner, conformance_errors,
                              derive_pattern, pattern_matches)


class Slot(NamedTuple):
    """A skeleton edge standing for an edge of H that an added edge crosses."""
    first: Node
    second: Node


Item = Union[Node, Slot]


class PatternGraphPart(NamedTuple):
    """One connected piece of a pattern graph.

    Attributes
        :elements: The pattern elements realized by this piece.
        :instance: The skeleton together with the added vertices and edges of the piece.
        :drawing: A drawing of the piece realizing its part of the pattern.
        :face_of: Cell of the skeleton standing for each element.
    """
    elements: Tuple[Element, ...]
    instance: ExtensionInstance
    drawing: OnePlanarDrawing
    face_of: Dict[Element, CellId]


class PatternGraph(NamedTuple):
    pattern: object
    parts: Tuple[PatternGraphPart, ...] = ()


class Skeleton:
    """Boundary cycles of pattern elements, glued at shared nodes."""

    def __init__(self):
        self.walks: Dict[Element, List[Node]] = {}
        self._ids = count()

    def __repr__(self):
        return f'Skeleton(walks={len(self.walks)}, nodes={len(self.nodes)})'

    @property
    def nodes(self) -> Set[Node]:
        return {n for walk in self.walks.values() for n in walk}

    def dummy(self) -> Node:
        return f'{SKELETON_PREFIX}d{next(self._ids)}'

    def add_face(self, s: Element, items: List[Item]):
        """Adds the cycle of s, one item per boundary entry in walk order."""
        items = _merge_repeats(items)
        while len(items) < 3:
            items.append(self.dummy())

        walk: List[Node] = []
        for item in items:
            walk.extend(item if isinstance(item, Slot) else (item,))
            walk.append(self.dummy())

        self.walks[s] = walk

    def edges(self) -> Set[Edge]:
        found = set()
        for walk in self.walks.values():
            for i, node in enumerate(walk):
                found.add(edge_key(node, walk[(i + 1) % len(walk)]))

        return found

    def drawings(self) -> Iterator[Tuple[OnePlanarDrawing, Dict[Element, CellId]]]:
        """Plane drawings of the skeleton in which every walk bounds a cell of its own.

        The outer cell is never one of the walks.
        """
        graph = nx.Graph()
        graph.add_edges_from(self.edges())
        if not nx.is_connected(graph):
            return

        wedges: Dict[Node, List[Tuple[Node, Node]]] = defaultdict(list)
        for walk in self.walks.values():
            for i, node in enumerate(walk):
                wedges[node].append((walk[i - 1], walk[(i + 1) % len(walk)]))

        options = []
        for node in sorted(wedges):
            arrangements = _arrangements(wedges[node])
            if not arrangements:
                return

            options.append([(node, a) for a in arrangements])

        for choice in product(*options):
            rotation = dict(choice)
            drawing = drawing_from_rotation(rotation)
            if validate_one_planar(drawing):
                continue

            face_of = self._faces(drawing)
            if face_of is None:
                continue

            outer = next((d for d in drawing.darts if drawing.cell_of(d) not in face_of.values()), None)
            if outer is not None:
                yield drawing_from_rotation(rotation, outer=outer), face_of

    def _faces(self, drawing: OnePlanarDrawing) -> Optional[Dict[Element, CellId]]:
        face_of = {}
        for s, walk in self.walks.items():
            darts = {(walk[i], walk[(i + 1) % len(walk)]) for i in range(len(walk))}
            cell = drawing.cell_by_id[drawing.cell_of((walk[0], walk[1]))]
            if len(cell.darts) != len(walk) or set(cell.darts) != darts:
                return None

            face_of[s] = cell.id

        return face_of


def _merge_repeats(items: List[Item]) -> List[Item]:
    merged = [item for i, item in enumerate(items) if i == 0 or item != items[i - 1] or isinstance(item, Slot)]
    while len(merged) > 1 and merged[0] == merged[-1] and not isinstance(merged[0], Slot):
        merged.pop()

    return merged


def _arrangements(wedges: List[Tuple[Node, Node]]) -> List[Tuple[Node, ...]]:
    """Clockwise rotations at a node in which every wedge (p, q) has q right after p."""
    succ: Dict[Node, Node] = {}
    pred: Dict[Node, Node] = {}
    for p, q in wedges:
        if p in succ or q in pred:
            return []

        succ[p] = q
        pred[q] = p

    chains = []
    seen: Set[Node] = set()
    for start in sorted(p for p in succ if p not in pred):
        chain = [start]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])

        chains.append(chain)
        seen.update(chain)

    closed = set(succ) - seen
    if closed:
        start = min(closed)
        cycle = [start]
        while succ[cycle[-1]] != start:
            cycle.append(succ[cycle[-1]])

        return [tuple(cycle)] if not chains and len(cycle) == len(closed) else []

    first, others = chains[0], chains[1:]
    return [tuple(first + [n for chain in order for n in chain]) for order in permutations(others)]


def components(pattern: Pattern) -> List[List[Element]]:
    """Groups elements that share a vertex of H, an added vertex or an added edge."""
    graph = nx.Graph()
    graph.add_nodes_from(pattern.elements)
    for a, b in pattern.edge_faces.values():
        graph.add_edge(a, b)

    for faces in pattern.join_faces.values():
        faces = sorted(faces, key=repr)
        graph.add_edges_from(zip(faces, faces[1:]))

    return sorted((sorted(c, key=repr) for c in nx.connected_components(graph)), key=repr)


def _slots(pattern: Pattern) -> Dict[Edge, Slot]:
    return {e: Slot(f'{SKELETON_PREFIX}s{i}a', f'{SKELETON_PREFIX}s{i}b') for i, e in enumerate(pattern.crossing_edges())}


def _items(pattern: Pattern, s: Element, slots: Dict[Edge, Slot]) -> List[Item]:
    items: List[Item] = []
    seen: Counter = Counter()
    for e, tag in pattern.walk_order(s):
        if tag != CROSSING_TAG:
            items.append(tag)
            continue

        slot = slots[e]
        a, b = pattern.edge_faces[e]
        forward = seen[e] == 0 if a == b else s == a
        items.append(slot if forward else Slot(slot.second, slot.first))
        seen[e] += 1

    return items


def _insertions(items: Dict[Element, List[Item]], extras: List[Tuple[Node, Element]]) -> Iterator[Dict[Element, List[Item]]]:
    if not extras:
        yield items
        return

    (w, s), rest = extras[0], extras[1:]
    for i in range(max(1, len(items[s]))):
        changed = dict(items)
        changed[s] = items[s][:i] + [w] + items[s][i:]
        yield from _insertions(changed, rest)


def skeletons(pattern: Pattern) -> Iterator[Skeleton]:
    """Skeletons of a pattern, one per way of placing the cells a vertex of H is on without an entry."""
    slots = _slots(pattern)
    items = {s: _items(pattern, s, slots) for s in pattern.elements}
    extras = [(w, s) for w, faces in sorted(pattern.join_faces.items()) for s in sorted(faces, key=repr)
              if w not in items[s]]
    for placed in _insertions(items, extras):
        skeleton = Skeleton()
        for s in pattern.elements:
            skeleton.add_face(s, list(placed[s]))

        yield skeleton


class _PatternFit:
    """Accepts only drawings of a skeleton instance whose derived pattern is the wanted one."""

    def __init__(self, pattern: Pattern, instance: ExtensionInstance, face_of: Dict[Element, CellId]):
        self.pattern = pattern
        self.instance = instance
        self.face_of = face_of

    def is_compatible(self, drawing: OnePlanarDrawing) -> bool:
        derived = derive_pattern(drawing, self.instance, validate=False)
        return pattern_matches(derived, self.pattern, self.face_of)


class _Insertion:
    """Draws added vertices and edges into a drawing one edge at a time, inside the cells a pattern names.

    Attributes
        :instance: The instance whose drawing the cells refer to.
        :homes: Cell of each added vertex.
        :ends: Per added edge, the cells it leaves its first and its second endpoint from.
        :crossed: Per added edge, the edge of H it crosses or None; None as a whole leaves crossings free.
        :anchors: Corner an added edge must use at an endpoint in H, None for an isolated endpoint.
    """

    def __init__(self, instance: ExtensionInstance, homes: Dict[Node, CellId],
                 ends: Optional[Dict[Edge, Tuple[CellId, CellId]]] = None,
                 crossed: Optional[Dict[Edge, Optional[Edge]]] = None,
                 anchors: Optional[Dict[Tuple[Edge, Node], Optional[Dart]]] = None):
        self.instance = instance
        self.base = instance.drawing
        self.homes = homes
        self.ends = ends or {}
        self.crossed = crossed
        self.anchors = anchors or {}
        self.budget = DEFAULT_MAX_PLACEMENTS

    def __repr__(self):
        return f'_Insertion(homes={len(self.homes)}, ends={len(self.ends)}, anchors={len(self.anchors)})'

    def run(self, start: OnePlanarDrawing, order: List[Edge],
            accept: Callable[[OnePlanarDrawing], bool]) -> Optional[OnePlanarDrawing]:
        """Returns the first valid drawing of the ordered edges drawn into start that accept takes."""
        self.budget = DEFAULT_MAX_PLACEMENTS
        try:
            return next(self._search(start, order, 0, accept), None)

        except BudgetError as exc:
            logger.warning(f'Pattern insertion gave up: {exc.message}')
            return None

    def with_vertex(self, current: OnePlanarDrawing, v: Node) -> Iterator[OnePlanarDrawing]:
        if v in current.rotation:
            yield current
            return

        lineage = cell_lineage(self.base, current)
        for cell in current.cells:
            if lineage[cell.id] == self.homes.get(v, lineage[cell.id]):
                yield place_vertex(current, v, cell.id)

    def _search(self, current: OnePlanarDrawing, order: List[Edge], i: int,
                accept: Callable[[OnePlanarDrawing], bool]) -> Iterator[OnePlanarDrawing]:
        if i == len(order):
            violations = validate_ic_planar(current) if self.instance.ic else validate_one_planar(current)
            if not violations and accept(current):
                yield current

            return

        a, b = order[i]
        for with_a in self.with_vertex(current, a):
            for with_b in self.with_vertex(with_a, b):
                for placement in iter_placements(with_b, a, b):
                    if not self._fits(with_b, placement):
                        continue

                    self.budget -= 1
                    if self.budget < 0:
                        raise BudgetError(f'Expected at most {DEFAULT_MAX_PLACEMENTS} placements, the insertion needs more.')

                    placed = apply_placement(with_b, placement)
                    if self.instance.ic and not ic_compatible(placed, placement):
                        continue

                    yield from self._search(placed, order, i + 1, accept)

    def _fits(self, drawing: OnePlanarDrawing, placement: Placement) -> bool:
        e = edge_key(*placement.edge)
        lineage = cell_lineage(self.base, drawing)
        if e in self.ends:
            side = e.index(placement.u_corner[0])
            if lineage[drawing.cell_of_corner(placement.u_corner)] != self.ends[e][side]:
                return False

            if lineage[drawing.cell_of_corner(placement.v_corner)] != self.ends[e][1 - side]:
                return False

        if self.crossed is not None:
            expected = self.crossed.get(e)
            if placement.crossing is None:
                if expected is not None:
                    return False

            else:
                parent = base_dart(self.base, drawing, placement.crossing)
                found = None if parent is None else self.base.edge_of(parent)
                if found != expected:
                    return False

        for corner in (placement.u_corner, placement.v_corner):
            key = (e, corner[0])
            if key in self.anchors and base_corner(self.base, drawing, corner) != self.anchors[key]:
                return False

        return True


def skeleton_instance(drawing: OnePlanarDrawing, vertices: List[Node], edges: List[Edge],
                      mode: str = ONE_PLANAR) -> Optional[ExtensionInstance]:
    graph = nx.Graph()
    graph.add_nodes_from(drawing.vertices)
    graph.add_edges_from(drawing.edges)
    graph.add_nodes_from(vertices)
    graph.add_edges_from(edges)
    try:
        return ExtensionInstance(graph, drawing, mode)

    except InstanceError as exc:
        logger.debug(f'Skeleton rejected: {exc.message}')
        return None


def search_skeleton(instance: ExtensionInstance, fit, homes: Dict[Node, CellId],
                    ends: Optional[Dict[Edge, Tuple[CellId, CellId]]] = None,
                    crossed: Optional[Dict[Edge, Optional[Edge]]] = None) -> Optional[OnePlanarDrawing]:
    """Draws the added part of a skeleton instance inside the cells its pattern names, keeping what fit accepts."""
    insertion = _Insertion(instance, homes, ends, crossed)

    def accept(drawing: OnePlanarDrawing) -> bool:
        return is_extension(drawing, instance) and fit.is_compatible(drawing)

    return insertion.run(instance.drawing, edge_order(instance), accept)


def _realize(pattern: Pattern, elements: List[Element]) -> Optional[PatternGraphPart]:
    sub = pattern.restricted(elements)
    vertices = sorted(sub.vertex_faces)
    edges = sorted(sub.edge_faces)
    slots = _slots(sub)
    crossed = {e: edge_key(*slots[e]) if e in slots else None for e in edges}
    for skeleton in skeletons(sub):
        for drawing, face_of in skeleton.drawings():
            instance = skeleton_instance(drawing, vertices, edges)
            if instance is None:
                continue

            homes = {v: face_of[s] for v, s in sub.vertex_faces.items()}
            ends = {e: (face_of[a], face_of[b]) for e, (a, b) in sub.edge_faces.items()}
            solution = search_skeleton(instance, _PatternFit(sub, instance, face_of), homes, ends, crossed)
            if solution is not None:
                return PatternGraphPart(tuple(elements), instance, solution, face_of)

    return None


def check_validity(pattern: Pattern, instance: ExtensionInstance) -> Optional[PatternGraph]:
    """Builds a pattern graph for the pattern, or returns None when the pattern is not valid."""
    problems = conformance_errors(pattern, instance)
    if problems:
        logger.debug(f'Pattern rejected: {problems[0].message}')
        return None

    parts = []
    for elements in components(pattern):
        part = _realize(pattern, elements)
        if part is None:
            logger.debug(f'No pattern graph realizes elements {elements}')
            return None

        parts.append(part)

    return PatternGraph(pattern, tuple(parts))


def added_rotations(drawing: OnePlanarDrawing, vertices: List[Node]) -> Dict[Node, Tuple[Node, ...]]:
    """Cyclic order of the far endpoints of the edges at each of the vertices."""
    rotations = {}
    for v in vertices:
        ends = []
        for n in drawing.rotation.get(v, ()):
            if drawing.is_crossing(n):
                e = next(e for e in drawing.crossings[n] if v in e)
                n = e[0] if e[1] == v else e[1]

            ends.append(n)

        rotations[v] = cyclic_canonical(ends)

    return rotations


def _follows_rotations(drawing: OnePlanarDrawing, wanted: Dict[Node, Tuple[Node, ...]]) -> bool:
    found = added_rotations(drawing, list(wanted))
    return all(found[v] in (order, cyclic_canonical(reversed(order))) for v, order in wanted.items())


def _anchors(placement: PlacementAssignment, pattern: Pattern) -> Dict[Tuple[Edge, Node], Optional[Dart]]:
    anchors = {}
    for (s, j), shadow in placement.shadows.items():
        e, tag = pattern.walk_order(s)[j]
        if tag != CROSSING_TAG:
            d = shadow[1]
            anchors[(e, tag)] = None if d[0] == d[1] else d

    return anchors


def assemble_solution(placement: PlacementAssignment, pattern_graph: PatternGraph,
                      instance: ExtensionInstance) -> OnePlanarDrawing:
    """Draws each part of the pattern graph into the cells its elements were placed at.

    A part's edges go between the placed cells, across the placed edges of H and through the placed corners,
    and every added vertex gets the rotation it has in the part's own drawing.

    :raises ConsistencyError: when a part cannot be drawn that way or the parts together do not extend H.
    """
    pattern = pattern_graph.pattern
    if not pattern.elements:
        return instance.drawing

    cells = {s: placement.cell(s) for s in pattern.elements}
    insertion = _Insertion(instance, {v: cells[s] for v, s in pattern.vertex_faces.items()},
                           {e: (cells[a], cells[b]) for e, (a, b) in pattern.edge_faces.items()},
                           {e: placement.crossed_edge(e) for e in pattern.edge_faces}, _anchors(placement, pattern))
    order = edge_order(instance)
    current = instance.drawing
    for part in pattern_graph.parts:
        edges = set(part.instance.e_add)
        wanted = added_rotations(part.drawing, list(part.instance.v_add))
        current = insertion.run(current, [e for e in order if edge_key(*e) in edges],
                                lambda drawing: _follows_rotations(drawing, wanted))
        if current is None:
            raise ConsistencyError(f'Part {part.elements} does not fit the cells {sorted(cells.values(), key=repr)}.')

    for v in instance.v_add:
        current = next(insertion.with_vertex(current, v), current)

    derived = derive_pattern(current, instance, validate=False)
    if not is_extension(current, instance) or not pattern_matches(derived, pattern, cells):
        raise ConsistencyError(f'The parts placed at {sorted(cells.values(), key=repr)} do not extend the drawing.')

    return current
