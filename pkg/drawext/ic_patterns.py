"""How added vertices of an IC extension sit inside the cells of H.

In an IC-planar drawing every vertex has at most one crossed edge, its special edge. Everything else an
added vertex sends to the boundary of its cell is uncrossed, so the boundary can be summarized by the
shadow vertices several added vertices share (difficult vertices) and by the stretches of boundary one
added vertex reaches alone (regions).
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Set, Tuple, Union

import networkx as nx

from drawext.constants import CROSS_MARK, CROSSING_TAG, IC_PLANAR, SKELETON_PREFIX
from drawext.drawing import CellId, Edge, Node, OnePlanarDrawing, base_dart, cell_lineage, edge_key, logger, twin
from drawext.exceptions import PatternError
from drawext.instance import ExtensionInstance, extension_violations
from drawext.pattern_graph import (PatternGraph, PatternGraphPart, Skeleton, Slot, search_skeleton,
                                   skeleton_instance)
from drawext.patterns import Element, base_corner, corner_edges, crossing_partner, rotation_key

REGION = 'region'
DIFFICULT = 'difficult'
SPECIAL = 'special'
H_EDGE = 'edge'
VERTEX_TAG = 'vertex'

Marker = Tuple[str, object, str]
Position = FrozenSet[Marker]
Subject = Union[Node, Edge]


class Region(NamedTuple):
    vertex: Node
    face: CellId
    shadows: Tuple[tuple, ...]


def routed_edges(base: OnePlanarDrawing, solution: OnePlanarDrawing, face: CellId) -> List[Tuple[tuple, List[Edge]]]:
    """Shadow vertices of a base cell in walk order, each with the added edges routed through it."""
    boundary = base.cell_by_id[face]
    if not boundary.darts:
        return [(('s', (v, v), 0), corner_edges(base, solution, (v, None))) for v in boundary.floating]

    found = []
    for d in boundary.darts:
        edges = [] if base.is_crossing(d[0]) else corner_edges(base, solution, (d[0], d))
        found.append((('s', d, 0), edges))
        if base.is_crossable(d):
            partner = crossing_partner(base, solution, d)
            found.append((('s', d, 1), [] if partner is None else [partner]))

    return found


def vertices_in(solution: OnePlanarDrawing, instance: ExtensionInstance, face: CellId,
                lineage: Optional[Dict[CellId, CellId]] = None) -> List[Node]:
    lineage = lineage or cell_lineage(instance.drawing, solution)
    return [v for v in instance.v_add if lineage[solution.cells_of(v)[0]] == face]


def compute_difficult_vertices(solution: OnePlanarDrawing, instance: ExtensionInstance, face: CellId) -> Set[tuple]:
    """Shadow vertices of face through which at least two edges of added vertices in face are routed."""
    inside = set(vertices_in(solution, instance, face))
    found = set()
    for shadow, edges in routed_edges(instance.drawing, solution, face):
        if shadow[2] == 0 and sum(1 for e in edges if set(e) & inside) >= 2:
            found.add(shadow)

    return found


def _shadow_cells(base: OnePlanarDrawing, solution: OnePlanarDrawing, shadow: tuple) -> Set[CellId]:
    d = shadow[1]
    if shadow[2] == 1:
        return {solution.cell_of(s) for s in solution.darts if base_dart(base, solution, s) == d}

    if d[0] == d[1]:
        return set(solution.cells_of(d[0]))

    return {solution.cell_of_corner(c) for c in solution.corners_of(d[0]) if base_corner(base, solution, c) == d}


def compute_regions(solution: OnePlanarDrawing, instance: ExtensionInstance, x: Node, face: CellId) -> List[Region]:
    """Maximal stretches of the boundary of face that x alone reaches, trimmed to the shadows x is joined to.

    A shadow belongs to a stretch when no added edge crosses it, no other added vertex of face is joined to
    it, and a curve from x reaches it without crossing the drawing. A stretch covering the whole cycle
    starts at the first shadow x is joined to.
    """
    base = instance.drawing
    lineage = cell_lineage(base, solution)
    others = set(vertices_in(solution, instance, face, lineage)) - {x}
    x_cells = set(solution.cells_of(x))
    cycle = routed_edges(base, solution, face)
    n = len(cycle)

    good = []
    for shadow, edges in cycle:
        crossed = shadow[2] == 1 and bool(edges)
        foreign = any(set(e) & others for e in edges)
        good.append(not crossed and not foreign and bool(_shadow_cells(base, solution, shadow) & x_cells))

    joined = [any(x in e for e in edges) for _, edges in cycle]
    if all(good):
        if not any(joined):
            return []

        start = joined.index(True)
        return [Region(x, face, tuple(cycle[(start + j) % n][0] for j in range(n)))]

    start = good.index(False)
    runs, run = [], []
    for j in range(1, n + 1):
        i = (start + j) % n
        if good[i]:
            run.append(i)

        elif run:
            runs.append(run)
            run = []

    regions = []
    for run in runs:
        ends = [p for p, i in enumerate(run) if joined[i]]
        if ends:
            regions.append(Region(x, face, tuple(cycle[i][0] for i in run[ends[0]:ends[-1] + 1])))

    return regions


def _marker_key(marker: Marker) -> Tuple:
    kind, subject, tag = marker
    return kind, repr(subject), tag


def position_key(position: Position) -> Tuple:
    return tuple(sorted(position, key=_marker_key))


@dataclass(frozen=True, eq=False)
class ExtendedPattern:
    """A pattern of an IC extension.

    Attributes
        :elements: The abstract cells.
        :vertex_faces: Cell of every added vertex.
        :routes: For every added vertex and every added edge inside H, the cells its special edge runs
            through with 'cross' where it crosses; a single cell when nothing is crossed. Routes of
            vertices start at the vertex, routes of edges at their first endpoint.
        :orders: Per cell, the clockwise cyclic order of positions. A position groups the markers met at one
            shadow vertex.
        :kappa: Added vertices plus added edges inside H of the instance the pattern is for.
    """
    elements: Tuple[Element, ...] = ()
    vertex_faces: Dict[Node, Element] = field(default_factory=dict)
    routes: Dict[Subject, Tuple] = field(default_factory=dict)
    orders: Dict[Element, Tuple[Position, ...]] = field(default_factory=dict)
    kappa: int = 0

    def __post_init__(self):
        self._validate_routes()
        self._validate_orders()

    def __repr__(self):
        return f'ExtendedPattern(elements={len(self.elements)}, vertices={len(self.vertex_faces)}, kappa={self.kappa})'

    def __eq__(self, other):
        if not isinstance(other, ExtendedPattern):
            return NotImplemented

        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def order(self, s: Element) -> Tuple[Position, ...]:
        return self.orders.get(s, ())

    def walk_order(self, s: Element) -> Tuple[Position, ...]:
        return tuple(reversed(self.order(s)))

    def canonical(self) -> Tuple:
        first_use: List[Element] = [self.vertex_faces[v] for v in sorted(self.vertex_faces)]
        for subject in sorted(self.routes, key=repr):
            first_use.extend(r for r in self.routes[subject] if r != CROSS_MARK)

        first_use.extend(sorted(self.elements, key=repr))
        names: Dict[Element, int] = {}
        for s in first_use:
            names.setdefault(s, len(names))

        def route(r):
            return tuple(CROSS_MARK if a == CROSS_MARK else names[a] for a in r)

        return (len(self.elements), self.kappa,
                tuple(sorted((v, names[s]) for v, s in self.vertex_faces.items())),
                tuple(sorted(((repr(k), route(r)) for k, r in self.routes.items()))),
                tuple(sorted((names[s], rotation_key(position_key(p) for p in positions))
                             for s, positions in self.orders.items() if positions)))

    def _validate_routes(self):
        known = set(self.elements)
        if len(self.elements) > 2 * self.kappa:
            raise PatternError(f'Expected at most {2 * self.kappa} elements, found {len(self.elements)}.')

        for v, s in self.vertex_faces.items():
            if s not in known:
                raise PatternError(f'Vertex {v} lies in {s!r}, which is not one of {self.elements}.')

        for subject, route in self.routes.items():
            if not 1 <= len(route) <= 3:
                raise PatternError(f'Expected a route of 1 to 3 entries for {subject}, found {route}.')

            if any(r != CROSS_MARK and r not in known for r in route):
                raise PatternError(f'Route {route} of {subject} leaves the elements {self.elements}.')

            if subject in self.vertex_faces and route[0] != self.vertex_faces[subject]:
                raise PatternError(f'Route of {subject} must start in {self.vertex_faces[subject]!r}, found {route[0]!r}.')

    def _validate_orders(self):
        for s, positions in self.orders.items():
            if s not in self.elements:
                raise PatternError(f'Order given for {s!r}, which is not one of {self.elements}.')

            markers = [m for p in positions for m in p]
            regions = sum(1 for m in markers if m[0] == REGION)
            if regions > 3 * self.kappa:
                raise PatternError(f'Expected at most {3 * self.kappa} regions around {s!r}, found {regions}.')

            difficult = [m for m in markers if m[0] == DIFFICULT]
            if len(difficult) > 3 * self.kappa ** 2:
                raise PatternError(f'Expected at most {3 * self.kappa ** 2} difficult vertices around {s!r}, '
                                   f'found {len(difficult)}.')

            inside = {v for v, f in self.vertex_faces.items() if f == s}
            for m in difficult:
                if not set(m[1]) <= inside:
                    raise PatternError(f'Difficult vertex {m} names vertices outside {s!r}.')

            per_subject = defaultdict(int)
            for m in markers:
                if m[0] in (SPECIAL, H_EDGE):
                    per_subject[(m[0], m[1])] += 1

            for (kind, subject), total in per_subject.items():
                cap = 3 if kind == SPECIAL else 4
                if total > cap:
                    raise PatternError(f'Expected at most {cap} entries of {subject} around {s!r}, found {total}.')

            for p in positions:
                if not p:
                    raise PatternError(f'Empty position around {s!r}.')

                if any(m[2] == CROSSING_TAG for m in p) and len(p) > 1:
                    raise PatternError(f'A crossing shares its position with other entries around {s!r}: {sorted(p, key=_marker_key)}.')


def _route(solution: OnePlanarDrawing, base: OnePlanarDrawing, lineage: Dict[CellId, CellId], e: Edge,
           start: Node) -> Tuple:
    segments = solution.segments(e)
    if start != e[0]:
        segments = [twin(d) for d in reversed(segments)]

    first = lineage[solution.cell_of(segments[0])]
    x = solution.crossed_edges.get(e)
    if x is None:
        return (first,)

    partner = next(g for g in solution.crossings[x] if g != e)
    if partner in base.edges:
        return first, CROSS_MARK, lineage[solution.cell_of(segments[-1])]

    return first, CROSS_MARK


def _special_edges(solution: OnePlanarDrawing, vertices) -> Dict[Node, Edge]:
    special = {}
    for e in sorted(solution.crossed_edges):
        for v in e:
            if v in vertices:
                special.setdefault(v, e)

    return special


def _crossing_marker(e: Edge, instance: ExtensionInstance) -> Marker:
    if e in instance.e_add_h:
        return H_EDGE, e, CROSSING_TAG

    return SPECIAL, min(w for w in e if w in instance.v_add), CROSSING_TAG


def derive_extended_pattern(solution: OnePlanarDrawing, instance: ExtensionInstance) -> ExtendedPattern:
    """Reads the extended pattern of an IC solution, naming every element by its base cell.

    :raises PatternError: when solution is not an IC extension of the instance.
    """
    if not instance.ic:
        raise PatternError('Extended patterns describe IC extensions only.')

    violations = extension_violations(solution, instance)
    if violations:
        raise PatternError(f'Cannot derive an extended pattern from an invalid solution: {violations[0].message}')

    base = instance.drawing
    lineage = cell_lineage(base, solution)
    vertex_faces = {v: lineage[solution.cells_of(v)[0]] for v in instance.v_add}
    special = _special_edges(solution, set(instance.v_add))
    routes: Dict[Subject, Tuple] = {}
    for v in instance.v_add:
        routes[v] = _route(solution, base, lineage, special[v], v) if v in special else (vertex_faces[v],)

    for e in instance.e_add_h:
        routes[e] = _route(solution, base, lineage, e, e[0])

    touched = {lineage[solution.cell_of(d)] for e in instance.e_add for d in solution.segments(e)}
    elements = sorted(touched | set(vertex_faces.values()), key=repr)
    orders = {s: _positions(solution, instance, s, lineage, special) for s in elements}

    return ExtendedPattern(tuple(elements), vertex_faces, routes, orders, instance.kappa)


def _positions(solution: OnePlanarDrawing, instance: ExtensionInstance, s: CellId, lineage: Dict[CellId, CellId],
               special: Dict[Node, Edge]) -> Tuple[Position, ...]:
    inside = set(vertices_in(solution, instance, s, lineage))
    starts = defaultdict(list)
    for x in sorted(inside):
        for region in compute_regions(solution, instance, x, s):
            starts[region.shadows[0]].append(x)

    positions = []
    for shadow, edges in routed_edges(instance.drawing, solution, s):
        markers = set()
        if shadow[2] == 1:
            markers.update(_crossing_marker(e, instance) for e in edges)

        else:
            q = shadow[1][0]
            from_inside = [e for e in edges if set(e) & inside]
            if len(from_inside) >= 2:
                markers.add((DIFFICULT, tuple(sorted({w for e in from_inside for w in e if w in inside})), ''))

            for e in edges:
                if e in instance.e_add_h:
                    markers.add((H_EDGE, e, q))

                for y in e:
                    if special.get(y) == e and y in instance.v_add:
                        markers.add((SPECIAL, y, VERTEX_TAG))

        markers.update((REGION, x, '') for x in starts.get(shadow, ()))
        if markers:
            positions.append(frozenset(markers))

    return tuple(reversed(positions))


def _extended_components(ep: ExtendedPattern, instance: ExtensionInstance) -> List[List[Element]]:
    graph = nx.Graph()
    graph.add_nodes_from(ep.elements)
    for route in ep.routes.values():
        faces = [r for r in route if r != CROSS_MARK]
        graph.add_edges_from(zip(faces, faces[1:]))

    seen: Dict[object, Element] = {}
    for s, positions in ep.orders.items():
        for p in positions:
            for kind, subject, tag in p:
                if kind in (REGION, SPECIAL):
                    graph.add_edge(s, ep.vertex_faces[subject])

                key = (kind, subject)
                if kind in (SPECIAL, H_EDGE) and key in seen:
                    graph.add_edge(s, seen[key])

                seen.setdefault(key, s)

    for u, v in instance.e_add_not_h:
        if u in ep.vertex_faces and v in ep.vertex_faces:
            graph.add_edge(ep.vertex_faces[u], ep.vertex_faces[v])

    return sorted((sorted(c, key=repr) for c in nx.connected_components(graph)), key=repr)


class _ExtendedSkeleton(NamedTuple):
    skeleton: Skeleton
    markers: Dict[Node, Position]
    slots: Dict[Marker, Slot]


def _extended_skeleton(ep: ExtendedPattern, elements: List[Element]) -> Optional[_ExtendedSkeleton]:
    skeleton = Skeleton()
    markers: Dict[Node, Position] = {}
    slots: Dict[Marker, Slot] = {}
    uses: Dict[Marker, int] = defaultdict(int)
    for s in elements:
        items = []
        for p in ep.walk_order(s):
            crossing = [m for m in p if m[2] == CROSSING_TAG]
            if crossing:
                m = crossing[0]
                if m not in slots:
                    slots[m] = Slot(f'{SKELETON_PREFIX}s{len(slots)}a', f'{SKELETON_PREFIX}s{len(slots)}b')

                slot = slots[m]
                items.append(slot if uses[m] == 0 else Slot(slot.second, slot.first))
                uses[m] += 1
                continue

            node = f'{SKELETON_PREFIX}p{len(markers)}'
            markers[node] = p
            items.append(node)

        skeleton.add_face(s, items)

    if any(count != 2 for count in uses.values()):
        return None

    return _ExtendedSkeleton(skeleton, markers, slots)


class _ExtendedEdges(NamedTuple):
    """Added edges of an extended pattern graph.

    Attributes
        :edges: Every added edge of the pattern graph.
        :h_edges: Added edge of H to the pair of position nodes standing for its endpoints, first endpoint first.
        :vertex_ends: Added vertex to the position node its special edge ends at.
    """
    edges: Set[Edge]
    h_edges: Dict[Edge, Tuple[Node, Node]]
    vertex_ends: Dict[Node, Node]


def _extended_edges(ep: ExtendedPattern, instance: ExtensionInstance, markers: Dict[Node, Position],
                    vertices: List[Node], keep: Set[Element]) -> Optional[_ExtendedEdges]:
    edges: Set[Edge] = set()
    ends: Dict[Tuple[Edge, Node], Node] = {}
    vertex_ends: Dict[Node, Node] = {}
    for node, p in sorted(markers.items()):
        for kind, subject, tag in p:
            if kind == REGION:
                edges.add(edge_key(subject, node))

            elif kind == SPECIAL and tag == VERTEX_TAG:
                edges.add(edge_key(subject, node))
                vertex_ends[subject] = node

            elif kind == DIFFICULT:
                edges.update(edge_key(y, node) for y in subject)

            elif kind == H_EDGE:
                ends[(subject, tag)] = node

    h_edges = {}
    for e in instance.e_add_h:
        if ep.routes[e][0] not in keep:
            continue

        if (e, e[0]) not in ends or (e, e[1]) not in ends:
            logger.debug(f'Added edge {e} of H lacks an endpoint position')
            return None

        h_edges[e] = (ends[(e, e[0])], ends[(e, e[1])])
        edges.add(edge_key(*h_edges[e]))

    chosen = set(vertices)
    edges.update(edge_key(u, v) for u, v in instance.e_add_not_h if u in chosen and v in chosen)

    return _ExtendedEdges(edges, h_edges, vertex_ends)


class _ExtendedFit:
    """Accepts drawings of an extended skeleton that follow the cells and routes of the pattern."""

    def __init__(self, ep: ExtendedPattern, instance: ExtensionInstance, face_of: Dict[Element, CellId],
                 edges: _ExtendedEdges, slots: Dict[Marker, Slot]):
        self.ep = ep
        self.instance = instance
        self.face_of = face_of
        self.edges = edges
        self.slots = {m: edge_key(*slot) for m, slot in slots.items()}

    def _wanted(self, subject: Subject) -> Tuple:
        return tuple(r if r == CROSS_MARK else self.face_of[r] for r in self.ep.routes[subject])

    def _follows(self, drawing: OnePlanarDrawing, lineage: Dict[CellId, CellId], g: Edge, start: Node,
                 wanted: Tuple, marker: Marker) -> bool:
        if _route(drawing, self.instance.drawing, lineage, g, start) != wanted:
            return False

        if len(wanted) < 3:
            return True

        x = drawing.crossed_edges[g]
        return self.slots.get(marker) == next(h for h in drawing.crossings[x] if h != g)

    def is_compatible(self, drawing: OnePlanarDrawing) -> bool:
        lineage = cell_lineage(self.instance.drawing, drawing)
        cells = set(self.face_of.values())
        added = set(self.instance.v_add)
        for v in added:
            if lineage[drawing.cells_of(v)[0]] != self.face_of[self.ep.vertex_faces[v]]:
                return False

        for e in self.instance.e_add:
            if any(lineage[drawing.cell_of(d)] not in cells for d in drawing.segments(e)):
                return False

        special = _special_edges(drawing, added)
        for v in sorted(added):
            wanted = self._wanted(v)
            g = special.get(v)
            if g is None:
                if len(wanted) > 1:
                    return False

                continue

            if v in self.edges.vertex_ends and g != edge_key(v, self.edges.vertex_ends[v]):
                return False

            marker = (SPECIAL, min(w for w in g if w in added), CROSSING_TAG)
            if not self._follows(drawing, lineage, g, v, wanted, marker):
                return False

        for e, (a, b) in self.edges.h_edges.items():
            if not self._follows(drawing, lineage, edge_key(a, b), a, self._wanted(e), (H_EDGE, e, CROSSING_TAG)):
                return False

        return True


def _realize_extended(ep: ExtendedPattern, instance: ExtensionInstance, elements: List[Element]) -> Optional[PatternGraphPart]:
    built = _extended_skeleton(ep, elements)
    if built is None:
        logger.debug(f'Crossings of elements {elements} do not pair up')
        return None

    keep = set(elements)
    vertices = sorted(v for v, s in ep.vertex_faces.items() if s in keep)
    edges = _extended_edges(ep, instance, built.markers, vertices, keep)
    if edges is None:
        return None

    for drawing, face_of in built.skeleton.drawings():
        part = skeleton_instance(drawing, vertices, sorted(edges.edges), IC_PLANAR)
        if part is None:
            continue

        homes = {v: face_of[ep.vertex_faces[v]] for v in vertices}
        solution = search_skeleton(part, _ExtendedFit(ep, part, face_of, edges, built.slots), homes)
        if solution is not None:
            return PatternGraphPart(tuple(elements), part, solution, face_of)

    return None


def check_validity_extended(ep: ExtendedPattern, instance: ExtensionInstance) -> Optional[PatternGraph]:
    """Builds an IC pattern graph for an extended pattern, or returns None when it is not valid."""
    if set(ep.vertex_faces) != set(instance.v_add) or set(ep.routes) != set(instance.v_add) | set(instance.e_add_h):
        logger.debug('Extended pattern does not cover the added vertices and edges of the instance')
        return None

    parts = []
    for elements in _extended_components(ep, instance):
        part = _realize_extended(ep, instance, elements)
        if part is None:
            logger.debug(f'No IC pattern graph realizes elements {elements}')
            return None

        parts.append(part)

    return PatternGraph(ep, tuple(parts))


def iter_region_counts(solution: OnePlanarDrawing, instance: ExtensionInstance) -> Iterator[Tuple[CellId, int, int]]:
    """Per base cell holding an added vertex: the cell, its difficult vertex count and its region count.

    Regions are counted over every added vertex of the cell together.
    """
    lineage = cell_lineage(instance.drawing, solution)
    for cell in instance.drawing.cells:
        inside = vertices_in(solution, instance, cell.id, lineage)
        if not inside:
            continue

        regions = sum(len(compute_regions(solution, instance, x, cell.id)) for x in inside)
        yield cell.id, len(compute_difficult_vertices(solution, instance, cell.id)), regions
