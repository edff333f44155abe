import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Set, Tuple

from drawext.constants import CROSSING_PREFIX
from drawext.exceptions import CrossabilityError, PlacementError, StructureError

logger = logging.getLogger('drawext')
logger.addHandler(logging.NullHandler())

Node = str
Edge = Tuple[str, str]
Dart = Tuple[str, str]
Corner = Tuple[str, Optional[Dart]]
CellId = Optional[Dart]


def edge_key(u: Node, v: Node) -> Edge:
    return (u, v) if u <= v else (v, u)


def twin(dart: Dart) -> Dart:
    return dart[1], dart[0]


def cyclic_canonical(seq: Iterable) -> Tuple:
    """Rotates a cyclic sequence so that it starts at its smallest element."""
    seq = tuple(seq)
    if not seq:
        return seq

    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


class Violation(NamedTuple):
    kind: str
    subject: object
    message: str


class Placement(NamedTuple):
    """A canonical placement of one edge: two corners and an optional crossed dart on the u side."""
    edge: Edge
    u_corner: Corner
    v_corner: Corner
    crossing: Optional[Dart] = None


@dataclass(frozen=True)
class CellBoundary:
    id: CellId
    darts: Tuple[Dart, ...]
    holes: Tuple[Tuple[Dart, ...], ...] = ()
    floating: Tuple[Node, ...] = ()
    is_outer: bool = False

    @property
    def all_darts(self) -> List[Dart]:
        darts = list(self.darts)
        for walk in self.holes:
            darts.extend(walk)

        return darts

    @property
    def corners(self) -> List[Corner]:
        corners: List[Corner] = [(d[0], d) for d in self.all_darts]
        corners.extend((v, None) for v in self.floating)

        return corners

    @property
    def incident_real_vertices(self) -> List[Node]:
        return [c[0] for c in self.corners]

    def __repr__(self):
        return f'CellBoundary(id={self.id}, darts={len(self.darts)}, holes={len(self.holes)}, outer={self.is_outer})'


@dataclass(frozen=True)
class OnePlanarDrawing:
    """A 1-planar drawing kept as the plane map of its planarization.

    The face of a dart is the one on its left; walking a face follows `next_dart`. Inner faces are
    traversed counterclockwise, the outer face clockwise.

    Attributes
        :rotation: Clockwise neighbour order at every map node, crossing nodes included.
        :crossings: Crossing node id to the sorted pair of original edges that cross there.
        :outer: A dart on the outer face of the root component, or None when the map has no darts.
        :nested: For every component other than the root, one anchor vertex mapped to (a dart on its
            outward face or None for an isolated vertex, a host dart whose cell contains it).
    """
    rotation: Dict[Node, Tuple[Node, ...]]
    crossings: Dict[Node, Tuple[Edge, Edge]] = field(default_factory=dict)
    outer: Optional[Dart] = None
    nested: Dict[Node, Tuple[Optional[Dart], Dart]] = field(default_factory=dict)

    def __repr__(self):
        return f'OnePlanarDrawing(vertices={len(self.vertices)}, edges={len(self.edges)}, ' \
               f'crossings={len(self.crossings)}, outer={self.outer})'

    def is_crossing(self, node: Node) -> bool:
        return node in self.crossings

    @cached_property
    def vertices(self) -> Tuple[Node, ...]:
        return tuple(sorted(n for n in self.rotation if n not in self.crossings))

    @cached_property
    def darts(self) -> Tuple[Dart, ...]:
        return tuple(sorted((u, w) for u, nbrs in self.rotation.items() for w in nbrs))

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        found: Set[Edge] = set()
        for u, w in self.darts:
            if u not in self.crossings and w not in self.crossings:
                found.add(edge_key(u, w))

        for pair in self.crossings.values():
            found.update(pair)

        return tuple(sorted(found))

    @cached_property
    def crossed_edges(self) -> Dict[Edge, Node]:
        crossed = {}
        for x, (e, g) in self.crossings.items():
            crossed[e] = x
            crossed[g] = x

        return crossed

    def edge_of(self, dart: Dart) -> Edge:
        """Returns the original edge a planarization dart belongs to."""
        u, w = dart
        if u in self.crossings:
            u, w = w, u

        if w in self.crossings:
            for e in self.crossings[w]:
                if u in e:
                    return e

            raise StructureError(f'Dart {dart} does not belong to an edge crossing at {w}.')

        return edge_key(u, w)

    def segments(self, edge: Edge) -> List[Dart]:
        """Returns the darts of an edge in order from edge[0] to edge[1]."""
        u, v = edge
        x = self.crossed_edges.get(edge)
        if x is None:
            return [(u, v)]

        return [(u, x), (x, v)]

    def is_crossable(self, dart: Dart) -> bool:
        """A segment is crossable when its edge is not crossed yet."""
        return dart[0] not in self.crossings and dart[1] not in self.crossings

    def degree(self, node: Node) -> int:
        return len(self.rotation.get(node, ()))

    def has_dart(self, dart: Dart) -> bool:
        return dart in self._position

    @cached_property
    def _position(self) -> Dict[Dart, int]:
        return {(u, w): i for u, nbrs in self.rotation.items() for i, w in enumerate(nbrs)}

    def succ_cw(self, node: Node, nbr: Node) -> Node:
        nbrs = self.rotation[node]
        return nbrs[(self._position[(node, nbr)] + 1) % len(nbrs)]

    def pred_cw(self, node: Node, nbr: Node) -> Node:
        nbrs = self.rotation[node]
        return nbrs[(self._position[(node, nbr)] - 1) % len(nbrs)]

    def next_dart(self, dart: Dart) -> Dart:
        u, v = dart
        return v, self.succ_cw(v, u)

    def prev_dart(self, dart: Dart) -> Dart:
        u, v = dart
        return self.pred_cw(u, v), u

    @cached_property
    def walks(self) -> Tuple[Tuple[Dart, ...], ...]:
        seen: Set[Dart] = set()
        walks = []
        for start in self.darts:
            if start in seen:
                continue

            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self.next_dart(d)

            walks.append(tuple(walk))

        return tuple(walks)

    @cached_property
    def walk_of(self) -> Dict[Dart, int]:
        return {d: i for i, walk in enumerate(self.walks) for d in walk}

    def walk_through(self, dart: Dart) -> Tuple[Dart, ...]:
        return self.walks[self.walk_of[dart]]

    @cached_property
    def component_of(self) -> Dict[Node, int]:
        comp: Dict[Node, int] = {}
        count = 0
        for start in sorted(self.rotation):
            if start in comp:
                continue

            stack = [start]
            comp[start] = count
            while stack:
                n = stack.pop()
                for w in self.rotation[n]:
                    if w not in comp:
                        comp[w] = count
                        stack.append(w)

            count += 1

        return comp

    @cached_property
    def component_count(self) -> int:
        return len(set(self.component_of.values()))

    def entry_for(self, comp: int) -> Optional[Node]:
        """Returns the nesting anchor of a component, or None for the root."""
        for anchor in self.nested:
            if self.component_of.get(anchor) == comp:
                return anchor

        return None

    @cached_property
    def outward_walks(self) -> Dict[int, Node]:
        """Walk index to the anchor whose outward face it is."""
        return {self.walk_of[o]: a for a, (o, h) in self.nested.items() if o is not None and o in self.walk_of}

    @cached_property
    def _cell_data(self) -> Tuple[List[CellBoundary], Dict[Dart, CellId], Dict[Node, CellId]]:
        if self.outer is None:
            if self.darts:
                raise StructureError('A drawing with edges needs an outer dart.')

            return [CellBoundary(None, (), (), self.vertices, True)], {}, {v: None for v in self.vertices}

        cells: List[CellBoundary] = []
        dart_cell: Dict[Dart, CellId] = {}
        isolated_cell: Dict[Node, CellId] = {}
        guests: Dict[int, List[Node]] = {}
        for anchor, (outward, host) in sorted(self.nested.items()):
            if host not in self.walk_of:
                raise StructureError(f'Host dart {host} of {anchor} is not part of the drawing.')

            guests.setdefault(self.walk_of[host], []).append(anchor)

        for i, walk in enumerate(self.walks):
            if i in self.outward_walks:
                continue

            cid = min(walk)
            start = walk.index(cid)
            holes = []
            floating = []
            for anchor in guests.get(i, []):
                outward = self.nested[anchor][0]
                if outward is None:
                    floating.append(anchor)
                    isolated_cell[anchor] = cid

                else:
                    hole = self.walk_through(outward)
                    holes.append(hole)
                    for d in hole:
                        dart_cell[d] = cid

            for d in walk:
                dart_cell[d] = cid

            cells.append(CellBoundary(cid, walk[start:] + walk[:start], tuple(holes), tuple(floating), self.outer in walk))

        return cells, dart_cell, isolated_cell

    @property
    def cells(self) -> List[CellBoundary]:
        return self._cell_data[0]

    @cached_property
    def cell_by_id(self) -> Dict[CellId, CellBoundary]:
        return {c.id: c for c in self.cells}

    def cell_of(self, dart: Dart) -> CellId:
        return self._cell_data[1][dart]

    def cell_of_corner(self, corner: Corner) -> CellId:
        node, dart = corner
        if dart is None:
            if self.rotation.get(node):
                raise PlacementError(f'Vertex {node} is not isolated; its corners need a dart.')

            if node not in self._cell_data[2]:
                raise StructureError(f'Isolated vertex {node} is not nested in any cell.')

            return self._cell_data[2][node]

        if dart[0] != node or dart not in self._position:
            raise PlacementError(f'Corner {corner} does not name a dart leaving {node}.')

        return self._cell_data[1][dart]

    @property
    def outer_cell(self) -> CellId:
        return self.cell_of(self.outer) if self.outer is not None else None

    def corners_of(self, node: Node) -> List[Corner]:
        nbrs = self.rotation[node]
        if not nbrs:
            return [(node, None)]

        return [(node, (node, w)) for w in nbrs]

    def corners_in(self, node: Node, cell: CellId) -> List[Corner]:
        return [c for c in self.corners_of(node) if self.cell_of_corner(c) == cell]

    def cells_of(self, node: Node) -> List[CellId]:
        seen: List[CellId] = []
        for c in self.corners_of(node):
            cid = self.cell_of_corner(c)
            if cid not in seen:
                seen.append(cid)

        return seen

    def next_crossing_id(self) -> Node:
        i = 0
        while f'{CROSSING_PREFIX}{i}' in self.rotation:
            i += 1

        return f'{CROSSING_PREFIX}{i}'

    def canonical(self) -> Tuple:
        """A hashable key that is equal for identical maps, crossing ids included."""
        rotation = tuple(sorted((n, cyclic_canonical(nbrs)) for n, nbrs in self.rotation.items()))
        crossings = tuple(sorted(self.crossings.items()))
        outer = frozenset(self.walk_through(self.outer)) if self.outer is not None else None

        return rotation, crossings, outer


def drawing_from_rotation(rotation: Dict[Node, Iterable[Node]], crossings: Dict[Node, Tuple[Edge, Edge]] = None,
                          outer: Optional[Dart] = None) -> OnePlanarDrawing:
    """Builds a connected drawing, picking the smallest dart as outer face when none is given."""
    rotation = {n: tuple(nbrs) for n, nbrs in rotation.items()}
    crossings = {x: tuple(sorted(edge_key(*e) for e in pair)) for x, pair in (crossings or {}).items()}
    if outer is None:
        darts = sorted((u, w) for u, nbrs in rotation.items() for w in nbrs)
        outer = darts[0] if darts else None

    return OnePlanarDrawing(rotation, crossings, outer, {})


def validate_one_planar(drawing: OnePlanarDrawing) -> List[Violation]:
    """Checks the map and its 1-planarity. Returns the list of violations, empty when the drawing is valid.

    :raises StructureError: when the map is malformed (asymmetric rotation, repeated or dangling darts).
    """
    _validate_structure(drawing)
    violations: List[Violation] = []

    for x, pair in sorted(drawing.crossings.items()):
        nbrs = drawing.rotation[x]
        e, g = pair
        if len(nbrs) != 4:
            violations.append(Violation('crossing-degree', x, f'Expected 4 neighbours at crossing {x}, found {len(nbrs)}.'))
            continue

        if e == g or set(e) & set(g):
            violations.append(Violation('adjacent-crossing', x, f'Edges {e} and {g} crossing at {x} must be distinct '
                                                                 f'and share no endpoint.'))

        if any(drawing.is_crossing(w) for w in nbrs):
            violations.append(Violation('crossing-adjacency', x, f'Crossing {x} is adjacent to another crossing.'))

        if {nbrs[0], nbrs[2]} not in ({*e}, {*g}) or {nbrs[1], nbrs[3]} not in ({*e}, {*g}) \
                or {nbrs[0], nbrs[2]} == {nbrs[1], nbrs[3]}:
            violations.append(Violation('crossing-alternation', x, f'Rotation {nbrs} at {x} does not alternate '
                                                                   f'between {e} and {g}.'))

    seen_crossed: Dict[Edge, Node] = {}
    for x, pair in sorted(drawing.crossings.items()):
        for e in pair:
            if e in seen_crossed:
                violations.append(Violation('multiple-crossings', e, f'Edge {e} is crossed at {seen_crossed[e]} and {x}.'))

            seen_crossed[e] = x

    for u, w in drawing.darts:
        if u < w and not drawing.is_crossing(u) and not drawing.is_crossing(w) and edge_key(u, w) in seen_crossed:
            violations.append(Violation('edge-twice', edge_key(u, w), f'Edge {edge_key(u, w)} is drawn directly and '
                                                                      f'through crossing {seen_crossed[edge_key(u, w)]}.'))

    violations.extend(_euler_violations(drawing))
    violations.extend(_nesting_violations(drawing))

    return violations


def validate_ic_planar(drawing: OnePlanarDrawing) -> List[Violation]:
    """Checks that no vertex is incident to two crossed edges; 1-planarity violations are reported first."""
    violations = validate_one_planar(drawing)
    if violations:
        return violations

    owner: Dict[Node, Edge] = {}
    for e in sorted(drawing.crossed_edges):
        for w in e:
            if w in owner:
                violations.append(Violation('ic', w, f'Vertex {w} is incident to crossed edges {owner[w]} and {e}.'))

            else:
                owner[w] = e

    return violations


def _validate_structure(drawing: OnePlanarDrawing):
    for n, nbrs in drawing.rotation.items():
        if len(set(nbrs)) != len(nbrs):
            raise StructureError(f'Rotation at {n} repeats a neighbour: {nbrs}.')

        for w in nbrs:
            if w == n:
                raise StructureError(f'Self-loop at {n}.')

            if w not in drawing.rotation:
                raise StructureError(f'Dart ({n}, {w}) points to an unknown node.')

            if n not in drawing.rotation[w]:
                raise StructureError(f'Dart ({n}, {w}) has no twin.')

    for x in drawing.crossings:
        if x not in drawing.rotation:
            raise StructureError(f'Crossing {x} is not a node of the map.')

    if drawing.outer is not None and not drawing.has_dart(drawing.outer):
        raise StructureError(f'Outer dart {drawing.outer} is not part of the map.')

    for anchor, (outward, host) in drawing.nested.items():
        if anchor not in drawing.rotation:
            raise StructureError(f'Nesting anchor {anchor} is not a node of the map.')

        for d in (outward, host):
            if d is not None and not drawing.has_dart(d):
                raise StructureError(f'Nesting dart {d} of {anchor} is not part of the map.')


def _euler_violations(drawing: OnePlanarDrawing) -> List[Violation]:
    comp = drawing.component_of
    nodes: Dict[int, int] = {}
    darts: Dict[int, int] = {}
    faces: Dict[int, int] = {}
    for n in drawing.rotation:
        nodes[comp[n]] = nodes.get(comp[n], 0) + 1

    for u, w in drawing.darts:
        darts[comp[u]] = darts.get(comp[u], 0) + 1

    for walk in drawing.walks:
        faces[comp[walk[0][0]]] = faces.get(comp[walk[0][0]], 0) + 1

    violations = []
    for c in sorted(nodes):
        f = faces.get(c, 1)
        chi = nodes[c] - darts.get(c, 0) // 2 + f
        if chi != 2:
            violations.append(Violation('euler', c, f'Expected Euler characteristic 2 on component {c}, found {chi}.'))

    return violations


def _nesting_violations(drawing: OnePlanarDrawing) -> List[Violation]:
    comp = drawing.component_of
    if drawing.outer is None:
        if drawing.nested:
            return [Violation('nesting', None, 'A drawing without edges cannot nest components.')]

        return []

    violations = []
    root = comp[drawing.outer[0]]
    entries: Dict[int, Node] = {}
    for anchor, (outward, host) in sorted(drawing.nested.items()):
        c = comp[anchor]
        if c == root:
            violations.append(Violation('nesting', anchor, f'Anchor {anchor} belongs to the root component.'))

        if c in entries:
            violations.append(Violation('nesting', anchor, f'Component of {anchor} is nested twice.'))

        entries[c] = anchor
        if outward is None and drawing.rotation[anchor]:
            violations.append(Violation('nesting', anchor, f'Anchor {anchor} has edges but no outward dart.'))

        if outward is not None and comp[outward[0]] != c:
            violations.append(Violation('nesting', anchor, f'Outward dart {outward} is not in the component of {anchor}.'))

        if comp[host[0]] == c:
            violations.append(Violation('nesting', anchor, f'Host dart {host} lies in the component of {anchor}.'))

        if drawing.walk_of[host] in drawing.outward_walks:
            violations.append(Violation('nesting', anchor, f'Host dart {host} of {anchor} lies on an outward face.'))

    for c in sorted(set(comp.values())):
        if c != root and c not in entries:
            violations.append(Violation('nesting', c, f'Component {c} is not placed in any cell.'))

    if violations:
        return violations

    for c, anchor in entries.items():
        seen = {c}
        current = anchor
        while comp[current] != root:
            host = drawing.nested[drawing.entry_for(comp[current])][1]
            current = host[0]
            if comp[current] in seen:
                violations.append(Violation('nesting', anchor, f'Nesting of {anchor} is cyclic.'))
                break

            seen.add(comp[current])

    return violations


class _Builder:
    """Mutable working copy used by the insertion and deletion moves."""

    def __init__(self, drawing: OnePlanarDrawing):
        self.rotation: Dict[Node, List[Node]] = {n: list(nbrs) for n, nbrs in drawing.rotation.items()}
        self.crossings = dict(drawing.crossings)
        self.outer = drawing.outer
        self.nested = dict(drawing.nested)

    def build(self) -> OnePlanarDrawing:
        return OnePlanarDrawing({n: tuple(v) for n, v in self.rotation.items()}, dict(self.crossings),
                                self.outer, dict(self.nested))

    def remap(self, mapping: Dict[Dart, Optional[Dart]]):
        if self.outer in mapping:
            self.outer = mapping[self.outer]

        for anchor, (outward, host) in list(self.nested.items()):
            self.nested[anchor] = (mapping.get(outward, outward), mapping.get(host, host))

    def subdivide(self, dart: Dart, x: Node) -> Node:
        a, b = dart
        self.rotation[a][self.rotation[a].index(b)] = x
        self.rotation[b][self.rotation[b].index(a)] = x
        self.rotation[x] = [a, b]
        self.remap({(a, b): (a, x), (b, a): (b, x)})

        return x

    def _insert(self, corner: Corner, other: Node):
        node, dart = corner
        nbrs = self.rotation[node]
        if dart is None:
            nbrs.append(other)

        else:
            nbrs.insert(nbrs.index(dart[1]), other)

    def chord(self, c1: Corner, c2: Corner):
        """Joins two corners of one cell by a new planarization edge."""
        snap = self.build()
        p, q = c1[0], c2[0]
        comp = snap.component_of
        cell = snap.cell_of_corner(c1)
        self._insert(c1, q)
        self._insert(c2, p)
        new_dart = (p, q)

        if snap.outer is None:
            self.outer = new_dart
            self.nested = {w: (None, new_dart) for w in self.rotation if w not in (p, q)}
            return

        if comp[p] == comp[q]:
            return

        owner = comp[cell[0]]
        entry_p = snap.entry_for(comp[p])
        entry_q = snap.entry_for(comp[q])
        if comp[p] == owner:
            del self.nested[entry_q]

        elif comp[q] == owner:
            del self.nested[entry_p]

        else:
            outward = self.nested[entry_p][0] or self.nested[entry_q][0] or new_dart
            host = self.nested[entry_p][1]
            del self.nested[entry_q]
            self.nested[entry_p] = (outward, host)


def place_vertex(drawing: OnePlanarDrawing, v: Node, cell: CellId) -> OnePlanarDrawing:
    """Adds v as an isolated vertex lying inside the given cell."""
    if v in drawing.rotation:
        raise PlacementError(f'Vertex {v} is already drawn.')

    if cell not in drawing.cell_by_id:
        raise PlacementError(f'Unknown cell {cell}.')

    builder = _Builder(drawing)
    builder.rotation[v] = []
    if drawing.outer is not None:
        builder.nested[v] = (None, cell)

    return builder.build()


def place_edge(drawing: OnePlanarDrawing, edge: Edge, u_corner: Corner, v_corner: Corner,
               crossing: Optional[Dart] = None) -> OnePlanarDrawing:
    """Inserts an edge between two corners, optionally crossing one uncrossed edge segment.

    :param crossing: The dart of the crossed segment that has u's cell on its left.
    """
    u, v = u_corner[0], v_corner[0]
    if edge_key(u, v) != edge_key(*edge):
        raise PlacementError(f'Corners {u_corner}, {v_corner} do not belong to edge {edge}.')

    if u == v:
        raise PlacementError(f'Self-loop at {u} is not allowed.')

    for w in (u, v):
        if w not in drawing.rotation or drawing.is_crossing(w):
            raise PlacementError(f'Endpoint {w} is not a drawn vertex.')

    if edge_key(u, v) in drawing.edges:
        raise PlacementError(f'Edge {edge_key(u, v)} is already drawn.')

    cu = drawing.cell_of_corner(u_corner)
    cv = drawing.cell_of_corner(v_corner)
    builder = _Builder(drawing)

    if crossing is None:
        if cu != cv:
            raise PlacementError(f'Corners of {u} and {v} lie in different cells ({cu} and {cv}).')

        builder.chord(u_corner, v_corner)
        return builder.build()

    if not drawing.has_dart(crossing):
        raise PlacementError(f'Crossed dart {crossing} is not part of the drawing.')

    if not drawing.is_crossable(crossing):
        raise CrossabilityError(f'Edge {drawing.edge_of(crossing)} is already crossed.')

    a, b = crossing
    if {a, b} & {u, v}:
        raise CrossabilityError(f'Edge {edge_key(u, v)} cannot cross its adjacent edge {edge_key(a, b)}.')

    if drawing.cell_of(crossing) != cu or drawing.cell_of(twin(crossing)) != cv:
        raise PlacementError(f'Crossing {crossing} does not separate the cells of {u} and {v}.')

    x = builder.subdivide(crossing, drawing.next_crossing_id())
    builder.chord(u_corner, (x, (x, b)))
    builder.chord((x, (x, a)), v_corner)
    builder.crossings[x] = tuple(sorted((edge_key(u, v), edge_key(a, b))))

    return builder.build()


def apply_placement(drawing: OnePlanarDrawing, placement: Placement) -> OnePlanarDrawing:
    return place_edge(drawing, placement.edge, placement.u_corner, placement.v_corner, placement.crossing)


def iter_placements(drawing: OnePlanarDrawing, u: Node, v: Node) -> Iterator[Placement]:
    """Yields every canonical placement of the edge uv: chords first, then one-crossing routes."""
    edge = edge_key(u, v)
    u_corners = [(c, drawing.cell_of_corner(c)) for c in drawing.corners_of(u)]
    v_corners = [(c, drawing.cell_of_corner(c)) for c in drawing.corners_of(v)]

    for cu, cell_u in u_corners:
        for cv, cell_v in v_corners:
            if cell_u == cell_v:
                yield Placement(edge, cu, cv, None)

    for cu, cell_u in u_corners:
        if cell_u is None:
            continue

        for d in drawing.cell_by_id[cell_u].all_darts:
            if not drawing.is_crossable(d) or {d[0], d[1]} & {u, v}:
                continue

            cell_v = drawing.cell_of(twin(d))
            for cv, cv_cell in v_corners:
                if cv_cell == cell_v:
                    yield Placement(edge, cu, cv, d)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]

        return a

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _relocate(drawing: OnePlanarDrawing, dart: Dart, removed: Set[Dart]) -> Optional[Dart]:
    walk = drawing.walk_through(dart)
    start = walk.index(dart)
    for d in walk[start:] + walk[:start]:
        if d not in removed:
            return d

    return None


def delete_edge(drawing: OnePlanarDrawing, edge: Edge) -> OnePlanarDrawing:
    """Removes an edge, smoothing its crossing node back into the other edge."""
    edge = edge_key(*edge)
    if edge not in drawing.edges:
        raise PlacementError(f'Edge {edge} is not drawn.')

    u, v = edge
    x = drawing.crossed_edges.get(edge)
    removed = {(u, v), (v, u)} if x is None else {(u, x), (x, u), (x, v), (v, x)}

    groups = _UnionFind()
    for d in removed:
        groups.union(drawing.cell_of(d), drawing.cell_of(twin(d)))

    # surviving darts whose face ran into a removed dart
    seams: List[Tuple[Dart, object]] = []
    for d in sorted(removed):
        p = drawing.prev_dart(d)
        if p not in removed:
            seams.append((p, groups.find(drawing.cell_of(d))))

    leaving = {u: drawing.segments(edge)[0], v: twin(drawing.segments(edge)[-1])}

    builder = _Builder(drawing)
    moved = {}
    refs = [drawing.outer] + [d for pair in drawing.nested.values() for d in pair]
    for ref in refs:
        if ref in removed and ref not in moved:
            moved[ref] = _relocate(drawing, ref, removed)

    builder.remap(moved)
    smoothing: Dict[Dart, Dart] = {}
    if x is None:
        builder.rotation[u].remove(v)
        builder.rotation[v].remove(u)

    else:
        builder.rotation[u].remove(x)
        builder.rotation[v].remove(x)
        a, b = [e for e in drawing.crossings[x] if e != edge][0]
        builder.rotation[a][builder.rotation[a].index(x)] = b
        builder.rotation[b][builder.rotation[b].index(x)] = a
        del builder.rotation[x]
        del builder.crossings[x]
        smoothing = {(a, x): (a, b), (x, b): (a, b), (b, x): (b, a), (x, a): (b, a)}
        builder.remap(smoothing)

    seam_darts = [(w, None, groups.find(drawing.cell_of(d))) for w, d in leaving.items()]
    for d, group in seams:
        d = smoothing.get(d, d)
        seam_darts.append((d[0], d, group))

    _repair_nesting(builder, drawing, drawing.component_of[u], seam_darts)

    return builder.build()


def _repair_nesting(builder: _Builder, before: OnePlanarDrawing, old_comp: int,
                    seams: List[Tuple[Node, Optional[Dart], object]]):
    """Restores one nesting entry per non-root component after a deletion inside component old_comp."""
    old_anchor = before.entry_for(old_comp)
    after = builder.build()
    comp = after.component_of

    if builder.outer is None and old_anchor is None:
        # the root vanished: promote a nested component with edges, if any
        candidates = sorted((a, o) for a, (o, h) in builder.nested.items() if o is not None)
        if not candidates:
            builder.nested = {}
            return

        anchor, outward = candidates[0]
        builder.outer = outward
        builder.nested = {a: (o, outward) for a, (o, h) in builder.nested.items() if a != anchor}
        for w in (s[0] for s in seams if s[1] is None):
            builder.nested[w] = (None, outward)

        return

    parts = sorted({comp[n] for n in before.rotation if before.component_of[n] == old_comp and n in comp})
    entries: Dict[int, Tuple[Optional[Dart], Dart]] = {}
    if old_anchor is None:
        kept = comp[builder.outer[0]]

    else:
        outward, host = builder.nested.pop(old_anchor)
        kept = comp[outward[0]] if outward is not None else comp[old_anchor]
        entries[kept] = (outward, host)

    part_seams: Dict[int, Dict[object, Optional[Dart]]] = {}
    for w, d, group in seams:
        slot = part_seams.setdefault(comp[w], {})
        if d is not None or group not in slot:
            slot[group] = d

    placed = {kept}
    queue = deque([kept])
    while queue:
        q = queue.popleft()
        for group, q_dart in part_seams.get(q, {}).items():
            for p in parts:
                if p in placed or group not in part_seams.get(p, {}):
                    continue

                host = q_dart if q_dart is not None else entries[q][1]
                entries[p] = (part_seams[p][group], host)
                placed.add(p)
                queue.append(p)

    for p in parts:
        if p not in placed:
            raise StructureError(f'Component {p} lost its place after deletion.')

    for p, entry in entries.items():
        if p == kept and old_anchor is None:
            continue

        if entry[0] is not None:
            anchor = entry[0][0]
            if after.is_crossing(anchor):
                anchor = after.rotation[anchor][0]

        else:
            anchor = next(n for n in sorted(comp) if comp[n] == p)

        builder.nested[anchor] = entry

    after = builder.build()
    outward_walks = after.outward_walks
    for anchor, (outward, host) in list(builder.nested.items()):
        seen = set()
        while after.walk_of[host] in outward_walks and host not in seen:
            seen.add(host)
            host = builder.nested[outward_walks[after.walk_of[host]]][1]

        builder.nested[anchor] = (outward, host)


def restrict(drawing: OnePlanarDrawing, keep_vertices: Iterable[Node], keep_edges: Optional[Iterable[Edge]] = None) -> OnePlanarDrawing:
    """Deletes every vertex outside keep_vertices and every edge outside keep_edges."""
    keep_vertices = set(keep_vertices)
    keep_edges = None if keep_edges is None else {edge_key(*e) for e in keep_edges}
    current = drawing
    for e in drawing.edges:
        drop = e[0] not in keep_vertices or e[1] not in keep_vertices
        if keep_edges is not None and e not in keep_edges:
            drop = True

        if drop:
            current = delete_edge(current, e)

    builder = _Builder(current)
    for w in current.vertices:
        if w not in keep_vertices:
            del builder.rotation[w]
            builder.nested.pop(w, None)

    if builder.outer is None:
        builder.nested = {}

    return builder.build()


def base_dart(base: OnePlanarDrawing, current: OnePlanarDrawing, dart: Dart) -> Optional[Dart]:
    """Maps a dart of an extended drawing to the dart of base it runs along, or None for added edges."""
    e = current.edge_of(dart)
    if e not in base.edges:
        return None

    if base.has_dart(dart):
        return dart

    # the edge is crossed only in current; its segments run along the single base dart
    return e if dart in current.segments(e) else twin(e)


def cell_lineage(base: OnePlanarDrawing, current: OnePlanarDrawing) -> Dict[CellId, CellId]:
    """Maps every cell of an extension of base to the base cell that contains it."""
    if base.outer is None:
        return {c.id: None for c in current.cells}

    lineage: Dict[CellId, CellId] = {}
    queue = deque()
    for cell in current.cells:
        for d in cell.all_darts:
            parent = base_dart(base, current, d)
            if parent is not None:
                lineage[cell.id] = base.cell_of(parent)
                queue.append(cell.id)
                break

    while queue:
        cid = queue.popleft()
        for d in current.cell_by_id[cid].all_darts:
            other = current.cell_of(twin(d))
            if other not in lineage and base_dart(base, current, d) is None:
                lineage[other] = lineage[cid]
                queue.append(other)

    return lineage
