from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx

from drawext.constants import CROSSING_PREFIX
from drawext.drawing import (CellId, Dart, Node, OnePlanarDrawing, _Builder, apply_placement, edge_key,
                             iter_placements, logger, place_vertex, restrict)
from drawext.exceptions import ConsistencyError
from drawext.instance import ExtensionInstance, embedding_differences
from drawext.oracle import edge_order, reachable_cells

ORIGINAL = 'original'
EDGE = 'edge'
FACE = 'face'
CROSSING = 'crossing'
SHADOW = 'shadow'


class EmbeddingGraph:
    """The labelled auxiliary plane graph of a drawing.

    Uncrossed edges are subdivided by edge-vertices, every cell gets a face-vertex, and every boundary
    occurrence of a vertex, edge-vertex or crossing gets a shadow copy. Shadow copies of a cell form one
    directed cycle per boundary walk, in walk order.

    Attributes
        :drawing: The drawing this graph was built from.
        :marked: Vertices carrying a special label.
        :graph: The underlying `networkx.DiGraph`; planarization edges appear in both directions.
    """

    def __init__(self, drawing: OnePlanarDrawing, marked: Iterable[Node] = ()):
        self.drawing: OnePlanarDrawing = drawing
        self.marked: Set[Node] = set(marked)
        self.graph: nx.DiGraph = nx.DiGraph()
        self.cycles: Dict[CellId, List[List[tuple]]] = {}

        self._build()

    def __repr__(self):
        return f'EmbeddingGraph(nodes={self.graph.number_of_nodes()}, faces={len(self.cycles)}, marked={len(self.marked)})'

    @staticmethod
    def vertex_node(v: Node) -> tuple:
        return 'o', v

    @staticmethod
    def face_node(cell: CellId) -> tuple:
        return 'f', cell

    def point_node(self, node: Node) -> tuple:
        """H* node of a planarization node: original vertex or crossing vertex."""
        return ('x', node) if self.drawing.is_crossing(node) else ('o', node)

    def edge_node(self, dart: Dart) -> tuple:
        return 'e', edge_key(*dart)

    def role(self, node: tuple) -> str:
        return self.graph.nodes[node]['role']

    def _build(self):
        drawing = self.drawing
        for v in drawing.vertices:
            self.graph.add_node(('o', v), role=ORIGINAL, ref=v, marked=v in self.marked)

        for x in drawing.crossings:
            self.graph.add_node(('x', x), role=CROSSING, ref=x)

        for u, w in drawing.darts:
            if u > w:
                continue

            if drawing.is_crossable((u, w)):
                e = self.edge_node((u, w))
                self.graph.add_node(e, role=EDGE, ref=edge_key(u, w))
                self._link(self.point_node(u), e)
                self._link(e, self.point_node(w))

            else:
                self._link(self.point_node(u), self.point_node(w))

        for cell in drawing.cells:
            f = self.face_node(cell.id)
            self.graph.add_node(f, role=FACE, ref=cell.id)
            cycles = []
            for walk in [w for w in [cell.darts] + list(cell.holes) if w]:
                cycle = []
                for d in walk:
                    cycle.append(self._shadow(f, ('s', d, 0), self.point_node(d[0])))
                    if drawing.is_crossable(d):
                        cycle.append(self._shadow(f, ('s', d, 1), self.edge_node(d)))

                for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                    if a != b:
                        self.graph.add_edge(a, b, kind='cycle')

                cycles.append(cycle)

            for v in cell.floating:
                cycles.append([self._shadow(f, ('s', (v, v), 0), ('o', v))])

            self.cycles[cell.id] = cycles

    def _link(self, a: tuple, b: tuple):
        self.graph.add_edge(a, b, kind='plane')
        self.graph.add_edge(b, a, kind='plane')

    def _shadow(self, face: tuple, shadow: tuple, target: tuple) -> tuple:
        self.graph.add_node(shadow, role=SHADOW, ref=shadow[1], slot=shadow[2])
        self.graph.add_edge(face, shadow, kind='face')
        self.graph.add_edge(shadow, target, kind='shadow')

        return shadow

    def shadow_cycle(self, cell: CellId) -> List[tuple]:
        """Shadow copies around the main boundary walk of a cell, in walk order."""
        return self.cycles[cell][0]

    def shadows_of(self, cell: CellId, target: tuple) -> List[tuple]:
        return [s for cycle in self.cycles[cell] for s in cycle if target in self.graph.successors(s)]

    def distances(self, sources: Iterable[tuple]) -> Dict[tuple, int]:
        """Breadth-first distances from the nearest source, ignoring arc directions."""
        sources = [s for s in sources if s in self.graph]
        if not sources:
            return {}

        return nx.multi_source_dijkstra_path_length(self.graph.to_undirected(as_view=True), sources)

    def marked_distances(self) -> Dict[tuple, int]:
        return self.distances(self.vertex_node(v) for v in self.marked)


def build_embedding_graph(drawing: OnePlanarDrawing, marked: Iterable[Node] = ()) -> EmbeddingGraph:
    return EmbeddingGraph(drawing, marked)


def prune_threshold(instance: ExtensionInstance) -> int:
    return 4 * instance.kappa + 7 if instance.ic else 4 * instance.k + 7


def radius_bound(instance: ExtensionInstance) -> int:
    return 4 * instance.kappa + 8 if instance.ic else 4 * instance.k + 8


class SubInstance(NamedTuple):
    instance: ExtensionInstance
    free: bool = False


class PruneResult(NamedTuple):
    """Sub-instances left after pruning; certified_no is set when pruning proves there is no extension."""
    instances: List[SubInstance]
    certified_no: bool = False
    removed: Tuple[Node, ...] = ()


def prune(instance: ExtensionInstance) -> PruneResult:
    """Deletes the vertices of H that are far from every vertex touched by an added edge.

    Returns one sub-instance per component of the pruned graph that still carries an added edge. Components
    made only of added vertices become free sub-instances whose H is their smallest vertex.
    """
    if not instance.e_add:
        return PruneResult([])

    threshold = prune_threshold(instance)
    eg = build_embedding_graph(instance.drawing, instance.join_vertices)
    dist = eg.marked_distances()
    kept = {v for v in instance.h_vertices if dist.get(eg.vertex_node(v), threshold) < threshold}
    removed = tuple(sorted(instance.h_vertices - kept))
    logger.debug(f'Pruning with threshold {threshold} removes {len(removed)} of {len(instance.h_vertices)} vertices')

    pruned = instance.graph.subgraph(set(instance.graph.nodes) - set(removed)).copy()
    added = set(instance.e_add)
    results: List[SubInstance] = []
    for component in sorted(nx.connected_components(pruned), key=min):
        sub = pruned.subgraph(component).copy()
        if not any(edge_key(u, v) in added for u, v in sub.edges):
            continue

        h_part = component & kept
        if not h_part:
            anchor = min(component)
            results.append(SubInstance(instance.with_parts(sub, OnePlanarDrawing({anchor: ()})), True))
            continue

        h_sub = instance.h_graph.subgraph(h_part)
        if nx.number_connected_components(h_sub) > 1:
            logger.info(f'Component around {min(component)} joins {nx.number_connected_components(h_sub)} parts of H; '
                        f'no extension exists')
            return PruneResult([], True, removed)

        drawing = restrict(instance.drawing, h_part)
        results.append(SubInstance(instance.with_parts(sub, drawing)))

    return PruneResult(results, False, removed)


def _consistent(full: OnePlanarDrawing, sub_solution: OnePlanarDrawing, vertices: Set[Node], edges: Set,
                cache: Dict) -> bool:
    key = (frozenset(vertices), frozenset(edges))
    if key not in cache:
        cache[key] = restrict(sub_solution, vertices, edges)

    return not embedding_differences(restrict(full, vertices, edges), cache[key])


def _replay(full: OnePlanarDrawing, sub: ExtensionInstance, sub_solution: OnePlanarDrawing, order: List, i: int,
            edges: Set, cache: Dict) -> Optional[OnePlanarDrawing]:
    if i == len(order):
        return full

    a, b = order[i]
    candidates = [full]
    for endpoint, near in ((a, None), (b, a)):
        expanded = []
        for drawing in candidates:
            if endpoint in drawing.rotation:
                expanded.append(drawing)

            else:
                cells = reachable_cells(drawing, near) if near is not None else [c.id for c in drawing.cells]
                expanded.extend(place_vertex(drawing, endpoint, cid) for cid in cells)

        candidates = expanded

    edges = edges | {edge_key(a, b)}
    for drawing in candidates:
        vertices = {w for w in sub.graph.nodes if w in drawing.rotation}
        for placement in iter_placements(drawing, a, b):
            placed = apply_placement(drawing, placement)
            if not _consistent(placed, sub_solution, vertices, edges, cache):
                continue

            result = _replay(placed, sub, sub_solution, order, i + 1, edges, cache)
            if result is not None:
                return result

    return None


def _union(full: OnePlanarDrawing, free: OnePlanarDrawing) -> OnePlanarDrawing:
    """Adds a drawing of a separate component inside the outer cell of full."""
    builder = _Builder(full)
    rename = {}
    taken = set(full.rotation)
    i = 0
    for x in sorted(free.crossings):
        while f'{CROSSING_PREFIX}{i}' in taken:
            i += 1

        rename[x] = f'{CROSSING_PREFIX}{i}'
        taken.add(rename[x])

    def node(n):
        return rename.get(n, n)

    def dart(d):
        return None if d is None else (node(d[0]), node(d[1]))

    for n, nbrs in free.rotation.items():
        builder.rotation[node(n)] = [node(w) for w in nbrs]

    for x, pair in free.crossings.items():
        builder.crossings[node(x)] = pair

    for anchor, (outward, host) in free.nested.items():
        builder.nested[anchor] = (dart(outward), dart(host))

    if full.outer is None and free.outer is not None:
        builder.outer = dart(free.outer)
        for v in full.vertices:
            builder.nested[v] = (None, builder.outer)

    elif full.outer is not None:
        if free.outer is None:
            for v in free.vertices:
                builder.nested[v] = (None, full.outer_cell)

        else:
            root = free.component_of[free.outer[0]]
            anchor = min(v for v in free.vertices if free.component_of[v] == root)
            builder.nested[anchor] = (dart(free.outer), full.outer_cell)

    return builder.build()


def recombine(instance: ExtensionInstance, result: PruneResult,
              sub_solutions: List[Optional[OnePlanarDrawing]]) -> Optional[OnePlanarDrawing]:
    """Merges solutions of the pruned sub-instances into a drawing of the whole instance.

    Added parts of H-anchored sub-solutions are replayed into the full drawing placement by placement, keeping
    every step consistent with the sub-solution; free sub-solutions are nested in the outer cell.

    :raises ConsistencyError: when a solved sub-instance cannot be replayed.
    """
    if result.certified_no or any(s is None for s in sub_solutions):
        return None

    full = instance.drawing
    for sub, solution in zip(result.instances, sub_solutions):
        if sub.free:
            full = _union(full, solution)
            continue

        replayed = _replay(full, sub.instance, solution, edge_order(sub.instance), 0,
                           set(sub.instance.h_edges), {})
        if replayed is None:
            raise ConsistencyError(f'Could not replay the sub-solution of {sub.instance} into the full drawing.')

        full = replayed

    return full


class RadiusReport(NamedTuple):
    eccentricity: int
    bound: int
    witness: Tuple[tuple, ...] = ()
    witness_radius: Optional[int] = None

    @property
    def within_bound(self) -> bool:
        return self.eccentricity <= self.bound


def radius_check(eg: EmbeddingGraph, instance: ExtensionInstance, enforce: bool = True) -> RadiusReport:
    """Measures how far face-vertices lie from the marked vertices.

    In IC mode, also reports a witness set of face-vertices, one per added vertex and per added edge
    inside H, and the largest distance of any marked vertex to it.

    :raises ConsistencyError: when enforce is set and the bound is exceeded.
    """
    dist = eg.marked_distances()
    faces = [n for n in eg.graph.nodes if eg.role(n) == FACE]
    eccentricity = max((dist.get(f, float('inf')) for f in faces), default=0)
    bound = radius_bound(instance)

    witness: List[tuple] = []
    witness_radius = None
    if instance.ic:
        anchors = [min(w for w in instance.added_neighbours(x) if w in instance.h_vertices) for x in instance.v_add
                   if any(w in instance.h_vertices for w in instance.added_neighbours(x))]
        anchors += [e[0] for e in instance.e_add_h]
        for v in anchors:
            if v in eg.drawing.rotation:
                f = eg.face_node(eg.drawing.cells_of(v)[0])
                if f not in witness:
                    witness.append(f)

        near = eg.distances(witness)
        witness_radius = max((near.get(eg.vertex_node(v), float('inf')) for v in eg.marked), default=0)

    report = RadiusReport(eccentricity, bound, tuple(witness), witness_radius)
    if enforce and not report.within_bound:
        raise ConsistencyError(f'Expected face-vertices within {bound} of a marked vertex, found {eccentricity}.')

    return report
