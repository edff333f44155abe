from typing import Dict, Iterable, List, Optional, Tuple, Union

import networkx as nx

from drawext.constants import FAR_DISTANCE, NOT_APPLICABLE
from drawext.drawing import (CellId, Corner, Dart, Node, OnePlanarDrawing, cell_lineage, edge_key, logger,
                             place_edge, place_vertex, twin, validate_one_planar)
from drawext.exceptions import PlacementError, RegimeError
from drawext.instance import ExtensionInstance, is_extension

RED = 'R'
BLUE = 'B'

FaceColoring = Dict[CellId, str]

SOURCE = 's'
SINK = 't'


def auxiliary_graph(drawing: OnePlanarDrawing) -> nx.Graph:
    """Bipartite graph of face-vertices and edge-vertices, a face joined to every segment on its boundary."""
    graph = nx.Graph()
    for cell in drawing.cells:
        graph.add_node(('f', cell.id), role='face')
        for d in cell.all_darts:
            seg = ('e', tuple(sorted(d)))
            graph.add_node(seg, role='edge')
            graph.add_edge(('f', cell.id), seg)

    return graph


def face_distance(drawing: OnePlanarDrawing, a: CellId, b: CellId) -> float:
    graph = auxiliary_graph(drawing)
    try:
        return nx.shortest_path_length(graph, ('f', a), ('f', b))

    except nx.NetworkXNoPath:
        return float('inf')


def targets_of(instance: ExtensionInstance, drawing: OnePlanarDrawing, hub: Node) -> List[Node]:
    """Added neighbours of hub in H that are not joined to it yet."""
    drawn = set(drawing.edges)
    return [t for t in instance.added_neighbours(hub) if t in instance.h_vertices and edge_key(hub, t) not in drawn]


def _entries(drawing: OnePlanarDrawing, instance: ExtensionInstance, hub: Node, face: CellId,
             other: CellId) -> List[Dart]:
    """Crossable H-segments with face on the left and other on the right, not incident to hub."""
    found = []
    for d in drawing.cell_by_id[face].all_darts:
        if not drawing.is_crossable(d) or hub in d or edge_key(*d) not in instance.h_edges:
            continue

        if drawing.cell_of(twin(d)) == other:
            found.append(d)

    return found


def _targets_on(drawing: OnePlanarDrawing, cell: CellId, targets: Iterable[Node]) -> List[Node]:
    on = {c[0] for c in drawing.cell_by_id[cell].corners}
    return [t for t in targets if t in on]


def build_network(instance: ExtensionInstance, drawing: OnePlanarDrawing, hub: Node, color: str,
                  coloring: FaceColoring, targets: Optional[List[Node]] = None,
                  weights: Optional[Dict[Dart, int]] = None) -> nx.DiGraph:
    """Flow network routing the added edges of one hub through faces of its colour.

    Every crossable segment between a hub face and another face of the colour is a unit-capacity node, so a
    hub face passes into a neighbouring face at most as many edges as they share crossable segments. A
    segment only feeds targets that are not its own endpoints.

    :param targets: Restricts the routed edges to these endpoints; defaults to every unrouted neighbour.
    :param weights: Cost of crossing each segment; cheaper segments are preferred among maximum flows.
    """
    remaining = targets_of(instance, drawing, hub)
    targets = remaining if targets is None else [t for t in remaining if t in targets]
    weights = weights or {}
    hub_faces = [c for c in drawing.cells_of(hub) if coloring.get(c) == color]
    network = nx.DiGraph(hub=hub, color=color, targets=targets, hub_faces=hub_faces)
    network.add_node(SOURCE)
    network.add_node(SINK)

    for t in targets:
        network.add_edge(('v', t), SINK, capacity=1, weight=0)

    for f in hub_faces:
        network.add_edge(SOURCE, ('f', f), weight=0)
        for t in _targets_on(drawing, f, targets):
            network.add_edge(('f', f), ('v', t), capacity=1, weight=0)

        for other in drawing.cells:
            if other.id in hub_faces or coloring.get(other.id) != color:
                continue

            for d in _entries(drawing, instance, hub, f, other.id):
                network.add_edge(('f', f), ('d', d), capacity=1, weight=weights.get(d, 0))
                for t in _targets_on(drawing, other.id, targets):
                    if t not in d:
                        network.add_edge(('d', d), ('v', t), capacity=1, weight=0)

    return network


def build_networks(instance: ExtensionInstance, drawing: OnePlanarDrawing, hubs: Dict[Node, str],
                   coloring: FaceColoring, targets: Optional[Dict[Node, List[Node]]] = None,
                   weights: Optional[Dict[Dart, int]] = None) -> Tuple[nx.DiGraph, ...]:
    targets = targets or {}
    return tuple(build_network(instance, drawing, hub, color, coloring, targets.get(hub), weights)
                 for hub, color in hubs.items())


def _interleave(a: Tuple[float, float], b: Tuple[float, float]) -> bool:
    low, high = sorted(a)
    return (low < b[0] < high) != (low < b[1] < high)


def _match(targets: List[Node], tokens: Dict[Node, List[float]], entries: List[Tuple[float, Dart]],
           chosen: List[Tuple[Tuple[float, float], Dart, Node]]) -> Optional[List[Tuple[Dart, Node]]]:
    if not targets:
        return [(d, t) for _, d, t in chosen]

    t, rest = targets[0], targets[1:]
    used = {d for _, d, _ in chosen}
    for at in tokens[t]:
        for position, d in entries:
            chord = (at, position)
            if d in used or t in d or any(_interleave(chord, other) for other, _, _ in chosen):
                continue

            found = _match(rest, tokens, entries, chosen + [(chord, d, t)])
            if found is not None:
                return found

    return None


def pair_entries(drawing: OnePlanarDrawing, cell: CellId, entries: List[Dart], targets: List[Node],
                 weights: Optional[Dict[Dart, int]] = None) -> Optional[List[Tuple[Dart, Node]]]:
    """Joins every target to its own entry segment inside cell so that no two joins cross.

    :param entries: Darts with another cell on their left and cell on the right.
    :param weights: Entries are tried cheapest first.
    :returns: (entry, target) pairs, or None when no crossing-free assignment exists.
    """
    boundary = drawing.cell_by_id[cell].all_darts
    at = {d: i for i, d in enumerate(boundary)}
    tokens = {t: [float(i) for i, d in enumerate(boundary) if d[0] == t] for t in targets}
    weights = weights or {}
    ordered = sorted(((at[twin(d)] + 0.5, d) for d in entries if twin(d) in at),
                     key=lambda entry: (weights.get(entry[1], 0), entry[0]))

    return _match(list(targets), tokens, ordered, [])


class _Route:
    def __init__(self, target: Node, face: CellId, entry: Optional[Dart] = None):
        self.target = target
        self.face = face
        self.entry = entry

    def __repr__(self):
        return f'_Route(target={self.target}, face={self.face}, entry={self.entry})'


def _routes(drawing: OnePlanarDrawing, instance: ExtensionInstance, network: nx.DiGraph, flow: Dict,
            weights: Optional[Dict[Dart, int]] = None) -> List[_Route]:
    hub = network.graph['hub']
    hub_faces = network.graph['hub_faces']
    routes: List[_Route] = []
    through: Dict[CellId, List[Node]] = {}
    for t in network.graph['targets']:
        if flow.get(('v', t), {}).get(SINK, 0) == 0:
            continue

        source = next(n for n, amounts in flow.items() if amounts.get(('v', t), 0) > 0)
        direct = [f for f in hub_faces if t in _targets_on(drawing, f, [t])]
        if direct:
            routes.append(_Route(t, direct[0]))

        else:
            through.setdefault(drawing.cell_of(twin(source[1])), []).append(t)

    for other, targets in through.items():
        entries = [d for f in hub_faces for d in _entries(drawing, instance, hub, f, other)]
        pairs = pair_entries(drawing, other, entries, targets, weights)
        if pairs is None:
            raise PlacementError(f'No crossing-free way for {hub} into cell {other} to reach {targets}.')

        routes.extend(_Route(t, other, entry) for entry, t in pairs)

    return routes


def _corner_in(drawing: OnePlanarDrawing, node: Node, cells: Iterable[CellId]) -> Optional[Corner]:
    cells = list(cells)
    for c in drawing.corners_of(node):
        if drawing.cell_of_corner(c) in cells:
            return c

    return None


def _realize(start: OnePlanarDrawing, current: OnePlanarDrawing, hub: Node, routes: List[_Route]) -> OnePlanarDrawing:
    for route in routes:
        lineage = cell_lineage(start, current)
        if route.entry is None:
            inside = [c for c, origin in lineage.items() if origin == route.face]
            for cell in inside:
                hub_corner = _corner_in(current, hub, [cell])
                target_corner = _corner_in(current, route.target, [cell])
                if hub_corner is not None and target_corner is not None:
                    current = place_edge(current, (hub, route.target), hub_corner, target_corner)
                    break

            else:
                raise PlacementError(f'No common cell for {hub} and {route.target}.')

        else:
            hub_corner = _corner_in(current, hub, [current.cell_of(route.entry)])
            target_corner = _corner_in(current, route.target, [current.cell_of(twin(route.entry))])
            if hub_corner is None or target_corner is None:
                raise PlacementError(f'Cannot route {hub} to {route.target} across {route.entry}.')

            current = place_edge(current, (hub, route.target), hub_corner, target_corner, route.entry)

    return current


def solve_lambda(instance: ExtensionInstance, drawing: OnePlanarDrawing, hubs: Dict[Node, str],
                 coloring: FaceColoring, targets: Optional[Dict[Node, List[Node]]] = None,
                 validate: bool = True, weights: Optional[Dict[Dart, int]] = None,
                 require_all: bool = True) -> Optional[OnePlanarDrawing]:
    """Routes the remaining added edges of every hub through faces of its colour only.

    :param drawing: A drawing that already contains the hubs.
    :param hubs: Hub vertex to its colour.
    :param coloring: Partial map from cells of drawing to colours; unmapped cells stay empty.
    :param targets: Per hub, the endpoints to route now; hubs missing from it route all their edges.
    :param weights: Crossing cost per segment. With weights the flow is a cheapest maximum flow.
    :param require_all: When false, routes as many of the targets as the colouring allows and leaves the rest.
    """
    networks = build_networks(instance, drawing, hubs, coloring, targets, weights)
    plans = []
    try:
        for network in networks:
            targets = network.graph['targets']
            if not targets:
                continue

            if weights:
                flow = nx.max_flow_min_cost(network, SOURCE, SINK)
                value = sum(flow[SOURCE].values())

            else:
                value, flow = nx.maximum_flow(network, SOURCE, SINK)

            if require_all and value < len(targets):
                logger.debug(f'Hub {network.graph["hub"]} routes {value} of {len(targets)} edges')
                return None

            plans.append((network.graph['hub'], _routes(drawing, instance, network, flow, weights)))

        current = drawing
        for hub, routes in plans:
            current = _realize(drawing, current, hub, routes)

    except PlacementError as exc:
        logger.warning(f'Flow extraction failed: {exc.message}')
        return None

    if validate and validate_one_planar(current):
        logger.warning('Flow extraction produced an invalid drawing')
        return None

    return current


def solve_single_vertex(instance: ExtensionInstance) -> Optional[OnePlanarDrawing]:
    """Tries every cell for the single added vertex and routes its edges by one flow.

    :raises RegimeError: when the instance does not add exactly one vertex joined to H only.
    """
    if len(instance.v_add) != 1 or instance.e_add_h:
        raise RegimeError(f'Expected one added vertex and no added edges inside H, found {len(instance.v_add)} '
                          f'and {len(instance.e_add_h)}.')

    if instance.ic:
        raise RegimeError('The single-vertex flow covers 1-planar extensions only.')

    hub = instance.v_add[0]
    for cell in instance.drawing.cells:
        placed = place_vertex(instance.drawing, hub, cell.id)
        coloring = {c.id: RED for c in placed.cells}
        result = solve_lambda(instance, placed, {hub: RED}, coloring)
        if result is not None and is_extension(result, instance):
            logger.info(f'Single vertex {hub} placed in cell {cell.id}')
            return result

    return None


def far_coloring(drawing: OnePlanarDrawing, hub_cells: Dict[str, CellId]) -> FaceColoring:
    """Colours each hub cell and the cells sharing a segment with it."""
    coloring: FaceColoring = {}
    for color, cid in hub_cells.items():
        coloring[cid] = color
        for d in drawing.cell_by_id[cid].all_darts:
            coloring.setdefault(drawing.cell_of(twin(d)), color)

    return coloring


def solve_far_two_vertices(instance: ExtensionInstance, drawing: OnePlanarDrawing,
                           hub_cells: Dict[Node, CellId]) -> Union[OnePlanarDrawing, None, str]:
    """Decides two hubs placed in cells far apart by two independent flows.

    :param drawing: A drawing with both hubs placed as isolated vertices.
    :param hub_cells: The cell of each hub.
    :returns: The extension, None, or NOT_APPLICABLE when the cells are too close or the hubs are adjacent.
    """
    r, b = sorted(hub_cells)
    if instance.graph.has_edge(r, b) or face_distance(drawing, hub_cells[r], hub_cells[b]) < FAR_DISTANCE:
        return NOT_APPLICABLE

    coloring = far_coloring(drawing, {RED: hub_cells[r], BLUE: hub_cells[b]})
    overlap = set(far_coloring(drawing, {RED: hub_cells[r]})) & set(far_coloring(drawing, {BLUE: hub_cells[b]}))
    if overlap:
        raise RegimeError(f'Far hub cells share neighbouring cells {sorted(overlap, key=repr)}.')

    result = solve_lambda(instance, drawing, {r: RED, b: BLUE}, coloring)
    if result is not None and not is_extension(result, instance):
        return None

    return result
