import random
from typing import List, Set

import networkx as nx

from drawext.constants import IC_PLANAR, ONE_PLANAR
from drawext.drawing import (Edge, OnePlanarDrawing, apply_placement, delete_edge, drawing_from_rotation, edge_key,
                             iter_placements, logger, restrict, validate_ic_planar, validate_one_planar)
from drawext.exceptions import InstanceError
from drawext.instance import ExtensionInstance


def _plane_graph(rng: random.Random, n: int, density: float) -> nx.Graph:
    """A random connected planar graph: a random tree plus every sampled chord that keeps it planar."""
    nodes = [f'v{i}' for i in range(n)]
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for i in range(1, n):
        graph.add_edge(nodes[i], nodes[rng.randrange(i)])

    candidates = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:] if not graph.has_edge(a, b)]
    rng.shuffle(candidates)
    for a, b in candidates[:int(density * len(candidates))]:
        graph.add_edge(a, b)
        if not nx.is_planar(graph):
            graph.remove_edge(a, b)

    return graph


def _plane_drawing(graph: nx.Graph) -> OnePlanarDrawing:
    is_planar, embedding = nx.check_planarity(graph)
    if not is_planar:
        raise InstanceError(f'Expected a planar graph, found {graph}.')

    return drawing_from_rotation({v: tuple(embedding.neighbors_cw_order(v)) for v in sorted(graph.nodes)})


def _drawn_graph(drawing: OnePlanarDrawing) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(drawing.vertices)
    graph.add_edges_from(drawing.edges)

    return graph


def _non_bridges(graph: nx.Graph) -> List[Edge]:
    bridges = {edge_key(*b) for b in nx.bridges(graph)}
    return sorted(edge_key(*e) for e in graph.edges if edge_key(*e) not in bridges)


def _inject_crossings(rng: random.Random, drawing: OnePlanarDrawing, count: int, ic: bool) -> OnePlanarDrawing:
    """Reroutes `count` edges, one at a time, so that each crosses one so far uncrossed edge."""
    check = validate_ic_planar if ic else validate_one_planar
    for i in range(count):
        candidates = [e for e in _non_bridges(_drawn_graph(drawing)) if e not in drawing.crossed_edges]
        rng.shuffle(candidates)
        rerouted = None
        for e in candidates:
            rest = delete_edge(drawing, e)
            placements = [p for p in iter_placements(rest, *e) if p.crossing is not None]
            rng.shuffle(placements)
            for p in placements:
                candidate = apply_placement(rest, p)
                if not check(candidate):
                    rerouted = candidate
                    break

            if rerouted is not None:
                break

        if rerouted is None:
            raise InstanceError(f'Could not add crossing {i + 1} of {count}: no edge can be rerouted.')

        drawing = rerouted

    return drawing


def _split(rng: random.Random, graph: nx.Graph, k: int, vadd: int) -> nx.Graph:
    """Picks H: drops `vadd` vertices and then edges until k edges of G are missing, keeping H connected."""
    h = graph.copy()
    for _ in range(vadd):
        removed = graph.number_of_edges() - h.number_of_edges()
        cut: Set = set(nx.articulation_points(h))
        options = [v for v in sorted(h.nodes) if v not in cut and 1 <= h.degree(v) <= k - removed]
        if not options or h.number_of_nodes() < 2:
            raise InstanceError(f'Cannot remove {vadd} vertices within {k} added edges while keeping H connected.')

        h.remove_node(rng.choice(options))

    while graph.number_of_edges() - h.number_of_edges() < k:
        options = _non_bridges(h)
        if not options:
            raise InstanceError(f'Cannot remove {k} edges while keeping H connected.')

        h.remove_edge(*rng.choice(options))

    return h


def _spoil(rng: random.Random, graph: nx.Graph, h: nx.Graph, extra: int) -> nx.Graph:
    """Adds `extra` edges to G that the full drawing lacks. With removed vertices they join one of those to H."""
    removed = sorted(v for v in graph.nodes if v not in h)
    pool = removed or sorted(h.nodes)
    candidates = sorted({edge_key(a, b) for a in pool for b in sorted(graph.nodes)
                         if a != b and not graph.has_edge(a, b) and (not removed or b in h)})
    if len(candidates) < extra:
        raise InstanceError(f'Expected room for {extra} extra edges, found {len(candidates)}.')

    spoiled = graph.copy()
    spoiled.add_edges_from(rng.sample(candidates, extra))

    return spoiled


def generate_instance(seed: int, n: int, k: int = 0, vadd: int = 0, crossings: int = 0, ic: bool = False,
                      density: float = 0.5, extra: int = 0) -> ExtensionInstance:
    """Builds a random instance, the same one for the same arguments.

    A random plane graph on n vertices gets `crossings` rerouted edges; then `vadd` vertices and enough
    edges to reach k added edges are removed from the drawing. Finally `extra` edges that the full drawing
    does not have are added to G, so the instance may have no extension; each of them raises k by one.

    :raises InstanceError: when the parameters cannot be met.
    """
    if n < 1 or k < 0 or vadd < 0 or crossings < 0 or extra < 0:
        raise InstanceError(f'Expected n >= 1 and non-negative k, vadd, crossings and extra, found n={n}, k={k}, '
                            f'vadd={vadd}, crossings={crossings}, extra={extra}.')

    if vadd >= n:
        raise InstanceError(f'Expected fewer added vertices than {n}, found {vadd}.')

    rng = random.Random(seed)
    graph = _plane_graph(rng, n, density)
    drawing = _inject_crossings(rng, _plane_drawing(graph), crossings, ic)
    h = _split(rng, graph, k, vadd)
    if extra:
        graph = _spoil(rng, graph, h, extra)

    instance = ExtensionInstance(graph, restrict(drawing, h.nodes, h.edges), IC_PLANAR if ic else ONE_PLANAR)
    logger.debug(f'Generated {instance} from seed {seed}')

    return instance
