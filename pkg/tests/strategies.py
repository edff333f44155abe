"""Shared drawings and hypothesis strategies."""
import networkx as nx
from hypothesis import assume, strategies as st

from drawext import (ExtensionInstance, apply_placement, drawing_from_rotation, generate_instance, iter_placements,
                     place_vertex)
from drawext.drawing import edge_key
from drawext.exceptions import InstanceError


def plane(edges, outer=None):
    """A crossing-free drawing of a connected planar graph, rotation taken from networkx."""
    graph = nx.Graph(edges)
    is_planar, embedding = nx.check_planarity(graph)
    assert is_planar
    return drawing_from_rotation({v: embedding.neighbors_cw_order(v) for v in sorted(graph.nodes)}, outer=outer)


def chord(drawing, u, v):
    return apply_placement(drawing, next(p for p in iter_placements(drawing, u, v) if p.crossing is None))


def crossing(drawing, u, v):
    return apply_placement(drawing, next(p for p in iter_placements(drawing, u, v) if p.crossing is not None))


def square():
    return plane([('a', 'b'), ('b', 'c'), ('c', 'd'), ('d', 'a')])


def k4_crossing():
    """K4 on a square with the diagonals crossing once."""
    return crossing(chord(square(), 'a', 'c'), 'b', 'd')


def instance(drawing, extra_edges, mode='1planar'):
    graph = nx.Graph()
    graph.add_nodes_from(drawing.vertices)
    graph.add_edges_from(drawing.edges)
    graph.add_edges_from(extra_edges)
    return ExtensionInstance(graph, drawing, mode)


def try_generate(seed, **kwargs):
    try:
        return generate_instance(seed, **kwargs)

    except InstanceError:
        return None


@st.composite
def generated(draw, n=st.integers(3, 6), k=st.integers(0, 2), vadd=st.integers(0, 1), crossings=st.integers(0, 1),
              ic=st.just(False)):
    """Generated instances; parameter combinations the generator rejects are filtered out."""
    result = try_generate(draw(st.integers(0, 10_000)), n=draw(n), k=draw(k), vadd=draw(vadd),
                          crossings=draw(crossings), ic=draw(ic))
    assume(result is not None)
    return result


@st.composite
def drawings(draw, n=st.integers(2, 7), crossings=st.integers(0, 2)):
    return draw(generated(n=n, k=st.just(0), vadd=st.just(0), crossings=crossings)).drawing


def cell_with(drawing, names):
    """The cell whose boundary meets exactly the given vertices."""
    return next(c.id for c in drawing.cells if {w for w, _ in c.corners} == set(names))


def walled_hubs():
    """Hub u inside triangle abc and hub v outside, every side of the triangle crossed by a wall edge.

    The added edge uv has no way out of u's cells.
    """
    drawing = plane([('a', 'b'), ('b', 'c'), ('c', 'a'), ('u', 'a'), ('u', 'b'), ('u', 'c'),
                     ('v', 'a'), ('v', 'b'), ('v', 'c')])
    for i, (s, t) in enumerate([('a', 'b'), ('b', 'c'), ('c', 'a')]):
        p, q = f'p{i}', f'q{i}'
        drawing = chord(place_vertex(drawing, p, cell_with(drawing, ('u', s, t))), p, s)
        drawing = chord(place_vertex(drawing, q, cell_with(drawing, ('v', s, t))), q, s)
        wall = next(pl for pl in iter_placements(drawing, p, q)
                    if pl.crossing is not None and drawing.edge_of(pl.crossing) == edge_key(s, t))
        drawing = apply_placement(drawing, wall)

    return drawing


def web(rings):
    """Concentric 4-cycles joined by spokes; ring j is r{j}_0 .. r{j}_3."""
    edges = []
    for j in range(rings):
        edges += [(f'r{j}_{i}', f'r{j}_{(i + 1) % 4}') for i in range(4)]
        if j:
            edges += [(f'r{j - 1}_{i}', f'r{j}_{i}') for i in range(4)]

    return plane(edges)


def seeded(count, params, keep=None):
    """Instances from consecutive seeds until count are kept.

    :param params: Seed to the generator arguments, so a sweep varies its shape with the seed.
    :param keep: Filters the generated instances.
    """
    found = []
    for seed in range(50 * count):
        inst = try_generate(seed, **params(seed))
        if inst is None or (keep is not None and not keep(inst)):
            continue

        found.append(inst)
        if len(found) == count:
            return found

    raise AssertionError(f'Only {len(found)} of {count} instances could be generated.')
