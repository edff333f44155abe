import networkx as nx
import pytest
from hypothesis import assume, given, settings, strategies as st

from drawext import (apply_placement, build_embedding_graph, delete_edge, drawing_from_rotation, iter_placements,
                     place_edge, place_vertex, restrict, validate_ic_planar, validate_one_planar)
from drawext.drawing import cell_lineage, cyclic_canonical, edge_key, twin
from drawext.exceptions import CrossabilityError, PlacementError
from drawext.instance import embedding_differences
from tests.strategies import chord, drawings, seeded, square


def test_cyclic_canonical_starts_at_smallest():
    assert cyclic_canonical(['c', 'a', 'b']) == ('a', 'b', 'c')
    assert cyclic_canonical([]) == ()


def test_square_is_planar_with_two_cells(c4):
    assert validate_one_planar(c4) == []
    assert len(c4.cells) == 2
    assert c4.crossings == {}


def test_crossed_k4_is_valid_with_five_cells(k4x):
    assert validate_one_planar(k4x) == []
    assert validate_ic_planar(k4x) == []
    assert len(k4x.cells) == 5
    assert k4x.crossings == {'x0': (('a', 'c'), ('b', 'd'))}


def test_two_crossing_edges_leave_one_cell(star):
    assert validate_one_planar(star) == []
    assert len(star.cells) == 1


def test_segments_run_from_first_endpoint(k4x):
    assert k4x.segments(('a', 'c')) == [('a', 'x0'), ('x0', 'c')]
    assert k4x.segments(('a', 'b')) == [('a', 'b')]
    assert k4x.edge_of(('x0', 'd')) == ('b', 'd')


def test_cells_partition_the_darts(k4x):
    darts = [d for cell in k4x.cells for d in cell.all_darts]
    assert sorted(darts) == sorted(k4x.darts)


def test_chord_splits_a_cell(c4):
    drawing = chord(c4, 'a', 'c')
    assert validate_one_planar(drawing) == []
    assert len(drawing.cells) == 3
    assert ('a', 'c') in drawing.edges


def test_crossing_a_crossed_edge_raises(k4x):
    drawing = place_vertex(k4x, 'e', k4x.cell_of(('a', 'x0')))
    with pytest.raises(CrossabilityError):
        place_edge(drawing, ('b', 'e'), ('b', ('b', 'a')), ('e', None), crossing=('a', 'x0'))


def test_corners_in_different_cells_need_a_crossing(c4):
    inner, outer = c4.cell_of(('a', 'b')), c4.cell_of(('b', 'a'))
    a_corner = next(c for c in c4.corners_of('a') if c4.cell_of_corner(c) == inner)
    c_corner = next(c for c in c4.corners_of('c') if c4.cell_of_corner(c) == outer)
    with pytest.raises(PlacementError):
        place_edge(c4, ('a', 'c'), a_corner, c_corner)


def test_place_vertex_keeps_cells_and_wheel_has_four(triangle):
    drawing = place_vertex(triangle, 'v', triangle.cell_of(('b', 'a')))
    assert len(drawing.cells) == 2
    assert drawing.rotation['v'] == ()

    for t in 'abc':
        drawing = chord(drawing, 'v', t)

    assert validate_one_planar(drawing) == []
    assert len(drawing.cells) == 4


def test_place_vertex_twice_raises(triangle):
    drawing = place_vertex(triangle, 'v', triangle.outer_cell)
    with pytest.raises(PlacementError):
        place_vertex(drawing, 'v', triangle.outer_cell)


def test_deleting_the_crossing_edge_restores_the_chord_drawing(k4x):
    assert delete_edge(k4x, ('b', 'd')).canonical() == chord(square(), 'a', 'c').canonical()


def test_restrict_to_the_square(k4x, c4):
    restricted = restrict(k4x, 'abcd', c4.edges)
    assert restricted.crossings == {}
    assert embedding_differences(restricted, c4) == []


def test_ic_violation_names_the_shared_vertex():
    drawing = drawing_from_rotation({
        'w': ['x0', 'x1'],
        'x0': ['w', 'b', 'a', 'c'],
        'x1': ['w', 'e', 'd', 'f'],
        'a': ['x0'], 'b': ['x0'], 'c': ['x0'], 'd': ['x1'], 'e': ['x1'], 'f': ['x1'],
    }, {'x0': (('a', 'w'), ('b', 'c')), 'x1': (('d', 'w'), ('e', 'f'))})
    assert validate_one_planar(drawing) == []
    assert [(v.kind, v.subject) for v in validate_ic_planar(drawing)] == [('ic', 'w')]


def test_iter_placements_lists_chords_before_crossings(c4):
    placements = list(iter_placements(chord(c4, 'a', 'c'), 'b', 'd'))
    kinds = [p.crossing is not None for p in placements]
    assert kinds == sorted(kinds)
    assert any(kinds) and not all(kinds)


def test_cell_lineage_maps_split_cells_to_their_parent(c4):
    drawing = chord(c4, 'a', 'c')
    lineage = cell_lineage(c4, drawing)
    parents = sorted(lineage.values(), key=repr)
    assert len(lineage) == 3
    assert len(set(parents)) == 2


@settings(max_examples=40, deadline=None)
@given(drawings())
def test_generated_drawings_satisfy_euler(drawing):
    assert validate_one_planar(drawing) == []
    assert all(drawing.has_dart(twin(d)) for d in drawing.darts)
    nodes, links = len(drawing.rotation), len(drawing.darts) // 2
    assert nodes - links + len(drawing.cells) == 2


@settings(max_examples=30, deadline=None)
@given(drawings(n=st.integers(4, 6)), st.data())
def test_place_then_delete_restores_the_drawing(drawing, data):
    pairs = [(u, v) for u in drawing.vertices for v in drawing.vertices
             if u < v and edge_key(u, v) not in drawing.edges]
    assume(pairs)
    u, v = data.draw(st.sampled_from(pairs))
    for placement in list(iter_placements(drawing, u, v))[:5]:
        placed = apply_placement(drawing, placement)
        assert validate_one_planar(placed) == []
        assert embedding_differences(delete_edge(placed, (u, v)), drawing) == []


def _drawing_params(seed):
    return dict(n=2 + seed % 7, crossings=seed % 3)


@pytest.mark.slow
def test_seeded_drawings_keep_their_structure():
    for inst in seeded(1000, _drawing_params):
        drawing = inst.drawing
        assert validate_one_planar(drawing) == []
        assert all(twin(twin(d)) == d and drawing.has_dart(twin(d)) for d in drawing.darts)
        for v, nbrs in drawing.rotation.items():
            assert len(set(nbrs)) == len(nbrs)
            assert all(v in drawing.rotation[w] for w in nbrs)

        walked = sorted(d for cell in drawing.cells for d in cell.all_darts)
        assert walked == sorted(drawing.darts)
        assert len(drawing.rotation) - len(drawing.darts) // 2 + len(drawing.cells) == 2

        eg = build_embedding_graph(drawing)
        undirected = eg.graph.to_undirected()
        for cell in drawing.cells:
            lengths = nx.single_source_shortest_path_length(undirected, eg.face_node(cell.id))
            assert all(lengths[eg.vertex_node(v)] == 2 for v in cell.incident_real_vertices if v in drawing.vertices)

        pairs = [(u, v) for u in drawing.vertices for v in drawing.vertices
                 if u < v and edge_key(u, v) not in drawing.edges]
        if pairs:
            placement = next(iter_placements(drawing, *pairs[0]), None)
            if placement is not None:
                placed = apply_placement(drawing, placement)
                assert embedding_differences(delete_edge(placed, pairs[0]), drawing) == []
