import networkx as nx
import pytest

from drawext import ExtensionInstance, extension_violations, is_extension
from drawext.drawing import OnePlanarDrawing
from drawext.exceptions import InstanceError
from tests.strategies import chord, crossing, instance


def test_derived_sets_of_square_with_diagonals(c4):
    inst = instance(c4, [('a', 'c'), ('b', 'd')])
    assert inst.v_add == []
    assert inst.e_add == [('a', 'c'), ('b', 'd')]
    assert inst.e_add_h == inst.e_add
    assert inst.k == 2
    assert inst.kappa == 2
    assert inst.join_vertices == {'a', 'b', 'c', 'd'}


def test_added_vertex_counts_towards_kappa(triangle):
    inst = instance(triangle, [('v', 'a'), ('v', 'b')])
    assert inst.v_add == ['v']
    assert inst.e_add_not_h == [('a', 'v'), ('b', 'v')]
    assert inst.kappa == 1
    assert inst.added_neighbours('v') == ['a', 'b']


def test_disconnected_h_is_rejected(star):
    graph = nx.Graph([('a', 'c'), ('b', 'd')])
    with pytest.raises(InstanceError):
        ExtensionInstance(graph, star)


def test_isolated_added_vertex_is_rejected(triangle):
    graph = nx.Graph(triangle.edges)
    graph.add_node('z')
    with pytest.raises(InstanceError):
        ExtensionInstance(graph, triangle)


def test_drawn_edge_missing_from_g_is_rejected(c4):
    graph = nx.Graph([('a', 'b'), ('b', 'c'), ('c', 'd')])
    with pytest.raises(InstanceError):
        ExtensionInstance(graph, c4)


def test_unknown_mode_is_rejected(c4):
    with pytest.raises(InstanceError):
        ExtensionInstance(nx.Graph(c4.edges), c4, 'planar')


def test_drawing_is_its_own_extension_without_added_edges(c4):
    inst = instance(c4, [])
    assert is_extension(c4, inst)


def test_chord_inside_a_face_is_an_extension(c4):
    assert is_extension(chord(c4, 'a', 'c'), instance(c4, [('a', 'c')]))


def test_missing_edge_is_reported(c4):
    violations = extension_violations(c4, instance(c4, [('a', 'c')]))
    assert [(v.kind, v.subject) for v in violations] == [('missing-edge', ('a', 'c'))]


def test_flipped_rotation_is_not_an_extension(c4):
    h = chord(c4, 'a', 'c')
    solution = crossing(h, 'b', 'd')
    assert is_extension(solution, instance(h, [('b', 'd')]))

    rotation = dict(solution.rotation, a=tuple(reversed(solution.rotation['a'])))
    flipped = OnePlanarDrawing(rotation, solution.crossings, solution.outer, solution.nested)
    assert not is_extension(flipped, instance(h, [('b', 'd')]))


def test_with_parts_keeps_the_mode(c4):
    inst = instance(c4, [('a', 'c')], mode='ic')
    other = inst.with_parts(nx.Graph(c4.edges), c4)
    assert other.ic
    assert other.e_add == []
