from collections import Counter

import networkx as nx
import pytest

from drawext import SearchLimits, brute_force_solve, build_embedding_graph, is_extension, prune, radius_check, recombine
from drawext.embedding_graph import CROSSING, EDGE, FACE, ORIGINAL, SHADOW, prune_threshold
from drawext.exceptions import ConsistencyError
from tests.strategies import instance, plane, seeded, web


def test_triangle_roles():
    eg = build_embedding_graph(plane([('a', 'b'), ('b', 'c'), ('c', 'a')]))
    roles = Counter(eg.role(n) for n in eg.graph.nodes)
    assert roles == {ORIGINAL: 3, EDGE: 3, FACE: 2, SHADOW: 12}
    assert all(len(eg.shadow_cycle(cell.id)) == 6 for cell in eg.drawing.cells)


def test_crossed_segments_join_their_crossing_directly(k4x):
    eg = build_embedding_graph(k4x)
    assert eg.role(('x', 'x0')) == CROSSING
    assert eg.graph.has_edge(('o', 'a'), ('x', 'x0'))
    assert ('e', ('a', 'c')) not in eg.graph


def test_face_to_boundary_distances(k4x):
    eg = build_embedding_graph(k4x)
    undirected = eg.graph.to_undirected()
    for cell in k4x.cells:
        lengths = nx.single_source_shortest_path_length(undirected, eg.face_node(cell.id))
        real = [v for v in cell.incident_real_vertices if v in k4x.vertices]
        for v in real:
            assert lengths[eg.vertex_node(v)] == 2

        for u in real:
            assert all(nx.shortest_path_length(undirected, eg.vertex_node(u), eg.vertex_node(v)) <= 4
                       for v in real)


def test_shadows_of_a_vertex(c4):
    eg = build_embedding_graph(c4)
    for cell in c4.cells:
        assert len(eg.shadows_of(cell.id, eg.vertex_node('a'))) == 1


def test_small_instances_are_not_pruned(c4):
    inst = instance(c4, [('a', 'c')])
    result = prune(inst)
    assert not result.certified_no
    assert result.removed == ()
    assert len(result.instances) == 1
    assert result.instances[0].instance.h_vertices == inst.h_vertices


def test_far_rings_are_pruned_and_the_solution_recombines():
    inst = instance(web(8), [('u', 'r0_0')])
    assert prune_threshold(inst) == 11

    result = prune(inst)
    assert not result.certified_no
    assert {f'r{j}_{i}' for j in (6, 7) for i in range(4)} <= set(result.removed)
    assert not {f'r{j}_{i}' for j in range(3) for i in range(4)} & set(result.removed)

    [sub] = result.instances
    solution = brute_force_solve(sub.instance, SearchLimits().set_max_vertices(40))
    assert solution is not None
    full = recombine(inst, result, [solution])
    assert is_extension(full, inst)


def test_component_joining_far_parts_is_certified_no():
    inst = instance(web(24), [('u', 'r0_0'), ('u', 'r23_0')])
    result = prune(inst)
    assert result.certified_no
    assert recombine(inst, result, []) is None


def test_radius_within_bound_on_small_drawings(c4):
    inst = instance(c4, [('a', 'c')])
    report = radius_check(build_embedding_graph(c4, inst.join_vertices), inst)
    assert report.within_bound


def test_radius_bound_is_enforced_on_far_faces():
    inst = instance(web(16), [('u', 'r0_0')])
    with pytest.raises(ConsistencyError):
        radius_check(build_embedding_graph(inst.drawing, inst.join_vertices), inst)

    assert not radius_check(build_embedding_graph(inst.drawing, inst.join_vertices), inst, enforce=False).within_bound


def test_ic_radius_report_has_a_witness(triangle):
    inst = instance(triangle, [('v', 'a'), ('v', 'b')], mode='ic')
    report = radius_check(build_embedding_graph(triangle, inst.join_vertices), inst)
    assert len(report.witness) == 1
    assert report.witness_radius is not None


def _prune_params(seed):
    return dict(n=4 + seed % 5, k=1 + seed % 2, vadd=seed % 3 // 2, crossings=seed % 2, extra=int(seed % 7 == 0))


@pytest.mark.slow
def test_seeded_prune_and_recombine_keep_the_oracle_answer():
    for inst in seeded(300, _prune_params):
        result = prune(inst)
        solutions = [brute_force_solve(sub.instance) for sub in result.instances]
        full = recombine(inst, result, solutions)
        assert (full is None) == (brute_force_solve(inst) is None)
        if full is not None:
            assert is_extension(full, inst)
