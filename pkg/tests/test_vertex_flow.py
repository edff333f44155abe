import pytest

from drawext import brute_force_solve, is_extension, place_vertex, solve_single_vertex
from drawext.constants import NOT_APPLICABLE
from drawext.exceptions import RegimeError
from drawext.vertex_flow import (RED, auxiliary_graph, build_network, face_distance, far_coloring, pair_entries,
                                 solve_far_two_vertices, solve_lambda, targets_of)
from tests.strategies import cell_with, chord, instance, seeded, walled_hubs


def test_auxiliary_graph_is_bipartite(c4):
    graph = auxiliary_graph(c4)
    roles = [data['role'] for _, data in graph.nodes(data=True)]
    assert roles.count('face') == 2
    assert roles.count('edge') == 4
    assert all(graph.nodes[u]['role'] != graph.nodes[v]['role'] for u, v in graph.edges)


def test_faces_sharing_a_segment_are_two_apart(c4):
    inner, outer = (cell.id for cell in c4.cells)
    assert face_distance(c4, inner, outer) == 2
    assert face_distance(c4, inner, inner) == 0


def test_far_coloring_spreads_to_neighbouring_cells(c4):
    inner = c4.cells[0].id
    assert set(far_coloring(c4, {RED: inner}).values()) == {RED}
    assert len(far_coloring(c4, {RED: inner})) == 2


def test_targets_skip_drawn_edges(triangle):
    inst = instance(triangle, [('v', 'a'), ('v', 'b')])
    assert targets_of(inst, place_vertex(triangle, 'v', triangle.outer_cell), 'v') == ['a', 'b']


def test_wheel_hub_extends(triangle):
    inst = instance(triangle, [('v', 'a'), ('v', 'b'), ('v', 'c')])
    solution = solve_single_vertex(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_square_hub_extends(c4):
    inst = instance(c4, [('v', w) for w in 'abcd'])
    solution = solve_single_vertex(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_hub_joined_across_a_wall_fails():
    assert solve_single_vertex(instance(walled_hubs(), [('w', 'u'), ('w', 'v')])) is None


def test_agrees_with_the_oracle_on_a_path(path3):
    inst = instance(path3, [('v', 'a'), ('v', 'c')])
    assert (solve_single_vertex(inst) is None) == (brute_force_solve(inst) is None)


def test_adjacent_hubs_are_not_far(triangle):
    inst = instance(triangle, [('r', 'a'), ('s', 'b'), ('r', 's')])
    drawing = place_vertex(place_vertex(triangle, 'r', triangle.outer_cell), 's', triangle.outer_cell)
    hub_cells = {'r': triangle.outer_cell, 's': triangle.outer_cell}
    assert solve_far_two_vertices(inst, drawing, hub_cells) == NOT_APPLICABLE


def test_two_hubs_are_out_of_regime(triangle):
    with pytest.raises(RegimeError):
        solve_single_vertex(instance(triangle, [('r', 'a'), ('s', 'b')]))


def test_edges_inside_h_are_out_of_regime(c4):
    with pytest.raises(RegimeError):
        solve_single_vertex(instance(c4, [('v', 'a'), ('a', 'c')]))


@pytest.fixture
def split_square(c4):
    """The square with chord ac and hub v in triangle abc."""
    base = chord(c4, 'a', 'c')
    cells = {name: cell_with(base, name) for name in ('abc', 'acd', 'abcd')}
    return base, place_vertex(base, 'v', cells['abc']), cells


def test_segments_only_feed_targets_off_their_ends(split_square):
    base, placed, cells = split_square
    inst = instance(base, [('v', w) for w in 'abcd'])
    network = build_network(inst, placed, 'v', RED, {c.id: RED for c in placed.cells})
    segments = [n for n in network if n[0] == 'd']
    assert segments
    for n in segments:
        assert network.edges[('f', cells['abc']), n]['capacity'] == 1
        assert all(t not in n[1] for _, (_, t) in network.out_edges(n))

    assert any(set(n[1]) == {'a', 'c'} and network.has_edge(n, ('v', 'd')) for n in segments)


def test_entry_cannot_serve_its_own_endpoint(split_square):
    _, placed, cells = split_square
    entry = next(d for d in placed.cell_by_id[cells['abc']].all_darts if set(d) == {'a', 'c'})
    assert pair_entries(placed, cells['acd'], [entry], ['d']) == [(entry, 'd')]
    assert pair_entries(placed, cells['acd'], [entry], ['a']) is None
    assert pair_entries(placed, cells['acd'], [entry], ['a', 'd']) is None


def test_cheaper_segments_are_crossed_first(split_square):
    base, placed, cells = split_square
    inst = instance(base, [('v', 'd')])
    entry = next(d for d in placed.cell_by_id[cells['abc']].all_darts if set(d) == {'a', 'c'})
    result = solve_lambda(inst, placed, {'v': RED}, {c.id: RED for c in placed.cells}, weights={entry: 5})
    assert result is not None
    crossed = result.crossings[result.crossed_edges[('d', 'v')]]
    assert ('a', 'c') not in crossed


def test_partial_routing_leaves_unreachable_targets(split_square):
    base, placed, cells = split_square
    inst = instance(base, [('v', 'a'), ('v', 'd')])
    coloring = {cells['abc']: RED}
    assert solve_lambda(inst, placed, {'v': RED}, coloring) is None

    partial = solve_lambda(inst, placed, {'v': RED}, coloring, require_all=False)
    assert partial is not None
    assert ('a', 'v') in partial.edges
    assert ('d', 'v') not in partial.edges


def _single_vertex_params(seed):
    return dict(n=4 + seed % 4, k=1 + seed % 4, vadd=1, crossings=seed % 2, extra=int(seed % 6 == 0))


@pytest.mark.slow
def test_seeded_sweep_agrees_with_the_oracle():
    for inst in seeded(500, _single_vertex_params, keep=lambda inst: not inst.e_add_h):
        solution = solve_single_vertex(inst)
        assert (solution is None) == (brute_force_solve(inst) is None)
        if solution is not None:
            assert is_extension(solution, inst)
