import pytest

from drawext import (SearchLimits, apply_placement, brute_force_solve, is_extension, iter_placements, place_vertex,
                     solve_two_vertices)
from drawext.constants import NOT_APPLICABLE
from drawext.exceptions import RegimeError
from drawext.two_vertex_dp import (END, GAP, HUG, START, AuxiliaryGraph, classify_faces, delimiter_for,
                                   enumerate_initial_delimiters, enumerate_records, hub_drawings, is_dominated)
from drawext.vertex_flow import RED
from tests.strategies import cell_with, chord, crossing, instance, plane, seeded, walled_hubs, web


def test_hub_drawings_try_every_pair_of_cells(triangle):
    inst = instance(triangle, [('r', 'a'), ('s', 'b')])
    assert len(list(hub_drawings(inst))) == 4


def test_hub_drawings_draw_the_hub_edge(triangle):
    inst = instance(triangle, [('r', 'a'), ('s', 'b'), ('r', 's')])
    assert all(('r', 's') in d.edges for d in hub_drawings(inst))


def test_hubs_in_one_cell_get_gap_delimiters(triangle):
    inst = instance(triangle, [('r', 'a'), ('r', 'b'), ('s', 'b'), ('s', 'c')])
    drawing = place_vertex(place_vertex(triangle, 'r', triangle.outer_cell), 's', triangle.outer_cell)
    choice = enumerate_initial_delimiters(inst, drawing)
    assert all(omega.kind == GAP for omega in choice.delimiters)


def test_crossing_hub_edge_gets_a_hug(triangle):
    inner = next(c.id for c in triangle.cells if c.id != triangle.outer_cell)
    drawing = place_vertex(place_vertex(triangle, 'r', inner), 's', triangle.outer_cell)
    drawing = crossing(drawing, 'r', 's')
    inst = instance(triangle, [('r', 'a'), ('s', 'b'), ('r', 's')])
    [omega] = enumerate_initial_delimiters(inst, drawing).delimiters
    assert omega.kind == HUG
    assert omega.is_compatible(drawing)


def test_records_of_a_hug_start_and_end_the_sweep(triangle):
    inner = next(c.id for c in triangle.cells if c.id != triangle.outer_cell)
    drawing = crossing(place_vertex(place_vertex(triangle, 'r', inner), 's', triangle.outer_cell), 'r', 's')
    inst = instance(triangle, [('r', 'a'), ('s', 'b'), ('r', 's')])
    [omega] = enumerate_initial_delimiters(inst, drawing).delimiters
    index = classify_faces(inst, omega)
    assert index.hub(RED) == 'r'
    assert set(index.colors) <= {c.id for c in drawing.cells}

    records = enumerate_records(inst, index)
    assert records[0].kind == START
    assert records[-1].kind == END
    assert delimiter_for(records[-1], index).cut == index.end


def test_auxiliary_distance_between_neighbouring_cells(c4):
    inner, outer = (cell.id for cell in c4.cells)
    assert AuxiliaryGraph(c4).distance(inner, outer) == 2


def test_two_triangle_hubs_extend(triangle):
    inst = instance(triangle, [('r', 'a'), ('r', 'b'), ('s', 'b'), ('s', 'c')])
    solution = solve_two_vertices(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_hubs_on_both_sides_of_the_square_extend(c4):
    inst = instance(c4, [('r', 'a'), ('r', 'c'), ('s', 'b'), ('s', 'd'), ('r', 's')])
    solution = solve_two_vertices(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_hubs_split_by_a_wall_fail():
    inst = instance(walled_hubs(), [('w', 'u'), ('z', 'v'), ('w', 'z')])
    assert solve_two_vertices(inst) is None
    assert brute_force_solve(inst, SearchLimits().set_max_vertices(16)) is None


def test_agrees_with_the_oracle_on_a_path(path3):
    inst = instance(path3, [('r', 'a'), ('r', 'c'), ('s', 'b'), ('r', 's')])
    assert (solve_two_vertices(inst) is None) == (brute_force_solve(inst) is None)


def test_one_hub_is_out_of_regime(triangle):
    with pytest.raises(RegimeError):
        solve_two_vertices(instance(triangle, [('r', 'a')]))


def test_ic_is_out_of_regime(triangle):
    with pytest.raises(RegimeError):
        solve_two_vertices(instance(triangle, [('r', 'a'), ('s', 'b')], mode='ic'))


@pytest.fixture
def heptagon():
    return plane([(a, b) for a, b in zip('abcdefg', 'bcdefga')])


def _through(drawing, u, v, wall):
    return apply_placement(drawing, next(p for p in iter_placements(drawing, u, v)
                                         if p.crossing is not None and drawing.edge_of(p.crossing) == wall))


@pytest.fixture
def incursions(heptagon):
    """Hub r inside the heptagon reaching a across de and g across ef; hub s outside, tied to c."""
    inner = next(c.id for c in heptagon.cells if c.id != heptagon.outer_cell)
    hubs = place_vertex(place_vertex(heptagon, 'r', inner), 's', heptagon.outer_cell)
    inst = instance(heptagon, [('r', 'a'), ('r', 'g'), ('s', 'c')])
    omega = next(iter(enumerate_initial_delimiters(inst, hubs).delimiters))
    index = classify_faces(inst, omega)
    tied = chord(hubs, 's', 'c')
    return index, _through(tied, 'r', 'a', ('d', 'e'))


def test_nested_incursion_is_dominated(incursions):
    index, fragment = incursions
    fragment = _through(fragment, 'r', 'g', ('e', 'f'))
    assert is_dominated(('g', 'r'), fragment, index)
    assert not is_dominated(('a', 'r'), fragment, index)


def test_single_incursion_is_not_dominated(incursions):
    index, fragment = incursions
    assert not is_dominated(('a', 'r'), fragment, index)


def test_vertex_cut_off_by_an_incursion_is_dominated(incursions):
    index, fragment = incursions
    assert is_dominated('f', fragment, index)
    assert not is_dominated('c', fragment, index)


def _two_vertex_params(seed):
    return dict(n=5 + seed % 3, k=2 + seed % 5, vadd=2, crossings=seed % 2, extra=int(seed % 5 == 0))


def _hubs_joined_to_h_only(inst):
    return len(inst.v_add) == 2 and not inst.e_add_h


def test_sweep_agrees_with_the_oracle_on_a_few_seeds():
    for inst in seeded(8, _two_vertex_params, keep=_hubs_joined_to_h_only):
        assert (solve_two_vertices(inst) is None) == (brute_force_solve(inst) is None)


@pytest.mark.slow
def test_seeded_sweep_agrees_with_the_oracle():
    for inst in seeded(200, _two_vertex_params, keep=_hubs_joined_to_h_only):
        solution = solve_two_vertices(inst)
        assert (solution is None) == (brute_force_solve(inst) is None)
        if solution is not None:
            assert is_extension(solution, inst)


@pytest.fixture
def far_rings():
    """Four nested squares; r lies inside the innermost and s outside the outermost."""
    drawing = web(4)
    inner = cell_with(drawing, [f'r0_{i}' for i in range(4)])
    outer = cell_with(drawing, [f'r3_{i}' for i in range(4)])
    return drawing, place_vertex(place_vertex(drawing, 'r', inner), 's', outer)


def test_far_hubs_are_decided_by_two_flows(far_rings):
    drawing, placed = far_rings
    inst = instance(drawing, [('r', 'r0_0'), ('r', 'r0_2'), ('s', 'r3_0'), ('s', 'r3_1')])
    choice = enumerate_initial_delimiters(inst, placed)
    assert choice.direct is not NOT_APPLICABLE
    assert choice.direct is not None
    assert is_extension(choice.direct, inst)


def test_far_hub_out_of_reach_is_a_direct_no(far_rings):
    drawing, placed = far_rings
    inst = instance(drawing, [('r', 'r0_0'), ('s', 'r3_0'), ('s', 'r0_1')])
    assert enumerate_initial_delimiters(inst, placed).direct is None
