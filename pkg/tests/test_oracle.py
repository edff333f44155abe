import pytest
from hypothesis import given, settings

from drawext import (SearchLimits, brute_force_solve, enumerate_all_extensions, extension_violations, is_extension,
                     validate_ic_planar)
from drawext.exceptions import BudgetError
from drawext.oracle import edge_order, reachable_cells
from drawext.two_vertex_dp import enumerate_initial_delimiters, hub_drawings
from tests.strategies import generated, instance, walled_hubs


def test_square_with_both_diagonals_extends(c4):
    inst = instance(c4, [('a', 'c'), ('b', 'd')])
    solution = brute_force_solve(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_walled_hubs_cannot_be_joined():
    assert brute_force_solve(instance(walled_hubs(), [('u', 'v')])) is None


def test_vertex_limit_raises(c4):
    with pytest.raises(BudgetError):
        brute_force_solve(instance(c4, [('a', 'c')]), SearchLimits().set_max_vertices(3))


def test_placement_budget_raises(c4):
    with pytest.raises(BudgetError):
        brute_force_solve(instance(c4, [('a', 'c'), ('b', 'd')]), SearchLimits().set_max_placements(1))


def test_non_positive_budget_is_rejected():
    with pytest.raises(BudgetError):
        SearchLimits().set_max_k(0)


def test_limits_are_fluent():
    limits = SearchLimits().set_max_vertices(5).set_max_k(2).set_ic()
    assert (limits.max_vertices, limits.max_k, limits.ic) == (5, 2, True)


def test_ic_extensions_are_ic_planar(c4):
    solutions = enumerate_all_extensions(instance(c4, [('a', 'c'), ('b', 'd')], mode='ic'))
    assert solutions
    assert all(validate_ic_planar(s) == [] for s in solutions)


def test_edge_order_starts_from_h(triangle):
    assert edge_order(instance(triangle, [('v', 'a'), ('v', 'b')])) == [('a', 'v'), ('b', 'v')]


def test_reachable_cells_cross_one_segment(c4):
    assert sorted(reachable_cells(c4, 'a'), key=repr) == sorted({c.id for c in c4.cells}, key=repr)


@settings(max_examples=25, deadline=None)
@given(generated())
def test_every_witness_validates(inst):
    solution = brute_force_solve(inst)
    if solution is not None:
        assert extension_violations(solution, inst) == []


def test_single_chord_has_an_inside_and_an_outside_extension(c4):
    assert len(enumerate_all_extensions(instance(c4, [('a', 'c')]))) >= 2


def test_nothing_to_add_has_exactly_one_extension(c4):
    [only] = enumerate_all_extensions(instance(c4, []))
    assert only.canonical() == c4.canonical()


def test_walled_hubs_have_no_extensions():
    assert enumerate_all_extensions(instance(walled_hubs(), [('u', 'v')])) == []


def test_omega_restriction_keeps_a_subset(triangle):
    inst = instance(triangle, [('r', 'a'), ('s', 'b')])
    everything = {s.canonical() for s in enumerate_all_extensions(inst)}
    for drawing in hub_drawings(inst):
        for omega in list(enumerate_initial_delimiters(inst, drawing).delimiters)[:2]:
            restricted = enumerate_all_extensions(inst, SearchLimits().set_omega(omega))
            assert {s.canonical() for s in restricted} <= everything
            assert all(omega.is_compatible(s) for s in restricted)
