import pytest

from drawext import (ExtendedPattern, ExtensionInstance, brute_force_solve, check_validity_extended,
                     derive_extended_pattern, enumerate_all_extensions, validate_ic_planar)
from drawext.constants import ONE_PLANAR
from drawext.exceptions import PatternError
from drawext.ic_patterns import compute_difficult_vertices, compute_regions, iter_region_counts, vertices_in
from tests.strategies import chord, instance, seeded


@pytest.fixture
def wheel(triangle):
    return instance(triangle, [('v', 'a'), ('v', 'b'), ('v', 'c')], mode='ic')


def _planar(solution):
    return not solution.crossings


def test_star_in_a_clean_face_has_one_region(wheel):
    solution = next(s for s in enumerate_all_extensions(wheel) if _planar(s))
    [(cell, difficult, regions)] = iter_region_counts(solution, wheel)
    assert difficult == 0
    assert regions == 1


def test_difficult_vertices_need_two_routed_edges(wheel):
    solution = next(s for s in enumerate_all_extensions(wheel) if _planar(s))
    for cell in wheel.drawing.cells:
        assert compute_difficult_vertices(solution, wheel, cell.id) == set()


def test_counts_stay_within_bounds(c4):
    inst = instance(chord(c4, 'a', 'c'), [('v', 'a'), ('v', 'b'), ('v', 'd')], mode='ic')
    kappa = inst.kappa
    for solution in enumerate_all_extensions(inst):
        for _, difficult, regions in iter_region_counts(solution, inst):
            assert difficult <= 3 * kappa ** 2
            assert regions <= 3 * kappa


def test_planar_star_pattern_is_valid(wheel):
    solution = next(s for s in enumerate_all_extensions(wheel) if _planar(s))
    ep = derive_extended_pattern(solution, wheel)
    assert set(ep.vertex_faces) == {'v'}
    assert len(ep.routes['v']) == 1
    assert ep.kappa == 1
    assert check_validity_extended(ep, wheel) is not None


def test_derived_patterns_compare_equal(wheel):
    solution = brute_force_solve(wheel)
    assert derive_extended_pattern(solution, wheel) == derive_extended_pattern(solution, wheel)


def test_one_planar_instances_have_no_extended_pattern(triangle):
    inst = instance(triangle, [('v', 'a')])
    with pytest.raises(PatternError):
        derive_extended_pattern(brute_force_solve(inst), inst)


def test_invalid_solutions_are_rejected(wheel, triangle):
    with pytest.raises(PatternError):
        derive_extended_pattern(triangle, wheel)


def test_pattern_missing_the_added_vertex_is_not_valid(wheel):
    assert check_validity_extended(ExtendedPattern(), wheel) is None


def test_regions_add_up_over_every_vertex_of_a_face(c4):
    inst = instance(c4, [('v', 'a'), ('v', 'b'), ('w', 'c'), ('w', 'd')], mode='ic')
    crowded = 0
    for solution in enumerate_all_extensions(inst):
        for cell, _, regions in iter_region_counts(solution, inst):
            inside = vertices_in(solution, inst, cell)
            crowded += len(inside) > 1
            assert regions == sum(len(compute_regions(solution, inst, x, cell)) for x in inside)
            assert regions <= 3 * inst.kappa

    assert crowded


def _ic_params(seed):
    return dict(n=3 + seed % 4, k=1 + seed % 2, vadd=seed % 3 // 2, crossings=seed % 2, ic=True,
                extra=int(seed % 5 == 0))


@pytest.mark.slow
def test_seeded_ic_answers_match_the_ic_planar_one_planar_extensions():
    for inst in seeded(200, _ic_params):
        relaxed = ExtensionInstance(inst.graph, inst.drawing, ONE_PLANAR)
        filtered = [s for s in enumerate_all_extensions(relaxed) if validate_ic_planar(s) == []]
        solution = brute_force_solve(inst)
        assert (solution is None) == (not filtered)
        if solution is None:
            continue

        assert validate_ic_planar(solution) == []
        for _, difficult, regions in iter_region_counts(solution, inst):
            assert difficult <= 3 * inst.kappa ** 2
            assert regions <= 3 * inst.kappa
