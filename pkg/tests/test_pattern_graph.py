import pytest

from drawext import (Pattern, assemble_solution, build_embedding_graph, check_validity, derive_pattern,
                     enumerate_all_extensions, is_extension, oracle, place_pattern, solver)
from drawext.drawing import cyclic_canonical
from drawext.exceptions import ConsistencyError
from drawext.pattern_graph import added_rotations, components
from drawext.patterns import iter_pattern_placements
from drawext.solver import solve_with_patterns
from tests.strategies import chord, crossing, instance

AC = ('a', 'c')
BD = ('b', 'd')


def _solve_through(pattern, inst):
    pattern_graph = check_validity(pattern, inst)
    assert pattern_graph is not None
    eg = build_embedding_graph(inst.drawing, inst.join_vertices)
    for placement in iter_pattern_placements(pattern, pattern_graph, eg):
        try:
            return assemble_solution(placement, pattern_graph, inst)

        except ConsistencyError:
            continue

    return None


def test_components_follow_shared_vertices():
    pattern = Pattern(('s', 't'), {}, {AC: ('s', 's'), BD: ('t', 't')},
                      {'a': frozenset('s'), 'c': frozenset('s'), 'b': frozenset('t'), 'd': frozenset('t')},
                      {'s': ((AC, 'a'), (AC, 'c')), 't': ((BD, 'b'), (BD, 'd'))})
    assert components(pattern) == [['s'], ['t']]


def test_chord_pattern_is_valid_and_placed(c4):
    inst = instance(c4, [AC])
    pattern = derive_pattern(chord(c4, 'a', 'c'), inst)
    pattern_graph = check_validity(pattern, inst)
    assert pattern_graph is not None
    assert place_pattern(pattern, pattern_graph, build_embedding_graph(c4, inst.join_vertices)) is not None


def test_chord_pattern_assembles_into_an_extension(c4):
    inst = instance(c4, [AC])
    solution = _solve_through(derive_pattern(chord(c4, 'a', 'c'), inst), inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_crossing_pattern_assembles_into_an_extension(c4):
    h = chord(c4, 'a', 'c')
    inst = instance(h, [BD])
    solution = _solve_through(derive_pattern(crossing(h, 'b', 'd'), inst), inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_empty_pattern_returns_the_drawing(c4):
    inst = instance(c4, [])
    pattern_graph = check_validity(Pattern(), inst)
    placement = place_pattern(Pattern(), pattern_graph, build_embedding_graph(c4))
    assert assemble_solution(placement, pattern_graph, inst).canonical() == c4.canonical()


@pytest.fixture
def hub_in_square(c4):
    inst = instance(c4, [('v', 'a'), ('v', 'b'), ('v', 'c'), ('v', 'd')])
    return inst, next(iter(enumerate_all_extensions(inst)))


def test_assembly_keeps_the_rotation_of_each_part(hub_in_square):
    inst, drawn = hub_in_square
    pattern = derive_pattern(drawn, inst)
    pattern_graph = check_validity(pattern, inst)
    solution = _solve_through(pattern, inst)
    assert solution is not None
    assert is_extension(solution, inst)
    found = added_rotations(solution, ['v'])['v']
    wanted = added_rotations(pattern_graph.parts[0].drawing, ['v'])['v']
    assert found in (wanted, cyclic_canonical(reversed(wanted)))


def test_patterns_are_checked_and_assembled_without_the_oracle(monkeypatch, c4):
    def refuse(*args, **kwargs):
        raise AssertionError('exhaustive search used')

    monkeypatch.setattr(oracle, 'brute_force_solve', refuse)
    monkeypatch.setattr(solver, 'brute_force_solve', refuse)
    h = chord(c4, 'a', 'c')
    inst = instance(h, [BD])
    solution = solve_with_patterns(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_assembly_follows_the_placed_crossing(c4):
    h = chord(c4, 'a', 'c')
    inst = instance(h, [BD])
    pattern = derive_pattern(crossing(h, 'b', 'd'), inst)
    solution = _solve_through(pattern, inst)
    assert solution is not None
    assert solution.crossed_edges.keys() == {AC, BD}


@pytest.mark.slow
def test_every_derived_pattern_is_valid(c4):
    h = chord(c4, 'a', 'c')
    inst = instance(h, [BD])
    for solution in enumerate_all_extensions(inst):
        assert check_validity(derive_pattern(solution, inst), inst) is not None
