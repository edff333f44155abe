import pytest
from hypothesis import given, settings, strategies as st

from drawext import brute_force_solve, enumerate_classes, equivalent, is_extension, iter_placements, solve_edges_only
from drawext.edge_insertion import LEFT, RIGHT, class_bound, compute_profile, iter_canonical, iter_slots
from drawext.exceptions import RegimeError
from tests.strategies import chord, generated, instance, seeded, walled_hubs


def test_class_bound():
    assert class_bound(1) == 48
    assert class_bound(2) == 120


def test_classes_cover_every_placement(c4):
    drawing = chord(c4, 'a', 'c')
    classes = enumerate_classes(drawing, ('b', 'd'), 1)
    assert sum(c.size for c in classes) == len(list(iter_placements(drawing, 'b', 'd')))
    assert 1 <= len(classes) <= class_bound(1)


def test_every_placement_is_equivalent_to_one_representative(c4):
    drawing = chord(c4, 'a', 'c')
    classes = enumerate_classes(drawing, ('b', 'd'), 1)
    for placement in iter_placements(drawing, 'b', 'd'):
        matches = [c for c in classes if equivalent(placement, c.representative, drawing, 1, [('b', 'd')])]
        assert len(matches) == 1


def test_canonical_keys_reach_every_placement(c4):
    drawing = chord(c4, 'a', 'c')
    profile = compute_profile(drawing, {'b', 'd'}, 1)
    keyed = [placement for _, placement in iter_canonical(drawing, ('b', 'd'), profile)]
    assert sorted(keyed, key=repr) == sorted(iter_placements(drawing, 'b', 'd'), key=repr)


def test_class_fields_describe_the_representative(c4):
    drawing = chord(c4, 'a', 'c')
    for cls in enumerate_classes(drawing, ('b', 'd'), 1):
        if cls.representative.crossing is None:
            assert (cls.gap, cls.selector, cls.value) == (None, None, None)

        else:
            assert cls.gap is not None
            assert cls.selector in (LEFT, RIGHT, None)
            assert 0 <= cls.value <= 2
            assert (cls.selector is None) == (cls.value == 2)


@pytest.mark.parametrize('length, k', [(0, 1), (1, 1), (4, 1), (5, 1), (9, 2)])
def test_slots_split_a_segment_exactly_once(length, k):
    positions = [p for _, _, slot in iter_slots(length, k) for p in slot]
    assert sorted(positions) == list(range(length))


def test_long_segments_share_one_slot_beyond_k():
    slots = list(iter_slots(9, 2))
    assert (None, 3, range(3, 6)) in slots
    assert (LEFT, 0, range(0, 1)) in slots
    assert (RIGHT, 2, range(6, 7)) in slots


def test_a_placement_is_equivalent_to_itself(c4):
    p = next(iter_placements(c4, 'a', 'c'))
    assert equivalent(p, p, c4, 1, [('a', 'c')])


def test_profile_counts_are_capped(c4):
    profile = compute_profile(c4, 'ac', 1)
    assert profile.cap(5) == profile.cap(profile.k + 1)


def test_square_with_diagonals_extends(c4):
    inst = instance(c4, [('a', 'c'), ('b', 'd')])
    solution = solve_edges_only(inst)
    assert solution is not None
    assert is_extension(solution, inst)


def test_walled_hubs_cannot_be_joined():
    assert solve_edges_only(instance(walled_hubs(), [('u', 'v')])) is None


def test_nothing_to_add_returns_the_drawing(c4):
    assert solve_edges_only(instance(c4, [])).canonical() == c4.canonical()


def test_added_vertices_are_out_of_regime(triangle):
    with pytest.raises(RegimeError):
        solve_edges_only(instance(triangle, [('v', 'a')]))


def test_ic_is_out_of_regime(c4):
    with pytest.raises(RegimeError):
        solve_edges_only(instance(c4, [('a', 'c')], mode='ic'))


@settings(max_examples=15, deadline=None)
@given(generated(n=st.integers(3, 5), k=st.integers(1, 2), vadd=st.just(0)))
def test_agrees_with_the_oracle(inst):
    assert (solve_edges_only(inst) is None) == (brute_force_solve(inst) is None)


def _edges_only_params(seed):
    k = 1 + seed % 3
    return dict(n=4 + seed % 5, k=k, crossings=seed % 2, extra=int(k < 3 and seed % 5 == 0))


@pytest.mark.slow
def test_seeded_sweep_agrees_with_the_oracle():
    for inst in seeded(500, _edges_only_params):
        solution = solve_edges_only(inst)
        assert (solution is None) == (brute_force_solve(inst) is None)
        if solution is not None:
            assert is_extension(solution, inst)

        for edge in inst.e_add:
            assert len(enumerate_classes(inst.drawing, edge, inst.k)) <= class_bound(inst.k)
