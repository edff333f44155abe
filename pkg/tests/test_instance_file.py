import json

import pytest
from hypothesis import given, settings, strategies as st

from drawext import parse_drawing, parse_instance, place_vertex, write_drawing, write_instance
from drawext.exceptions import ParseError, SemanticError
from drawext.instance import embedding_differences
from tests.strategies import generated, instance


@pytest.fixture
def k4x_doc(k4x):
    return json.loads(write_instance(instance(k4x, [('v', 'a'), ('v', 'c')])))


def _parse(doc):
    return parse_instance(json.dumps(doc))


def test_written_instances_reparse_to_the_same_bytes(k4x):
    text = write_instance(instance(k4x, [('v', 'a'), ('v', 'c')], mode='ic'))
    assert write_instance(parse_instance(text)) == text
    assert text.endswith('}\n')


def test_nested_components_survive(triangle):
    drawing = place_vertex(triangle, 'v', triangle.outer_cell)
    text = write_drawing(drawing)
    assert '"nested"' in text
    assert write_drawing(parse_drawing(text)) == text


def test_solution_documents_parse_back(k4x):
    parsed = parse_drawing(write_drawing(k4x))
    assert embedding_differences(parsed, k4x) == []
    assert set(parsed.crossings) == {'x0'}


def test_crossings_are_named_by_position(k4x_doc):
    assert len(k4x_doc['crossings']) == 1
    assert 'x0' in k4x_doc['rotation']


def test_invalid_json_names_the_line():
    with pytest.raises(ParseError) as info:
        parse_instance('{\n  "vertices": [,\n}')

    assert info.value.path == 'line 2'


def test_unknown_member_is_a_parse_error(k4x_doc):
    k4x_doc['colour'] = 'red'
    with pytest.raises(ParseError) as info:
        _parse(k4x_doc)

    assert info.value.path == '$.colour'
    assert not isinstance(info.value, SemanticError)


def test_missing_member_is_a_parse_error(k4x_doc):
    del k4x_doc['outer']
    with pytest.raises(ParseError):
        _parse(k4x_doc)


def test_edge_in_two_crossings_is_named(k4x_doc):
    [first] = k4x_doc['crossings']
    i, j = first['edges']
    other = next(n for n in range(len(k4x_doc['h_edges'])) if n not in (i, j))
    k4x_doc['crossings'].append({'edges': [i, other]})
    with pytest.raises(SemanticError) as info:
        _parse(k4x_doc)

    edge = tuple(k4x_doc['h_edges'][i])
    assert str(edge) in info.value.message


def test_self_loop_is_rejected(k4x_doc):
    k4x_doc['add_edges'].append(['v', 'v'])
    with pytest.raises(SemanticError):
        _parse(k4x_doc)


def test_added_edge_already_drawn_is_rejected(k4x_doc):
    k4x_doc['add_edges'].append(['a', 'b'])
    with pytest.raises(SemanticError):
        _parse(k4x_doc)


def test_unknown_mode_is_rejected(k4x_doc):
    k4x_doc['mode'] = 'planar'
    with pytest.raises(SemanticError) as info:
        _parse(k4x_doc)

    assert info.value.path == '$.mode'


def test_rotation_of_an_unknown_node_is_rejected(k4x_doc):
    k4x_doc['rotation']['z'] = []
    with pytest.raises(SemanticError):
        _parse(k4x_doc)


def test_reference_to_a_segment_off_the_node_is_rejected(k4x_doc):
    rotation = k4x_doc['rotation']
    rotation['a'], rotation['b'] = rotation['b'], rotation['a']
    with pytest.raises(SemanticError):
        _parse(k4x_doc)


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(generated(ic=st.booleans()))
def test_generated_instances_reparse_to_the_same_bytes(inst):
    text = write_instance(inst)
    assert write_instance(parse_instance(text)) == text
