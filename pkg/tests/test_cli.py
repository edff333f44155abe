import json

import pytest

from drawext import parse_drawing, write_drawing, write_instance
from drawext.cli import build_parser, main
from tests.strategies import chord, instance, walled_hubs


@pytest.fixture
def diagonals(tmp_path, c4):
    path = tmp_path / 'instance.json'
    path.write_text(write_instance(instance(c4, [('a', 'c'), ('b', 'd')])))
    return path


def test_extend_writes_a_solution(diagonals, tmp_path, capsys):
    out, svg = tmp_path / 'solution.json', tmp_path / 'solution.svg'
    assert main(['extend', str(diagonals), '--out', str(out), '--svg', str(svg)]) == 0
    assert capsys.readouterr().out == 'YES\n'
    assert ('a', 'c') in parse_drawing(out.read_text()).edges
    assert 'edge added' in svg.read_text()


def test_extend_prints_to_stdout(diagonals, capsys):
    assert main(['extend', str(diagonals), '--mode', 'oracle']) == 0
    assert json.loads(capsys.readouterr().out)['edges']


def test_extend_answers_no(tmp_path, capsys):
    path = tmp_path / 'walled.json'
    path.write_text(write_instance(instance(walled_hubs(), [('u', 'v')])))
    assert main(['extend', str(path), '--mode', 'edges']) == 1
    assert capsys.readouterr().out == 'NO\n'


def test_verify_accepts_a_solution(diagonals, tmp_path, capsys):
    out = tmp_path / 'solution.json'
    main(['extend', str(diagonals), '--out', str(out)])
    capsys.readouterr()
    assert main(['verify', str(diagonals), str(out)]) == 0
    assert capsys.readouterr().out == 'ok\n'


def test_verify_rejects_a_partial_solution(diagonals, tmp_path, c4, capsys):
    out = tmp_path / 'partial.json'
    out.write_text(write_drawing(chord(c4, 'a', 'c')))
    assert main(['verify', str(diagonals), str(out)]) == 1
    assert 'missing-edge' in capsys.readouterr().out


def test_generate_then_render(tmp_path, capsys):
    path, svg = tmp_path / 'generated.json', tmp_path / 'generated.svg'
    assert main(['generate', '--seed', '1', '--n', '4', '--out', str(path)]) == 0
    assert json.loads(path.read_text())['add_edges'] == []
    assert main(['render', str(path), '--out', str(svg)]) == 0
    assert svg.read_text().startswith('<?xml')


def test_unknown_flag_is_a_usage_error(diagonals):
    assert main(['extend', str(diagonals), '--fast']) == 2


def test_missing_command_is_a_usage_error():
    assert main([]) == 2


def test_malformed_file_is_a_parse_error(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"vertices": ')
    assert main(['extend', str(path)]) == 2


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(['extend', str(tmp_path / 'absent.json')]) == 2


def test_out_of_regime_exits_with_three(tmp_path, triangle):
    path = tmp_path / 'two.json'
    path.write_text(write_instance(instance(triangle, [('a', 'v'), ('b', 'w')])))
    assert main(['extend', str(path), '--mode', 'one-vertex']) == 3


def test_verbosity_flags_exclude_each_other():
    with pytest.raises(SystemExit):
        build_parser().parse_args(['-v', '-q', 'verify', 'a', 'b'])
