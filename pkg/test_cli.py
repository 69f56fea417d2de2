import os
import sys
import json

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from main import main
from src.coefficients.params import GenericAffine


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_rank(capsys):
    code, out = run(capsys, 'rank', '--category', 'kauffmann', '-m', '2', '-s', '2')
    assert code == 0
    assert out.strip() == '3'
    code, out = run(capsys, 'rank', '--category', 'cyclotomic', '-m', '2', '-s', '2', '--a', '2')
    assert out.strip() == '12'


def test_rank_of_affine_category_is_usage_error(capsys):
    code, _ = run(capsys, 'rank', '--category', 'affine', '-m', '1', '-s', '1')
    assert code == 1


def test_normalize_closed_loop(capsys):
    code, out = run(capsys, 'normalize', 'U@1 . A@1')
    assert code == 0
    data = json.loads(out)
    assert (data['source'], data['target']) == (0, 0)
    assert len(data['terms']) == 1
    env = GenericAffine()
    assert env.parse(data['terms'][0]['coeff']) == env.omega0
    assert data['terms'][0]['connector'] == []


def test_normalize_trace_lines(capsys):
    code, out = run(capsys, 'normalize', 'T@1 . X@1 . T@1', '-m', '2', '--trace')
    assert code == 0
    lines = out.strip().splitlines()
    events = [json.loads(line) for line in lines[:-1]]
    assert events and all('rule' in event for event in events)
    assert json.loads(lines[-1])['source'] == 2


def test_bad_word_exits_with_one(capsys):
    code, out = run(capsys, 'normalize', 'U@1 . B@1')
    assert code == 1
    assert out == ''


def test_unknown_command_exits_with_one():
    with pytest.raises(SystemExit) as info:
        main(['frobnicate'])
    assert info.value.code == 1


def test_compose_words(capsys):
    code, out = run(capsys, 'compose', 'T@1', 'Tinv@1', '--f-source', '2', '--g-source', '2')
    assert code == 0
    data = json.loads(out)
    assert data['terms'] == [{'coeff': '1', 'connector': [[1, -1], [2, -2]], 'dots': {}, 'bubbles': []}]


def test_compose_arity_mismatch(capsys):
    code, _ = run(capsys, 'compose', 'T@1', 'U@1', '--f-source', '2', '--g-source', '0')
    assert code == 0
    code, _ = run(capsys, 'compose', 'T@1', 'U@1', '--f-source', '2', '--g-source', '1')
    assert code == 1


def test_tensor_identity(capsys):
    identity = json.dumps({'source': 1, 'target': 1,
                           'terms': [{'coeff': '1', 'connector': [[1, -1]], 'dots': {}, 'bubbles': []}]})
    code, out = run(capsys, 'tensor', identity, identity)
    assert code == 0
    assert json.loads(out)['terms'][0]['connector'] == [[1, -1], [2, -2]]


def test_basis_listing(capsys):
    code, out = run(capsys, 'basis', '--category', 'kauffmann', '-m', '2', '-s', '2')
    assert code == 0
    assert json.loads(out)['count'] == 3
    code, out = run(capsys, 'basis', '--category', 'cyclotomic', '-m', '1', '-s', '1', '--a', '3')
    assert json.loads(out)['count'] == 3


def test_admissible(capsys):
    code, out = run(capsys, 'admissible', '--env', 'cyclotomic', '--a', '1', '--max-index', '4')
    assert code == 0
    assert len(json.loads(out)) == 9


def test_cyclotomic_table_csv(capsys):
    code, out = run(capsys, 'cyclotomic-table', '--a', '2', '-r', '1', '--csv')
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == 'row,col,target,coeff'
    assert len(lines) > 1


def test_oracle_verify(capsys):
    code, out = run(capsys, 'oracle-verify', '--type', 'C', '--n', '1', '--buffer', '1')
    assert code == 0
    data = json.loads(out)
    assert all(row['ok'] for row in data['relations'])


def test_oracle_eval(capsys):
    code, out = run(capsys, 'oracle-eval', 'U@1 . A@1', '--type', 'C', '--n', '1', '--buffer', '0')
    assert code == 0
    data = json.loads(out)
    assert (data['rows'], data['cols']) == (1, 1)
    assert len(data['entries']) == 1


def test_bmw_verify_writes_reports(capsys, tmp_path, monkeypatch):
    from src.utils.config import Config
    monkeypatch.setattr(Config, 'OUTPUT_DIR', str(tmp_path))
    code, out = run(capsys, 'bmw-verify', '--env', 'affine', '-r', '2', '--s-max', '2', '--output')
    assert code == 0
    data = json.loads(out)
    assert all(row['ok'] for row in data['kauffmann'] + data['bmw'])
    assert (tmp_path / 'bmw_relations.json').exists()
    assert (tmp_path / 'verification_report.html').exists()


def test_rank_json(capsys):
    code, out = run(capsys, 'rank', '--category', 'cyclotomic', '-m', '1', '-s', '1', '--a', '2', '--json')
    assert code == 0
    assert json.loads(out) == {'category': 'cyclotomic', 'source': 1, 'target': 1, 'rank': 2}


def test_json_and_csv_are_exclusive():
    with pytest.raises(SystemExit) as info:
        main(['cyclotomic-table', '--a', '2', '--json', '--csv'])
    assert info.value.code == 1


def test_closure_violation_exits_with_two(capsys, monkeypatch):
    from src.utils.config import Config
    monkeypatch.setattr(Config, 'WINDOW_MAX_RELATIONS', 0)
    code, out = run(capsys, 'cyclotomic-table', '--a', '2', '-r', '1')
    assert code == 2
    assert out == ''
