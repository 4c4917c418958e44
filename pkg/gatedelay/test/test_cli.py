# The MIT License
# Copyright 2019 Innodata Labs
#
import json
import runpy
import sys
import pytest
from gatedelay.cli import main
from gatedelay.cli.main import run
from gatedelay.model import DefectError
from gatedelay.properties import classify
from gatedelay.formats import serialize_model, emit_dot
from gatedelay import data


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


@pytest.fixture
def not_model(tmp_path):
    return write(tmp_path, 'not.json', serialize_model(data.not_gate()))


@pytest.fixture
def buffer_model(tmp_path):
    return write(tmp_path, 'buffer.json', '{"n": 1, "m": 1, "coords": ["v1"]}')


def test_analyze(not_model, capsys):
    assert run(['analyze', not_model, '--state', '0']) == 0
    out = json.loads(capsys.readouterr().out)
    assert out['state'] == '0'
    assert out['properties']['tcgr'] == dict(holds=True, branch='b3')
    assert out['causes']['delay_sensitivity'] == ['oscillation']


def test_analyze_text(not_model, capsys):
    assert run(['analyze', not_model, '--state', '1', '--format', 'text']) == 0
    assert capsys.readouterr().out.startswith('state 1  stable no')


def test_analyze_with_inputs(buffer_model, capsys):
    assert run(['analyze', buffer_model, '--state', '00', '--param', '1']) == 0
    out = json.loads(capsys.readouterr().out)
    assert out['param'] == '1'
    assert out['limit'] == '11'
    assert out['state_stable']


def test_classify_all(not_model, capsys):
    assert run(['classify-all', not_model]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [r['state'] for r in out] == ['0', '1']


def test_graph(not_model, tmp_path, capsys):
    assert run(['graph', not_model, '--out', '-']) == 0
    assert capsys.readouterr().out == emit_dot(data.not_gate())

    out = tmp_path / 'not.dot'
    assert run(['graph', not_model, '--state', '0', '--out', str(out)]) == 0
    assert '[label="0*", penwidth=2]' in out.read_text(encoding='utf-8')


def test_orbit(tmp_path, capsys):
    path = write(tmp_path, 'const.json', serialize_model(data.const_field(2, 0b11)))
    assert run(['orbit', path, '--state', '00']) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == dict(state='00', transient_len=1, period=1, milestones=['00', '11'],
                       single_bit_change=False)


def test_oracle_check(not_model, buffer_model, capsys):
    assert run(['oracle-check', not_model, '--state', '0']) == 0
    assert json.loads(capsys.readouterr().out)['agree']
    assert run(['oracle-check', buffer_model, '--state', '10', '--param', '1']) == 0
    assert json.loads(capsys.readouterr().out)['mismatch'] is None


def test_oracle_check_width(tmp_path, capsys):
    path = write(tmp_path, 'wide.json', serialize_model(data.const_field(5, 0)))
    assert run(['oracle-check', path, '--state', '00000']) == 2
    assert 'error:' in capsys.readouterr().err


def test_selftest(capsys):
    assert run(['selftest', '--n', '1']) == 0
    assert capsys.readouterr().out.splitlines() == [
        'n=1: 8 cases, 0 violations',
        'n=2 m=1 closed: 2000 cases, 0 violations',
    ]

    assert run(['selftest', '--n', '1', '--closed-samples', '0']) == 0
    assert capsys.readouterr().out == 'n=1: 8 cases, 0 violations\n'

    assert run(['selftest', '--n', '1', '--oracle', '--closed-samples', '0', '--format', 'json']) == 0
    out = json.loads(capsys.readouterr().out)
    assert [s['name'] for s in out['suites']] == ['n=1', 'n=1 oracle']


def test_oracle_disagreement_exits_1(not_model, monkeypatch, capsys):
    monkeypatch.setattr(main, 'oracle_classify', lambda g, w: classify(data.identity(1), w))
    assert run(['oracle-check', not_model, '--state', '0']) == 1
    out = json.loads(capsys.readouterr().out)
    assert not out['agree']
    assert out['mismatch'] is not None


def test_defect_exits_1(not_model, monkeypatch, capsys):
    def broken(g, w):
        raise DefectError('lattice', 'hazard_free without delay_insensitive')

    monkeypatch.setattr(main, 'classify', broken)
    assert run(['analyze', not_model, '--state', '0']) == 1
    assert capsys.readouterr().err.startswith('defect: lattice')


@pytest.mark.parametrize('argv', [
    ['analyze', 'missing.json', '--state', '0'],
    ['analyze', '{model}', '--state', '2'],
    ['analyze', '{model}', '--state', '00'],
    ['analyze', '{model}', '--state', '0', '--param', '1'],
    ['analyze', '{model}'],
    ['frobnicate'],
])
def test_bad_input(argv, not_model, capsys):
    argv = [not_model if a == '{model}' else a for a in argv]
    assert run(argv) == 2


def test_inputs_need_param(buffer_model, capsys):
    assert run(['analyze', buffer_model, '--state', '00']) == 2
    assert '--param is required' in capsys.readouterr().err


def test_cmp_reports(not_model, tmp_path, monkeypatch, capsys):
    assert run(['analyze', not_model, '--state', '0']) == 0
    r0 = write(tmp_path, 'r0.json', capsys.readouterr().out)
    assert run(['analyze', not_model, '--state', '1']) == 0
    r1 = write(tmp_path, 'r1.json', capsys.readouterr().out)

    monkeypatch.setattr(sys, 'argv', ['cmp_reports', r0, r0])
    with pytest.raises(SystemExit) as e:
        runpy.run_module('gatedelay.cli.cmp_reports', run_name='__main__')
    assert e.value.code == 0
    assert capsys.readouterr().out == 'Reports agree\n'

    monkeypatch.setattr(sys, 'argv', ['cmp_reports', r0, r1])
    with pytest.raises(SystemExit) as e:
        runpy.run_module('gatedelay.cli.cmp_reports', run_name='__main__')
    assert e.value.code == 1
    assert capsys.readouterr().out == "value mismatch '0' vs '1' at state\n"
