#!/usr/bin/env python
"""Tests for __main__ module."""

import json
from unittest.mock import patch

import jsonschema
import pytest

from rht.__main__ import main, parse_args
from rht.cohomology import LieAlgebra
from rht.dsl import parse, print_source
from rht.reports import load_schema


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parse_args_minimal():
    """Test parsing minimal required arguments."""
    with patch('sys.argv', ['rht', 'cohomology', 'corpus/h3.lie']):
        args = parse_args()
        assert args.command == 'cohomology'
        assert args.source == 'corpus/h3.lie'
        assert args.classes == []
        assert args.stages == 5
        assert args.max_dim == 64
        assert args.log_level == 'WARNING'
        assert not args.json_output


def test_parse_args_sasaki_modes():
    """Test the sasaki mode flags are mutually exclusive."""
    args = parse_args(['sasaki', 'rings.ring', '--pipeline', '--ring', 'heis5'])
    assert args.sasaki_mode == 'pipeline'
    assert args.ring == 'heis5'
    with pytest.raises(SystemExit):
        parse_args(['sasaki', 'rings.ring', '--pipeline', '--mhd'])


def test_parse_args_unknown_command():
    """Test unknown commands are rejected by the parser."""
    with pytest.raises(SystemExit):
        parse_args(['homotopy', 'corpus/h3.lie'])


def test_cohomology_text(corpus, capsys):
    """Test the text report of cohomology."""
    assert main(['cohomology', str(corpus / 'h3.lie')]) == 0
    out = capsys.readouterr().out
    assert 'h3 (lie)' in out
    assert 'betti: (1, 2, 2, 1)' in out
    assert 'poincare-duality: true' in out


def test_cohomology_degrees(corpus, capsys):
    """Test a degree range restricts the Betti numbers."""
    assert main(['cohomology', str(corpus / 'h5.lie'), '--degrees', '1..2', '--json']) == 0
    result = _json(capsys)['results'][0]
    assert result['degrees'] == [1, 2]
    assert result['betti'] == [4, 5]


def test_formal1_json(corpus, capsys):
    """Test h5 is reported 1-formal with its H^2 dimensions."""
    assert main(['formal1', str(corpus / 'h5.lie'), '--json']) == 0
    report = _json(capsys)
    jsonschema.validate(report, load_schema())
    result = report['results'][0]
    assert result['one_formal'] is True
    assert result['h2_dims'] == [6, 5, 5]
    assert result['generator_counts'] == [4, 1]


def test_formal1_h3_assert(corpus, capsys):
    """Test a false verdict exits 1 only with --assert."""
    assert main(['formal1', str(corpus / 'h3.lie')]) == 0
    assert main(['formal1', str(corpus / 'h3.lie'), '--assert']) == 1
    out = capsys.readouterr().out
    assert 'h3 (lie): false' in out


def test_massey_named(corpus, capsys):
    """Test a named triple Massey product on h3."""
    assert main(['massey', str(corpus / 'h3.lie'), 'x1', 'x1', 'x2', '--json']) == 0
    report = _json(capsys)
    jsonschema.validate(report, load_schema())
    result = report['results'][0]
    assert result['nonzero_mod_indeterminacy'] is True
    assert result['classes'] == ['x1', 'x1', 'x2']


def test_massey_needs_three_classes(corpus, capsys):
    """Test massey with two classes is a usage error."""
    assert main(['massey', str(corpus / 'h3.lie'), 'x1', 'x2']) == 2
    assert 'invalid options' in capsys.readouterr().err


def test_jacobi_violation_exit(corpus, capsys):
    """Test cohomology of a non-Lie bracket exits 2."""
    assert main(['cohomology', str(corpus / 'nojacobi.lie')]) == 2
    assert capsys.readouterr().err.startswith('rht: ')


def test_check_nojacobi(corpus, capsys):
    """Test check reports the Jacobi failure as a verdict."""
    assert main(['check', str(corpus / 'nojacobi.lie'), '--json']) == 0
    result = _json(capsys)['results'][0]
    assert result['verdict'] is False
    assert result['jacobi_failures'] == ['[e1, e2, e3]']
    assert main(['check', str(corpus / 'nojacobi.lie'), '--assert']) == 1


def test_every_corpus_file_checks(corpus, capsys):
    """Test check reports conform to the schema for every corpus file."""
    schema = load_schema()
    for path in sorted(corpus.iterdir()):
        assert main(['check', str(path), '--json']) == 0, path.name
        jsonschema.validate(_json(capsys), schema)


def test_ddbar_and_bottchern(corpus, capsys):
    """Test the ddbar verdict and Bott-Chern report of the square bicomplex."""
    assert main(['ddbar', str(corpus / 'ddbar.bic'), '--json']) == 0
    result = _json(capsys)['results'][0]
    assert result['verdict'] is False
    assert result['failing_degrees'] == [1]
    assert main(['bottchern', str(corpus / 'torus.cdga'), '--json']) == 0
    report = _json(capsys)
    jsonschema.validate(report, load_schema())
    assert report['results'][0]['natural_map_iso'] is True
    assert report['results'][0]['betti'] == {'0': 1, '1': 2, '2': 1}


def test_sasaki_pipeline(corpus, capsys):
    """Test the pipeline over a named basic ring."""
    args = ['sasaki', str(corpus / 'heisenberg_rings.ring'), '--ring', 'heis5', '--pipeline', '--json']
    assert main(args) == 0
    report = _json(capsys)
    jsonschema.validate(report, load_schema())
    result = report['results'][0]
    assert result['name'] == 'heis5'
    assert result['one_formal'] is True
    assert result['v2_types'] == [[1, 1]]
    assert result['betti'] == [1, 4, 5, 5, 4, 1]


def test_heisenberg_command(corpus, capsys):
    """Test the Heisenberg test on h5 and on the abelian algebra."""
    assert main(['heisenberg', str(corpus / 'h5.lie'), '--json']) == 0
    assert _json(capsys)['results'][0]['verdict'] is True
    assert main(['heisenberg', str(corpus / 'abelian5.lie'), '--json']) == 0
    assert _json(capsys)['results'][0]['verdict'] is False


def test_unknown_name(corpus, capsys):
    """Test --name must refer to a block of the file."""
    assert main(['cohomology', str(corpus / 'h3.lie'), '--name', 'h5']) == 2
    assert 'h5 is not defined' in capsys.readouterr().err


def test_wrong_block_kind(corpus, capsys):
    """Test commands refuse block kinds they do not apply to."""
    assert main(['ddbar', str(corpus / 'h3.lie')]) == 2
    assert 'no block ddbar applies to' in capsys.readouterr().err


def test_missing_source(tmp_path, capsys):
    """Test an unreadable source file exits 2."""
    assert main(['check', str(tmp_path / 'missing.lie')]) == 2
    assert capsys.readouterr().err


def test_syntax_error_exit(tmp_path, capsys):
    """Test syntax errors are reported with their position."""
    source = tmp_path / 'bad.lie'
    source.write_text('lie g {\n  basis e1 e2;\n  bracket [e1 e2] = e1;\n}\n', encoding='utf-8')
    assert main(['check', str(source)]) == 2
    assert f'{source}:3:15: error:' in capsys.readouterr().err


def test_dimension_cap(corpus, capsys):
    """Test --max-dim refuses larger declarations."""
    assert main(['check', str(corpus / 'h5.lie'), '--max-dim', '4']) == 2
    capsys.readouterr()


def test_fmt(corpus, capsys):
    """Test fmt prints the canonical text."""
    path = corpus / 'ddbar.bic'
    assert main(['fmt', str(path)]) == 0
    expected = print_source(parse(path.read_text(encoding='utf-8')))
    assert capsys.readouterr().out == expected + '\n'


def test_metrics_file(corpus, tmp_path, capsys):
    """Test the metrics textfile is written after a run."""
    metrics = tmp_path / 'metrics' / 'rht.prom'
    assert main(['cohomology', str(corpus / 'h3.lie'), '--metrics-file', str(metrics)]) == 0
    text = metrics.read_text(encoding='utf-8')
    assert 'rht_operations_total{operation="cohomology",status="success"} 1.0' in text
    assert 'rht_max_matrix_dim 3.0' in text
    capsys.readouterr()


def test_invalid_log_level_env(corpus, monkeypatch, capsys):
    """Test an invalid log level from the environment is a usage error."""
    monkeypatch.setenv('RHT_LOG_LEVEL', 'LOUD')
    with pytest.raises(SystemExit):
        main(['check', str(corpus / 'h3.lie')])


def test_internal_error_during_load_exits_3(corpus, capsys):
    """Test an unexpected failure while resolving a file is an internal error."""
    with patch.object(LieAlgebra, 'from_brackets', side_effect=ValueError('broken constructor')):
        assert main(['cohomology', str(corpus / 'h3.lie')]) == 3
    assert 'unexpected error: broken constructor' in capsys.readouterr().err
