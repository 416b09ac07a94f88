"""Tests for report models and rendering."""

import json

import jsonschema
import pytest

from rht.reports import (
    EXIT_ASSERTION_FAILED,
    EXIT_OK,
    Report,
    Result,
    bidegree_dims,
    bidegree_list,
    degree_dims,
    exit_code,
    load_schema,
    render_text,
)


def _report(*verdicts):
    results = [Result(name=f"g{i}", kind='lie', verdict=v) for i, v in enumerate(verdicts)]
    return Report(command='formal1', source='g.lie', results=results)


def test_extra_fields_at_top_level():
    """Test command fields sit next to name, kind and verdict in JSON."""
    result = Result(name='h5', kind='lie', verdict=True, one_formal=True, h2_dims=[6, 5, 5])
    report = Report(command='formal1', source='h5.lie', results=[result])
    payload = json.loads(report.to_json())
    assert payload['results'][0] == {
        'name': 'h5',
        'kind': 'lie',
        'verdict': True,
        'one_formal': True,
        'h2_dims': [6, 5, 5],
    }
    assert result.fields == {'one_formal': True, 'h2_dims': [6, 5, 5]}
    jsonschema.validate(payload, load_schema())


def test_schema_rejects_bad_reports():
    """Test the schema rejects unknown commands and missing verdicts."""
    schema = load_schema()
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({'command': 'fly', 'source': 'x', 'results': []}, schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({'command': 'check', 'source': 'x', 'results': [{'name': 'g', 'kind': 'lie'}]}, schema)


@pytest.mark.parametrize(
    'verdicts, assert_mode, expected',
    [
        ((True, None), True, EXIT_OK),
        ((True, False), False, EXIT_OK),
        ((True, False), True, EXIT_ASSERTION_FAILED),
        ((), True, EXIT_OK),
    ],
)
def test_exit_code(verdicts, assert_mode, expected):
    """Test only false verdicts under --assert fail."""
    assert exit_code(_report(*verdicts), assert_mode) == expected


def test_value_helpers():
    """Test bidegree and degree maps become string-keyed dicts."""
    assert bidegree_dims({(1, 1): 3, (0, 2): 1, (2, 2): 0}) == {'0,2': 1, '1,1': 3}
    assert bidegree_dims({(2, 2): 0}, skip_zero=False) == {'2,2': 0}
    assert degree_dims({2: 1, 0: 1}) == {'0': 1, '2': 1}
    assert bidegree_list([(1, 1)]) == [[1, 1]]


def test_render_text():
    """Test the text rendering of a report."""
    result = Result(
        name='square',
        kind='bicomplex',
        verdict=False,
        failing_degrees=[1],
        dims={'1,0': 1},
        checks=[{'name': 'lefschetz', 'status': 'PASS'}],
        witness=None,
    )
    text = render_text(Report(command='ddbar', source='ddbar.bic', results=[result]))
    assert text.splitlines() == [
        'ddbar ddbar.bic',
        'square (bicomplex): false',
        '  failing-degrees: (1)',
        '  dims: 1,0: 1',
        '  checks:',
        '    name: lefschetz, status: PASS',
        '  witness: -',
    ]


def test_render_text_without_verdict():
    """Test results without a verdict have a bare header."""
    result = Result(name='h3', kind='lie', betti=[1, 2, 2, 1])
    text = render_text(Report(command='cohomology', source='h3.lie', results=[result]))
    assert text.splitlines()[1] == 'h3 (lie)'
