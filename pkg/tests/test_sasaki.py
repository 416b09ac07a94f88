"""Tests for basic rings, the Sasakian model and the full pipeline."""

from unittest.mock import patch

import pytest
from sympy.polys.domains import QQ_I

from rht.cohomology import LieAlgebra, betti_numbers, chevalley_eilenberg
from rht.dsl import load_file
from rht.errors import ValidationFailed
from rht.sasaki import (
    FAIL,
    PASS,
    SKIPPED,
    BasicRing,
    build_model,
    expected_heisenberg_betti,
    sasaki_pipeline,
    validate_basic_ring,
)


def _four_classes(omega):
    i = QQ_I(0, 1)
    names = ['x1', 'x2', 'x3', 'x4']
    h10 = [{'x1': 1, 'x2': i}, {'x3': 1, 'x4': i}]
    h01 = [{'x1': 1, 'x2': -i}, {'x3': 1, 'x4': -i}]
    return BasicRing.from_exterior('degenerate', 2, names, (), {(1, 0): h10, (0, 1): h01}, omega)


@pytest.mark.parametrize('n', [1, 2, 3])
def test_model_betti_matches_heisenberg(n):
    """Test the model of the Heisenberg basic ring has the Betti numbers of CE(h_(2n+1))."""
    model = build_model(BasicRing.heisenberg(n))
    betti = betti_numbers(model.algebra, range(2 * n + 2))
    assert betti == expected_heisenberg_betti(n)
    assert betti == betti_numbers(chevalley_eilenberg(LieAlgebra.heisenberg(n)))


def test_model_basis_and_differential(model_h3):
    """Test the model basis lists ring classes before y-classes and d y = omega."""
    algebra = model_h3.algebra
    assert algebra.labels(1) == ['x1', 'x2', 'y']
    assert algebra.labels(2) == ['x1*x2', 'x1*y', 'x2*y']
    assert algebra.differential(1, (0, 0, 1)) == (1, 0, 0)
    assert algebra.check_axioms() == []


def test_validation_passes(corpus):
    """Test every corpus ring passes validation."""
    definitions = load_file(corpus / 'heisenberg_rings.ring')
    for name in definitions.names():
        assert validate_basic_ring(definitions[name]).passed


def test_validation_statuses():
    """Test individual check statuses of a valid ring."""
    report = validate_basic_ring(BasicRing.heisenberg(1))
    assert report.status('omega_type_11') == PASS
    assert report.status('lefschetz_injective') == SKIPPED
    assert report.warnings == ()
    with pytest.raises(KeyError):
        report.status('unknown')


def test_degenerate_omega_rejected():
    """Test omega = x1*x2 on four classes fails Lefschetz and the top power."""
    ring = _four_classes({('x1', 'x2'): 1})
    report = validate_basic_ring(ring)
    assert report.status('lefschetz_injective') == FAIL
    assert report.status('omega_power_nonzero') == FAIL
    with pytest.raises(ValidationFailed) as excinfo:
        build_model(ring)
    assert excinfo.value.failures


def test_n_must_be_positive():
    """Test n = 0 is rejected."""
    with pytest.raises(ValidationFailed):
        build_model(BasicRing.heisenberg(0))


def test_table_ring(corpus):
    """Test a ring given by a multiplication table builds the h3 model."""
    ring = load_file(corpus / 't2_table.ring')['t2']
    assert validate_basic_ring(ring).passed
    model = build_model(ring)
    assert betti_numbers(model.algebra, range(4)) == (1, 2, 2, 1)


def test_surface_product():
    """Test the product of two tori gives the 5-dimensional Heisenberg Betti numbers."""
    model = build_model(BasicRing.surface_product([1, 1]))
    assert betti_numbers(model.algebra, range(6)) == expected_heisenberg_betti(2)
    with pytest.raises(ValidationFailed):
        BasicRing.surface_product([0])


@pytest.mark.parametrize('n', [2, 3])
def test_pipeline_one_formal(n):
    """Test Sasakian nilmanifold models are 1-formal from n = 2 on."""
    report = sasaki_pipeline(BasicRing.heisenberg(n))
    assert report.one_formal
    assert report.tower.stabilized
    assert report.v2_types_ok
    assert report.presentation is not None
    assert len(report.presentation.generators) == 2 * n
    assert report.malcev.dims == (2 * n, 2 * n + 1)


def test_pipeline_h5_details():
    """Test the h5 pipeline reports relations and Hodge data."""
    report = sasaki_pipeline(BasicRing.heisenberg(2))
    assert len(report.presentation.relations) == 5
    assert report.bigraded.v2_types == ((1, 1),)
    assert report.hodge.passed
    assert report.betti == (1, 4, 5, 5, 4, 1)


def test_pipeline_n1_not_formal():
    """Test the 3-dimensional model is not 1-formal and says why."""
    report = sasaki_pipeline(BasicRing.heisenberg(1))
    assert not report.one_formal
    assert report.presentation is None
    assert any('n >= 2' in note for note in report.notes)


def test_pipeline_validates_once():
    """Test the pipeline checks the ring once and rejects a degenerate one without a model."""
    with patch('rht.sasaki.validate_basic_ring', wraps=validate_basic_ring) as validate:
        sasaki_pipeline(BasicRing.heisenberg(1))
    assert validate.call_count == 1

    with patch('rht.sasaki.validate_basic_ring', wraps=validate_basic_ring) as validate:
        with patch('rht.sasaki.build_tower') as tower:
            with pytest.raises(ValidationFailed) as excinfo:
                sasaki_pipeline(_four_classes({('x1', 'x2'): 1}))
    assert validate.call_count == 1
    assert tower.call_count == 0
    assert 'lefschetz_injective' in [c.name for c in excinfo.value.failures]


def test_pipeline_surface_product(corpus):
    """Test the genus-2 surface times a torus gives a provisional 1-formal verdict."""
    ring = load_file(corpus / 'surfaces.ring')['sigma2_t2']
    report = sasaki_pipeline(ring, max_stage=2)
    assert report.one_formal
    assert not report.tower.stabilized
    assert report.formality.provisional
    assert any('provisional' in note for note in report.notes)
