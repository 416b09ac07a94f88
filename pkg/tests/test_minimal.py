"""Tests for 1-minimal model towers."""

import pytest
from sympy.polys.domains import QQ

from rht.cohomology import LieAlgebra, betti_numbers, chevalley_eilenberg, cohomology
from rht.errors import DimensionLimitExceeded, NonConnected
from rht.gca import FDGA
from rht.linalg import Subspace
from rht.minimal import build_tower, stage1, tower_as_cdga, tower_morphism, verify_tower


@pytest.mark.parametrize(
    'g, counts',
    [
        (LieAlgebra.heisenberg(1), (2, 1)),
        (LieAlgebra.heisenberg(2), (4, 1)),
        (LieAlgebra.heisenberg(3), (6, 1)),
        (LieAlgebra.abelian(3), (3,)),
        (LieAlgebra.filiform(5), (2, 1, 1, 1)),
    ],
)
def test_tower_generator_counts(g, counts):
    """Test towers over nilpotent CE complexes stabilize with the expected stage sizes."""
    tower = build_tower(chevalley_eilenberg(g), 6)
    assert tower.generator_counts == counts
    assert tower.stabilized
    assert tower.b1 == counts[0]
    assert verify_tower(tower) == []


def test_stage_names(ce_h3):
    """Test generators are named by stage and position."""
    tower = build_tower(ce_h3, 5)
    names = [g.name for s in tower.stages for g in s.generators]
    assert names == ['v1_1', 'v1_2', 'v2_1']
    assert tower.stages[1].h2_dim == 1


def test_stage_bound(ce_h3):
    """Test a tower cut at one stage is reported as not stabilized."""
    tower = build_tower(ce_h3, 1)
    assert tower.generator_counts == (2,)
    assert not tower.stabilized


def test_generator_cap(ce_h5):
    """Test the generator cap raises before the tower grows past it."""
    with pytest.raises(DimensionLimitExceeded):
        build_tower(ce_h5, 5, max_generators=3)


def test_invalid_stage_bound(ce_h3):
    """Test max_stage must be positive."""
    with pytest.raises(ValueError):
        build_tower(ce_h3, 0)


def test_tower_model_maps_h2_injectively(ce_h5):
    """Test the stabilized model has the target's H^1 and injects on H^2."""
    tower = build_tower(ce_h5, 5)
    model = tower_as_cdga(tower)
    assert betti_numbers(model, [0, 1]) == betti_numbers(ce_h5, [0, 1])
    phi = tower_morphism(tower)
    assert phi.check_chain_map(1) == []
    h2_model, h2_target = cohomology(model, 2), cohomology(ce_h5, 2)
    images = [h2_target.project(phi.apply(2, r)) for r in h2_model.representatives]
    assert Subspace.span(images, h2_target.betti, QQ).dim == h2_model.betti


def test_stage_out_of_range(ce_h3):
    """Test asking for an unbuilt stage raises."""
    tower = build_tower(ce_h3, 5)
    with pytest.raises(ValueError):
        tower_as_cdga(tower, 3)


def test_non_connected_target():
    """Test a target with H^0 of dimension two is rejected."""
    ring = FDGA({0: ['one', 'e'], 1: ['a']}, {(0, 1, 1, 0): [(0, QQ(1))]}, {}, QQ, name='disconnected')
    with pytest.raises(NonConnected):
        stage1(ring)
