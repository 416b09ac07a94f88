"""Tests for dual Lie towers and nilpotency invariants."""

import pytest
from sympy.polys.domains import QQ

from rht.cohomology import LieAlgebra, chevalley_eilenberg
from rht.malcev import (
    check_surjections,
    dualize,
    is_nilpotent,
    isomorphism_invariants,
    lower_central_series,
    malcev_summary,
    nilpotency_class,
)
from rht.minimal import build_tower


def test_lower_central_series():
    """Test lower central series dimensions."""
    assert tuple(s.dim for s in lower_central_series(LieAlgebra.filiform(5))) == (5, 3, 2, 1, 0)
    assert tuple(s.dim for s in lower_central_series(LieAlgebra.heisenberg(1))) == (3, 1, 0)
    assert tuple(s.dim for s in lower_central_series(LieAlgebra.abelian(3))) == (3, 0)


def test_nilpotency_class():
    """Test nilpotency classes, with -1 for non-nilpotent algebras."""
    assert nilpotency_class(LieAlgebra.abelian(4)) == 1
    assert nilpotency_class(LieAlgebra.heisenberg(2)) == 2
    assert nilpotency_class(LieAlgebra.filiform(5)) == 4
    solvable = LieAlgebra.from_brackets('aff', ['e1', 'e2'], {(0, 1): {1: QQ(1)}})
    assert not is_nilpotent(solvable)
    assert nilpotency_class(solvable) == -1


@pytest.mark.parametrize(
    'g, dims',
    [
        (LieAlgebra.heisenberg(1), (2, 3)),
        (LieAlgebra.heisenberg(2), (4, 5)),
        (LieAlgebra.filiform(5), (2, 3, 4, 5)),
        (LieAlgebra.abelian(3), (3,)),
    ],
)
def test_dual_tower_recovers_algebra(g, dims):
    """Test the dual of the 1-minimal tower of CE(g) recovers g up to isomorphism."""
    lt = dualize(build_tower(chevalley_eilenberg(g), 6))
    assert lt.dims == dims
    assert check_surjections(lt) == []
    summary = malcev_summary(lt)
    assert summary.stabilized
    assert summary.nilpotency_class == nilpotency_class(g)
    assert isomorphism_invariants(summary.limit) == isomorphism_invariants(g)


def test_unstabilized_summary(ce_h3):
    """Test a cut tower has no limit algebra."""
    summary = malcev_summary(dualize(build_tower(ce_h3, 1)))
    assert summary.dims == (2,)
    assert summary.limit is None
    assert summary.nilpotency_class == 1


def test_dual_names(ce_h3):
    """Test dual basis names follow tower generator names."""
    lt = dualize(build_tower(ce_h3, 5))
    assert lt.levels[-1].basis == ('X1_1', 'X1_2', 'X2_1')


def test_invariants_distinguish():
    """Test invariants separate h5 from h3 + R^2."""
    h5 = isomorphism_invariants(LieAlgebra.heisenberg(2))
    other = isomorphism_invariants(LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.abelian(2)))
    assert h5.lower_central_dims == other.lower_central_dims
    assert h5.center_dim == 1
    assert other.center_dim == 3
    assert h5 != other
