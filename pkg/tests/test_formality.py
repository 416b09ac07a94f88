"""Tests for 1-formality, Massey products and quadratic presentations."""

import pytest
from sympy.polys.domains import QQ

from rht.cohomology import LieAlgebra, chevalley_eilenberg
from rht.errors import NotDefined, NotNilpotent, NotOneFormal, ValidationFailed
from rht.formality import (
    heisenberg_check,
    massey_scan,
    massey_triple,
    named_classes,
    one_formal,
    quadratic_presentation,
    sasakian_obstruction,
    weight_count_check,
    weight_profile,
)
from rht.minimal import build_tower


@pytest.mark.parametrize(
    'n, h2_dims, formal',
    [
        (1, (1, 0, 2), False),
        (2, (6, 5, 5), True),
        (3, (15, 14, 14), True),
    ],
)
def test_heisenberg_one_formality(n, h2_dims, formal):
    """Test h3 is not 1-formal while h5 and h7 are."""
    tower = build_tower(chevalley_eilenberg(LieAlgebra.heisenberg(n)), 5)
    report = one_formal(tower)
    assert report.h2_dims == h2_dims
    assert report.verdict is formal
    assert not report.provisional
    assert (report.witness is None) is formal


@pytest.mark.parametrize(
    'g',
    [
        LieAlgebra.heisenberg(1),
        LieAlgebra.heisenberg(2),
        LieAlgebra.heisenberg(3),
        LieAlgebra.filiform(4),
        LieAlgebra.filiform(5),
        LieAlgebra.filiform(6),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.abelian(1)),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.heisenberg(1)),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(2), LieAlgebra.abelian(1)),
    ],
    ids=lambda g: g.name,
)
def test_one_formal_iff_massey_triples_vanish(g):
    """Test the tower verdict agrees with the vanishing of every defined triple Massey product."""
    ce = chevalley_eilenberg(g)
    report = one_formal(build_tower(ce, 6))
    assert not report.provisional
    nonzero = any(value.nonzero_mod_indeterminacy for _, value in massey_scan(ce))
    assert report.verdict is (not nonzero)


def test_provisional_verdict(ce_h5):
    """Test a tower that has not stabilized gives a provisional verdict."""
    report = one_formal(build_tower(ce_h5, 1))
    assert report.provisional
    assert report.verdict


def test_massey_h3_nonzero(ce_h3):
    """Test <x1, x1, x2> is nonzero modulo indeterminacy on h3."""
    a, b, c = named_classes(ce_h3, ['x1', 'x1', 'x2'])
    value = massey_triple(ce_h3, a, b, c)
    assert value.nonzero_mod_indeterminacy
    assert value.representative.degree == 2
    assert value.indeterminacy.dim == 0


def test_massey_h5_vanishes(ce_h5):
    """Test every defined triple Massey product on h5 vanishes."""
    values = massey_scan(ce_h5)
    assert values
    assert not any(v.nonzero_mod_indeterminacy for _, v in values)


def test_massey_survives_products(h3):
    """Test h3 + R^2 keeps a nonzero triple Massey product."""
    ce = chevalley_eilenberg(LieAlgebra.direct_sum(h3, LieAlgebra.abelian(2)))
    assert any(v.nonzero_mod_indeterminacy for _, v in massey_scan(ce))


def test_massey_not_defined():
    """Test a nonzero cup product makes the triple undefined."""
    ce = chevalley_eilenberg(LieAlgebra.abelian(2))
    a, b, c = named_classes(ce, ['x1', 'x2', 'x1'])
    with pytest.raises(NotDefined):
        massey_triple(ce, a, b, c)


def test_named_classes_unknown(ce_h3):
    """Test unknown basis names are rejected."""
    with pytest.raises(ValidationFailed):
        named_classes(ce_h3, ['x9'])


@pytest.mark.parametrize(
    'g, generators, relations',
    [
        (LieAlgebra.heisenberg(2), 4, 5),
        (LieAlgebra.heisenberg(3), 6, 14),
        (LieAlgebra.abelian(3), 3, 3),
    ],
)
def test_quadratic_presentation(g, generators, relations):
    """Test generator and relation counts of quadratic presentations."""
    presentation = quadratic_presentation(build_tower(chevalley_eilenberg(g), 5))
    assert len(presentation.generators) == generators
    assert len(presentation.relations) == relations


def test_presentation_needs_formality(ce_h3, ce_h5):
    """Test presentations are refused for non-formal or unstable towers."""
    with pytest.raises(NotOneFormal):
        quadratic_presentation(build_tower(ce_h3, 5))
    with pytest.raises(NotOneFormal):
        quadratic_presentation(build_tower(ce_h5, 1))


@pytest.mark.parametrize(
    'g, expected',
    [
        (LieAlgebra.heisenberg(1), True),
        (LieAlgebra.heisenberg(2), True),
        (LieAlgebra.heisenberg(3), True),
        (LieAlgebra.abelian(5), False),
        (LieAlgebra.filiform(5), False),
        (LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.abelian(2)), False),
    ],
)
def test_heisenberg_check(g, expected):
    """Test recognition of Heisenberg algebras."""
    assert heisenberg_check(g) is expected


def test_heisenberg_check_not_nilpotent():
    """Test a solvable non-nilpotent algebra is rejected."""
    g = LieAlgebra.from_brackets('aff', ['e1', 'e2'], {(0, 1): {1: QQ(1)}})
    with pytest.raises(NotNilpotent):
        heisenberg_check(g)


def test_sasakian_obstruction():
    """Test both necessary conditions for Sasakian nilmanifolds."""
    assert sasakian_obstruction(LieAlgebra.heisenberg(2)).possible
    f5 = sasakian_obstruction(LieAlgebra.filiform(5))
    assert not f5.b1_matches
    assert not f5.heisenberg
    abelian = sasakian_obstruction(LieAlgebra.abelian(5))
    assert abelian.b1 == 5
    assert not abelian.possible
    with pytest.raises(ValidationFailed):
        sasakian_obstruction(LieAlgebra.abelian(4))


def test_weight_count_check():
    """Test the weight count on H^1 bidegree dimensions."""
    dims = {(1, 0): 2, (0, 1): 2, (1, 1): 1}
    assert weight_profile(dims) == {1: 4, 2: 1}
    assert weight_count_check(dims, 2)
    assert not weight_count_check({(1, 0): 5}, 2)
    assert not weight_count_check({(0, 0): 1, (1, 0): 2, (0, 1): 2}, 2)
