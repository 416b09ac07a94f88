"""Tests for Lie algebras, the Chevalley-Eilenberg complex and cohomology."""

import itertools
import random

import pytest
from sympy.polys.domains import QQ

from rht.cohomology import (
    LieAlgebra,
    betti_numbers,
    chevalley_eilenberg,
    cohomology,
    cohomology_dga,
    cup_product,
    element_class,
    euler_characteristic,
    is_abelian_betti,
    poincare_check,
    unit_class,
)
from rht.errors import JacobiViolation, NonConnected, NotACocycle
from rht.gca import FDGA


def _random_lie(rng: random.Random, m: int) -> LieAlgebra:
    constants = []
    for i, j in itertools.combinations(range(m), 2):
        for k in range(m):
            if rng.random() < 0.15:
                constants.append((i, j, k, QQ(rng.choice([-2, -1, 1, 2]))))
    return LieAlgebra(f"random{m}", tuple(f"e{i}" for i in range(1, m + 1)), tuple(constants))


@pytest.mark.parametrize(
    'n, expected',
    [
        (1, (1, 2, 2, 1)),
        (2, (1, 4, 5, 5, 4, 1)),
        (3, (1, 6, 14, 14, 14, 14, 6, 1)),
    ],
)
def test_heisenberg_betti(n, expected):
    """Test Betti numbers of the Heisenberg algebras."""
    ce = chevalley_eilenberg(LieAlgebra.heisenberg(n))
    assert betti_numbers(ce) == expected
    assert euler_characteristic(ce) == 0
    assert poincare_check(ce, 2 * n + 1)


def test_abelian_betti():
    """Test the abelian algebra has binomial Betti numbers."""
    ce = chevalley_eilenberg(LieAlgebra.abelian(4))
    assert betti_numbers(ce) == (1, 4, 6, 4, 1)
    assert is_abelian_betti(ce, 4)


def test_filiform_betti():
    """Test b1 and b2 of the filiform algebra f5."""
    ce = chevalley_eilenberg(LieAlgebra.filiform(5))
    betti = betti_numbers(ce)
    assert betti[1] == 2
    assert betti[2] == 3
    assert euler_characteristic(ce) == 0
    assert not is_abelian_betti(ce, 5)


def test_ce_differential_signs(ce_h3):
    """Test d x3 = -x1*x2 for [e1, e2] = e3."""
    dx3 = ce_h3.differential_of(ce_h3.gen('x3'))
    product = ce_h3.multiply(ce_h3.gen('x1'), ce_h3.gen('x2'))
    assert dx3.terms == ce_h3.scale(QQ(-1), product).terms


def test_jacobi_violation_raised():
    """Test a bracket that fails Jacobi is rejected with the offending triple."""
    g = LieAlgebra.from_brackets('bad', ['e1', 'e2', 'e3'], {(0, 1): {2: QQ(1)}, (1, 2): {1: QQ(1)}})
    assert g.jacobi_failures() == [('e1', 'e2', 'e3')]
    with pytest.raises(JacobiViolation) as excinfo:
        chevalley_eilenberg(g)
    assert excinfo.value.exit_code == 2


@pytest.mark.parametrize('seed', range(100))
def test_d_squared_iff_jacobi(seed):
    """Test d^2 = 0 on the CE complex exactly when Jacobi holds."""
    rng = random.Random(seed)
    g = _random_lie(rng, rng.randint(3, 5))
    if g.jacobi_failures():
        with pytest.raises(JacobiViolation):
            chevalley_eilenberg(g)
    else:
        ce = chevalley_eilenberg(g)
        assert ce.check_d_squared().passed
        assert cohomology(ce, 0).betti == 1


def test_from_brackets_antisymmetry():
    """Test reversed brackets flip sign and [e, e] is rejected."""
    g = LieAlgebra.from_brackets('h3', ['e1', 'e2', 'e3'], {(1, 0): {2: QQ(1)}})
    assert g.bracket_basis(0, 1) == (QQ(0), QQ(0), QQ(-1))
    with pytest.raises(ValueError):
        LieAlgebra.from_brackets('bad', ['e1', 'e2'], {(0, 0): {1: QQ(1)}})


def test_center_and_derived(h5):
    """Test center and derived algebra of h5 are the last basis line."""
    assert h5.center().dim == 1
    assert h5.derived_algebra().dim == 1


def test_direct_sum(h3):
    """Test direct sums add dimensions and multiply Poincare polynomials."""
    g = LieAlgebra.direct_sum(h3, LieAlgebra.abelian(2))
    assert g.dim == 5
    assert betti_numbers(chevalley_eilenberg(g)) == (1, 4, 7, 7, 4, 1)


def test_not_a_cocycle(ce_h3):
    """Test projecting a non-closed vector raises."""
    group = cohomology(ce_h3, 1)
    x3 = ce_h3.vector_of(ce_h3.gen('x3'), 1)
    with pytest.raises(NotACocycle):
        group.project(x3)


def test_exact_classes_vanish(ce_h3):
    """Test x1*x2 is exact in the CE complex of h3."""
    x1x2 = ce_h3.multiply(ce_h3.gen('x1'), ce_h3.gen('x2'))
    assert element_class(ce_h3, x1x2).is_zero


def test_cup_product(ce_h3):
    """Test x1 * x2 vanishes in cohomology while x1 * x3 does not."""
    h1 = cohomology(ce_h3, 1)
    a, b = h1.basis
    assert cup_product(a, b).is_zero
    x1 = element_class(ce_h3, ce_h3.gen('x1'))
    x2x3 = element_class(ce_h3, ce_h3.multiply(ce_h3.gen('x2'), ce_h3.gen('x3')))
    assert not cup_product(x1, x2x3).is_zero


def _shift_by_coboundary(dga, k, rep, rng):
    shift = dga.differential(k - 1, [QQ(rng.randint(-3, 3)) for _ in range(dga.dim(k - 1))])
    return tuple(a + b for a, b in zip(rep, shift))


@pytest.mark.parametrize('seed', range(100))
def test_cup_product_independent_of_representatives(seed):
    """Test cup products do not change when representatives move by coboundaries."""
    rng = random.Random(seed)
    h3 = LieAlgebra.heisenberg(1)
    g = rng.choice([h3, LieAlgebra.heisenberg(2), LieAlgebra.filiform(5), LieAlgebra.direct_sum(h3, h3)])
    dga = chevalley_eilenberg(g)
    p = rng.randint(1, 2)
    q = rng.randint(1, g.dim - p)
    classes = []
    for k in (p, q):
        group = cohomology(dga, k)
        rep = group.lift([QQ(rng.randint(-2, 2)) for _ in range(group.betti)])
        classes.append((group.class_of(rep), group.class_of(_shift_by_coboundary(dga, k, rep, rng))))
    (a, a_shifted), (b, b_shifted) = classes
    assert a_shifted.coordinates == a.coordinates
    assert cup_product(a_shifted, b_shifted).coordinates == cup_product(a, b).coordinates


@pytest.mark.parametrize(
    'g',
    [
        LieAlgebra.heisenberg(1),
        LieAlgebra.heisenberg(2),
        LieAlgebra.heisenberg(3),
        LieAlgebra.abelian(3),
        LieAlgebra.filiform(4),
        LieAlgebra.filiform(5),
        LieAlgebra.filiform(6),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.abelian(1)),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(1), LieAlgebra.heisenberg(1)),
        LieAlgebra.direct_sum(LieAlgebra.heisenberg(2), LieAlgebra.abelian(1)),
    ],
    ids=lambda g: g.name,
)
def test_nilpotent_duality_and_euler(g):
    """Test nilpotent CE cohomology satisfies Poincare duality and has zero Euler characteristic."""
    dga = chevalley_eilenberg(g)
    assert poincare_check(dga, g.dim)
    assert euler_characteristic(dga) == 0


def test_cohomology_cached_on_algebra(ce_h3):
    """Test cohomology groups are cached on each algebra."""
    group = cohomology(ce_h3, 2)
    assert cohomology(ce_h3, 2) is group
    assert ce_h3.cohomology_cache[2] is group
    other = chevalley_eilenberg(LieAlgebra.heisenberg(1))
    assert cohomology(other, 2) is not group
    assert cohomology(other, 2).betti == group.betti


def test_unit_class(ce_h5):
    """Test the unit spans H^0."""
    assert not unit_class(ce_h5).is_zero


def test_cohomology_dga(ce_h5):
    """Test the cohomology ring has the Betti numbers as dimensions."""
    ring = cohomology_dga(ce_h5)
    assert [ring.dim(k) for k in range(6)] == [1, 4, 5, 5, 4, 1]
    assert ring.labels(1) == ['h1_1', 'h1_2', 'h1_3', 'h1_4']


def test_non_connected():
    """Test a ring with two-dimensional H^0 is rejected."""
    ring = FDGA({0: ['one', 'e']}, {}, {}, QQ, name='disconnected')
    with pytest.raises(NonConnected):
        cohomology_dga(ring, 0)
