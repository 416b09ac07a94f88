"""Tests for exact linear algebra."""

import random

import pytest
from sympy.polys.domains import QQ, QQ_I

from rht.linalg import (
    SparseMatrix,
    Subspace,
    column_space,
    kernel_basis,
    quotient,
    rank,
    solve,
    subquotient,
    unit_vector,
)


def _random_matrix(rng: random.Random, domain=QQ) -> SparseMatrix:
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    density = rng.random()

    def entry():
        if rng.random() > density:
            return domain.zero
        value = QQ(rng.randint(-4, 4), rng.randint(1, 3))
        if domain == QQ_I:
            return QQ_I(value, QQ(rng.randint(-2, 2)))
        return value

    return SparseMatrix.from_rows([[entry() for _ in range(cols)] for _ in range(rows)], domain, cols=cols)


def test_rank_of_identity():
    """Test rank of the identity."""
    assert rank(SparseMatrix.identity(4)) == 4
    assert rank(SparseMatrix.zeros(3, 5)) == 0


def test_kernel_of_simple_matrix():
    """Test kernel basis of a rank-one matrix."""
    m = SparseMatrix.from_rows([[QQ(1), QQ(2), QQ(3)]], QQ)
    kernel = kernel_basis(m)
    assert kernel.dim == 2
    for v in kernel.basis:
        assert not any(m.apply(v))


@pytest.mark.parametrize('seed', range(100))
def test_rank_nullity(seed):
    """Test rank plus nullity equals the number of columns."""
    rng = random.Random(seed)
    domain = QQ_I if seed % 3 == 0 else QQ
    m = _random_matrix(rng, domain)
    kernel = kernel_basis(m)
    assert rank(m) + kernel.dim == m.cols
    assert column_space(m).dim == rank(m)
    for v in kernel.basis:
        assert not any(m.apply(v))


@pytest.mark.parametrize('seed', range(100))
def test_solve_consistent_systems(seed):
    """Test solve recovers a solution for a right-hand side in the image."""
    rng = random.Random(1000 + seed)
    m = _random_matrix(rng)
    x = tuple(QQ(rng.randint(-3, 3)) for _ in range(m.cols))
    b = m.apply(x)
    found = solve(m, b)
    assert found is not None
    assert m.apply(found) == b


def test_solve_inconsistent():
    """Test solve returns None off the image."""
    m = SparseMatrix.from_rows([[QQ(1), QQ(0)], [QQ(0), QQ(0)]], QQ)
    assert solve(m, (QQ(0), QQ(1))) is None


def test_subspace_operations():
    """Test span, membership, sum and intersection."""
    e = [unit_vector(3, i) for i in range(3)]
    xy = Subspace.span([e[0], e[1]], 3)
    yz = Subspace.span([e[1], e[2]], 3)
    assert xy.contains((QQ(2), QQ(-1), QQ(0)))
    assert not xy.contains(e[2])
    assert xy.sum(yz) == Subspace.full(3)
    assert xy.intersection(yz) == Subspace.span([e[1]], 3)
    assert Subspace.span([e[1]], 3).is_subspace_of(xy)


def test_subspace_canonical_form():
    """Test equal spans compare equal regardless of the spanning set."""
    a = Subspace.span([(QQ(1), QQ(1)), (QQ(1), QQ(-1))], 2)
    assert a == Subspace.full(2)
    b = Subspace.span([(QQ(2), QQ(4))], 2)
    c = Subspace.span([(QQ(-1), QQ(-2))], 2)
    assert b == c


def test_coordinates_roundtrip():
    """Test coordinates and combination are inverse on members."""
    s = Subspace.span([(QQ(1), QQ(2), QQ(0)), (QQ(0), QQ(1), QQ(1))], 3)
    v = (QQ(2), QQ(3), QQ(-1))
    assert s.combination(s.coordinates(v)) == v
    with pytest.raises(ValueError):
        s.coordinates((QQ(0), QQ(0), QQ(1)))


def test_annihilator_dimension():
    """Test the annihilator has complementary dimension."""
    s = Subspace.span([(QQ(1), QQ(1), QQ(1), QQ(0))], 4)
    assert s.annihilator().dim == 3
    assert Subspace.zero(4).annihilator() == Subspace.full(4)


def test_conjugate_subspace():
    """Test conjugation of a complex line."""
    i = QQ_I(0, 1)
    line = Subspace.span([(QQ_I.one, i)], 2, QQ_I)
    assert line.conjugate() == Subspace.span([(QQ_I.one, -i)], 2, QQ_I)
    assert line.conjugate() != line


def test_quotient_projection():
    """Test quotient representatives and projection."""
    sub = Subspace.span([(QQ(1), QQ(1), QQ(0))], 3)
    q = quotient(3, sub)
    assert q.dim == 2
    assert not any(q.project((QQ(3), QQ(3), QQ(0))))
    for r in q.representatives:
        assert q.lift(q.project(r)) == r


def test_subquotient():
    """Test a subquotient of nested subspaces."""
    outer = Subspace.span([unit_vector(3, 0), unit_vector(3, 1)], 3)
    inner = Subspace.span([unit_vector(3, 0)], 3)
    sq = subquotient(outer, inner)
    assert sq.dim == 1
    assert sq.project((QQ(5), QQ(2), QQ(0))) == (QQ(2),)
    with pytest.raises(ValueError):
        subquotient(inner.sum(Subspace.span([unit_vector(3, 2)], 3)), outer)


def test_matmul_and_stacks():
    """Test products and stacking shapes."""
    a = SparseMatrix.from_rows([[QQ(1), QQ(2)], [QQ(0), QQ(1)]], QQ)
    b = SparseMatrix.identity(2)
    assert a.matmul(b).dok() == a.dok()
    assert a.hstack(b).shape == (2, 4)
    assert a.vstack(b).shape == (4, 2)
