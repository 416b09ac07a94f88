"""Tests for graded-commutative algebras and DGA morphisms."""

import random
from math import comb

import pytest
from sympy.polys.domains import QQ, QQ_I

from rht.cohomology import chevalley_eilenberg, cohomology_dga
from rht.errors import TruncationError
from rht.gca import (
    DGAMorphism,
    FreeCDGA,
    GCAElement,
    Generator,
    apply_morphism,
    check_d_squared,
    degree_slice,
    differential,
    exterior_algebra,
    multiply,
)


def _random_element(algebra: FreeCDGA, k: int, rng: random.Random) -> GCAElement:
    terms = {m: QQ(rng.randint(-3, 3)) for m in algebra.degree_slice(k)}
    element = algebra.element(terms)
    return GCAElement(element.terms, k)


def _random_cdga(rng: random.Random) -> FreeCDGA:
    """Generators of degrees 1, 1, 2, 3 with random differentials (d^2 need not vanish)."""
    gens = [Generator(0, 'a', 1), Generator(1, 'b', 1), Generator(2, 'c', 2), Generator(3, 'e', 3)]
    scratch = FreeCDGA(gens, None, 12)
    d = {g.id: _random_element(scratch, g.degree + 1, rng) for g in gens if rng.random() < 0.8}
    return FreeCDGA(gens, d, 12)


def test_koszul_signs():
    """Test odd generators anticommute and square to zero."""
    alg = exterior_algebra(['x', 'y'])
    x, y = alg.gen('x'), alg.gen('y')
    xy = alg.multiply(x, y)
    yx = alg.multiply(y, x)
    assert alg.add(xy, yx).is_zero
    assert alg.multiply(x, x).is_zero


def test_generator_element():
    """Test a generator is a single unit term and multiplies into a two-factor monomial."""
    alg = FreeCDGA([Generator(0, 'x', 1), Generator(1, 'y', 1)], None, 2)
    x, y = alg.gen('x'), alg.gen('y')
    assert x.terms == ((((0, 1),), QQ(1)),)
    assert x.degree == 1
    assert multiply(alg, x, y).terms == ((((0, 1), (1, 1)), QQ(1)),)
    assert multiply(alg, y, x).terms == ((((0, 1), (1, 1)), QQ(-1)),)


def test_even_generators_commute():
    """Test even generators commute and have nonzero powers."""
    alg = FreeCDGA([Generator(0, 'z', 2), Generator(1, 'w', 2)], None, 8)
    z, w = alg.gen('z'), alg.gen('w')
    assert alg.multiply(z, w).terms == alg.multiply(w, z).terms
    assert not alg.multiply(z, z).is_zero


def test_truncation():
    """Test products beyond the truncation degree raise."""
    alg = FreeCDGA([Generator(0, 'z', 2)], None, 4)
    z = alg.gen('z')
    zz = alg.multiply(z, z)
    with pytest.raises(TruncationError):
        alg.multiply(zz, z)


def test_exterior_dimensions():
    """Test the exterior algebra on m classes has binomial dimensions."""
    alg = exterior_algebra([f"x{i}" for i in range(5)])
    assert [alg.dim(k) for k in range(6)] == [comb(5, k) for k in range(6)]


@pytest.mark.parametrize('seed', range(100))
def test_graded_commutativity_and_associativity(seed):
    """Test ab = (-1)^(kl) ba and (ab)c = a(bc) on random elements."""
    rng = random.Random(seed)
    alg = _random_cdga(rng)
    k, l, m = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 3)
    a, b, c = (_random_element(alg, deg, rng) for deg in (k, l, m))
    ab, ba = alg.multiply(a, b), alg.multiply(b, a)
    expected = ab if (k * l) % 2 == 0 else alg.scale(QQ(-1), ab)
    assert ba.terms == expected.terms
    assert alg.multiply(ab, c).terms == alg.multiply(a, alg.multiply(b, c)).terms


@pytest.mark.parametrize('seed', range(100))
def test_leibniz_rule(seed):
    """Test d(ab) = da*b + (-1)^|a| a*db on random elements."""
    rng = random.Random(500 + seed)
    alg = _random_cdga(rng)
    k, l = rng.randint(0, 3), rng.randint(1, 3)
    a, b = _random_element(alg, k, rng), _random_element(alg, l, rng)
    lhs = differential(alg, multiply(alg, a, b))
    first = alg.multiply(alg.differential_of(a), b)
    second = alg.multiply(a, alg.differential_of(b))
    rhs = alg.add(first, alg.scale(QQ(-1) if k % 2 else QQ(1), second))
    assert lhs.terms == rhs.terms


def test_d_matrix_squares_to_zero_on_ce(h5):
    """Test the CE differential matrices compose to zero."""
    ce = chevalley_eilenberg(h5)
    for k in range(ce.max_degree):
        assert ce.d_matrix(k + 1).matmul(ce.d_matrix(k)).is_zero()
    assert check_d_squared(ce).passed


def test_check_d_squared_failure():
    """Test a differential with d^2 != 0 is reported on the offending generator."""
    gens = [Generator(0, 'x', 1), Generator(1, 'y', 1), Generator(2, 'z', 1), Generator(3, 'u', 2)]
    scratch = FreeCDGA(gens, None, 6)
    d = {
        1: scratch.multiply(scratch.gen('x'), scratch.gen('z')),
        2: scratch.gen('u'),
    }
    report = FreeCDGA(gens, d, 6).check_d_squared()
    assert not report.passed
    assert report.violations[0][0] == 'y'


def test_minimality(h3):
    """Test minimality predicates."""
    ce = chevalley_eilenberg(h3)
    assert ce.is_minimal()
    assert ce.is_one_minimal()
    gens = [Generator(0, 'x', 1), Generator(1, 'y', 2)]
    scratch = FreeCDGA(gens, None, 4)
    linear = FreeCDGA(gens, {0: scratch.gen('y')}, 4)
    assert not linear.is_minimal()


def test_degree_slice_labels(ce_h3):
    """Test degree slices and labels of an exterior algebra."""
    assert degree_slice(ce_h3, 2) == ce_h3.degree_slice(2)
    assert ce_h3.labels(1) == ['x1', 'x2', 'x3']
    assert ce_h3.labels(2) == ['x1*x2', 'x1*x3', 'x2*x3']


def test_vector_roundtrip(ce_h5):
    """Test elements and coordinate vectors convert both ways."""
    x1, x2 = ce_h5.gen('x1'), ce_h5.gen('x2')
    element = ce_h5.multiply(x1, x2)
    vec = ce_h5.vector_of(element, 2)
    assert ce_h5.element_of(vec, 2).terms == element.terms


def test_complexify(ce_h3):
    """Test complexification keeps the basis and changes the field."""
    cplx = ce_h3.complexify()
    assert cplx.domain == QQ_I
    assert [cplx.dim(k) for k in range(4)] == [ce_h3.dim(k) for k in range(4)]


def test_identity_morphism(ce_h3):
    """Test the identity is a multiplicative chain map."""
    phi = DGAMorphism.identity(ce_h3)
    assert phi.check_chain_map() == []
    assert phi.check_multiplicative(3) == []


def test_apply_morphism(ce_h3):
    """Test images of elements split by degree."""
    phi = DGAMorphism.identity(ce_h3)
    x1 = ce_h3.gen('x1')
    element = ce_h3.add(ce_h3.one(), x1)
    images = apply_morphism(phi, element)
    assert sorted(images) == [0, 1]
    assert images[1] == ce_h3.vector_of(x1, 1)


def test_morphism_not_chain_map(ce_h3):
    """Test a generator map that ignores d fails the chain-map check."""
    target = exterior_algebra(['x1', 'x2', 'x3'])
    images = {g.id: target.vector_of(target.gen(g.name), 1) for g in ce_h3.generators}
    phi = DGAMorphism(ce_h3, target, images=images)
    assert 1 in phi.check_chain_map()


def test_fdga_axioms_of_cohomology_ring(ce_h5):
    """Test the cohomology ring passes the algebra axioms."""
    ring = cohomology_dga(ce_h5)
    assert ring.check_axioms() == []
    assert ring.check_d_squared().passed
