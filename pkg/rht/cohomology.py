"""Lie algebras, Chevalley-Eilenberg complexes and DGA cohomology.

Cohomology is computed one degree at a time. ``Z^k`` is the kernel of
``d_k`` (an RREF :class:`~rht.linalg.Subspace`), ``B^k`` the column space of
``d_(k-1)``; classes live in ``Z``-coordinates and the quotient basis is read
off the RREF pivots, so class coordinates are canonical.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from rht.errors import InternalInvariantViolation, JacobiViolation, NonConnected, NotACocycle
from rht.gca import FDGA, DGAlgebra, FreeCDGA, GCAElement, Generator
from rht.linalg import (
    Quotient,
    SparseMatrix,
    Subspace,
    Vector,
    column_space,
    is_zero,
    kernel_basis,
    linear_combination,
    quotient,
    unit_vector,
    zero_vector,
)

logger = logging.getLogger(__name__)

StructureConstants = Tuple[Tuple[int, int, int, Any], ...]


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra by structure constants.

    ``constants`` holds ``(i, j, k, c)`` with ``i < j`` meaning
    ``[e_i, e_j] = ... + c * e_k``; antisymmetry is implied.
    """

    name: str
    basis: Tuple[str, ...]
    constants: StructureConstants = ()
    domain: Any = field(default=QQ)

    def __post_init__(self):
        m = len(self.basis)
        if len(set(self.basis)) != m:
            raise ValueError(f"duplicate basis names in {self.name}")
        for i, j, k, c in self.constants:
            if not (0 <= i < j < m and 0 <= k < m):
                raise ValueError(f"structure constant ({i}, {j}, {k}) out of range for {self.name}")

    @classmethod
    def from_brackets(
        cls, name: str, basis: Sequence[str], brackets: Mapping[Tuple[int, int], Mapping[int, Any]], domain: Any = QQ
    ) -> 'LieAlgebra':
        constants = []
        for (i, j), image in brackets.items():
            if i == j:
                raise ValueError('[e_i, e_i] is zero by antisymmetry')
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            for k, c in image.items():
                if c:
                    constants.append((i, j, k, c if sign > 0 else -c))
        return cls(name, tuple(basis), tuple(sorted(constants)), domain)

    @classmethod
    def heisenberg(cls, n: int) -> 'LieAlgebra':
        """h_(2n+1): ``[e_(2k-1), e_(2k)] = e_(2n+1)``."""
        basis = tuple(f"e{i}" for i in range(1, 2 * n + 2))
        constants = tuple((2 * k, 2 * k + 1, 2 * n, QQ.one) for k in range(n))
        return cls(f"h{2 * n + 1}", basis, constants)

    @classmethod
    def abelian(cls, m: int) -> 'LieAlgebra':
        return cls(f"abelian{m}", tuple(f"e{i}" for i in range(1, m + 1)))

    @classmethod
    def filiform(cls, m: int) -> 'LieAlgebra':
        """Standard filiform algebra: ``[e_1, e_k] = e_(k+1)`` for ``2 <= k < m``."""
        basis = tuple(f"e{i}" for i in range(1, m + 1))
        constants = tuple((0, k, k + 1, QQ.one) for k in range(1, m - 1))
        return cls(f"f{m}", basis, constants)

    @classmethod
    def direct_sum(cls, a: 'LieAlgebra', b: 'LieAlgebra', name: Optional[str] = None) -> 'LieAlgebra':
        offset = len(a.basis)
        names = list(a.basis)
        for label in b.basis:
            names.append(label if label not in a.basis else f"{label}'")
        constants = a.constants + tuple((i + offset, j + offset, k + offset, c) for i, j, k, c in b.constants)
        return cls(name or f"{a.name}+{b.name}", tuple(names), constants, a.domain)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def table(self) -> Dict[Tuple[int, int], Vector]:
        """Nonzero brackets of basis pairs ``i < j``."""
        table: Dict[Tuple[int, int], List[Any]] = {}
        for i, j, k, c in self.constants:
            table.setdefault((i, j), list(zero_vector(self.dim, self.domain)))[k] += c
        return {key: tuple(v) for key, v in table.items()}

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return zero_vector(self.dim, self.domain)
        if i < j:
            return self.table.get((i, j), zero_vector(self.dim, self.domain))
        return tuple(-c for c in self.table.get((j, i), zero_vector(self.dim, self.domain)))

    def bracket(self, u: Sequence[Any], v: Sequence[Any]) -> Vector:
        out = list(zero_vector(self.dim, self.domain))
        table = self.table
        for (i, j), image in table.items():
            coefficient = u[i] * v[j] - u[j] * v[i]
            if coefficient:
                for k, c in enumerate(image):
                    if c:
                        out[k] += coefficient * c
        return tuple(out)

    def jacobi_failures(self) -> List[Tuple[str, str, str]]:
        """Basis triples ``i < j < k`` on which the Jacobi identity fails."""
        failures = []
        e = [unit_vector(self.dim, i, self.domain) for i in range(self.dim)]
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total = [
                self.bracket(e[i], self.bracket(e[j], e[k])),
                self.bracket(e[j], self.bracket(e[k], e[i])),
                self.bracket(e[k], self.bracket(e[i], e[j])),
            ]
            if not is_zero(linear_combination([self.domain.one] * 3, total, self.dim, self.domain)):
                failures.append((self.basis[i], self.basis[j], self.basis[k]))
        return failures

    def derived_algebra(self) -> Subspace:
        return Subspace.span(self.table.values(), self.dim, self.domain)

    def center(self) -> Subspace:
        """Kernel of ``ad``: vectors ``z`` with ``[e_i, z] = 0`` for every basis element."""
        rows = []
        for k in range(self.dim):
            for i in range(self.dim):
                rows.append(tuple(self.bracket_basis(i, j)[k] for j in range(self.dim)))
        return kernel_basis(SparseMatrix.from_rows(rows, self.domain, cols=self.dim))


def chevalley_eilenberg(g: LieAlgebra) -> FreeCDGA:
    """CE complex: ``d x^k = -sum_(i<j) c^k_ij x^i x^j`` on degree-1 generators ``x1..xm``."""
    generators = [Generator(i, f"x{i + 1}", 1) for i in range(g.dim)]
    d_terms: Dict[int, Dict[Any, Any]] = {}
    for i, j, k, c in g.constants:
        terms = d_terms.setdefault(k, {})
        monomial = ((i, 1), (j, 1))
        terms[monomial] = terms.get(monomial, g.domain.zero) - c
    d = {k: GCAElement(tuple(sorted((m, c) for m, c in terms.items() if c)), 2) for k, terms in d_terms.items()}
    cdga = FreeCDGA(generators, d, None, g.domain, name=g.name)
    report = cdga.check_d_squared()
    if not report.passed:
        failures = g.jacobi_failures()
        if not failures:
            raise InternalInvariantViolation(
                f"d^2 fails on {report.violations[0][0]} but the structure constants satisfy Jacobi"
            )
        raise JacobiViolation(failures[0], f"d^2({report.violations[0][0]}) = {report.violations[0][1]}")
    return cdga


@dataclass(frozen=True)
class CohomologyClass:
    """Class in H^k with canonical coordinates and a closed representative in A^k."""

    degree: int
    coordinates: Vector
    representative: Vector
    algebra: DGAlgebra = field(compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return is_zero(self.coordinates)


@dataclass(frozen=True)
class CohomologyGroup:
    """H^k of a DGA: cocycles, coboundaries and the quotient in cocycle coordinates."""

    algebra: DGAlgebra = field(compare=False, repr=False)
    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    classes: Quotient

    @property
    def betti(self) -> int:
        return self.classes.dim

    @property
    def representatives(self) -> List[Vector]:
        return [self.cocycles.basis[j] for j in self.classes.free]

    @property
    def basis(self) -> List[CohomologyClass]:
        return [
            CohomologyClass(self.degree, unit_vector(self.betti, i, self.algebra.domain), rep, self.algebra)
            for i, rep in enumerate(self.representatives)
        ]

    def project(self, cocycle: Sequence[Any]) -> Vector:
        """Coordinates of the class of a closed vector of A^k."""
        if not self.cocycles.contains(cocycle):
            raise NotACocycle(f"vector is not closed in degree {self.degree}")
        return self.classes.project(self.cocycles.coordinates(cocycle))

    def class_of(self, cocycle: Sequence[Any]) -> CohomologyClass:
        return CohomologyClass(self.degree, self.project(cocycle), tuple(cocycle), self.algebra)

    def lift(self, coordinates: Sequence[Any]) -> Vector:
        """Representative built from the stored basis cocycles."""
        return linear_combination(coordinates, self.representatives, self.algebra.dim(self.degree), self.algebra.domain)

    def zero_class(self) -> CohomologyClass:
        dom = self.algebra.domain
        return CohomologyClass(
            self.degree, zero_vector(self.betti, dom), zero_vector(self.algebra.dim(self.degree), dom), self.algebra
        )


def cohomology(dga: DGAlgebra, k: int) -> CohomologyGroup:
    """H^k(dga) with RREF-derived representatives, cached on the algebra."""
    cache = dga.cohomology_cache
    if k not in cache:
        cache[k] = _compute_cohomology(dga, k)
    return cache[k]


def _compute_cohomology(dga: DGAlgebra, k: int) -> CohomologyGroup:
    dom = dga.domain
    n = dga.dim(k)
    if k < 0 or n == 0:
        empty = Subspace.zero(n, dom)
        return CohomologyGroup(dga, k, empty, empty, quotient(0, Subspace.zero(0, dom)))
    cocycles = kernel_basis(dga.d_matrix(k))
    coboundaries = column_space(dga.d_matrix(k - 1)) if k > 0 else Subspace.zero(n, dom)
    in_cocycle_coordinates = Subspace.span(
        (cocycles.coordinates(b) for b in coboundaries.basis), cocycles.dim, dom
    )
    group = CohomologyGroup(dga, k, cocycles, coboundaries, quotient(cocycles.dim, in_cocycle_coordinates))
    logger.debug(f"H^{k}({dga.name or 'dga'}): dim Z = {cocycles.dim}, dim B = {coboundaries.dim}, b = {group.betti}")
    return group


def betti_numbers(dga: DGAlgebra, degrees: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    if degrees is None:
        degrees = range(dga.cohomology_top + 1)
    return tuple(cohomology(dga, k).betti for k in degrees)


def euler_characteristic(dga: DGAlgebra) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti_numbers(dga)))


def cup_product(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    """Class of the product of the representatives."""
    algebra = a.algebra
    if b.algebra is not algebra:
        raise ValueError('classes belong to different algebras')
    degree = a.degree + b.degree
    product = algebra.product(a.degree, a.representative, b.degree, b.representative)
    return cohomology(algebra, degree).class_of(product)


def poincare_check(dga: DGAlgebra, top: int) -> bool:
    betti = betti_numbers(dga, range(top + 1))
    return betti[top] == 1 and all(betti[k] == betti[top - k] for k in range(top + 1))


def is_abelian_betti(dga: DGAlgebra, m: int) -> bool:
    """Whether the Betti numbers are the binomial coefficients of an exterior algebra on m classes."""
    return betti_numbers(dga, range(m + 1)) == tuple(comb(m, k) for k in range(m + 1))


def cohomology_dga(dga: DGAlgebra, max_degree: Optional[int] = None) -> FDGA:
    """H*(dga) as an FDGA with zero differential; basis ``h{k}_{j}``."""
    top = dga.cohomology_top if max_degree is None else max_degree
    groups = {k: cohomology(dga, k) for k in range(top + 1)}
    if groups[0].betti != 1:
        raise NonConnected(f"H^0 of {dga.name or 'the algebra'} has dimension {groups[0].betti}")
    basis = {k: [f"h{k}_{j + 1}" for j in range(g.betti)] for k, g in groups.items()}
    mult = {}
    for k, gk in groups.items():
        for l, gl in groups.items():
            if k == 0 or l == 0 or k + l > top or gk.betti == 0 or gl.betti == 0:
                continue
            for i, a in enumerate(gk.basis):
                for j, b in enumerate(gl.basis):
                    c = cup_product(a, b).coordinates
                    entries = [(idx, v) for idx, v in enumerate(c) if v]
                    if entries:
                        mult[(k, i, l, j)] = entries
    return FDGA(basis, mult, {}, dga.domain, name=f"H({dga.name})", fill_commutative=False)


def unit_class(dga: DGAlgebra) -> CohomologyClass:
    return cohomology(dga, 0).class_of(dga.unit())


def element_class(dga: FreeCDGA, a: GCAElement) -> CohomologyClass:
    if a.degree is None:
        raise ValueError('element must be homogeneous')
    return cohomology(dga, a.degree).class_of(dga.vector_of(a, a.degree))
