"""1-formality verdicts, Massey triple products and nilmanifold obstructions.

A stabilized tower M is 1-formal exactly when ``H^2(M(1)) = ^2 V_1`` maps
onto ``H^2(M)``. For towers cut off before stabilizing the comparison is made
inside ``H^2(target)``, where ``phi*`` is injective on the full model: a
missing class there is a definitive "no", agreement only a provisional "yes".
"""

import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from rht.cohomology import CohomologyClass, LieAlgebra, betti_numbers, chevalley_eilenberg, cohomology
from rht.errors import NotDefined, NotNilpotent, NotOneFormal, ValidationFailed
from rht.gca import DGAlgebra
from rht.linalg import SparseMatrix, Subspace, Vector, rank, solve, unit_vector
from rht.malcev import is_nilpotent
from rht.minimal import Tower, tower_as_cdga, tower_morphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FormalityReport:
    verdict: bool
    h2_m1_dim: int
    h2_m_dim: int
    image_dim: int
    witness: Optional[CohomologyClass] = None
    provisional: bool = False

    @property
    def h2_dims(self) -> Tuple[int, int, int]:
        """``(dim H^2(M(1)), dim of its image, dim H^2(M))``."""
        return (self.h2_m1_dim, self.image_dim, self.h2_m_dim)


@dataclass(frozen=True)
class MasseyValue:
    """Massey triple product as a coset: representative class plus indeterminacy."""

    representative: CohomologyClass
    indeterminacy: Subspace
    nonzero_mod_indeterminacy: bool


@dataclass(frozen=True)
class QuadraticPresentation:
    """Generators ``X_1..X_b`` dual to H^1 and relations in the ``[X_i, X_j]`` (i < j) coordinates."""

    generators: Tuple[str, ...]
    pairs: Tuple[Tuple[int, int], ...]
    relations: Tuple[Vector, ...]
    domain: Any


@dataclass(frozen=True)
class SasakianObstruction:
    n: int
    b1: int
    b1_matches: bool
    heisenberg: bool

    @property
    def possible(self) -> bool:
        return self.b1_matches and self.heisenberg


def _pair_monomials(tower: Tower) -> List[Tuple[Tuple[int, int], ...]]:
    ids = [g.id for g in tower.stages[0].generators]
    return [((i, 1), (j, 1)) for i, j in itertools.combinations(ids, 2)]


def one_formal(tower: Tower) -> FormalityReport:
    """Surjectivity of ``H^2(M(1)) -> H^2(M)``."""
    b1 = tower.b1
    h2_m1_dim = comb(b1, 2)
    algebra = tower_as_cdga(tower)
    if tower.stabilized:
        h2 = cohomology(algebra, 2)
        one = algebra.domain.one
        images = [h2.project(algebra.vector_of(algebra.element({m: one}), 2)) for m in _pair_monomials(tower)]
        image = Subspace.span(images, h2.betti, algebra.domain)
        witness = None
        for cls in h2.basis:
            if not image.contains(cls.coordinates):
                witness = cls
                break
        report = FormalityReport(image.dim == h2.betti, h2_m1_dim, h2.betti, image.dim, witness)
    else:
        phi = tower_morphism(tower)
        h2_model = cohomology(algebra, 2)
        h2_target = cohomology(tower.target, 2)
        dom = algebra.domain
        pair_images = [
            h2_target.project(phi.apply(2, algebra.vector_of(algebra.element({m: dom.one}), 2)))
            for m in _pair_monomials(tower)
        ]
        image = Subspace.span(pair_images, h2_target.betti, dom)
        model_images = [h2_target.project(phi.apply(2, r)) for r in h2_model.representatives]
        reached = Subspace.span(model_images, h2_target.betti, dom)
        witness = None
        for cls, img in zip(h2_model.basis, model_images):
            if not image.contains(img):
                witness = cls
                break
        report = FormalityReport(image.dim == reached.dim, h2_m1_dim, reached.dim, image.dim, witness, True)
        logger.warning('Tower is not stabilized; the 1-formality verdict is provisional')
    logger.info(f"1-formal: {report.verdict} (h2 dims {report.h2_dims})")
    return report


def massey_triple(dga: DGAlgebra, a: CohomologyClass, b: CohomologyClass, c: CohomologyClass) -> MasseyValue:
    """``<a, b, c> = [xi * c - (-1)^|a| a * zeta]`` with ``d xi = ab`` and ``d zeta = bc``."""
    ab_degree, bc_degree = a.degree + b.degree, b.degree + c.degree
    ab = dga.product(a.degree, a.representative, b.degree, b.representative)
    bc = dga.product(b.degree, b.representative, c.degree, c.representative)
    if any(cohomology(dga, ab_degree).project(ab)) or any(cohomology(dga, bc_degree).project(bc)):
        raise NotDefined('Massey product is undefined: a cup product of neighbouring classes is nonzero')
    xi = solve(dga.d_matrix(ab_degree - 1), ab)
    zeta = solve(dga.d_matrix(bc_degree - 1), bc)
    if xi is None or zeta is None:
        raise NotDefined('Massey product is undefined: no primitive for a vanishing product')
    degree = ab_degree + c.degree - 1
    first = dga.product(ab_degree - 1, xi, c.degree, c.representative)
    second = dga.product(a.degree, a.representative, bc_degree - 1, zeta)
    sign = -1 if a.degree % 2 else 1
    value = tuple(x - y if sign > 0 else x + y for x, y in zip(first, second))
    group = cohomology(dga, degree)
    representative = group.class_of(value)

    spanning = []
    for h in cohomology(dga, bc_degree - 1).basis:
        spanning.append(_cup_coordinates(dga, a, h, group))
    for h in cohomology(dga, ab_degree - 1).basis:
        spanning.append(_cup_coordinates(dga, h, c, group))
    indeterminacy = Subspace.span(spanning, group.betti, dga.domain)
    nonzero = not indeterminacy.contains(representative.coordinates)
    return MasseyValue(representative, indeterminacy, nonzero)


def _cup_coordinates(dga: DGAlgebra, x: CohomologyClass, y: CohomologyClass, group) -> Vector:
    return group.project(dga.product(x.degree, x.representative, y.degree, y.representative))


def massey_scan(dga: DGAlgebra) -> List[Tuple[Tuple[int, int, int], MasseyValue]]:
    """Every defined triple of H^1 basis classes with its value."""
    basis = cohomology(dga, 1).basis
    h2 = cohomology(dga, 2)
    zero_products = {
        (i, j)
        for i, a in enumerate(basis)
        for j, b in enumerate(basis)
        if not any(h2.project(dga.product(1, a.representative, 1, b.representative)))
    }
    values = []
    for i, j, k in itertools.product(range(len(basis)), repeat=3):
        if (i, j) in zero_products and (j, k) in zero_products:
            values.append(((i, j, k), massey_triple(dga, basis[i], basis[j], basis[k])))
    logger.debug(f"Massey scan: {len(values)} defined triples")
    return values


def quadratic_presentation(tower: Tower, report: Optional[FormalityReport] = None) -> QuadraticPresentation:
    """Relations: annihilator of ``d(V_2)`` inside ``^2 V_1`` under the pairing of ``[X_i, X_j]`` with ``x_i x_j``."""
    if not tower.stabilized:
        raise NotOneFormal('quadratic presentations need a stabilized tower')
    report = report or one_formal(tower)
    if not report.verdict:
        raise NotOneFormal('the tower is not 1-formal, so its Malcev Lie algebra has no quadratic presentation')
    dom = tower.target.domain
    first = tower.stages[0].generators
    pairs = tuple(itertools.combinations(range(len(first)), 2))
    index = {((first[i].id, 1), (first[j].id, 1)): p for p, (i, j) in enumerate(pairs)}
    rows = []
    if len(tower.stages) > 1:
        for dv in tower.stages[1].differentials:
            row = [dom.zero] * len(pairs)
            for monomial, c in dv.terms:
                row[index[monomial]] = c
            rows.append(tuple(row))
    relations = Subspace.span(rows, len(pairs), dom).annihilator()
    names = tuple('X' + g.name[1:] for g in first)
    logger.info(f"Quadratic presentation: {len(names)} generators, {relations.dim} relations")
    return QuadraticPresentation(names, pairs, relations.basis, dom)


def heisenberg_check(g: LieAlgebra) -> bool:
    """One-dimensional central derived algebra with a nondegenerate form on ``g/[g,g]``."""
    if not is_nilpotent(g):
        raise NotNilpotent(f"{g.name} is not nilpotent")
    if g.dim % 2 == 0:
        return False
    derived = g.derived_algebra()
    if derived.dim != 1:
        return False
    if not derived.is_subspace_of(g.center()):
        return False
    free = [j for j in range(g.dim) if j not in derived.pivots]
    form = [
        [derived.coordinates(g.bracket_basis(i, j))[0] for j in free]
        for i in free
    ]
    return rank(SparseMatrix.from_rows(form, g.domain, cols=len(free))) == g.dim - 1


def sasakian_obstruction(g: LieAlgebra) -> SasakianObstruction:
    """Both necessary conditions for a Sasakian nilmanifold with Lie algebra ``g``."""
    if g.dim % 2 == 0:
        raise ValidationFailed(f"{g.name} has even dimension {g.dim}; a Sasakian manifold has odd dimension")
    n = (g.dim - 1) // 2
    heisenberg = heisenberg_check(g)
    b1 = betti_numbers(chevalley_eilenberg(g), [1])[0]
    return SasakianObstruction(n, b1, b1 == 2 * n, heisenberg)


def weight_profile(dims: Mapping[Tuple[int, int], int]) -> Dict[int, int]:
    """``w_r = sum of dims at bidegrees with p + q = r``."""
    profile: Dict[int, int] = {}
    for (p, q), d in dims.items():
        if d:
            profile[p + q] = profile.get(p + q, 0) + d
    return dict(sorted(profile.items()))


def weight_count_check(dims: Mapping[Tuple[int, int], int], n: int) -> bool:
    """``sum w_r = 2n+1`` and ``sum r*w_r = 2n+2`` with no weight-0 part, forcing ``w_1 = 2n, w_2 = 1``."""
    profile = weight_profile(dims)
    if profile.get(0, 0):
        return False
    return sum(profile.values()) == 2 * n + 1 and sum(r * w for r, w in profile.items()) == 2 * n + 2


def named_classes(dga: DGAlgebra, names: Sequence[str]) -> List[CohomologyClass]:
    """Classes of named degree-k basis elements (closed vectors only)."""
    out = []
    for name in names:
        for k in range(dga.max_degree + 1):
            labels = dga.labels(k)
            if name in labels:
                vec = unit_vector(dga.dim(k), labels.index(name), dga.domain)
                out.append(cohomology(dga, k).class_of(vec))
                break
        else:
            raise ValidationFailed(f"{name} is not a basis element of {dga.name}")
    return out
