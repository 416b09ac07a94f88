"""Bigrading of the 1-minimal tower over a complexified target.

Stage 1 takes its generators from a splitting of ``H^1`` into ``(p, q)``
components. Because ``d`` and ``phi`` have type (0, 0), the cocycles,
coboundaries and the kernel of ``phi*`` in ``H^2(M(n))`` split by the types
of the degree-2 monomials, and each new generator takes the type of its
differential.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from rht.cohomology import cohomology
from rht.errors import InternalInvariantViolation, NotBigradeable
from rht.gca import FreeCDGA, GCAElement, Generator, Monomial
from rht.hodge import Bigrading
from rht.linalg import SparseMatrix, Subspace, Vector, kernel_basis, linear_combination, solve
from rht.minimal import Tower, TowerStage, _stage_algebra, _stage_morphism

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


@dataclass(frozen=True)
class BigradedTower:
    tower: Tower
    bidegrees: Tuple[Tuple[Bidegree, ...], ...]
    h2_split_ok: bool
    image_compatible: Optional[bool]

    @property
    def v2_types(self) -> Tuple[Bidegree, ...]:
        """Distinct types of the second-stage generators."""
        return tuple(sorted(set(self.bidegrees[1]))) if len(self.bidegrees) > 1 else ()

    def types_by_stage(self) -> List[Dict[Bidegree, int]]:
        out = []
        for stage in self.bidegrees:
            counts: Dict[Bidegree, int] = {}
            for pq in stage:
                counts[pq] = counts.get(pq, 0) + 1
            out.append(dict(sorted(counts.items())))
        return out


def _monomial_type(algebra: FreeCDGA, m: Monomial) -> Bidegree:
    p = q = 0
    for gid, e in m:
        bp, bq = algebra._by_id[gid].bidegree
        p, q = p + e * bp, q + e * bq
    return (p, q)


def _type_subspaces(algebra: FreeCDGA, k: int) -> Dict[Bidegree, Subspace]:
    dom = algebra.domain
    n = algebra.dim(k)
    by_type: Dict[Bidegree, List[Vector]] = {}
    for i, m in enumerate(algebra.degree_slice(k)):
        by_type.setdefault(_monomial_type(algebra, m), []).append(
            tuple(dom.one if j == i else dom.zero for j in range(n))
        )
    return {pq: Subspace.span(vs, n, dom) for pq, vs in sorted(by_type.items())}


def _check_homogeneous(algebra: FreeCDGA) -> None:
    for g in algebra.generators:
        dv = algebra.d_on_generators.get(g.id)
        if dv is None:
            continue
        for m, _ in dv.terms:
            if _monomial_type(algebra, m) != g.bidegree:
                raise InternalInvariantViolation(f"d({g.name}) is not homogeneous of type {g.bidegree}")


def _first_stage(target, h1_components: Mapping[Bidegree, Subspace]) -> TowerStage:
    h1 = cohomology(target, 1)
    split = Bigrading.of(h1_components, h1.betti, target.domain)
    if not split.is_direct_and_spanning():
        raise NotBigradeable(f"H^1 components {split.dims()} do not split the {h1.betti}-dimensional H^1")
    generators, images = [], []
    for pq, sub in split.components:
        for b in sub.basis:
            generators.append(Generator(len(generators), f"v1_{len(generators) + 1}", 1, pq))
            images.append(h1.lift(b))
    zero = tuple(GCAElement((), 2) for _ in generators)
    return TowerStage(1, tuple(generators), zero, tuple(images))


def _next_stage(target, stages: List[TowerStage]) -> TowerStage:
    """Next bigraded stage; new generators are typed by the monomials of their differentials."""
    dom = target.domain
    n = len(stages)
    algebra = _stage_algebra(stages, dom, f"M({n})")
    _check_homogeneous(algebra)
    phi = _stage_morphism(stages, algebra, target)
    h2 = cohomology(algebra, 2)
    h2_target = cohomology(target, 2)
    images = [h2_target.project(phi.apply(2, r)) for r in h2.representatives]
    kernel_dim = h2.betti - Subspace.span(images, h2_target.betti, dom).dim

    start = sum(s.size for s in stages)
    generators, differentials, targets = [], [], []
    found = 0
    d1 = target.d_matrix(1)
    for pq, typed in _type_subspaces(algebra, 2).items():
        cocycles = typed.intersection(h2.cocycles)
        if not cocycles.dim:
            continue
        coboundaries = typed.intersection(h2.coboundaries)
        kernel = _kernel_of_projection(cocycles, h2_target, phi, dom)
        chosen = coboundaries
        for v in kernel.basis:
            if chosen.contains(v):
                continue
            chosen = chosen.sum(Subspace.span([v], algebra.dim(2), dom))
            xi = solve(d1, phi.apply(2, v))
            if xi is None:
                raise InternalInvariantViolation(f"image of a kernel class of type {pq} is not exact in the target")
            generators.append(Generator(start + found, f"v{n + 1}_{found + 1}", 1, pq))
            differentials.append(algebra.element_of(v, 2))
            targets.append(xi)
            found += 1
    if found != kernel_dim:
        raise NotBigradeable(
            f"kernel of phi* at stage {n} has dimension {kernel_dim} but its typed parts give {found}"
        )
    stage = TowerStage(n + 1, tuple(generators), tuple(differentials), tuple(targets), h2.betti)
    return stage


def _kernel_of_projection(cocycles: Subspace, h2_target, phi, dom) -> Subspace:
    """Vectors of ``cocycles`` whose image is exact in the target."""
    columns = [h2_target.project(phi.apply(2, c)) for c in cocycles.basis]
    coefficients = kernel_basis(SparseMatrix.from_columns(columns, h2_target.betti, dom))
    return Subspace.span(
        (linear_combination(c, cocycles.basis, cocycles.ambient_dim, dom) for c in coefficients.basis),
        cocycles.ambient_dim,
        dom,
    )


def bigraded_tower(
    tower: Tower,
    h1_components: Mapping[Bidegree, Subspace],
    h2_bigrading: Optional[Mapping[Bidegree, Subspace]] = None,
) -> BigradedTower:
    """Rebuild ``tower`` over the complexified target with a bidegree on every generator.

    ``h1_components`` and ``h2_bigrading`` are subspaces of ``H^1`` and
    ``H^2`` coordinates of the complexified target. Raises
    :class:`NotBigradeable` when the kernel of ``phi*`` does not split by
    type.
    """
    target = tower.target.complexify()
    stages = [_first_stage(target, h1_components)]
    stabilized = False
    max_stage = len(tower.stages)
    while True:
        nxt = _next_stage(target, stages)
        if nxt.size == 0:
            stabilized = True
            break
        if len(stages) == max_stage:
            break
        stages.append(nxt)
    result = Tower(target, tuple(stages), stabilized)
    _check_homogeneous(_stage_algebra(stages, target.domain, 'M'))

    h2_split_ok = False
    image_compatible = None
    if h2_bigrading is not None:
        h2_target = cohomology(target, 2)
        split = Bigrading.of(h2_bigrading, h2_target.betti, target.domain)
        h2_split_ok = split.is_direct_and_spanning() and all(p + q == 2 for p, q in split.bidegrees())
        image_compatible = _image_compatible(result, split)
    bidegrees = tuple(tuple(g.bidegree for g in s.generators) for s in stages)
    logger.info(f"Bigraded tower types by stage: {[sorted(set(b)) for b in bidegrees]}")
    return BigradedTower(result, bidegrees, h2_split_ok, image_compatible)


def _image_compatible(tower: Tower, split: Bigrading) -> bool:
    """Whether ``phi*`` sends the type-(p, q) part of ``H^2(M)`` into ``V_(p,q)``."""
    target = tower.target
    algebra = _stage_algebra(list(tower.stages), target.domain, 'M')
    phi = _stage_morphism(list(tower.stages), algebra, target)
    h2 = cohomology(algebra, 2)
    h2_target = cohomology(target, 2)
    for pq, typed in _type_subspaces(algebra, 2).items():
        for v in typed.intersection(h2.cocycles).basis:
            image = h2_target.project(phi.apply(2, v))
            if any(image) and not split.component(*pq).contains(image):
                return False
    return True
