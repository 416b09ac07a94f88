"""Canonical 1-minimal model tower M(1) ⊂ M(2) ⊂ ... of a target DGA.

Stage 1 takes one degree-1 generator per H^1 class of the target with zero
differential. Each later stage adds one generator per basis class of the
kernel of ``H^2(M(n)) -> H^2(target)``: its differential is the class
representative and its image in the target is the solution of
``d xi = phi(dv)`` with free variables set to zero. Generators are named
``v{stage}_{index}``.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from rht.cohomology import cohomology
from rht.errors import DimensionLimitExceeded, InternalInvariantViolation, NonConnected
from rht.gca import DGAlgebra, DGAMorphism, FreeCDGA, GCAElement, Generator
from rht.linalg import SparseMatrix, Vector, kernel_basis, linear_combination, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TowerStage:
    """Generators added at one stage with their differentials and images in the target."""

    index: int
    generators: Tuple[Generator, ...]
    differentials: Tuple[GCAElement, ...]
    phi: Tuple[Vector, ...]
    h2_dim: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class Tower:
    target: DGAlgebra
    stages: Tuple[TowerStage, ...]
    stabilized: bool

    @property
    def generator_counts(self) -> Tuple[int, ...]:
        return tuple(s.size for s in self.stages)

    @property
    def total_generators(self) -> int:
        return sum(self.generator_counts)

    @property
    def b1(self) -> int:
        return self.stages[0].size


def _generators_upto(stages: Sequence[TowerStage]) -> List[Generator]:
    return [g for s in stages for g in s.generators]


def _stage_algebra(stages: Sequence[TowerStage], domain: Any, name: str) -> FreeCDGA:
    generators = _generators_upto(stages)
    d = {g.id: dv for s in stages for g, dv in zip(s.generators, s.differentials) if not dv.is_zero}
    return FreeCDGA(generators, d, None, domain, name)


def _stage_morphism(stages: Sequence[TowerStage], algebra: FreeCDGA, target: DGAlgebra) -> DGAMorphism:
    images = {g.id: image for s in stages for g, image in zip(s.generators, s.phi)}
    return DGAMorphism.from_generators(algebra, target, images)


def stage1(target: DGAlgebra) -> TowerStage:
    """M(1): exterior algebra on H^1(target) with zero differential."""
    h0 = cohomology(target, 0)
    if h0.betti != 1:
        raise NonConnected(f"H^0 of {target.name or 'the target'} has dimension {h0.betti}, expected 1")
    h1 = cohomology(target, 1)
    generators = tuple(Generator(i, f"v1_{i + 1}", 1) for i in range(h1.betti))
    zero = tuple(GCAElement((), 2) for _ in generators)
    stage = TowerStage(1, generators, zero, tuple(h1.representatives))
    logger.info(f"Stage 1 of the tower over {target.name or 'target'}: {stage.size} generators")
    return stage


def extend(tower: Tower) -> TowerStage:
    """Next stage: one generator per basis class of ``ker(H^2(M(n)) -> H^2(target))``.

    Returns a stage with no generators when the last stage already maps
    H^2 injectively.
    """
    if not tower.stages:
        raise ValueError('extend needs a tower with at least one stage')
    target = tower.target
    dom = target.domain
    n = len(tower.stages)
    algebra = tower_as_cdga(tower)
    phi = _stage_morphism(tower.stages, algebra, target)
    h2_model = cohomology(algebra, 2)
    h2_target = cohomology(target, 2)
    reps = h2_model.representatives
    images = [h2_target.project(phi.apply(2, r)) for r in reps]
    induced = SparseMatrix.from_columns(images, h2_target.betti, dom)
    kernel = kernel_basis(induced)

    start = tower.total_generators
    generators, differentials, targets = [], [], []
    d1 = target.d_matrix(1)
    for k, coefficients in enumerate(kernel.basis):
        cocycle = linear_combination(coefficients, reps, algebra.dim(2), dom)
        xi = solve(d1, phi.apply(2, cocycle))
        if xi is None:
            raise InternalInvariantViolation(
                f"image of a kernel class at stage {n + 1} is not exact in the target"
            )
        generators.append(Generator(start + k, f"v{n + 1}_{k + 1}", 1))
        differentials.append(algebra.element_of(cocycle, 2))
        targets.append(xi)
    stage = TowerStage(n + 1, tuple(generators), tuple(differentials), tuple(targets), h2_model.betti)
    logger.debug(
        f"Stage {n + 1}: H^2(M({n})) has dim {h2_model.betti}, kernel of phi* has dim {kernel.dim}"
    )
    return stage


def build_tower(target: DGAlgebra, max_stage: int, max_generators: Optional[int] = None) -> Tower:
    """Iterate :func:`extend` until the kernel vanishes or ``max_stage`` stages exist."""
    if max_stage < 1:
        raise ValueError('max_stage must be at least 1')
    stages = [stage1(target)]
    stabilized = False
    while True:
        _check_size(stages, max_generators)
        nxt = extend(Tower(target, tuple(stages), False))
        if nxt.size == 0:
            stabilized = True
            break
        if len(stages) == max_stage:
            break
        stages.append(nxt)
        logger.info(f"Stage {nxt.index}: {nxt.size} new generators")
    tower = Tower(target, tuple(stages), stabilized)
    if stabilized:
        logger.info(f"Tower over {target.name or 'target'} stabilized with generators {tower.generator_counts}")
    else:
        logger.warning(
            f"Tower over {target.name or 'target'} did not stabilize within {max_stage} stages "
            f"(generators {tower.generator_counts})"
        )
    return tower


def _check_size(stages: Sequence[TowerStage], max_generators: Optional[int]) -> None:
    total = sum(s.size for s in stages)
    if max_generators is not None and total > max_generators:
        raise DimensionLimitExceeded('tower', total, max_generators)


def tower_as_cdga(tower: Tower, stage: Optional[int] = None) -> FreeCDGA:
    """M(stage) as an exterior algebra on ``V_1 + ... + V_stage`` (default: last stage)."""
    last = len(tower.stages) if stage is None else stage
    if not 1 <= last <= len(tower.stages):
        raise ValueError(f"stage {last} is not built (tower has {len(tower.stages)} stages)")
    return _stage_algebra(tower.stages[:last], tower.target.domain, f"M({last})")


def tower_morphism(tower: Tower, stage: Optional[int] = None) -> DGAMorphism:
    """The map ``phi: M(stage) -> target``."""
    algebra = tower_as_cdga(tower, stage)
    last = len(tower.stages) if stage is None else stage
    return _stage_morphism(tower.stages[:last], algebra, tower.target)


def verify_tower(tower: Tower) -> List[str]:
    """Re-check the stage invariants; returns failure messages (empty when all hold)."""
    failures = []
    target = tower.target
    h2_target = cohomology(target, 2)
    for n in range(1, len(tower.stages) + 1):
        phi = tower_morphism(tower, n)
        if phi.check_chain_map(1):
            failures.append(f"phi does not commute with d at stage {n}")
        stage = tower.stages[n - 1]
        algebra = phi.source
        for g, dv in zip(stage.generators, stage.differentials):
            if not algebra.differential_of(dv).is_zero:
                failures.append(f"d({g.name}) is not closed")
            if n > 1 and any(h2_target.project(phi.apply(2, algebra.vector_of(dv, 2)))):
                failures.append(f"d({g.name}) is not in the kernel of phi* at stage {n - 1}")
        if n > 1:
            expected = extend(Tower(target, tower.stages[:n - 1], False)).size
            if expected != stage.size:
                failures.append(f"stage {n} has {stage.size} generators, kernel has dimension {expected}")
    return failures
