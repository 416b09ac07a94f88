"""Dual Lie algebra tower of a 1-minimal model and Lie-algebra invariants.

Dualizing stage n of the tower gives the nilpotent Lie algebra L_n with basis
``X{stage}_{k}`` dual to the generators ``v{stage}_{k}``. The bracket is read
off the differential with ``<d xi, X ^ Y> = -<xi, [X, Y]>``, the inverse of
the sign used by :func:`rht.cohomology.chevalley_eilenberg`.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from rht.cohomology import LieAlgebra
from rht.errors import InternalInvariantViolation
from rht.linalg import SparseMatrix, Subspace, unit_vector
from rht.minimal import Tower

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LieTower:
    """Levels ``L_1, L_2, ...`` with surjections ``L_(n+1) -> L_n``."""

    levels: Tuple[LieAlgebra, ...]
    surjections: Tuple[SparseMatrix, ...]
    stabilized: bool

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(level.dim for level in self.levels)


@dataclass(frozen=True)
class MalcevSummary:
    dims: Tuple[int, ...]
    nilpotency_class: int
    stabilized: bool
    limit: Optional[LieAlgebra]


@dataclass(frozen=True)
class IsomorphismInvariants:
    dim: int
    lower_central_dims: Tuple[int, ...]
    derived_dim: int
    center_dim: int


def _dual_name(generator_name: str) -> str:
    return 'X' + generator_name[1:] if generator_name.startswith('v') else f"X_{generator_name}"


def dualize(tower: Tower) -> LieTower:
    """Lie algebra tower dual to the 1-minimal tower."""
    dom = tower.target.domain
    generators = [g for s in tower.stages for g in s.generators]
    position = {g.id: i for i, g in enumerate(generators)}
    levels: List[LieAlgebra] = []
    constants: List[Tuple[int, int, int, Any]] = []
    count = 0
    for stage in tower.stages:
        for g, dv in zip(stage.generators, stage.differentials):
            k = position[g.id]
            for monomial, c in dv.terms:
                (a, _), (b, _) = monomial
                constants.append((position[a], position[b], k, -c))
        count += stage.size
        basis = tuple(_dual_name(g.name) for g in generators[:count])
        level = LieAlgebra(f"L{stage.index}", basis, tuple(sorted(constants)), dom)
        failures = level.jacobi_failures()
        if failures:
            raise InternalInvariantViolation(f"dual Lie algebra L{stage.index} fails Jacobi on {failures[0]}")
        levels.append(level)
    surjections = tuple(
        _projection(levels[i + 1].dim, levels[i].dim, dom) for i in range(len(levels) - 1)
    )
    lt = LieTower(tuple(levels), surjections, tower.stabilized)
    bad = check_surjections(lt)
    if bad:
        raise InternalInvariantViolation(f"surjection {bad[0]} does not preserve brackets")
    logger.debug(f"Dual Lie tower dims {lt.dims}")
    return lt


def _projection(source_dim: int, target_dim: int, domain: Any) -> SparseMatrix:
    return SparseMatrix.from_dok({(i, i): domain.one for i in range(target_dim)}, (target_dim, source_dim), domain)


def check_surjections(lt: LieTower) -> List[int]:
    """Indices n where ``L_(n+1) -> L_n`` fails to be a Lie homomorphism."""
    failing = []
    for n, pi in enumerate(lt.surjections):
        upper, lower = lt.levels[n + 1], lt.levels[n]
        dom = upper.domain
        for i in range(upper.dim):
            for j in range(i + 1, upper.dim):
                x, y = unit_vector(upper.dim, i, dom), unit_vector(upper.dim, j, dom)
                if pi.apply(upper.bracket(x, y)) != lower.bracket(pi.apply(x), pi.apply(y)):
                    failing.append(n)
                    break
            else:
                continue
            break
    return failing


def lower_central_series(g: LieAlgebra) -> List[Subspace]:
    """``g_1 = g``, ``g_(i+1) = [g_i, g]``; ends at 0 or at the first repeated term."""
    series = [Subspace.full(g.dim, g.domain)]
    basis = [unit_vector(g.dim, i, g.domain) for i in range(g.dim)]
    while series[-1].dim > 0:
        current = series[-1]
        nxt = Subspace.span((g.bracket(u, e) for u in current.basis for e in basis), g.dim, g.domain)
        if nxt.dim == current.dim:
            break
        series.append(nxt)
    return series


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1].dim == 0


def nilpotency_class(g: LieAlgebra) -> int:
    """Smallest c with ``g_(c+1) = 0``; -1 for non-nilpotent algebras."""
    series = lower_central_series(g)
    if series[-1].dim != 0:
        return -1
    return len(series) - 1


def isomorphism_invariants(g: LieAlgebra) -> IsomorphismInvariants:
    return IsomorphismInvariants(
        dim=g.dim,
        lower_central_dims=tuple(s.dim for s in lower_central_series(g)),
        derived_dim=g.derived_algebra().dim,
        center_dim=g.center().dim,
    )


def malcev_summary(lt: LieTower) -> MalcevSummary:
    last = lt.levels[-1] if lt.levels else None
    klass = nilpotency_class(last) if last is not None else 0
    limit = last if lt.stabilized else None
    return MalcevSummary(lt.dims, klass, lt.stabilized, limit)

