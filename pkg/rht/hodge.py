"""Filtrations, bigradings and the Deligne splitting of a mixed Hodge structure.

All spaces are coordinate spaces over QQ_I whose standard basis is the real
form, so complex conjugation is coefficient-wise conjugation.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from sympy.polys.domains import QQ_I

from rht.cohomology import CohomologyGroup
from rht.errors import HypothesisViolation, NotMHS, ValidationFailed
from rht.linalg import Subspace

logger = logging.getLogger(__name__)

INCREASING = 'increasing'
DECREASING = 'decreasing'

Bidegree = Tuple[int, int]


@dataclass(frozen=True)
class Filtration:
    """Finite filtration stored on the index range ``lo .. lo + len(steps) - 1``.

    Outside the range an increasing filtration is ``0`` below and the last
    step above; a decreasing one is the first step below and ``0`` above.
    """

    direction: str
    ambient_dim: int
    lo: int
    steps: Tuple[Subspace, ...]
    domain: Any = QQ_I

    def __post_init__(self):
        if self.direction not in (INCREASING, DECREASING):
            raise ValueError(f"unknown filtration direction {self.direction!r}")
        for a, b in zip(self.steps, self.steps[1:]):
            inner, outer = (a, b) if self.direction == INCREASING else (b, a)
            if not inner.is_subspace_of(outer):
                raise ValidationFailed(f"{self.direction} filtration steps are not nested")

    @classmethod
    def build(
        cls, direction: str, pieces: Mapping[int, Subspace], ambient_dim: int, domain: Any = QQ_I
    ) -> 'Filtration':
        """Filtration from explicit pieces on a contiguous index range."""
        if not pieces:
            return cls(direction, ambient_dim, 0, (), domain)
        lo, hi = min(pieces), max(pieces)
        missing = [i for i in range(lo, hi + 1) if i not in pieces]
        if missing:
            raise ValueError(f"filtration pieces missing at {missing}")
        return cls(direction, ambient_dim, lo, tuple(pieces[i] for i in range(lo, hi + 1)), domain)

    @classmethod
    def pure(cls, weight: int, ambient_dim: int, domain: Any = QQ_I) -> 'Filtration':
        """Increasing filtration with everything in one weight."""
        return cls(INCREASING, ambient_dim, weight, (Subspace.full(ambient_dim, domain),), domain)

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(range(self.lo, self.hi + 1))

    def at(self, i: int) -> Subspace:
        if not self.steps:
            return Subspace.zero(self.ambient_dim, self.domain)
        if i < self.lo:
            return Subspace.zero(self.ambient_dim, self.domain) if self.direction == INCREASING else self.steps[0]
        if i > self.hi:
            return self.steps[-1] if self.direction == INCREASING else Subspace.zero(self.ambient_dim, self.domain)
        return self.steps[i - self.lo]

    def jumps(self) -> Tuple[int, ...]:
        """Indices where the filtration changes: ``W_i != W_(i-1)`` or ``F^i != F^(i+1)``."""
        out = []
        for i in range(self.lo - 1, self.hi + 2):
            if self.direction == INCREASING:
                if self.at(i).dim != self.at(i - 1).dim:
                    out.append(i)
            elif self.at(i).dim != self.at(i + 1).dim:
                out.append(i)
        return tuple(out)

    def dims(self) -> Dict[int, int]:
        return {i: s.dim for i, s in zip(self.indices, self.steps)}

    def convert_to(self, domain: Any) -> 'Filtration':
        steps = tuple(s.convert_to(domain) for s in self.steps)
        return Filtration(self.direction, self.ambient_dim, self.lo, steps, domain)

    def conjugate(self) -> 'Filtration':
        steps = tuple(s.conjugate() for s in self.steps)
        return Filtration(self.direction, self.ambient_dim, self.lo, steps, self.domain)

    def shifted(self, offset: int) -> 'Filtration':
        """Reindexed copy: the piece at ``i`` moves to ``i + offset``."""
        return Filtration(self.direction, self.ambient_dim, self.lo + offset, self.steps, self.domain)


@dataclass(frozen=True)
class Bigrading:
    """Direct-sum decomposition into ``(p, q)`` components."""

    components: Tuple[Tuple[Bidegree, Subspace], ...]
    ambient_dim: int
    domain: Any = QQ_I

    @classmethod
    def of(cls, components: Mapping[Bidegree, Subspace], ambient_dim: int, domain: Any = QQ_I) -> 'Bigrading':
        items = tuple(sorted((pq, s) for pq, s in components.items() if s.dim))
        return cls(items, ambient_dim, domain)

    def component(self, p: int, q: int) -> Subspace:
        for pq, s in self.components:
            if pq == (p, q):
                return s
        return Subspace.zero(self.ambient_dim, self.domain)

    def dims(self) -> Dict[Bidegree, int]:
        return {pq: s.dim for pq, s in self.components}

    def bidegrees(self) -> List[Bidegree]:
        return [pq for pq, _ in self.components]

    def is_direct_and_spanning(self) -> bool:
        total = sum(s.dim for _, s in self.components)
        spanned = Subspace.zero(self.ambient_dim, self.domain).sum(*(s for _, s in self.components))
        return total == spanned.dim == self.ambient_dim

    def sum_where(self, predicate) -> Subspace:
        parts = [s for pq, s in self.components if predicate(*pq)]
        return Subspace.zero(self.ambient_dim, self.domain).sum(*parts)

    def hypothesis_failure(self) -> Optional[Bidegree]:
        """First ``(p, q)`` with ``conj(V_pq)`` outside ``V_qp + sum of lower weights``."""
        for (p, q), s in self.components:
            allowed = self.component(q, p).sum(self.sum_where(lambda r, t, w=p + q: r + t < w))
            if not s.conjugate().is_subspace_of(allowed):
                return (p, q)
        return None


def _weight_range(components: Iterable[Bidegree]) -> Tuple[int, int]:
    weights = [p + q for p, q in components]
    return min(weights), max(weights)


def deligne_splitting(W: Filtration, F: Filtration) -> Bigrading:
    """``V_pq = R_pq ∩ L_pq`` for a mixed Hodge structure ``(W, F)``.

    ``R_pq = W_r ∩ F^p`` and ``L_pq = W_r ∩ conj(F^q) + sum_(i>=2) W_(r-i) ∩ conj(F^(q-i+1))``
    with ``r = p + q``. Raises :class:`NotMHS` when the components fail to
    reconstruct ``W`` and ``F``.
    """
    n, dom = W.ambient_dim, W.domain
    if F.ambient_dim != n:
        raise ValueError('W and F live on different spaces')
    if n == 0:
        return Bigrading((), 0, dom)
    Fbar = F.conjugate()
    indices = range(F.lo, F.hi + 1)
    components: Dict[Bidegree, Subspace] = {}
    for p in indices:
        for q in indices:
            r = p + q
            if W.at(r).dim == 0:
                continue
            right = W.at(r).intersection(F.at(p))
            left = W.at(r).intersection(Fbar.at(q))
            i = 2
            while r - i >= W.lo:
                left = left.sum(W.at(r - i).intersection(Fbar.at(q - i + 1)))
                i += 1
            v = right.intersection(left)
            if v.dim:
                components[(p, q)] = v
    result = Bigrading.of(components, n, dom)
    if not result.is_direct_and_spanning():
        raise NotMHS(f"components {result.dims()} do not split the {n}-dimensional space")
    for i in range(W.lo, W.hi + 1):
        if result.sum_where(lambda p, q, i=i: p + q <= i) != W.at(i):
            raise NotMHS(f"components do not reconstruct W_{i}")
    for a in range(F.lo, F.hi + 1):
        if result.sum_where(lambda p, q, a=a: p >= a) != F.at(a):
            raise NotMHS(f"components do not reconstruct F^{a}")
    logger.debug(f"Deligne splitting dims {result.dims()}")
    return result


def filtrations_from_bigrading(b: Bigrading) -> Tuple[Filtration, Filtration]:
    """``W_i = sum over p+q <= i``, ``F^a = sum over p >= a``; checks conjugation modulo lower weight."""
    if not b.is_direct_and_spanning():
        raise ValidationFailed(f"bigrading {b.dims()} is not a direct sum decomposition")
    bad = b.hypothesis_failure()
    if bad is not None:
        raise HypothesisViolation(bad, 'conjugate component is not in the mirrored component modulo lower weights')
    if not b.components:
        empty = Filtration(INCREASING, b.ambient_dim, 0, (), b.domain)
        return empty, Filtration(DECREASING, b.ambient_dim, 0, (), b.domain)
    w_lo, w_hi = _weight_range(b.bidegrees())
    ps = [p for p, _ in b.bidegrees()]
    W = Filtration.build(
        INCREASING,
        {i: b.sum_where(lambda p, q, i=i: p + q <= i) for i in range(w_lo, w_hi + 1)},
        b.ambient_dim,
        b.domain,
    )
    F = Filtration.build(
        DECREASING,
        {a: b.sum_where(lambda p, q, a=a: p >= a) for a in range(min(ps), max(ps) + 2)},
        b.ambient_dim,
        b.domain,
    )
    return W, F


def induced_filtration(group: CohomologyGroup, filtration: Filtration) -> Filtration:
    """Filtration of ``H^k`` by the classes of ``filtration_i ∩ Z^k``."""
    dom = group.algebra.domain
    pieces = {}
    for i, step in zip(filtration.indices, filtration.steps):
        if step.dim and group.cocycles.dim:
            closed = step.intersection(group.cocycles)
        else:
            closed = Subspace.zero(step.ambient_dim, dom)
        pieces[i] = Subspace.span((group.project(v) for v in closed.basis), group.betti, dom)
    return Filtration.build(filtration.direction, pieces, group.betti, dom) if pieces else Filtration(
        filtration.direction, group.betti, 0, (), dom
    )


def shifted_weight(W: Filtration, degree: int) -> Filtration:
    """``W'_i H^r = W_(i-r) H^r``."""
    return W.shifted(degree)


def pure_hodge_failure(F: Filtration, weight: int) -> Optional[str]:
    """Why ``F`` fails to be a pure Hodge structure of the given weight (``None`` if it is one)."""
    try:
        deligne_splitting(Filtration.pure(weight, F.ambient_dim, F.domain), F)
    except NotMHS as exc:
        return str(exc)
    return None
