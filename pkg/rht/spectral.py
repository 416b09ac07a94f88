"""Weight spectral sequence of a filtered DGA up to E_2, and mixed-Hodge-diagram checks.

The increasing weight filtration ``W_j A^k`` is read with the decreasing
convention ``W^p = W_(-p)``, so ``E_0^(p,q) = Gr^W_(-p) A^(p+q)`` and ``d_1``
goes from ``(p, q)`` to ``(p + 1, q)``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from rht.errors import FiltrationNotDStable
from rht.gca import DGAlgebra, DGAMorphism
from rht.hodge import DECREASING, Filtration, pure_hodge_failure
from rht.linalg import (
    Quotient,
    SparseMatrix,
    Subquotient,
    Subspace,
    Vector,
    column_space,
    kernel_basis,
    quotient,
    rank,
    subquotient,
    unit_vector,
)

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


@dataclass(frozen=True)
class GradedPiece:
    """``Gr_j A^k`` with its ``d_0``-cohomology."""

    weight: int
    degree: int
    graded: Subquotient
    cocycles: Subspace
    classes: Quotient

    @property
    def bidegree(self) -> Bidegree:
        return (-self.weight, self.degree + self.weight)

    @property
    def e1_dim(self) -> int:
        return self.classes.dim

    def lift_class(self, coordinates) -> Vector:
        """Vector of ``W_j A^k`` representing an E_1 class."""
        return self.graded.lift(self.cocycles.combination(self.classes.lift(coordinates)))

    def class_of(self, v) -> Vector:
        """E_1 coordinates of a vector of ``W_j A^k`` whose ``d`` lies in ``W_(j-1)``."""
        graded = self.graded.project(v)
        return self.classes.project(self.cocycles.coordinates(graded))


@dataclass(frozen=True)
class SpectralPages:
    algebra: DGAlgebra = field(compare=False, repr=False)
    pieces: Dict[Tuple[int, int], GradedPiece] = field(compare=False)
    d0: Dict[Bidegree, SparseMatrix] = field(compare=False)
    d1: Dict[Bidegree, SparseMatrix] = field(compare=False)
    e2_dims: Dict[Bidegree, int] = field(compare=False)

    @property
    def e0_dims(self) -> Dict[Bidegree, int]:
        return {piece.bidegree: piece.graded.dim for piece in self.pieces.values() if piece.graded.dim}

    @property
    def e1_dims(self) -> Dict[Bidegree, int]:
        return {piece.bidegree: piece.e1_dim for piece in self.pieces.values() if piece.e1_dim}

    @property
    def d0_is_zero(self) -> bool:
        return all(m.is_zero() for m in self.d0.values())

    def e1_row(self, p: int) -> Tuple[int, ...]:
        """E_1 dimensions along fixed ``p`` in increasing ``q``."""
        return tuple(d for (pp, _), d in sorted(self.e1_dims.items()) if pp == p)

    def e2_total(self) -> Dict[int, int]:
        totals: Dict[int, int] = {}
        for (p, q), d in self.e2_dims.items():
            if d:
                totals[p + q] = totals.get(p + q, 0) + d
        return dict(sorted(totals.items()))

    def piece(self, p: int, q: int) -> Optional[GradedPiece]:
        return self.pieces.get((-p, p + q))


def _weights(W: Mapping[int, Filtration]) -> List[int]:
    found = set()
    for f in W.values():
        found.update(f.indices)
    if not found:
        return []
    return list(range(min(found), max(found) + 1))


def check_d_stable(dga: DGAlgebra, W: Mapping[int, Filtration]) -> None:
    for k in range(dga.max_degree + 1):
        if dga.dim(k) == 0 or k not in W:
            continue
        d = dga.d_matrix(k)
        for j in W[k].indices:
            image = W[k].at(j).image(d)
            target = W[k + 1].at(j) if k + 1 in W else Subspace.zero(dga.dim(k + 1), dga.domain)
            if not image.is_subspace_of(target):
                raise FiltrationNotDStable(f"d(W_{j} A^{k}) is not contained in W_{j} A^{k + 1}")


def spectral_E1(dga: DGAlgebra, W: Mapping[int, Filtration]) -> SpectralPages:
    """E_0, E_1 (with ``d_0``, ``d_1``) and E_2 dimensions of the weight spectral sequence."""
    check_d_stable(dga, W)
    dom = dga.domain
    weights = _weights(W)
    top = dga.max_degree

    def step(k: int, j: int) -> Subspace:
        if k in W:
            return W[k].at(j)
        return Subspace.zero(dga.dim(k), dom)

    graded: Dict[Tuple[int, int], Subquotient] = {}
    for k in range(top + 2):
        for j in weights:
            graded[(j, k)] = subquotient(step(k, j), step(k, j - 1))

    d0_maps: Dict[Tuple[int, int], SparseMatrix] = {}
    for (j, k), gr in graded.items():
        target = graded.get((j, k + 1))
        if target is None:
            continue
        columns = [target.project(dga.differential(k, rep)) for rep in gr.representatives]
        d0_maps[(j, k)] = SparseMatrix.from_columns(columns, target.dim, dom)

    pieces: Dict[Tuple[int, int], GradedPiece] = {}
    for (j, k), gr in graded.items():
        if k > top:
            continue
        d_out = d0_maps.get((j, k), SparseMatrix.zeros(0, gr.dim, dom))
        cocycles = kernel_basis(d_out) if gr.dim else Subspace.zero(0, dom)
        incoming = d0_maps.get((j, k - 1))
        boundaries = column_space(incoming) if incoming is not None else Subspace.zero(gr.dim, dom)
        in_cocycles = Subspace.span((cocycles.coordinates(b) for b in boundaries.basis), cocycles.dim, dom)
        pieces[(j, k)] = GradedPiece(j, k, gr, cocycles, quotient(cocycles.dim, in_cocycles))

    d1_maps: Dict[Bidegree, SparseMatrix] = {}
    for (j, k), piece in pieces.items():
        target = pieces.get((j - 1, k + 1))
        if target is None or piece.e1_dim == 0:
            continue
        columns = []
        for c in range(piece.e1_dim):
            x = piece.lift_class(unit_vector(piece.e1_dim, c, dom))
            columns.append(target.class_of(dga.differential(k, x)))
        d1_maps[piece.bidegree] = SparseMatrix.from_columns(columns, target.e1_dim, dom)

    e2: Dict[Bidegree, int] = {}
    for (j, k), piece in pieces.items():
        p, q = piece.bidegree
        out_rank = rank(d1_maps[(p, q)]) if (p, q) in d1_maps else 0
        incoming = d1_maps.get((p - 1, q))
        in_rank = rank(incoming) if incoming is not None else 0
        e2[(p, q)] = piece.e1_dim - out_rank - in_rank

    pages = SpectralPages(
        dga,
        pieces,
        {pieces[key].bidegree: m for key, m in d0_maps.items() if key in pieces},
        d1_maps,
        {pq: d for pq, d in e2.items() if d},
    )
    logger.debug(f"E1 dims {pages.e1_dims}, E2 totals {pages.e2_total()}")
    return pages


@dataclass(frozen=True)
class AxiomFailure:
    axiom: int
    bidegree: Bidegree
    detail: str


@dataclass(frozen=True)
class MHDReport:
    failures: Tuple[AxiomFailure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def axiom_passed(self, axiom: int) -> bool:
        return not any(f.axiom == axiom for f in self.failures)


def _graded_filtration(
    piece: GradedPiece, F: Filtration, W_step: Subspace, indices: Sequence[int]
) -> Dict[int, Subspace]:
    """``F^a`` induced on ``Gr_j A^k`` (coordinates of the graded piece)."""
    out = {}
    for a in indices:
        inside = F.at(a).intersection(W_step)
        out[a] = Subspace.span((piece.graded.project(v) for v in inside.basis), piece.graded.dim, W_step.domain)
    return out


def mhd_check(
    A: DGAlgebra,
    A_W: Mapping[int, Filtration],
    E: DGAlgebra,
    E_W: Mapping[int, Filtration],
    E_F: Mapping[int, Filtration],
    phi: DGAMorphism,
) -> MHDReport:
    """Check the three mixed-Hodge-diagram axioms.

    1. ``phi`` induces an isomorphism of E_1 pages.
    2. ``d_0`` is strictly compatible with the filtration induced by ``F``.
    3. ``F`` induces a pure Hodge structure of weight ``q`` on ``E_1^(p,q)``.
    """
    failures: List[AxiomFailure] = []
    pages_a = spectral_E1(A, A_W)
    pages_e = spectral_E1(E, E_W)
    failures.extend(_e1_isomorphism_failures(A, E, E_W, phi, pages_a, pages_e))
    failures.extend(_strictness_failures(E, E_W, E_F, pages_e))
    failures.extend(_purity_failures(E, E_W, E_F, pages_e))
    report = MHDReport(tuple(failures))
    logger.info(f"Mixed-Hodge-diagram check: {'pass' if report.passed else f'{len(failures)} failures'}")
    return report


def _e1_isomorphism_failures(A, E, E_W, phi, pages_a: SpectralPages, pages_e: SpectralPages) -> List[AxiomFailure]:
    failures = []
    keys = set(pages_a.pieces) | set(pages_e.pieces)
    for key in sorted(keys):
        piece_a, piece_e = pages_a.pieces.get(key), pages_e.pieces.get(key)
        a_dim = piece_a.e1_dim if piece_a is not None else 0
        e_dim = piece_e.e1_dim if piece_e is not None else 0
        bidegree = (-key[0], key[1] + key[0])
        if a_dim != e_dim:
            failures.append(AxiomFailure(1, bidegree, f"E1 dimensions {a_dim} and {e_dim} differ"))
            continue
        if e_dim == 0:
            continue
        j, k = key
        columns = []
        for c in range(a_dim):
            image = phi.apply(k, piece_a.lift_class(unit_vector(a_dim, c, A.domain)))
            if k not in E_W or not E_W[k].at(j).contains(image):
                failures.append(AxiomFailure(1, bidegree, 'phi does not preserve the weight filtration'))
                break
            columns.append(piece_e.class_of(image))
        else:
            if rank(SparseMatrix.from_columns(columns, e_dim, E.domain)) != e_dim:
                failures.append(AxiomFailure(1, bidegree, 'induced map on E1 is not an isomorphism'))
    return failures


def _strictness_failures(E, E_W, E_F, pages: SpectralPages) -> List[AxiomFailure]:
    failures = []
    for (j, k), piece in sorted(pages.pieces.items()):
        target = pages.pieces.get((j, k + 1))
        d0 = pages.d0.get(piece.bidegree)
        if k not in E_F or k + 1 not in E_F or target is None or d0 is None or d0.is_zero():
            continue
        lo = min(E_F[k].lo, E_F[k + 1].lo)
        hi = max(E_F[k].hi, E_F[k + 1].hi)
        indices = range(lo, hi + 2)
        source = _graded_filtration(piece, E_F[k], E_W[k].at(j), indices)
        image_filtration = _graded_filtration(target, E_F[k + 1], E_W[k + 1].at(j), indices)
        image = column_space(d0)
        for a in indices:
            if source[a].image(d0) != image.intersection(image_filtration[a]):
                failures.append(AxiomFailure(2, piece.bidegree, f"d0 is not strict for F^{a}"))
                break
    return failures


def _purity_failures(E, E_W, E_F, pages: SpectralPages) -> List[AxiomFailure]:
    failures = []
    dom = E.domain
    for (j, k), piece in sorted(pages.pieces.items()):
        if piece.e1_dim == 0 or k not in E_F:
            continue
        p, q = piece.bidegree
        steps = {}
        for a, sub in _graded_filtration(piece, E_F[k], E_W[k].at(j), E_F[k].indices).items():
            closed = sub.intersection(piece.cocycles)
            steps[a] = Subspace.span(
                (piece.classes.project(piece.cocycles.coordinates(v)) for v in closed.basis), piece.e1_dim, dom
            )
        problem = pure_hodge_failure(Filtration.build(DECREASING, steps, piece.e1_dim, dom), q)
        if problem is not None:
            failures.append(AxiomFailure(3, (p, q), f"not a pure Hodge structure of weight {q}: {problem}"))
    return failures


def convert_filtrations(W: Mapping[int, Filtration], domain: Any) -> Dict[int, Filtration]:
    return {k: f.convert_to(domain) for k, f in W.items()}
