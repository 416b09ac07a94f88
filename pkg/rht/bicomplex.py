"""Finite bicomplexes, the ddbar-lemma and Bott-Chern cohomology."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from sympy.polys.domains import QQ_I

from rht.errors import BicomplexError
from rht.gca import FreeCDGA
from rht.linalg import SparseMatrix, Subspace, column_space, kernel_basis, quotient, rank

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
Images = Mapping[str, Mapping[str, Any]]


@dataclass(frozen=True)
class BottChern:
    dims: Dict[Bidegree, int]
    total_dims: Dict[int, int]
    betti: Dict[int, int]
    natural_map_iso: bool


class Bicomplex:
    """Components ``A^(p,q)`` with ``del`` of type (1, 0) and ``delbar`` of type (0, 1).

    Maps are given on basis labels; a label missing from ``del_images`` or
    ``delbar_images`` is sent to zero. Total degree ``k`` is the direct sum of
    the components with ``p + q = k`` in increasing ``p``.
    """

    def __init__(
        self,
        name: str,
        components: Mapping[Bidegree, Sequence[str]],
        del_images: Images,
        delbar_images: Images,
        domain: Any = QQ_I,
    ):
        self.name = name
        self.domain = domain
        self.components: Dict[Bidegree, Tuple[str, ...]] = {
            pq: tuple(labels) for pq, labels in sorted(components.items()) if labels
        }
        if any(p < 0 or q < 0 for p, q in self.components):
            raise BicomplexError('bidegrees must be non-negative')
        self.type_of: Dict[str, Bidegree] = {}
        for pq, labels in self.components.items():
            for label in labels:
                if label in self.type_of:
                    raise BicomplexError(f"basis element {label} is declared twice")
                self.type_of[label] = pq
        self.del_images = self._checked(del_images, (1, 0), 'del')
        self.delbar_images = self._checked(delbar_images, (0, 1), 'delbar')
        self.validate()

    def _checked(self, images: Images, shift: Bidegree, what: str) -> Dict[str, Dict[str, Any]]:
        out: Dict[str, Dict[str, Any]] = {}
        for source, image in images.items():
            if source not in self.type_of:
                raise BicomplexError(f"{what} of undeclared element {source}")
            p, q = self.type_of[source]
            expected = (p + shift[0], q + shift[1])
            cleaned = {}
            for label, c in image.items():
                if label not in self.type_of:
                    raise BicomplexError(f"{what} {source} uses undeclared element {label}")
                if c and self.type_of[label] != expected:
                    raise BicomplexError(f"{what} {source} has a term {label} of type {self.type_of[label]}, "
                                         f"expected {expected}")
                if c:
                    cleaned[label] = self.domain.convert(c)
            if cleaned:
                out[source] = cleaned
        return out

    @property
    def max_degree(self) -> int:
        return max((p + q for p, q in self.components), default=0)

    def labels(self, k: int) -> List[str]:
        return [label for (p, q), labels in self.components.items() if p + q == k for label in labels]

    def dim(self, k: int) -> int:
        return len(self.labels(k))

    def component_dims(self) -> Dict[Bidegree, int]:
        return {pq: len(labels) for pq, labels in self.components.items()}

    def _matrix(self, images: Mapping[str, Mapping[str, Any]], k: int) -> SparseMatrix:
        sources = self.labels(k)
        row_of = {label: i for i, label in enumerate(self.labels(k + 1))}
        dok = {}
        for j, label in enumerate(sources):
            for target, c in images.get(label, {}).items():
                dok[(row_of[target], j)] = c
        return SparseMatrix.from_dok(dok, (len(row_of), len(sources)), self.domain)

    @cached_property
    def _del(self) -> Dict[int, SparseMatrix]:
        return {k: self._matrix(self.del_images, k) for k in range(-1, self.max_degree + 2)}

    @cached_property
    def _delbar(self) -> Dict[int, SparseMatrix]:
        return {k: self._matrix(self.delbar_images, k) for k in range(-1, self.max_degree + 2)}

    def del_matrix(self, k: int) -> SparseMatrix:
        return self._del.get(k) or self._matrix(self.del_images, k)

    def delbar_matrix(self, k: int) -> SparseMatrix:
        return self._delbar.get(k) or self._matrix(self.delbar_images, k)

    def d_matrix(self, k: int) -> SparseMatrix:
        return self.del_matrix(k) + self.delbar_matrix(k)

    def ddbar_matrix(self, k: int) -> SparseMatrix:
        """``del delbar`` from total degree ``k`` to ``k + 2``."""
        return self.del_matrix(k + 1).matmul(self.delbar_matrix(k))

    def validate(self) -> None:
        for k in range(self.max_degree + 1):
            if not self.del_matrix(k + 1).matmul(self.del_matrix(k)).is_zero():
                raise BicomplexError(f"del^2 is nonzero in degree {k}")
            if not self.delbar_matrix(k + 1).matmul(self.delbar_matrix(k)).is_zero():
                raise BicomplexError(f"delbar^2 is nonzero in degree {k}")
            mixed = self.del_matrix(k + 1).matmul(self.delbar_matrix(k)) + self.delbar_matrix(k + 1).matmul(
                self.del_matrix(k)
            )
            if not mixed.is_zero():
                raise BicomplexError(f"del delbar + delbar del is nonzero in degree {k}")

    def closed(self, k: int) -> Subspace:
        """``ker del ∩ ker delbar`` in total degree ``k``."""
        stacked = self.del_matrix(k).vstack(self.delbar_matrix(k))
        return kernel_basis(stacked)

    def component_subspace(self, p: int, q: int) -> Subspace:
        k = p + q
        labels = self.labels(k)
        members = set(self.components.get((p, q), ()))
        one, zero = self.domain.one, self.domain.zero
        basis = [tuple(one if label == m else zero for label in labels) for m in labels if m in members]
        return Subspace.span(basis, len(labels), self.domain)

    @classmethod
    def from_cdga(cls, cdga: FreeCDGA, name: str = '') -> 'Bicomplex':
        """Split ``d`` of a CDGA with bigraded generators into its (1, 0) and (0, 1) parts.

        Every generator needs a bidegree with ``p + q`` equal to its degree.
        """
        for g in cdga.generators:
            if g.bidegree is None:
                raise BicomplexError(f"generator {g.name} has no bidegree")
            if sum(g.bidegree) != g.degree:
                raise BicomplexError(f"generator {g.name} has bidegree {g.bidegree} but degree {g.degree}")
        bidegree_of = {g.id: g.bidegree for g in cdga.generators}

        def type_of(monomial) -> Bidegree:
            p = sum(bidegree_of[gid][0] * e for gid, e in monomial)
            q = sum(bidegree_of[gid][1] * e for gid, e in monomial)
            return (p, q)

        components: Dict[Bidegree, List[str]] = {}
        del_images: Dict[str, Dict[str, Any]] = {}
        delbar_images: Dict[str, Dict[str, Any]] = {}
        top = cdga.max_degree
        for k in range(top + 1):
            monomials = cdga.degree_slice(k)
            for m in monomials:
                components.setdefault(type_of(m), []).append(cdga.format_monomial(m))
            if k == top:
                continue
            targets = cdga.degree_slice(k + 1)
            for (i, j), c in cdga.d_matrix(k).dok().items():
                (p, q), (r, s) = type_of(monomials[j]), type_of(targets[i])
                source, target = cdga.format_monomial(monomials[j]), cdga.format_monomial(targets[i])
                if (r - p, s - q) == (1, 0):
                    del_images.setdefault(source, {})[target] = c
                elif (r - p, s - q) == (0, 1):
                    delbar_images.setdefault(source, {})[target] = c
                else:
                    raise BicomplexError(f"d({source}) has a term {target} of type {(r, s)}, "
                                         f"which is neither (1, 0) nor (0, 1) away from {(p, q)}")
        return cls(name or cdga.name, components, del_images, delbar_images, cdga.domain)


def ddbar_failures(b: Bicomplex) -> List[int]:
    """Total degrees where ``ker del ∩ ker delbar ∩ im d != im del delbar``."""
    failing = []
    for k in range(b.max_degree + 1):
        exact = column_space(b.d_matrix(k - 1)) if b.dim(k - 1) else Subspace.zero(b.dim(k), b.domain)
        left = b.closed(k).intersection(exact)
        right = column_space(b.ddbar_matrix(k - 2)) if b.dim(k - 2) else Subspace.zero(b.dim(k), b.domain)
        if left != right:
            failing.append(k)
    return failing


def ddbar_check(b: Bicomplex) -> bool:
    failing = ddbar_failures(b)
    if failing:
        logger.info(f"ddbar-lemma fails for {b.name} in degrees {failing}")
    return not failing


def bott_chern(b: Bicomplex) -> BottChern:
    """``(ker del ∩ ker delbar) / im del delbar`` per bidegree, and the comparison with d-cohomology."""
    dom = b.domain
    dims: Dict[Bidegree, int] = {}
    totals: Dict[int, int] = {}
    betti: Dict[int, int] = {}
    iso = True
    for k in range(b.max_degree + 1):
        n = b.dim(k)
        closed = b.closed(k)
        ddbar_image = column_space(b.ddbar_matrix(k - 2)) if b.dim(k - 2) else Subspace.zero(n, dom)
        for p in range(k + 1):
            comp = b.component_subspace(p, k - p)
            if not comp.dim:
                continue
            inside = closed.intersection(comp)
            exact_inside = ddbar_image.intersection(comp)
            if inside.dim - exact_inside.dim:
                dims[(p, k - p)] = inside.dim - exact_inside.dim
        cocycles = kernel_basis(b.d_matrix(k))
        boundaries = column_space(b.d_matrix(k - 1)) if b.dim(k - 1) else Subspace.zero(n, dom)
        inner = Subspace.span((cocycles.coordinates(v) for v in boundaries.basis), cocycles.dim, dom)
        h = quotient(cocycles.dim, inner)
        betti[k] = h.dim
        bc = quotient(closed.dim, Subspace.span((closed.coordinates(v) for v in ddbar_image.basis), closed.dim, dom))
        totals[k] = bc.dim
        images = [h.project(cocycles.coordinates(closed.combination(r))) for r in bc.representatives]
        mapped = rank(SparseMatrix.from_columns(images, h.dim, dom)) if images else 0
        if not (bc.dim == h.dim == mapped):
            iso = False
    result = BottChern(dims, {k: d for k, d in totals.items() if d}, betti, iso)
    logger.debug(f"Bott-Chern dims for {b.name}: {dims}, natural map iso: {iso}")
    return result
