"""Exact sparse linear algebra over QQ and QQ_I.

Row reduction is delegated to sympy's ``DomainMatrix.rref`` (smallest-column
pivoting, reduced row echelon form). Every "choose a basis" step in the
package goes through :class:`Subspace`, whose basis is the RREF of a spanning
set, so equal subspaces have equal representations.

Vectors are plain tuples of domain elements.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from rht.scalars import conjugate, lift

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


def zero_vector(n: int, domain: Any = QQ) -> Vector:
    return (domain.zero,) * n


def unit_vector(n: int, i: int, domain: Any = QQ) -> Vector:
    return tuple(domain.one if j == i else domain.zero for j in range(n))


def is_zero(v: Sequence[Any]) -> bool:
    return not any(v)


def vec_add(u: Sequence[Any], v: Sequence[Any]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Any], v: Sequence[Any]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Any, v: Sequence[Any]) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence[Any], v: Sequence[Any], domain: Any = QQ) -> Any:
    total = domain.zero
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def linear_combination(coefficients: Sequence[Any], vectors: Sequence[Vector], n: int, domain: Any) -> Vector:
    """Sum of ``c_i * v_i``; the zero vector of length ``n`` if empty."""
    out = list(zero_vector(n, domain))
    for c, vec in zip(coefficients, vectors):
        if not c:
            continue
        for j, a in enumerate(vec):
            if a:
                out[j] += c * a
    return tuple(out)


def convert_vector(v: Sequence[Any], source: Any, target: Any) -> Vector:
    return tuple(lift(a, source, target) for a in v)


def conjugate_vector(v: Sequence[Any], domain: Any) -> Vector:
    return tuple(conjugate(a, domain) for a in v)


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix with canonical row-major entry order."""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, int, Any], ...] = ()
    domain: Any = QQ

    def __post_init__(self):
        for i, j, _ in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_dok(cls, dok: Mapping[Tuple[int, int], Any], shape: Tuple[int, int], domain: Any = QQ) -> 'SparseMatrix':
        entries = tuple(sorted((i, j, v) for (i, j), v in dok.items() if v))
        return cls(shape[0], shape[1], entries, domain)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], domain: Any = QQ, cols: Optional[int] = None) -> 'SparseMatrix':
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        dok = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    dok[(i, j)] = domain.convert(v)
        return cls.from_dok(dok, (len(rows), ncols), domain)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: int, domain: Any = QQ) -> 'SparseMatrix':
        dok = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    dok[(i, j)] = v
        return cls.from_dok(dok, (rows, len(columns)), domain)

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: Any = QQ) -> 'SparseMatrix':
        return cls(rows, cols, (), domain)

    @classmethod
    def identity(cls, n: int, domain: Any = QQ) -> 'SparseMatrix':
        return cls(n, n, tuple((i, i, domain.one) for i in range(n)), domain)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def dok(self) -> Dict[Tuple[int, int], Any]:
        return {(i, j): v for i, j, v in self.entries}

    def is_zero(self) -> bool:
        return not self.entries

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix.from_dok(self.dok(), self.shape, self.domain)

    def column(self, j: int) -> Vector:
        out = list(zero_vector(self.rows, self.domain))
        for i, jj, v in self.entries:
            if jj == j:
                out[i] = v
        return tuple(out)

    def columns(self) -> List[Vector]:
        cols = [list(zero_vector(self.rows, self.domain)) for _ in range(self.cols)]
        for i, j, v in self.entries:
            cols[j][i] = v
        return [tuple(c) for c in cols]

    def row_vectors(self) -> List[Vector]:
        rows = [list(zero_vector(self.cols, self.domain)) for _ in range(self.rows)]
        for i, j, v in self.entries:
            rows[i][j] = v
        return [tuple(r) for r in rows]

    def apply(self, v: Sequence[Any]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} applied to a {self.rows}x{self.cols} matrix")
        out = list(zero_vector(self.rows, self.domain))
        for i, j, a in self.entries:
            if v[j]:
                out[i] += a * v[j]
        return tuple(out)

    def matmul(self, other: 'SparseMatrix') -> 'SparseMatrix':
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: Dict[int, List[Tuple[int, Any]]] = {}
        for i, j, v in other.entries:
            by_row.setdefault(i, []).append((j, v))
        dok: Dict[Tuple[int, int], Any] = {}
        for i, k, a in self.entries:
            for j, b in by_row.get(k, ()):
                dok[(i, j)] = dok.get((i, j), self.domain.zero) + a * b
        return SparseMatrix.from_dok(dok, (self.rows, other.cols), self.domain)

    def __add__(self, other: 'SparseMatrix') -> 'SparseMatrix':
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        dok = self.dok()
        for i, j, v in other.entries:
            dok[(i, j)] = dok.get((i, j), self.domain.zero) + v
        return SparseMatrix.from_dok(dok, self.shape, self.domain)

    def scale(self, c: Any) -> 'SparseMatrix':
        return SparseMatrix.from_dok({(i, j): c * v for i, j, v in self.entries}, self.shape, self.domain)

    def transpose(self) -> 'SparseMatrix':
        return SparseMatrix.from_dok({(j, i): v for i, j, v in self.entries}, (self.cols, self.rows), self.domain)

    def convert_to(self, domain: Any) -> 'SparseMatrix':
        if domain == self.domain:
            return self
        return SparseMatrix.from_dok(
            {(i, j): lift(v, self.domain, domain) for i, j, v in self.entries}, self.shape, domain
        )

    def conjugate(self) -> 'SparseMatrix':
        return SparseMatrix.from_dok(
            {(i, j): conjugate(v, self.domain) for i, j, v in self.entries}, self.shape, self.domain
        )

    def hstack(self, other: 'SparseMatrix') -> 'SparseMatrix':
        if self.rows != other.rows:
            raise ValueError('hstack needs equal row counts')
        dok = self.dok()
        dok.update({(i, j + self.cols): v for i, j, v in other.entries})
        return SparseMatrix.from_dok(dok, (self.rows, self.cols + other.cols), self.domain)

    def vstack(self, other: 'SparseMatrix') -> 'SparseMatrix':
        if self.cols != other.cols:
            raise ValueError('vstack needs equal column counts')
        dok = self.dok()
        dok.update({(i + self.rows, j): v for i, j, v in other.entries})
        return SparseMatrix.from_dok(dok, (self.rows + other.rows, self.cols), self.domain)


def _rref(m: SparseMatrix) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Nonzero RREF rows and pivot columns of ``m``."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return [], ()
    reduced, pivots = m.to_domain_matrix().rref()
    dok = reduced.to_dok()
    rows = [list(zero_vector(m.cols, m.domain)) for _ in pivots]
    for (i, j), v in dok.items():
        if i < len(pivots):
            rows[i][j] = lift(v, reduced.domain, m.domain)
    return [tuple(r) for r in rows], tuple(pivots)


def rank(m: SparseMatrix) -> int:
    """Rank over the matrix's scalar field."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    return m.to_domain_matrix().rank()


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``domain^ambient_dim`` stored by its RREF basis.

    The basis rows have leading ones at ``pivots`` and zeros in every other
    pivot column, so membership, coordinates and equality are canonical.
    """

    ambient_dim: int
    basis: Tuple[Vector, ...] = ()
    pivots: Tuple[int, ...] = ()
    domain: Any = field(default=QQ)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Any]], ambient_dim: int, domain: Any = QQ) -> 'Subspace':
        rows = [tuple(v) for v in vectors if any(v)]
        if not rows:
            return cls(ambient_dim, (), (), domain)
        reduced, pivots = _rref(SparseMatrix.from_rows(rows, domain, cols=ambient_dim))
        return cls(ambient_dim, tuple(reduced), pivots, domain)

    @classmethod
    def zero(cls, ambient_dim: int, domain: Any = QQ) -> 'Subspace':
        return cls(ambient_dim, (), (), domain)

    @classmethod
    def full(cls, ambient_dim: int, domain: Any = QQ) -> 'Subspace':
        basis = tuple(unit_vector(ambient_dim, i, domain) for i in range(ambient_dim))
        return cls(ambient_dim, basis, tuple(range(ambient_dim)), domain)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Any]) -> Vector:
        """Remainder of ``v`` after clearing the pivot columns; zero iff ``v`` is in the span."""
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c:
                for j, a in enumerate(row):
                    if a:
                        w[j] -= c * a
        return tuple(w)

    def contains(self, v: Sequence[Any]) -> bool:
        return is_zero(self.reduce(v))

    def coordinates(self, v: Sequence[Any]) -> Vector:
        """Coordinates of a member ``v`` against the RREF basis."""
        if not self.contains(v):
            raise ValueError('vector is not in the subspace')
        return tuple(v[p] for p in self.pivots)

    def combination(self, coordinates: Sequence[Any]) -> Vector:
        return linear_combination(coordinates, self.basis, self.ambient_dim, self.domain)

    def is_subspace_of(self, other: 'Subspace') -> bool:
        return all(other.contains(b) for b in self.basis)

    def sum(self, *others: 'Subspace') -> 'Subspace':
        vectors = list(self.basis)
        for o in others:
            vectors.extend(o.basis)
        return Subspace.span(vectors, self.ambient_dim, self.domain)

    def annihilator(self) -> 'Subspace':
        """Vectors ``w`` with ``dot(b, w) = 0`` for every basis row ``b`` (bilinear, no conjugation)."""
        if not self.basis:
            return Subspace.full(self.ambient_dim, self.domain)
        return kernel_basis(SparseMatrix.from_rows(self.basis, self.domain, cols=self.ambient_dim))

    def intersection(self, *others: 'Subspace') -> 'Subspace':
        if any(o.dim == 0 for o in others) or self.dim == 0:
            return Subspace.zero(self.ambient_dim, self.domain)
        annihilators = [self.annihilator()] + [o.annihilator() for o in others]
        rows: List[Vector] = []
        for a in annihilators:
            rows.extend(a.basis)
        if not rows:
            return Subspace.full(self.ambient_dim, self.domain)
        return kernel_basis(SparseMatrix.from_rows(rows, self.domain, cols=self.ambient_dim))

    def conjugate(self) -> 'Subspace':
        return Subspace.span(
            (conjugate_vector(b, self.domain) for b in self.basis), self.ambient_dim, self.domain
        )

    def convert_to(self, domain: Any) -> 'Subspace':
        if domain == self.domain:
            return self
        return Subspace(
            self.ambient_dim,
            tuple(convert_vector(b, self.domain, domain) for b in self.basis),
            self.pivots,
            domain,
        )

    def image(self, m: SparseMatrix) -> 'Subspace':
        return Subspace.span((m.apply(b) for b in self.basis), m.rows, m.domain)


def kernel_basis(m: SparseMatrix) -> Subspace:
    """RREF basis of the null space of ``m``."""
    reduced, pivots = _rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vectors = []
    for f in free:
        v = list(zero_vector(m.cols, m.domain))
        v[f] = m.domain.one
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        vectors.append(tuple(v))
    return Subspace.span(vectors, m.cols, m.domain)


def column_space(m: SparseMatrix) -> Subspace:
    return Subspace.span(m.columns(), m.rows, m.domain)


def solve(m: SparseMatrix, b: Sequence[Any]) -> Optional[Vector]:
    """Solve ``m x = b`` exactly; free variables are set to zero. ``None`` if inconsistent."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side of length {len(b)} for a matrix with {m.rows} rows")
    if m.rows == 0:
        return zero_vector(m.cols, m.domain)
    if m.cols == 0:
        return () if is_zero(b) else None
    augmented = m.hstack(SparseMatrix.from_columns([tuple(b)], m.rows, m.domain))
    reduced, pivots = _rref(augmented)
    if m.cols in pivots:
        return None
    x = list(zero_vector(m.cols, m.domain))
    for row, p in zip(reduced, pivots):
        x[p] = row[m.cols]
    return tuple(x)


@dataclass(frozen=True)
class Quotient:
    """``domain^ambient_dim / sub`` with standard-basis representatives at the non-pivot columns."""

    sub: Subspace
    free: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def representatives(self) -> List[Vector]:
        n, K = self.sub.ambient_dim, self.sub.domain
        return [unit_vector(n, j, K) for j in self.free]

    def project(self, v: Sequence[Any]) -> Vector:
        w = self.sub.reduce(v)
        return tuple(w[j] for j in self.free)

    def lift(self, coordinates: Sequence[Any]) -> Vector:
        n, K = self.sub.ambient_dim, self.sub.domain
        out = list(zero_vector(n, K))
        for j, c in zip(self.free, coordinates):
            out[j] = c
        return tuple(out)


def quotient(ambient_dim: int, sub: Subspace) -> Quotient:
    if sub.ambient_dim != ambient_dim:
        raise ValueError(f"subspace lives in dimension {sub.ambient_dim}, not {ambient_dim}")
    pivots = set(sub.pivots)
    return Quotient(sub, tuple(j for j in range(ambient_dim) if j not in pivots))


@dataclass(frozen=True)
class Subquotient:
    """``T / S`` for ``S ⊆ T`` with representatives taken from the RREF basis of ``T``."""

    outer: Subspace
    inner: Subspace
    representatives: Tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def project(self, v: Sequence[Any]) -> Vector:
        """Coordinates of the class of ``v`` (which must lie in ``T``)."""
        columns = list(self.inner.basis) + list(self.representatives)
        if not columns:
            if not is_zero(v):
                raise ValueError('vector is not in the outer subspace')
            return ()
        x = solve(SparseMatrix.from_columns(columns, self.outer.ambient_dim, self.outer.domain), v)
        if x is None:
            raise ValueError('vector is not in the outer subspace')
        return x[self.inner.dim:]

    def lift(self, coordinates: Sequence[Any]) -> Vector:
        return linear_combination(coordinates, self.representatives, self.outer.ambient_dim, self.outer.domain)


def subquotient(outer: Subspace, inner: Subspace) -> Subquotient:
    if not inner.is_subspace_of(outer):
        raise ValueError('inner subspace is not contained in the outer one')
    kept: List[Vector] = []
    current = inner
    for b in outer.basis:
        if not current.contains(b):
            kept.append(b)
            current = current.sum(Subspace.span([b], outer.ambient_dim, outer.domain))
    return Subquotient(outer, inner, tuple(kept))
