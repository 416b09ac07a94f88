"""Graded-commutative algebras, differentials and DGA morphisms.

Two concrete algebra kinds share the :class:`DGAlgebra` interface, which is
all cohomology and the tower construction look at: a basis per degree, the
differential as one matrix per degree, and a bilinear product on coordinate
vectors.

* :class:`FreeCDGA` - free graded-commutative algebra on generators with a
  differential given on generators and extended by the Leibniz rule
  ``d(ab) = da*b + (-1)^|a| a*db``.
* :class:`FDGA` - finite-dimensional DGA given by a graded basis, a sparse
  multiplication table and differential matrices.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I

from rht.errors import TruncationError
from rht.linalg import SparseMatrix, Vector, convert_vector, is_zero, unit_vector, zero_vector
from rht.scalars import format_scalar, lift

logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, int], ...]
UNIT: Monomial = ()


@dataclass(frozen=True)
class Generator:
    """Generator of a free algebra; ``bidegree`` is optional Hodge-type bookkeeping."""

    id: int
    name: str
    degree: int
    bidegree: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class GCAElement:
    """Element of a free algebra: sorted ``(monomial, coefficient)`` pairs, no zero coefficients."""

    terms: Tuple[Tuple[Monomial, Any], ...] = ()
    degree: Optional[int] = None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[Monomial, Any]:
        return dict(self.terms)

    def coefficient(self, monomial: Monomial) -> Any:
        for m, c in self.terms:
            if m == monomial:
                return c
        return None


@dataclass(frozen=True)
class DSquaredReport:
    """Outcome of a d^2 = 0 check: each violation is ``(label, formatted d^2 value)``."""

    passed: bool
    violations: Tuple[Tuple[str, str], ...] = ()


class DGAlgebra(ABC):
    """Common surface of free and finite-dimensional DGAs."""

    name: str
    domain: Any

    @property
    @abstractmethod
    def max_degree(self) -> int:
        """Highest degree with a (possibly) nonzero basis."""

    @abstractmethod
    def dim(self, k: int) -> int:
        """Dimension of the degree-k piece."""

    @abstractmethod
    def labels(self, k: int) -> List[str]:
        """Human-readable names of the degree-k basis."""

    @abstractmethod
    def d_matrix(self, k: int) -> SparseMatrix:
        """Differential A^k -> A^(k+1) as a ``dim(k+1) x dim(k)`` matrix."""

    @abstractmethod
    def product(self, k: int, u: Sequence[Any], l: int, v: Sequence[Any]) -> Vector:
        """Product of a degree-k vector and a degree-l vector."""

    @abstractmethod
    def unit(self) -> Vector:
        """The unit as a degree-0 vector."""

    @abstractmethod
    def complexify(self) -> 'DGAlgebra':
        """Same algebra over QQ_I; the original basis is the real form."""

    @abstractmethod
    def check_d_squared(self) -> DSquaredReport:
        """Verify d o d = 0."""

    @cached_property
    def cohomology_cache(self) -> Dict[int, Any]:
        """Cohomology groups of this algebra by degree, filled by :func:`rht.cohomology.cohomology`."""
        return {}

    @property
    def cohomology_top(self) -> int:
        """Highest degree whose cohomology stays inside the stored range."""
        return self.max_degree

    def differential(self, k: int, v: Sequence[Any]) -> Vector:
        return self.d_matrix(k).apply(v)

    def format_vector(self, k: int, v: Sequence[Any]) -> str:
        return format_combination(zip(v, self.labels(k)), self.domain)


def format_combination(pairs: Iterable[Tuple[Any, str]], domain: Any) -> str:
    """``c1*label1 + c2*label2`` in DSL syntax, ``0`` when empty."""
    parts: List[str] = []
    for c, label in pairs:
        if not c:
            continue
        text = format_scalar(c, domain)
        negative = text.startswith('-')
        magnitude = text[1:] if negative else text
        if label == '1':
            body = magnitude
        elif magnitude == '1':
            body = label
        else:
            body = f"{magnitude}*{label}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return ' '.join(parts) if parts else '0'


class FreeCDGA(DGAlgebra):
    """Free graded-commutative DGA truncated above ``truncation_degree``.

    Odd generators square to zero; even generators are polynomial. The
    default truncation is the top exterior degree when every generator is
    odd, otherwise ``max(4, sum of odd degrees)``.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        d_on_generators: Optional[Mapping[int, GCAElement]] = None,
        truncation_degree: Optional[int] = None,
        domain: Any = QQ,
        name: str = '',
    ):
        ids = [g.id for g in generators]
        if len(set(ids)) != len(ids):
            raise ValueError('generator ids must be unique')
        for g in generators:
            if g.degree < 1:
                raise ValueError(f"generator {g.name} must have positive degree")
        self.name = name
        self.domain = domain
        self.generators: Tuple[Generator, ...] = tuple(sorted(generators, key=lambda g: g.id))
        self._by_id = {g.id: g for g in self.generators}
        self._deg = {g.id: g.degree for g in self.generators}
        odd_total = sum(g.degree for g in self.generators if g.degree % 2)
        if truncation_degree is None:
            if all(g.degree % 2 for g in self.generators):
                truncation_degree = odd_total
            else:
                truncation_degree = max(4, odd_total)
        self.truncation_degree = truncation_degree
        self._slices: Dict[int, List[Monomial]] = {}
        self._index: Dict[int, Dict[Monomial, int]] = {}
        self._d_cache: Dict[int, SparseMatrix] = {}
        self.d_on_generators: Dict[int, GCAElement] = {}
        for gid, value in (d_on_generators or {}).items():
            if gid not in self._by_id:
                raise ValueError(f"differential given on unknown generator id {gid}")
            if value.is_zero:
                continue
            expected = self._deg[gid] + 1
            for m, _ in value.terms:
                if self.monomial_degree(m) != expected:
                    raise ValueError(
                        f"d({self._by_id[gid].name}) must have degree {expected}, "
                        f"got a term of degree {self.monomial_degree(m)}"
                    )
            self.d_on_generators[gid] = GCAElement(value.terms, expected)

    # -- elements ---------------------------------------------------------

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self._deg[g] * e for g, e in m)

    def element(self, terms: Mapping[Monomial, Any]) -> GCAElement:
        items = tuple(sorted((m, c) for m, c in terms.items() if c))
        degrees = {self.monomial_degree(m) for m, _ in items}
        return GCAElement(items, degrees.pop() if len(degrees) == 1 else None)

    def gen(self, name: str) -> GCAElement:
        g = self.generator(name)
        return GCAElement(((((g.id, 1),), self.domain.one),), g.degree)

    def one(self) -> GCAElement:
        return GCAElement(((UNIT, self.domain.one),), 0)

    def zero(self, degree: Optional[int] = None) -> GCAElement:
        return GCAElement((), degree)

    def add(self, a: GCAElement, b: GCAElement) -> GCAElement:
        terms = a.as_dict()
        for m, c in b.terms:
            terms[m] = terms.get(m, self.domain.zero) + c
        return self.element(terms)

    def scale(self, c: Any, a: GCAElement) -> GCAElement:
        return self.element({m: c * v for m, v in a.terms})

    def _mono_product(self, m1: Monomial, m2: Monomial) -> Optional[Tuple[int, Monomial]]:
        sign = 1
        exps = dict(m1)
        for h, f in m2:
            dh = self._deg[h]
            if (dh * f) % 2:
                passed = sum(self._deg[g] * e for g, e in m1 if g > h)
                if passed % 2:
                    sign = -sign
            if h in exps:
                if dh % 2:
                    return None
                exps[h] += f
            else:
                exps[h] = f
        return sign, tuple(sorted(exps.items()))

    def multiply(self, a: GCAElement, b: GCAElement) -> GCAElement:
        """Graded-commutative product with Koszul signs."""
        out: Dict[Monomial, Any] = {}
        for m1, c1 in a.terms:
            for m2, c2 in b.terms:
                res = self._mono_product(m1, m2)
                if res is None:
                    continue
                sign, m = res
                c = c1 * c2 if sign > 0 else -(c1 * c2)
                out[m] = out.get(m, self.domain.zero) + c
        result = self.element(out)
        for m, _ in result.terms:
            if self.monomial_degree(m) > self.truncation_degree:
                raise TruncationError(
                    f"product reaches degree {self.monomial_degree(m)}, "
                    f"beyond truncation degree {self.truncation_degree}"
                )
        return result

    def _monomial_element(self, m: Monomial) -> GCAElement:
        return GCAElement(((m, self.domain.one),), self.monomial_degree(m))

    def _d_power(self, gid: int, e: int) -> GCAElement:
        dg = self.d_on_generators.get(gid)
        if dg is None:
            return self.zero()
        if e == 1:
            return dg
        lower = self._monomial_element(((gid, e - 1),))
        return self.scale(self.domain.convert(e), self.multiply(lower, dg))

    def differential_of(self, a: GCAElement) -> GCAElement:
        """Extend ``d_on_generators`` to ``a`` by the graded Leibniz rule."""
        out = self.zero()
        for m, c in a.terms:
            prefix_degree = 0
            for i, (gid, e) in enumerate(m):
                middle = self._d_power(gid, e)
                if not middle.is_zero:
                    prefix = self._monomial_element(m[:i])
                    suffix = self._monomial_element(m[i + 1:])
                    term = self.multiply(self.multiply(prefix, middle), suffix)
                    coefficient = c if prefix_degree % 2 == 0 else -c
                    out = self.add(out, self.scale(coefficient, term))
                prefix_degree += self._deg[gid] * e
        if a.degree is not None and out.degree is None:
            out = GCAElement(out.terms, a.degree + 1)
        return out

    # -- graded pieces ----------------------------------------------------

    def degree_slice(self, k: int) -> List[Monomial]:
        """Monomials of degree k, ordered lexicographically by generator id sequence."""
        if k in self._slices:
            return self._slices[k]
        found: List[Monomial] = []
        gens = self.generators if 0 <= k <= self.truncation_degree else ()

        def walk(i: int, remaining: int, acc: List[Tuple[int, int]]) -> None:
            if remaining == 0:
                found.append(tuple(acc))
                return
            if i == len(gens):
                return
            g = gens[i]
            top = 1 if g.degree % 2 else remaining // g.degree
            for e in range(min(top, remaining // g.degree), -1, -1):
                if e:
                    acc.append((g.id, e))
                walk(i + 1, remaining - e * g.degree, acc)
                if e:
                    acc.pop()

        walk(0, k, [])
        found.sort(key=lambda m: [gid for gid, e in m for _ in range(e)])
        self._slices[k] = found
        self._index[k] = {m: i for i, m in enumerate(found)}
        return found

    @property
    def max_degree(self) -> int:
        return self.truncation_degree

    @property
    def cohomology_top(self) -> int:
        if all(g.degree % 2 for g in self.generators):
            return self.truncation_degree
        return self.truncation_degree - 1

    def dim(self, k: int) -> int:
        return len(self.degree_slice(k)) if k >= 0 else 0

    def format_monomial(self, m: Monomial) -> str:
        if not m:
            return '1'
        parts = []
        for gid, e in m:
            name = self._by_id[gid].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return '*'.join(parts)

    def labels(self, k: int) -> List[str]:
        return [self.format_monomial(m) for m in self.degree_slice(k)]

    def format(self, a: GCAElement) -> str:
        return format_combination(((c, self.format_monomial(m)) for m, c in a.terms), self.domain)

    def vector_of(self, a: GCAElement, k: int) -> Vector:
        self.degree_slice(k)
        index = self._index[k]
        out = list(zero_vector(len(index), self.domain))
        for m, c in a.terms:
            if self.monomial_degree(m) != k:
                raise ValueError(f"element has a term of degree {self.monomial_degree(m)}, expected {k}")
            out[index[m]] = c
        return tuple(out)

    def element_of(self, v: Sequence[Any], k: int) -> GCAElement:
        basis = self.degree_slice(k)
        return GCAElement(tuple((m, c) for m, c in zip(basis, v) if c), k)

    def d_matrix(self, k: int) -> SparseMatrix:
        if k in self._d_cache:
            return self._d_cache[k]
        source = self.degree_slice(k)
        self.degree_slice(k + 1)
        target_index = self._index[k + 1]
        dok = {}
        for j, m in enumerate(source if k < self.truncation_degree else ()):
            for mm, c in self.differential_of(self._monomial_element(m)).terms:
                dok[(target_index[mm], j)] = c
        matrix = SparseMatrix.from_dok(dok, (len(target_index), len(source)), self.domain)
        self._d_cache[k] = matrix
        return matrix

    def product(self, k: int, u: Sequence[Any], l: int, v: Sequence[Any]) -> Vector:
        if is_zero(u) or is_zero(v):
            return zero_vector(self.dim(k + l), self.domain)
        return self.vector_of(self.multiply(self.element_of(u, k), self.element_of(v, l)), k + l)

    def unit(self) -> Vector:
        return (self.domain.one,)

    def complexify(self) -> 'FreeCDGA':
        if self.domain == QQ_I:
            return self
        d = {
            gid: GCAElement(tuple((m, lift(c, self.domain, QQ_I)) for m, c in e.terms), e.degree)
            for gid, e in self.d_on_generators.items()
        }
        return FreeCDGA(self.generators, d, self.truncation_degree, QQ_I, self.name)

    # -- checks -----------------------------------------------------------

    def check_d_squared(self) -> DSquaredReport:
        violations = []
        for g in self.generators:
            dg = self.d_on_generators.get(g.id)
            if dg is None:
                continue
            dd = self.differential_of(dg)
            if not dd.is_zero:
                violations.append((g.name, self.format(dd)))
        if violations:
            logger.debug(f"d^2 fails on {[v[0] for v in violations]} in {self.name or 'cdga'}")
        return DSquaredReport(not violations, tuple(violations))

    def is_minimal(self) -> bool:
        """Free, decomposable differential, and d of each generator uses only earlier generators."""
        for g in self.generators:
            dg = self.d_on_generators.get(g.id)
            if dg is None:
                continue
            for m, _ in dg.terms:
                if sum(e for _, e in m) < 2:
                    return False
                if any(gid >= g.id for gid, _ in m):
                    return False
        return True

    def is_one_minimal(self) -> bool:
        return all(g.degree == 1 for g in self.generators) and self.is_minimal()


class FDGA(DGAlgebra):
    """Finite-dimensional DGA on a graded basis.

    ``mult`` maps ``(k, i, l, j)`` (basis element ``i`` of degree ``k`` times
    basis element ``j`` of degree ``l``) to a sparse vector of
    ``(index, coefficient)`` pairs in degree ``k + l``. The first degree-0
    basis element is the unit; its products are implicit. With
    ``fill_commutative`` missing swapped products are completed by graded
    commutativity.
    """

    def __init__(
        self,
        basis: Mapping[int, Sequence[str]],
        mult: Optional[Mapping[Tuple[int, int, int, int], Sequence[Tuple[int, Any]]]] = None,
        differential: Optional[Mapping[int, SparseMatrix]] = None,
        domain: Any = QQ,
        name: str = '',
        fill_commutative: bool = True,
    ):
        self.name = name
        self.domain = domain
        self.basis: Dict[int, Tuple[str, ...]] = {k: tuple(v) for k, v in basis.items() if v}
        if self.basis and not self.basis.get(0):
            raise ValueError('a nonzero FDGA needs a degree-0 unit')
        if any(k < 0 for k in self.basis):
            raise ValueError('degrees must be non-negative')
        table: Dict[Tuple[int, int, int, int], Tuple[Tuple[int, Any], ...]] = {}
        for key, entries in (mult or {}).items():
            cleaned = tuple(sorted((idx, c) for idx, c in entries if c))
            k, i, l, j = key
            if i >= self.dim(k) or j >= self.dim(l) or any(idx >= self.dim(k + l) for idx, _ in cleaned):
                raise ValueError(f"multiplication entry {key} is out of range")
            table[key] = cleaned
        if fill_commutative:
            for (k, i, l, j), entries in list(table.items()):
                if (l, j, k, i) not in table:
                    sign = -1 if (k * l) % 2 else 1
                    table[(l, j, k, i)] = tuple((idx, c if sign > 0 else -c) for idx, c in entries)
        self.mult = table
        self._d: Dict[int, SparseMatrix] = {}
        for k, m in (differential or {}).items():
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(f"differential in degree {k} has shape {m.shape}, expected "
                                 f"{(self.dim(k + 1), self.dim(k))}")
            if not m.is_zero():
                self._d[k] = m.convert_to(domain)

    @property
    def max_degree(self) -> int:
        return max(self.basis, default=0)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def labels(self, k: int) -> List[str]:
        return list(self.basis.get(k, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def index_of(self, label: str) -> Tuple[int, int]:
        for k, names in self.basis.items():
            if label in names:
                return k, names.index(label)
        raise KeyError(label)

    def basis_vector(self, k: int, i: int) -> Vector:
        return unit_vector(self.dim(k), i, self.domain)

    def d_matrix(self, k: int) -> SparseMatrix:
        if k in self._d:
            return self._d[k]
        return SparseMatrix.zeros(self.dim(k + 1), self.dim(k), self.domain)

    def basis_product(self, k: int, i: int, l: int, j: int) -> Tuple[Tuple[int, Any], ...]:
        if k == 0 and i == 0:
            return ((j, self.domain.one),)
        if l == 0 and j == 0:
            return ((i, self.domain.one),)
        return self.mult.get((k, i, l, j), ())

    def product(self, k: int, u: Sequence[Any], l: int, v: Sequence[Any]) -> Vector:
        out = list(zero_vector(self.dim(k + l), self.domain))
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for idx, c in self.basis_product(k, i, l, j):
                    out[idx] += a * b * c
        return tuple(out)

    def unit(self) -> Vector:
        return unit_vector(self.dim(0), 0, self.domain)

    def complexify(self) -> 'FDGA':
        if self.domain == QQ_I:
            return self
        mult = {
            key: tuple((idx, lift(c, self.domain, QQ_I)) for idx, c in entries) for key, entries in self.mult.items()
        }
        d = {k: m.convert_to(QQ_I) for k, m in self._d.items()}
        return FDGA(self.basis, mult, d, QQ_I, self.name, fill_commutative=False)

    def check_d_squared(self) -> DSquaredReport:
        violations = []
        for k in sorted(self.basis):
            dd = self.d_matrix(k + 1).matmul(self.d_matrix(k))
            for j, column in enumerate(dd.columns()):
                if not is_zero(column):
                    violations.append((self.basis[k][j], self.format_vector(k + 2, column)))
        return DSquaredReport(not violations, tuple(violations))

    def check_axioms(self) -> List[str]:
        """Unit, graded commutativity, associativity and Leibniz on basis elements.

        Returns human-readable failure messages (empty when all hold).
        """
        failures: List[str] = []
        degrees = sorted(self.basis)
        one = self.unit()
        for k in degrees:
            for i in range(self.dim(k)):
                b = self.basis_vector(k, i)
                if self.product(0, one, k, b) != b:
                    failures.append(f"unit fails on {self.basis[k][i]}")
        for k, l in itertools.product(degrees, repeat=2):
            for i in range(self.dim(k)):
                for j in range(self.dim(l)):
                    ab = self.product(k, self.basis_vector(k, i), l, self.basis_vector(l, j))
                    ba = self.product(l, self.basis_vector(l, j), k, self.basis_vector(k, i))
                    expected = ab if (k * l) % 2 == 0 else tuple(-c for c in ab)
                    if ba != expected:
                        failures.append(f"graded commutativity fails on {self.basis[k][i]}*{self.basis[l][j]}")
        for k, l, m in itertools.product(degrees, repeat=3):
            if k + l + m > self.max_degree:
                continue
            for i in range(self.dim(k)):
                a = self.basis_vector(k, i)
                for j in range(self.dim(l)):
                    b = self.basis_vector(l, j)
                    ab = self.product(k, a, l, b)
                    for t in range(self.dim(m)):
                        c = self.basis_vector(m, t)
                        left = self.product(k + l, ab, m, c)
                        right = self.product(k, a, l + m, self.product(l, b, m, c))
                        if left != right:
                            failures.append(
                                f"associativity fails on ({self.basis[k][i]}, {self.basis[l][j]}, {self.basis[m][t]})"
                            )
        for k, l in itertools.product(degrees, repeat=2):
            for i in range(self.dim(k)):
                a = self.basis_vector(k, i)
                for j in range(self.dim(l)):
                    b = self.basis_vector(l, j)
                    lhs = self.differential(k + l, self.product(k, a, l, b))
                    first = self.product(k + 1, self.differential(k, a), l, b)
                    second = self.product(k, a, l + 1, self.differential(l, b))
                    rhs = tuple(x + (y if k % 2 == 0 else -y) for x, y in zip(first, second))
                    if lhs != rhs:
                        failures.append(f"Leibniz rule fails on {self.basis[k][i]}*{self.basis[l][j]}")
        return failures


class DGAMorphism:
    """Degree-preserving linear map between DGAs.

    Either given by matrices per degree or, for a :class:`FreeCDGA` source,
    by generator images, in which case the degree-k matrix is filled in on
    first use from products of the images in the target.
    """

    def __init__(
        self,
        source: DGAlgebra,
        target: DGAlgebra,
        maps: Optional[Mapping[int, SparseMatrix]] = None,
        images: Optional[Mapping[int, Sequence[Any]]] = None,
    ):
        self.source = source
        self.target = target
        self._maps: Dict[int, SparseMatrix] = dict(maps or {})
        self.images: Dict[int, Vector] = {}
        if images is not None:
            if not isinstance(source, FreeCDGA):
                raise TypeError('generator images need a free source algebra')
            for gid, vec in images.items():
                degree = source._deg[gid]
                if len(vec) != target.dim(degree):
                    raise ValueError(f"image of generator {gid} has the wrong length")
                self.images[gid] = tuple(vec)

    @classmethod
    def from_generators(
        cls, source: 'FreeCDGA', target: DGAlgebra, images: Mapping[int, Sequence[Any]]
    ) -> 'DGAMorphism':
        return cls(source, target, images=images)

    @classmethod
    def identity(cls, algebra: DGAlgebra) -> 'DGAMorphism':
        if isinstance(algebra, FreeCDGA):
            return cls.from_generators(
                algebra, algebra, {g.id: algebra.vector_of(algebra.gen(g.name), g.degree) for g in algebra.generators}
            )
        maps = {k: SparseMatrix.identity(algebra.dim(k), algebra.domain) for k in range(algebra.max_degree + 1)}
        return cls(algebra, algebra, maps)

    def _image_of_monomial(self, m: Monomial) -> Vector:
        target = self.target
        current, degree = target.unit(), 0
        for gid, e in m:
            gdeg = self.source._deg[gid]
            image = self.images.get(gid, zero_vector(target.dim(gdeg), target.domain))
            for _ in range(e):
                if is_zero(current):
                    return zero_vector(target.dim(self.source.monomial_degree(m)), target.domain)
                current = target.product(degree, current, gdeg, image)
                degree += gdeg
        return current

    def matrix(self, k: int) -> SparseMatrix:
        if k in self._maps:
            return self._maps[k]
        if self.images or isinstance(self.source, FreeCDGA):
            columns = [self._image_of_monomial(m) for m in self.source.degree_slice(k)]
            matrix = SparseMatrix.from_columns(columns, self.target.dim(k), self.target.domain)
        else:
            matrix = SparseMatrix.zeros(self.target.dim(k), self.source.dim(k), self.target.domain)
        self._maps[k] = matrix
        return matrix

    def apply(self, k: int, v: Sequence[Any]) -> Vector:
        if self.source.domain != self.target.domain:
            v = convert_vector(v, self.source.domain, self.target.domain)
        return self.matrix(k).apply(v)

    def check_chain_map(self, max_degree: Optional[int] = None) -> List[int]:
        """Degrees k where ``d o phi != phi o d`` on A^k."""
        top = max_degree if max_degree is not None else min(self.source.max_degree, self.target.max_degree) - 1
        failing = []
        for k in range(0, top + 1):
            left = self.target.d_matrix(k).matmul(self.matrix(k))
            right = self.matrix(k + 1).matmul(self.source.d_matrix(k).convert_to(self.target.domain))
            if left != right:
                failing.append(k)
        return failing

    def check_multiplicative(self, max_degree: int) -> List[Tuple[str, str]]:
        """Basis pairs of total degree <= max_degree where phi(ab) != phi(a)phi(b)."""
        failing = []
        src, tgt = self.source, self.target
        for k in range(max_degree + 1):
            for l in range(max_degree + 1 - k):
                for i in range(src.dim(k)):
                    a = unit_vector(src.dim(k), i, src.domain)
                    for j in range(src.dim(l)):
                        b = unit_vector(src.dim(l), j, src.domain)
                        lhs = self.apply(k + l, src.product(k, a, l, b))
                        rhs = tgt.product(k, self.apply(k, a), l, self.apply(l, b))
                        if lhs != rhs:
                            failing.append((src.labels(k)[i], src.labels(l)[j]))
        return failing


def multiply(algebra: FreeCDGA, a: GCAElement, b: GCAElement) -> GCAElement:
    return algebra.multiply(a, b)


def differential(algebra: FreeCDGA, a: GCAElement) -> GCAElement:
    return algebra.differential_of(a)


def check_d_squared(algebra: DGAlgebra) -> DSquaredReport:
    return algebra.check_d_squared()


def degree_slice(algebra: FreeCDGA, k: int) -> List[Monomial]:
    return algebra.degree_slice(k)


def apply_morphism(phi: DGAMorphism, a: GCAElement) -> Dict[int, Vector]:
    """Image of an element of a free source, split by degree."""
    source = phi.source
    if not isinstance(source, FreeCDGA):
        raise TypeError('apply_morphism expects a free source algebra')
    by_degree: Dict[int, Dict[Monomial, Any]] = {}
    for m, c in a.terms:
        by_degree.setdefault(source.monomial_degree(m), {})[m] = c
    out = {}
    for k, terms in sorted(by_degree.items()):
        out[k] = phi.apply(k, source.vector_of(source.element(terms), k))
    return out


def exterior_algebra(names: Sequence[str], domain: Any = QQ, name: str = '') -> FreeCDGA:
    """Exterior algebra on degree-1 generators with zero differential."""
    return FreeCDGA([Generator(i, n, 1) for i, n in enumerate(names)], {}, None, domain, name)
