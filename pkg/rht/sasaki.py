"""Basic cohomology rings, the model ``A = H_B ⊗ ∧<y>`` with ``dy = omega`` and its Hodge data.

A basic ring is a real graded-commutative algebra with zero differential,
a Hodge decomposition ``H^(p,q)`` of its complexification and a real class
``omega`` of type (1, 1). The model doubles the ring: degree ``k`` holds the
ring in degree ``k`` followed by ``H^(k-1) y``.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I

from rht.bigraded import BigradedTower, bigraded_tower
from rht.cohomology import betti_numbers, cohomology
from rht.errors import NotBigradeable, NotMHS, NotOneFormal, ValidationFailed
from rht.formality import FormalityReport, QuadraticPresentation, one_formal, quadratic_presentation
from rht.gca import FDGA, DGAMorphism, FreeCDGA, GCAElement, exterior_algebra
from rht.hodge import (
    DECREASING,
    INCREASING,
    Bigrading,
    Filtration,
    deligne_splitting,
    induced_filtration,
    shifted_weight,
)
from rht.linalg import (
    SparseMatrix,
    Subspace,
    Vector,
    is_zero,
    quotient,
    rank,
    unit_vector,
    zero_vector,
)
from rht.malcev import MalcevSummary, dualize, malcev_summary
from rht.minimal import Tower, build_tower
from rht.scalars import is_real

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
Polynomial = Mapping[Tuple[str, ...], Any]

PASS, FAIL, SKIPPED = 'pass', 'fail', 'skipped'


@dataclass(frozen=True, eq=False)
class BasicRing:
    """Basic cohomology ring with its Hodge decomposition and the class omega.

    ``components`` maps ``(p, q)`` to a subspace of the complexified degree
    ``p + q`` piece of ``ring``; ``omega`` is a degree-2 vector over ``QQ_I``.
    """

    name: str
    n: int
    ring: FDGA
    components: Dict[Bidegree, Subspace]
    omega: Vector
    by_construction: bool = False

    @property
    def top_degree(self) -> int:
        return self.ring.max_degree

    @property
    def complex_ring(self) -> FDGA:
        return self.ring.complexify()

    def component(self, p: int, q: int) -> Subspace:
        return self.components.get((p, q), Subspace.zero(self.ring.dim(p + q), QQ_I))

    def dims(self) -> Dict[Bidegree, int]:
        return {pq: s.dim for pq, s in self.components.items() if s.dim}

    @classmethod
    def from_exterior(
        cls,
        name: str,
        n: int,
        generators: Sequence[str],
        relations: Sequence[Polynomial] = (),
        h1_components: Optional[Mapping[Bidegree, Sequence[Mapping[str, Any]]]] = None,
        omega: Optional[Polynomial] = None,
    ) -> 'BasicRing':
        """Exterior algebra on degree-1 classes modulo homogeneous relations.

        Degree-1 Hodge components are given as linear combinations of the
        generators and extended multiplicatively; ``omega`` is a quadratic
        polynomial in the generators.
        """
        real = exterior_algebra(generators, QQ, name)
        cplx = exterior_algebra(generators, QQ_I, name)
        rel_elements = []
        for r in relations:
            element = _polynomial(real, r)
            if element.degree is None or element.degree < 2:
                raise ValidationFailed(f"relation {_describe(r)} of {name} must be homogeneous of degree >= 2")
            rel_elements.append(element)
        quotients = {}
        basis: Dict[int, List[str]] = {}
        for k in range(len(generators) + 1):
            ideal = []
            for r in rel_elements:
                if r.degree > k:
                    continue
                for m in real.degree_slice(k - r.degree):
                    product = real.multiply(r, real.element({m: QQ.one}))
                    ideal.append(real.vector_of(product, k))
            q = quotient(real.dim(k), Subspace.span(ideal, real.dim(k), QQ))
            if q.dim:
                quotients[k] = q
                labels = real.labels(k)
                basis[k] = [labels[j] for j in q.free]
        mult: Dict[Tuple[int, int, int, int], List[Tuple[int, Any]]] = {}
        for k, qk in quotients.items():
            for l, ql in quotients.items():
                if k == 0 or l == 0 or k + l not in quotients:
                    continue
                for i, a in enumerate(qk.representatives):
                    for j, b in enumerate(ql.representatives):
                        coords = quotients[k + l].project(real.product(k, a, l, b))
                        entries = [(idx, c) for idx, c in enumerate(coords) if c]
                        if entries:
                            mult[(k, i, l, j)] = entries
        ring = FDGA(basis, mult, {}, QQ, name, fill_commutative=False)

        complex_quotients = {k: quotient(q.sub.ambient_dim, q.sub.convert_to(QQ_I)) for k, q in quotients.items()}
        degree_one: Dict[Bidegree, Subspace] = {}
        for pq, vectors in (h1_components or {}).items():
            if sum(pq) != 1:
                raise ValidationFailed(f"component {pq} of {name} is declared on degree-1 classes")
            projected = []
            for combination in vectors:
                element = _polynomial(cplx, {(g,): c for g, c in combination.items()})
                projected.append(complex_quotients[1].project(cplx.vector_of(element, 1)))
            degree_one[pq] = Subspace.span(projected, ring.dim(1), QQ_I)
        components = _multiplicative_components(ring, degree_one)
        omega_vector = zero_vector(ring.dim(2), QQ_I)
        if omega is not None and 2 in complex_quotients:
            omega_vector = complex_quotients[2].project(cplx.vector_of(_polynomial(cplx, omega), 2))
        logger.debug(f"Basic ring {name}: dims {[ring.dim(k) for k in range(ring.max_degree + 1)]}")
        return cls(name, n, ring, components, omega_vector, by_construction=True)

    @classmethod
    def from_table(
        cls,
        name: str,
        n: int,
        basis: Mapping[int, Sequence[str]],
        mult: Mapping[Tuple[str, str], Mapping[str, Any]],
        components: Mapping[Bidegree, Sequence[Mapping[str, Any]]],
        omega: Mapping[str, Any],
    ) -> 'BasicRing':
        """Explicit basis (unit first in degree 0), multiplication table and per-degree components."""
        index: Dict[str, Tuple[int, int]] = {}
        for k, labels in basis.items():
            for i, label in enumerate(labels):
                index[label] = (k, i)
        table: Dict[Tuple[int, int, int, int], List[Tuple[int, Any]]] = {}
        for (a, b), image in mult.items():
            (k, i), (l, j) = _lookup(index, a, name), _lookup(index, b, name)
            entries = []
            for label, c in image.items():
                degree, idx = _lookup(index, label, name)
                if degree != k + l:
                    raise ValidationFailed(f"product {a}*{b} in {name} has a term {label} of degree {degree}")
                entries.append((idx, QQ.convert(c)))
            table[(k, i, l, j)] = entries
        if not basis.get(0):
            raise ValidationFailed(f"{name} needs a degree-0 unit in its basis")
        ring = FDGA(basis, table, {}, QQ, name)
        comps: Dict[Bidegree, Subspace] = {}
        for pq, vectors in components.items():
            k = sum(pq)
            comps[pq] = Subspace.span(
                (_table_vector(index, v, k, ring.dim(k), name) for v in vectors), ring.dim(k), QQ_I
            )
        if ring.dim(0):
            comps.setdefault((0, 0), Subspace.full(ring.dim(0), QQ_I))
        omega_vector = _table_vector(index, omega, 2, ring.dim(2), name) if ring.dim(2) else ()
        return cls(name, n, ring, comps, omega_vector)

    @classmethod
    def heisenberg(cls, n: int) -> 'BasicRing':
        """Exterior ring on ``x1..x2n`` with ``z_k = x_(2k-1) + i x_(2k)`` of type (1, 0)."""
        names = [f"x{i + 1}" for i in range(2 * n)]
        i = QQ_I(0, 1)
        h10 = [{names[2 * k]: QQ_I.one, names[2 * k + 1]: i} for k in range(n)]
        h01 = [{names[2 * k]: QQ_I.one, names[2 * k + 1]: -i} for k in range(n)]
        omega = {(names[2 * k], names[2 * k + 1]): 1 for k in range(n)}
        return cls.from_exterior(f"heis{2 * n + 1}", n, names, (), {(1, 0): h10, (0, 1): h01}, omega)

    @classmethod
    def surface_product(cls, genera: Sequence[int]) -> 'BasicRing':
        """Cohomology ring of a product of closed orientable surfaces, omega the sum of area classes."""
        if not genera or any(g < 1 for g in genera):
            raise ValidationFailed('surface genera must be positive')
        names: List[str] = []
        relations: List[Dict[Tuple[str, ...], Any]] = []
        h10, h01 = [], []
        omega: Dict[Tuple[str, ...], Any] = {}
        i = QQ_I(0, 1)
        for s, genus in enumerate(genera, start=1):
            a = [f"a{s}_{k + 1}" for k in range(genus)]
            b = [f"b{s}_{k + 1}" for k in range(genus)]
            names.extend(x for pair in zip(a, b) for x in pair)
            for k in range(genus):
                h10.append({a[k]: QQ_I.one, b[k]: i})
                h01.append({a[k]: QQ_I.one, b[k]: -i})
                if k:
                    relations.append({(a[k], b[k]): 1, (a[0], b[0]): -1})
                for m in range(k + 1, genus):
                    relations.extend([{(a[k], a[m]): 1}, {(a[k], b[m]): 1}, {(b[k], a[m]): 1}, {(b[k], b[m]): 1}])
            omega[(a[0], b[0])] = 1
        name = 'surfaces' + ''.join(f"_{g}" for g in genera)
        return cls.from_exterior(name, len(genera), names, relations, {(1, 0): h10, (0, 1): h01}, omega)


def _polynomial(algebra: FreeCDGA, poly: Polynomial) -> GCAElement:
    out = algebra.zero()
    for factors, c in poly.items():
        term = algebra.one()
        for name in factors:
            term = algebra.multiply(term, algebra.gen(name))
        out = algebra.add(out, algebra.scale(algebra.domain.convert(c), term))
    return out


def _describe(poly: Polynomial) -> str:
    return ' + '.join(f"{c}*{'*'.join(f)}" for f, c in poly.items())


def _lookup(index: Mapping[str, Tuple[int, int]], label: str, name: str) -> Tuple[int, int]:
    try:
        return index[label]
    except KeyError:
        raise ValidationFailed(f"{label} is not a basis element of {name}") from None


def _table_vector(index, combination: Mapping[str, Any], degree: int, dim: int, name: str) -> Vector:
    out = list(zero_vector(dim, QQ_I))
    for label, c in combination.items():
        k, i = _lookup(index, label, name)
        if k != degree:
            raise ValidationFailed(f"{label} has degree {k}, expected {degree}")
        out[i] += QQ_I.convert(c)
    return tuple(out)


def _multiplicative_components(ring: FDGA, degree_one: Mapping[Bidegree, Subspace]) -> Dict[Bidegree, Subspace]:
    """``H^(p,q)`` spanned by products of ``p`` classes of type (1, 0) and ``q`` of type (0, 1)."""
    cring = ring.complexify()
    comps: Dict[Bidegree, Subspace] = {(0, 0): Subspace.full(ring.dim(0), QQ_I)}
    for k in range(1, ring.max_degree + 1):
        for p in range(k + 1):
            q = k - p
            vectors = []
            for (step, prev) in (((1, 0), (p - 1, q)), ((0, 1), (p, q - 1))):
                if prev not in comps or step not in degree_one:
                    continue
                for u in comps[prev].basis:
                    for v in degree_one[step].basis:
                        vectors.append(cring.product(k - 1, u, 1, v))
            sub = Subspace.span(vectors, ring.dim(k), QQ_I)
            if sub.dim:
                comps[(p, q)] = sub
    return comps


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ''


@dataclass(frozen=True)
class RingValidation:
    checks: Tuple[Check, ...]
    warnings: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def status(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)


def _power(cring: FDGA, omega: Vector, power: int) -> Vector:
    value, degree = cring.unit(), 0
    for _ in range(power):
        value = cring.product(degree, value, 2, omega)
        degree += 2
    return value


def validate_basic_ring(r: BasicRing) -> RingValidation:
    """Structural checks on a basic ring: the properties the model construction relies on."""
    checks: List[Check] = []
    warnings: List[str] = []
    ring, n = r.ring, r.n

    def add(name: str, ok: Optional[bool], detail: str = '') -> None:
        checks.append(Check(name, SKIPPED if ok is None else PASS if ok else FAIL, detail))

    add('n_positive', n >= 1, f"n = {n}")
    add('connected', ring.dim(0) == 1, f"dim H^0 = {ring.dim(0)}")
    add('top_degree', r.top_degree <= 2 * n, f"top degree {r.top_degree}, 2n = {2 * n}")
    if r.by_construction:
        add('algebra_axioms', True, 'quotient of an exterior algebra')
    else:
        problems = ring.check_axioms()
        add('algebra_axioms', not problems, problems[0] if problems else '')

    bad_degrees = []
    for k in range(r.top_degree + 1):
        split = Bigrading.of({pq: s for pq, s in r.components.items() if sum(pq) == k}, ring.dim(k), QQ_I)
        if not split.is_direct_and_spanning():
            bad_degrees.append(k)
    add('decomposition', not bad_degrees, f"degrees {bad_degrees} are not split" if bad_degrees else '')

    asymmetric = [pq for pq, s in r.components.items() if s.conjugate() != r.component(pq[1], pq[0])]
    detail = f"conj H^{asymmetric[0]} != H^{asymmetric[0][::-1]}" if asymmetric else ''
    add('conjugation_symmetry', not asymmetric, detail)

    omega = r.omega
    omega_present = bool(omega) and not is_zero(omega)
    add('omega_real', all(is_real(c, QQ_I) for c in omega), '')
    add('omega_type_11', omega_present and r.component(1, 1).contains(omega), '')

    cring = r.complex_ring
    if n >= 2:
        images = [cring.product(1, unit_vector(ring.dim(1), i, QQ_I), 2, omega) for i in range(ring.dim(1))]
        injective = rank(SparseMatrix.from_columns(images, ring.dim(3), QQ_I)) == ring.dim(1) if images else True
        add('lefschetz_injective', injective, 'omega: H^1 -> H^3')
    else:
        add('lefschetz_injective', None, 'needs n >= 2')
    top_power = _power(cring, omega, n) if omega_present and ring.dim(2 * n) else ()
    add('omega_power_nonzero', bool(top_power) and not is_zero(top_power), f"omega^{n}")

    betti = [ring.dim(k) for k in range(2 * n + 1)]
    if betti[-1] != 1 or any(betti[k] != betti[2 * n - k] for k in range(2 * n + 1)):
        warnings.append(f"ring dimensions {betti} do not satisfy Poincare duality in dimension {2 * n}")
    report = RingValidation(tuple(checks), tuple(warnings))
    for w in warnings:
        logger.warning(f"{r.name}: {w}")
    logger.info(f"Basic ring {r.name}: {'valid' if report.passed else f'{len(report.failures)} failed checks'}")
    return report


@dataclass(frozen=True, eq=False)
class SasakiModel:
    """``A = H_B ⊗ ∧<y>`` with its bigrading and the filtrations ``W`` (over QQ) and ``F`` (over QQ_I)."""

    ring: BasicRing
    algebra: FDGA
    complex: FDGA
    bigrading: Dict[int, Bigrading] = field(repr=False)
    weight: Dict[int, Filtration] = field(repr=False)
    hodge: Dict[int, Filtration] = field(repr=False)

    @property
    def n(self) -> int:
        return self.ring.n


def build_model(r: BasicRing, validation: Optional[RingValidation] = None) -> SasakiModel:
    """Assemble the model of a validated basic ring; raises :class:`ValidationFailed` otherwise.

    Pass ``validation`` when the ring was already checked to skip validating it again.
    """
    if validation is None:
        validation = validate_basic_ring(r)
    if not validation.passed:
        first = validation.failures[0]
        detail = f": {first.detail}" if first.detail else ''
        raise ValidationFailed(f"basic ring {r.name} fails {first.name}{detail}", list(validation.failures))
    ring = r.ring
    top = ring.max_degree + 1
    unit_label = ring.labels(0)[0]

    def y_name(label: str) -> str:
        return 'y' if label == unit_label else f"{label}*y"

    basis = {k: ring.labels(k) + [y_name(s) for s in ring.labels(k - 1)] for k in range(top + 1)}
    offset = {k: ring.dim(k) for k in range(top + 1)}
    mult: Dict[Tuple[int, int, int, int], List[Tuple[int, Any]]] = {}
    for k in range(top + 1):
        for l in range(top + 1 - k):
            for i in range(len(basis[k])):
                for j in range(len(basis[l])):
                    if (k, i) == (0, 0) or (l, j) == (0, 0):
                        continue
                    entries = _model_product(ring, offset, k, i, l, j)
                    if entries:
                        mult[(k, i, l, j)] = entries
    omega_real = tuple(c.x for c in r.omega)
    differential = {}
    for k in range(top):
        dok = {}
        for j in range(ring.dim(k - 1)):
            image = ring.product(k - 1, unit_vector(ring.dim(k - 1), j, QQ), 2, omega_real)
            sign = -1 if (k - 1) % 2 else 1
            for idx, c in enumerate(image):
                if c:
                    dok[(idx, offset[k] + j)] = c if sign > 0 else -c
        differential[k] = SparseMatrix.from_dok(dok, (len(basis[k + 1]), len(basis[k])), QQ)
    algebra = FDGA(basis, mult, differential, QQ, f"A({r.name})", fill_commutative=False)
    complex_algebra = algebra.complexify()

    bigradings: Dict[int, Bigrading] = {}
    weights: Dict[int, Filtration] = {}
    hodge: Dict[int, Filtration] = {}
    for k in range(top + 1):
        dim = len(basis[k])
        parts: Dict[Bidegree, List[Vector]] = {}
        for (p, q), sub in r.components.items():
            if p + q == k:
                parts.setdefault((p, q), []).extend(_embed(b, 0, dim) for b in sub.basis)
            if p + q == k - 1:
                parts.setdefault((p + 1, q + 1), []).extend(_embed(b, offset[k], dim) for b in sub.basis)
        bigradings[k] = Bigrading.of({pq: Subspace.span(vs, dim, QQ_I) for pq, vs in parts.items()}, dim, QQ_I)
        basic = Subspace.span((unit_vector(dim, i, QQ) for i in range(offset[k])), dim, QQ)
        weights[k] = Filtration.build(INCREASING, {0: basic, 1: Subspace.full(dim, QQ)}, dim, QQ)
        max_p = max((p for p, _ in bigradings[k].bidegrees()), default=0)
        hodge[k] = Filtration.build(
            DECREASING,
            {a: bigradings[k].sum_where(lambda p, q, a=a: p >= a) for a in range(0, max_p + 2)},
            dim,
            QQ_I,
        )
    model = SasakiModel(r, algebra, complex_algebra, bigradings, weights, hodge)
    logger.info(f"Built model {algebra.name}: dims {[len(basis[k]) for k in range(top + 1)]}")
    return model


def _embed(v: Vector, offset: int, dim: int) -> Vector:
    out = list(zero_vector(dim, QQ_I))
    out[offset:offset + len(v)] = v
    return tuple(out)


def _model_product(ring: FDGA, offset: Mapping[int, int], k: int, i: int, l: int, j: int) -> List[Tuple[int, Any]]:
    """Basis product in the model: ``(a y) b = (-1)^|b| (ab) y`` and ``(a y)(b y) = 0``."""
    a_is_y, b_is_y = i >= offset[k], j >= offset[l]
    if a_is_y and b_is_y:
        return []
    a_deg = k - 1 if a_is_y else k
    b_deg = l - 1 if b_is_y else l
    a_idx = i - offset[k] if a_is_y else i
    b_idx = j - offset[l] if b_is_y else j
    entries = ring.basis_product(a_deg, a_idx, b_deg, b_idx)
    if not (a_is_y or b_is_y):
        return list(entries)
    sign = -1 if a_is_y and b_deg % 2 else 1
    shift = offset[k + l]
    return [(shift + idx, c if sign > 0 else -c) for idx, c in entries]


@dataclass(frozen=True)
class HodgeSplit:
    degree: int
    dims: Dict[Bidegree, int]
    bigrading: Optional[Bigrading] = field(default=None, compare=False, repr=False)
    error: Optional[str] = None


@dataclass(frozen=True)
class HodgeSplitReport:
    n: int
    splits: Tuple[HodgeSplit, ...]
    h1_ok: bool
    top_ok: bool
    h2_ok: Optional[bool]
    h2_types: Tuple[Bidegree, ...]

    @property
    def passed(self) -> bool:
        return self.h1_ok and self.top_ok and self.h2_ok is not False

    def split(self, degree: int) -> HodgeSplit:
        return self.splits[degree]

    def components(self, degree: int) -> Dict[Bidegree, Subspace]:
        b = self.splits[degree].bigrading
        return dict(b.components) if b is not None else {}


def hodge_split_check(model: SasakiModel) -> HodgeSplitReport:
    """Deligne splitting of the mixed Hodge structure on every ``H^r`` of the model."""
    n = model.n
    E = model.complex
    splits = []
    for r in range(2 * n + 2):
        group = cohomology(E, r)
        W = shifted_weight(induced_filtration(group, model.weight[r].convert_to(QQ_I)), r)
        F = induced_filtration(group, model.hodge[r])
        try:
            b = deligne_splitting(W, F)
            splits.append(HodgeSplit(r, b.dims(), b))
        except NotMHS as exc:
            splits.append(HodgeSplit(r, {}, None, str(exc)))
    h1_types = set(splits[1].dims)
    h1_ok = splits[1].error is None and h1_types <= {(1, 0), (0, 1)}
    top = splits[2 * n + 1]
    top_ok = top.error is None and set(top.dims) <= {(n + 1, n + 1)}
    h2_types = tuple(sorted(splits[2].dims))
    h2_ok = (splits[2].error is None and set(h2_types) <= {(2, 0), (1, 1), (0, 2)}) if n >= 2 else None
    report = HodgeSplitReport(n, tuple(splits), h1_ok, top_ok, h2_ok, h2_types)
    logger.info(f"Hodge split of {E.name}: H^1 {splits[1].dims}, H^2 {splits[2].dims}, H^{2 * n + 1} {top.dims}")
    return report


@dataclass(frozen=True)
class PipelineReport:
    ring: str
    n: int
    validation: RingValidation
    betti: Tuple[int, ...]
    tower: Tower = field(repr=False)
    formality: FormalityReport
    hodge: HodgeSplitReport
    bigraded: Optional[BigradedTower] = field(default=None, repr=False)
    presentation: Optional[QuadraticPresentation] = None
    malcev: Optional[MalcevSummary] = None
    notes: Tuple[str, ...] = ()

    @property
    def one_formal(self) -> bool:
        return self.formality.verdict

    @property
    def v2_types_ok(self) -> Optional[bool]:
        if self.bigraded is None:
            return None
        return set(self.bigraded.v2_types) <= {(2, 0), (1, 1), (0, 2)}


def sasaki_pipeline(r: BasicRing, max_stage: int = 5) -> PipelineReport:
    """Model, 1-minimal tower, bigrading, 1-formality and (when formal) presentation and Malcev data."""
    validation = validate_basic_ring(r)
    model = build_model(r, validation)
    betti = betti_numbers(model.algebra, range(2 * r.n + 2))
    tower = build_tower(model.algebra, max_stage)
    formality = one_formal(tower)
    split = hodge_split_check(model)
    notes: List[str] = []
    if r.n < 2:
        notes.append('n >= 2 is needed for 1-formality of the model; the verdict is expected to be false')
    if not tower.stabilized:
        notes.append(f"tower did not stabilize within {max_stage} stages; the verdict is provisional")
    bigraded = None
    try:
        bigraded = bigraded_tower(tower, split.components(1), split.components(2))
    except NotBigradeable as exc:
        notes.append(f"no bigrading of the tower: {exc}")
    presentation = malcev = None
    if formality.verdict and tower.stabilized:
        try:
            presentation = quadratic_presentation(tower, formality)
        except NotOneFormal as exc:
            notes.append(str(exc))
        malcev = malcev_summary(dualize(tower))
    report = PipelineReport(
        r.name, r.n, validation, betti, tower, formality, split, bigraded, presentation, malcev, tuple(notes)
    )
    v2 = bigraded.v2_types if bigraded is not None else None
    logger.info(f"Pipeline for {r.name}: 1-formal {formality.verdict}, V2 types {v2}")
    return report


@dataclass(frozen=True)
class MHDFixture:
    A: FDGA
    A_W: Dict[int, Filtration]
    E: FDGA
    E_W: Dict[int, Filtration]
    E_F: Dict[int, Filtration]
    phi: DGAMorphism


def mhd_fixture(model: SasakiModel) -> MHDFixture:
    """The real model, its complexification with ``W`` and ``F``, and the comparison map between them."""
    A, E = model.algebra, model.complex
    identity = {k: SparseMatrix.identity(E.dim(k), QQ_I) for k in range(E.max_degree + 1)}
    phi = DGAMorphism(A, E, identity)
    E_W = {k: f.convert_to(QQ_I) for k, f in model.weight.items()}
    return MHDFixture(A, dict(model.weight), E, E_W, dict(model.hodge), phi)


def expected_heisenberg_betti(n: int) -> Tuple[int, ...]:
    """Betti numbers of the Heisenberg algebra of dimension 2n+1: ``C(2n, k) - C(2n, k-2)`` below the middle."""
    half = [comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0) for k in range(n + 1)]
    return tuple(half + half[::-1])

