"""Command runners: one method per command, each producing a :class:`Report`."""

import logging
import re
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, field_validator

from rht.bicomplex import Bicomplex, bott_chern, ddbar_failures
from rht.cohomology import (
    LieAlgebra,
    betti_numbers,
    chevalley_eilenberg,
    cohomology,
    euler_characteristic,
    poincare_check,
)
from rht.dsl import Definitions, parse, print_source
from rht.errors import ValidationFailed
from rht.formality import (
    heisenberg_check,
    massey_scan,
    massey_triple,
    named_classes,
    one_formal,
    quadratic_presentation,
    sasakian_obstruction,
)
from rht.freelie import presentation_quotient
from rht.gca import DGAlgebra, FreeCDGA
from rht.malcev import dualize, isomorphism_invariants, malcev_summary
from rht.metrics import ComputationMetrics
from rht.minimal import Tower, build_tower
from rht.reports import Report, Result, bidegree_dims, bidegree_list, degree_dims
from rht.sasaki import (
    BasicRing,
    build_model,
    hodge_split_check,
    mhd_fixture,
    sasaki_pipeline,
    validate_basic_ring,
)
from rht.spectral import mhd_check, spectral_E1

logger = logging.getLogger(__name__)

COMMANDS = (
    'check',
    'cohomology',
    'minimal1',
    'formal1',
    'massey',
    'malcev',
    'heisenberg',
    'sasaki',
    'ddbar',
    'bottchern',
    'fmt',
)
SASAKI_MODES = ('model', 'pipeline', 'mhd', 'hodge-split')

_DEGREES_RE = re.compile(r'^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$')


def parse_degrees(text: str) -> Tuple[int, ...]:
    """``"a..b"`` (inclusive) or a single degree ``"a"``."""
    match = _DEGREES_RE.match(text)
    if not match:
        raise ValidationFailed(f"degree range must look like 'a..b', got {text!r}")
    lo = int(match.group(1))
    hi = int(match.group(2)) if match.group(2) is not None else lo
    if hi < lo:
        raise ValidationFailed(f"empty degree range {text!r}")
    return tuple(range(lo, hi + 1))


class CommandOptions(BaseModel):
    """Per-command options collected from the command line."""

    degrees: Optional[Tuple[int, ...]] = Field(default=None, description="Degrees for cohomology")
    stages: int = Field(default=5, ge=1, le=12, description="Stage bound for towers")
    max_generators: Optional[int] = Field(default=None, ge=1, description="Tower generator cap")
    depth: Optional[int] = Field(default=None, ge=1, le=12, description="Stage bound for malcev")
    classes: Tuple[str, ...] = Field(default=(), description="Basis elements for massey")
    ring: Optional[str] = Field(default=None, description="Basic ring block for sasaki")
    sasaki_mode: str = Field(default='model', description="What sasaki computes")
    name: Optional[str] = Field(default=None, description="Restrict to one block")

    @field_validator('classes')
    @classmethod
    def validate_classes(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        if v and len(v) != 3:
            raise ValueError('massey takes exactly three classes')
        return v

    @field_validator('sasaki_mode')
    @classmethod
    def validate_mode(cls, v: str) -> str:
        if v not in SASAKI_MODES:
            raise ValueError(f"sasaki mode must be one of {SASAKI_MODES}")
        return v


def kind_of(obj: Any) -> str:
    if isinstance(obj, LieAlgebra):
        return 'lie'
    if isinstance(obj, FreeCDGA):
        return 'cdga'
    if isinstance(obj, Bicomplex):
        return 'bicomplex'
    if isinstance(obj, BasicRing):
        return 'basicring'
    raise TypeError(f"unexpected definition {type(obj).__name__}")


def _ambient_dim(obj: Any) -> int:
    if isinstance(obj, LieAlgebra):
        return obj.dim
    if isinstance(obj, FreeCDGA):
        return len(obj.generators)
    if isinstance(obj, Bicomplex):
        return max((obj.dim(k) for k in range(obj.max_degree + 1)), default=0)
    return max((obj.ring.dim(k) for k in range(obj.top_degree + 1)), default=0)


class CommandRunner:
    """Run one command over the definitions of a source file."""

    def __init__(
        self,
        definitions: Definitions,
        options: CommandOptions,
        metrics: Optional[ComputationMetrics] = None,
    ):
        """Initialize runner.

        Args:
            definitions: Resolved blocks of the source file
            options: Command options
            metrics: Metrics collector (a private one is created when omitted)
        """
        self.definitions = definitions
        self.options = options
        self.metrics = metrics or ComputationMetrics()
        self._handlers: Dict[str, Tuple[Tuple[str, ...], Callable[[str, Any], Result]]] = {
            'check': (('lie', 'cdga', 'bicomplex', 'basicring'), self.check),
            'cohomology': (('lie', 'cdga', 'bicomplex', 'basicring'), self.cohomology),
            'minimal1': (('lie', 'cdga', 'basicring'), self.minimal1),
            'formal1': (('lie', 'cdga', 'basicring'), self.formal1),
            'massey': (('lie', 'cdga', 'basicring'), self.massey),
            'malcev': (('lie', 'cdga', 'basicring'), self.malcev),
            'heisenberg': (('lie',), self.heisenberg),
            'sasaki': (('basicring',), self.sasaki),
            'ddbar': (('bicomplex', 'cdga'), self.ddbar),
            'bottchern': (('bicomplex', 'cdga'), self.bottchern),
        }

    def run(self, command: str) -> Report:
        if command not in self._handlers:
            raise ValidationFailed(f"unknown command {command}")
        kinds, handler = self._handlers[command]
        selected = self._select(command, kinds)
        report = Report(command=command, source=self.definitions.source.path)
        for name, obj in selected:
            self.metrics.record_dimension(_ambient_dim(obj))
            logger.info(f"{command}: {name} ({kind_of(obj)})")
            with self.metrics.track(command):
                result = handler(name, obj)
            self.metrics.record_verdict(command, result.verdict)
            report.results.append(result)
        return report

    def _select(self, command: str, kinds: Sequence[str]) -> List[Tuple[str, Any]]:
        wanted = self.options.ring if command == 'sasaki' and self.options.ring else self.options.name
        if wanted is not None:
            if wanted not in self.definitions:
                raise ValidationFailed(f"{wanted} is not defined in {self.definitions.source.path}")
            obj = self.definitions[wanted]
            if kind_of(obj) not in kinds:
                raise ValidationFailed(f"{command} does not apply to the {kind_of(obj)} block {wanted}")
            return [(wanted, obj)]
        selected = [(name, obj) for name, obj in self.definitions.objects.items() if kind_of(obj) in kinds]
        if not selected:
            raise ValidationFailed(
                f"{self.definitions.source.path} has no block {command} applies to (needs {', '.join(kinds)})"
            )
        return selected

    # -- helpers ------------------------------------------------------------

    def _algebra(self, obj: Any) -> DGAlgebra:
        if isinstance(obj, LieAlgebra):
            return chevalley_eilenberg(obj)
        if isinstance(obj, BasicRing):
            return build_model(obj).algebra
        return obj

    def _tower(self, obj: Any, stages: Optional[int] = None) -> Tower:
        cap = self.options.max_generators
        return build_tower(self._algebra(obj), stages or self.options.stages, cap)

    def _bicomplex(self, obj: Any) -> Bicomplex:
        return Bicomplex.from_cdga(obj) if isinstance(obj, FreeCDGA) else obj

    # -- commands -----------------------------------------------------------

    def check(self, name: str, obj: Any) -> Result:
        kind = kind_of(obj)
        if isinstance(obj, LieAlgebra):
            failures = obj.jacobi_failures()
            fields: Dict[str, Any] = {'dim': obj.dim, 'jacobi_failures': [f"[{a}, {b}, {c}]" for a, b, c in failures]}
            if not failures:
                fields['d_squared_zero'] = chevalley_eilenberg(obj).check_d_squared().passed
            return Result(name=name, kind=kind, verdict=not failures, **fields)
        if isinstance(obj, FreeCDGA):
            report = obj.check_d_squared()
            return Result(
                name=name,
                kind=kind,
                verdict=report.passed,
                generators=len(obj.generators),
                d_squared_violations=[f"d^2({label}) = {value}" for label, value in report.violations],
                minimal=obj.is_minimal(),
                one_minimal=obj.is_one_minimal(),
            )
        if isinstance(obj, Bicomplex):
            # del^2, delbar^2 and anticommutation are enforced while loading
            return Result(name=name, kind=kind, verdict=True, component_dims=bidegree_dims(obj.component_dims()))
        validation = validate_basic_ring(obj)
        return Result(
            name=name,
            kind=kind,
            verdict=validation.passed,
            n=obj.n,
            checks=[{'name': c.name, 'status': c.status, 'detail': c.detail} for c in validation.checks],
            warnings=list(validation.warnings),
        )

    def cohomology(self, name: str, obj: Any) -> Result:
        kind = kind_of(obj)
        if isinstance(obj, Bicomplex):
            betti_map = bott_chern(obj).betti
            degrees = self.options.degrees or tuple(sorted(betti_map))
            betti = tuple(betti_map.get(k, 0) for k in degrees)
            return Result(name=name, kind=kind, degrees=list(degrees), betti=list(betti))
        algebra = self._algebra(obj)
        degrees = self.options.degrees or tuple(range(algebra.cohomology_top + 1))
        betti = betti_numbers(algebra, degrees)
        fields: Dict[str, Any] = {'degrees': list(degrees), 'betti': list(betti)}
        if self.options.degrees is None:
            fields['euler_characteristic'] = euler_characteristic(algebra)
            fields['poincare_duality'] = poincare_check(algebra, algebra.cohomology_top)
        return Result(name=name, kind=kind, **fields)

    def minimal1(self, name: str, obj: Any) -> Result:
        tower = self._tower(obj)
        return Result(
            name=name,
            kind=kind_of(obj),
            verdict=tower.stabilized,
            generator_counts=list(tower.generator_counts),
            stabilized=tower.stabilized,
            b1=tower.b1,
        )

    def formal1(self, name: str, obj: Any) -> Result:
        tower = self._tower(obj)
        report = one_formal(tower)
        fields: Dict[str, Any] = {
            'one_formal': report.verdict,
            'h2_dims': list(report.h2_dims),
            'generator_counts': list(tower.generator_counts),
            'provisional': report.provisional,
        }
        if report.witness is not None:
            fields['witness'] = tower.target.format_vector(2, report.witness.representative)
        return Result(name=name, kind=kind_of(obj), verdict=report.verdict, **fields)

    def massey(self, name: str, obj: Any) -> Result:
        algebra = self._algebra(obj)
        if self.options.classes:
            a, b, c = named_classes(algebra, self.options.classes)
            value = massey_triple(algebra, a, b, c)
            degree = value.representative.degree
            return Result(
                name=name,
                kind=kind_of(obj),
                verdict=value.nonzero_mod_indeterminacy,
                classes=list(self.options.classes),
                nonzero_mod_indeterminacy=value.nonzero_mod_indeterminacy,
                representative=algebra.format_vector(degree, value.representative.representative),
                indeterminacy_dim=value.indeterminacy.dim,
            )
        basis = cohomology(algebra, 1).basis
        labels = [algebra.format_vector(1, c.representative) for c in basis]
        values = massey_scan(algebra)
        nonzero = [
            f"<{labels[i]}, {labels[j]}, {labels[k]}>"
            for (i, j, k), value in values
            if value.nonzero_mod_indeterminacy
        ]
        logger.debug(f"{name}: {len(values)} defined triples over {len(labels)} classes in H^1")
        return Result(
            name=name,
            kind=kind_of(obj),
            verdict=bool(nonzero),
            defined_triples=len(values),
            nonzero_triples=nonzero,
        )

    def malcev(self, name: str, obj: Any) -> Result:
        tower = self._tower(obj, self.options.depth)
        summary = malcev_summary(dualize(tower))
        fields: Dict[str, Any] = {
            'level_dims': list(summary.dims),
            'nilpotency_class': summary.nilpotency_class,
            'stabilized': summary.stabilized,
        }
        verdict = None
        if summary.limit is not None:
            limit = isomorphism_invariants(summary.limit)
            fields['invariants'] = _invariants(limit)
            if isinstance(obj, LieAlgebra):
                verdict = isomorphism_invariants(obj) == limit
        formality = one_formal(tower)
        if formality.verdict and tower.stabilized:
            presentation = quadratic_presentation(tower, formality)
            quotient = presentation_quotient(presentation, max(summary.nilpotency_class, 1))
            fields['presentation'] = {
                'generators': len(presentation.generators),
                'relations': len(presentation.relations),
                'level_dims': list(quotient.level_dims),
            }
        return Result(name=name, kind=kind_of(obj), verdict=verdict, **fields)

    def heisenberg(self, name: str, obj: LieAlgebra) -> Result:
        verdict = heisenberg_check(obj)
        fields: Dict[str, Any] = {'dim': obj.dim}
        if obj.dim % 2:
            obstruction = sasakian_obstruction(obj)
            fields['b1'] = obstruction.b1
            fields['b1_matches'] = obstruction.b1_matches
            fields['sasakian_possible'] = obstruction.possible
        return Result(name=name, kind='lie', verdict=verdict, **fields)

    def sasaki(self, name: str, obj: BasicRing) -> Result:
        mode = self.options.sasaki_mode
        if mode == 'pipeline':
            return self._sasaki_pipeline(name, obj)
        if mode == 'mhd':
            return self._sasaki_mhd(name, obj)
        if mode == 'hodge-split':
            return self._sasaki_hodge(name, obj)
        validation = validate_basic_ring(obj)
        model = build_model(obj, validation)
        betti = betti_numbers(model.algebra, range(2 * obj.n + 2))
        return Result(
            name=name,
            kind='basicring',
            verdict=validation.passed,
            n=obj.n,
            model_dims=[model.algebra.dim(k) for k in range(model.algebra.max_degree + 1)],
            betti=list(betti),
        )

    def _sasaki_pipeline(self, name: str, ring: BasicRing) -> Result:
        report = sasaki_pipeline(ring, self.options.stages)
        fields: Dict[str, Any] = {
            'n': report.n,
            'betti': list(report.betti),
            'generator_counts': list(report.tower.generator_counts),
            'one_formal': report.one_formal,
            'h2_dims': list(report.formality.h2_dims),
            'provisional': report.formality.provisional,
            'v2_types': bidegree_list(report.bigraded.v2_types) if report.bigraded is not None else None,
            'v2_types_ok': report.v2_types_ok,
            'hodge_split_ok': report.hodge.passed,
            'notes': list(report.notes),
        }
        if report.presentation is not None:
            fields['presentation'] = {
                'generators': len(report.presentation.generators),
                'relations': len(report.presentation.relations),
            }
        if report.malcev is not None:
            fields['malcev_dims'] = list(report.malcev.dims)
        return Result(name=name, kind='basicring', verdict=report.one_formal, **fields)

    def _sasaki_mhd(self, name: str, ring: BasicRing) -> Result:
        model = build_model(ring)
        fixture = mhd_fixture(model)
        report = mhd_check(fixture.A, fixture.A_W, fixture.E, fixture.E_W, fixture.E_F, fixture.phi)
        pages = spectral_E1(model.algebra, model.weight)
        rows = sorted({p for p, _ in pages.e1_dims}, reverse=True)
        return Result(
            name=name,
            kind='basicring',
            verdict=report.passed,
            axioms={str(a): report.axiom_passed(a) for a in (1, 2, 3)},
            failures=[f"axiom {f.axiom} at {f.bidegree}: {f.detail}" for f in report.failures],
            d0_zero=pages.d0_is_zero,
            e1_rows={str(p): list(pages.e1_row(p)) for p in rows},
            e2_total=degree_dims(pages.e2_total()),
        )

    def _sasaki_hodge(self, name: str, ring: BasicRing) -> Result:
        report = hodge_split_check(build_model(ring))
        splits = {}
        for split in report.splits:
            splits[str(split.degree)] = bidegree_dims(split.dims) if split.error is None else split.error
        return Result(
            name=name,
            kind='basicring',
            verdict=report.passed,
            h1_ok=report.h1_ok,
            top_ok=report.top_ok,
            h2_ok=report.h2_ok,
            h2_types=bidegree_list(report.h2_types),
            splits=splits,
        )

    def ddbar(self, name: str, obj: Any) -> Result:
        failing = ddbar_failures(self._bicomplex(obj))
        return Result(name=name, kind=kind_of(obj), verdict=not failing, failing_degrees=failing)

    def bottchern(self, name: str, obj: Any) -> Result:
        bc = bott_chern(self._bicomplex(obj))
        return Result(
            name=name,
            kind=kind_of(obj),
            verdict=bc.natural_map_iso,
            dims=bidegree_dims(bc.dims),
            total_dims=degree_dims(bc.total_dims),
            betti=degree_dims(bc.betti),
            natural_map_iso=bc.natural_map_iso,
        )


def _invariants(inv: Any) -> Dict[str, Any]:
    return {
        'dim': inv.dim,
        'lower_central_dims': list(inv.lower_central_dims),
        'derived_dim': inv.derived_dim,
        'center_dim': inv.center_dim,
    }


def format_source(text: str, path: str) -> str:
    """Canonical text of a source file."""
    return print_source(parse(text, path))


def run_command(command: str, definitions: Definitions, options: CommandOptions,
                metrics: Optional[ComputationMetrics] = None) -> Report:
    return CommandRunner(definitions, options, metrics).run(command)
