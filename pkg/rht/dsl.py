"""Source format for Lie algebras, CDGAs, bicomplexes and basic rings.

``parse`` turns text into a :class:`SourceFile` (syntax only), ``print_source``
renders the canonical text of a source file and ``load`` resolves every block
into a domain object. Errors are reported as :class:`Diagnostic` records
carried by :class:`~rht.errors.DslError`. The grammar is in ``grammar.ebnf``.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Type, Union

from sympy.polys.domains import QQ, QQ_I

from rht.bicomplex import Bicomplex
from rht.cohomology import LieAlgebra
from rht.errors import BicomplexError, DimensionLimitExceeded, DslError, ValidationFailed
from rht.gca import FreeCDGA, GCAElement, Generator
from rht.sasaki import BasicRing
from rht.scalars import FIELD_TAGS, field_for, format_scalar

logger = logging.getLogger(__name__)

ERROR = 'error'

IMAGINARY_UNIT = 'i'
BLOCK_KINDS = ('lie', 'cdga', 'bicomplex', 'basicring')
DEFAULT_MAX_DIM = 64

_TOKEN_SPEC = [
    ('COMMENT', r'#[^\n]*'),
    ('NEWLINE', r'\n'),
    ('SKIP', r'[ \t\r]+'),
    ('NUMBER', r'\d+(?:/\d+)?'),
    ('IDENT', r"[A-Za-z_][A-Za-z0-9_']*"),
    ('OP', r'[{}\[\]();,=+\-*:]'),
    ('MISMATCH', r'.'),
]
_TOKEN_RE = re.compile('|'.join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int
    path: str = '<string>'

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


# -- syntax tree ----------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """``coefficient * f1 * f2 * ...``; the coefficient is a ``QQ_I`` element."""

    coefficient: Any
    factors: Tuple[str, ...] = ()

    def render(self, first: bool) -> str:
        c = self.coefficient
        negative = (c.y == 0 and c.x < 0) or (c.x == 0 and c.y < 0)
        magnitude = -c if negative else c
        body = '*'.join(self.factors)
        if body and magnitude == QQ_I.one:
            text = body
        else:
            text = format_scalar(magnitude, QQ_I) + (f"*{body}" if body else '')
        if first:
            return f"-{text}" if negative else text
        return f" - {text}" if negative else f" + {text}"


Poly = Tuple[Term, ...]


def render_poly(poly: Poly) -> str:
    if not poly:
        return '0'
    return ''.join(t.render(i == 0) for i, t in enumerate(poly))


@dataclass(frozen=True)
class BasisDecl:
    names: Tuple[str, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return 'basis ' + ' '.join(self.names)


@dataclass(frozen=True)
class BracketDecl:
    left: str
    right: str
    value: Poly
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"bracket [{self.left}, {self.right}] = {render_poly(self.value)}"


@dataclass(frozen=True)
class GenSpec:
    name: str
    degree: int
    bidegree: Optional[Tuple[int, int]] = None

    def render(self) -> str:
        suffix = f"({self.bidegree[0]},{self.bidegree[1]})" if self.bidegree is not None else ''
        return f"{self.name}:{self.degree}{suffix}"


@dataclass(frozen=True)
class GenDecl:
    generators: Tuple[GenSpec, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return 'gen ' + ' '.join(g.render() for g in self.generators)


@dataclass(frozen=True)
class DiffDecl:
    """``d``, ``del`` or ``delbar`` of one generator or basis element."""

    keyword: str
    target: str
    value: Poly
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"{self.keyword} {self.target} = {render_poly(self.value)}"


@dataclass(frozen=True)
class TruncateDecl:
    degree: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"truncate {self.degree}"


@dataclass(frozen=True)
class ComponentDecl:
    """Bicomplex component: basis labels of bidegree ``(p, q)``."""

    bidegree: Tuple[int, int]
    labels: Tuple[str, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        p, q = self.bidegree
        return f"component ({p},{q}) " + ' '.join(self.labels)


@dataclass(frozen=True)
class RingComponentDecl:
    """Basic ring component: spanning combinations of ``H^(p,q)``."""

    bidegree: Tuple[int, int]
    vectors: Tuple[Poly, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        p, q = self.bidegree
        return f"component ({p},{q}) " + ', '.join(render_poly(v) for v in self.vectors)


@dataclass(frozen=True)
class DimensionDecl:
    n: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"n {self.n}"


@dataclass(frozen=True)
class ExteriorDecl:
    names: Tuple[str, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return 'exterior ' + ' '.join(self.names)


@dataclass(frozen=True)
class RelationDecl:
    value: Poly
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"relation {render_poly(self.value)}"


@dataclass(frozen=True)
class RingBasisDecl:
    entries: Tuple[Tuple[str, int], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return 'basis ' + ' '.join(f"{name}:{degree}" for name, degree in self.entries)


@dataclass(frozen=True)
class MultDecl:
    left: str
    right: str
    value: Poly
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"mult {self.left}*{self.right} = {render_poly(self.value)}"


@dataclass(frozen=True)
class OmegaDecl:
    value: Poly
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"omega = {render_poly(self.value)}"


Statement = Union[
    BasisDecl,
    BracketDecl,
    GenDecl,
    DiffDecl,
    TruncateDecl,
    ComponentDecl,
    RingComponentDecl,
    DimensionDecl,
    ExteriorDecl,
    RelationDecl,
    RingBasisDecl,
    MultDecl,
    OmegaDecl,
]


@dataclass(frozen=True)
class Block:
    kind: str
    name: str
    tag: str
    statements: Tuple[Statement, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def render(self) -> str:
        lines = [f"{self.kind} {self.name} over {self.tag} {{"]
        lines.extend(f"    {s.render()};" for s in self.statements)
        lines.append('}')
        return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class SourceFile:
    blocks: Tuple[Block, ...]
    path: str = field(default='<string>', compare=False)

    def block(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)


def print_source(source: SourceFile) -> str:
    """Canonical text of ``source``; parsing it gives back an equal tree."""
    return '\n'.join(b.render() for b in source.blocks)


# -- parsing ----------------------------------------------------------------


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def tokenize(text: str, path: str = '<string>') -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        column = m.start() - line_start + 1
        if kind == 'NEWLINE':
            line += 1
            line_start = m.end()
            continue
        if kind in ('SKIP', 'COMMENT'):
            continue
        if kind == 'MISMATCH':
            raise DslError([Diagnostic(ERROR, f"unexpected character {m.group()!r}", line, column, path)])
        tokens.append(Token(kind, m.group(), line, column))
    tokens.append(Token('EOF', '', line, len(text) - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list; one method per grammar rule."""

    def __init__(self, tokens: List[Token], path: str):
        self.tokens = tokens
        self.path = path
        self.pos = 0
        self.diagnostics: List[Diagnostic] = []
        self._statements: Dict[Tuple[str, str], Callable[[Token], Statement]] = {
            ('lie', 'basis'): self._basis,
            ('lie', 'bracket'): self._bracket,
            ('cdga', 'gen'): self._gen,
            ('cdga', 'd'): self._diff,
            ('cdga', 'truncate'): self._truncate,
            ('bicomplex', 'component'): self._component,
            ('bicomplex', 'del'): self._diff,
            ('bicomplex', 'delbar'): self._diff,
            ('basicring', 'n'): self._dimension,
            ('basicring', 'exterior'): self._exterior,
            ('basicring', 'relation'): self._relation,
            ('basicring', 'basis'): self._ring_basis,
            ('basicring', 'mult'): self._mult,
            ('basicring', 'component'): self._ring_component,
            ('basicring', 'omega'): self._omega,
        }

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != 'EOF':
            self.pos += 1
        return tok

    def peek(self, text: str) -> bool:
        return self.current.kind in ('OP', 'IDENT') and self.current.text == text

    def accept(self, text: str) -> Optional[Token]:
        return self.advance() if self.peek(text) else None

    def fail(self, message: str, token: Optional[Token] = None) -> None:
        tok = token or self.current
        found = tok.text or 'end of input'
        raise _SyntaxError(Diagnostic(ERROR, f"{message}, found '{found}'", tok.line, tok.column, self.path))

    def expect(self, text: str) -> Token:
        if not self.peek(text):
            self.fail(f"expected '{text}'")
        return self.advance()

    def name(self, what: str = 'a name') -> str:
        if self.current.kind != 'IDENT':
            self.fail(f"expected {what}")
        return self.advance().text

    def integer(self, what: str = 'an integer') -> int:
        if self.current.kind != 'NUMBER' or '/' in self.current.text:
            self.fail(f"expected {what}")
        return int(self.advance().text)

    def synchronize(self) -> None:
        while self.current.kind != 'EOF' and not self.peek('}'):
            if self.advance().text == ';':
                return

    def skip_block(self) -> None:
        while self.current.kind != 'EOF':
            if self.advance().text == '}':
                return

    # source := block*
    def source(self) -> Tuple[Block, ...]:
        blocks = []
        while self.current.kind != 'EOF':
            try:
                blocks.append(self.block())
            except _SyntaxError as exc:
                self.diagnostics.append(exc.diagnostic)
                self.skip_block()
        return tuple(blocks)

    # block := KIND NAME ['over' FIELD] '{' statement* '}'
    def block(self) -> Block:
        start = self.current
        kind = self.name('a block kind')
        if kind not in BLOCK_KINDS:
            self.fail(f"expected one of {', '.join(BLOCK_KINDS)}", start)
        name = self.name('a block name')
        tag = 'Q'
        if self.accept('over'):
            tok = self.current
            tag = self.name('a scalar field')
            if tag not in FIELD_TAGS:
                self.fail(f"unknown scalar field, expected {' or '.join(FIELD_TAGS)}", tok)
        self.expect('{')
        statements = []
        while not self.peek('}'):
            if self.current.kind == 'EOF':
                self.fail(f"expected '}}' closing {kind} {name}")
            try:
                statements.append(self.statement(kind))
            except _SyntaxError as exc:
                self.diagnostics.append(exc.diagnostic)
                self.synchronize()
        self.expect('}')
        return Block(kind, name, tag, tuple(statements), start.line, start.column)

    def statement(self, kind: str) -> Statement:
        tok = self.current
        keyword = self.name('a statement keyword')
        handler = self._statements.get((kind, keyword))
        if handler is None:
            self.fail(f"not a statement of a {kind} block", tok)
        stmt = handler(tok)
        self.expect(';')
        return stmt

    def names(self, what: str) -> Tuple[str, ...]:
        out = [self.name(what)]
        while self.current.kind == 'IDENT':
            out.append(self.advance().text)
        return tuple(out)

    def bidegree(self) -> Tuple[int, int]:
        self.expect('(')
        p = self.integer('a bidegree')
        self.expect(',')
        q = self.integer('a bidegree')
        self.expect(')')
        return (p, q)

    def _basis(self, tok: Token) -> BasisDecl:
        return BasisDecl(self.names('a basis element'), tok.line, tok.column)

    def _bracket(self, tok: Token) -> BracketDecl:
        self.expect('[')
        left = self.name('a basis element')
        self.expect(',')
        right = self.name('a basis element')
        self.expect(']')
        self.expect('=')
        return BracketDecl(left, right, self.poly(), tok.line, tok.column)

    def _gen(self, tok: Token) -> GenDecl:
        specs = []
        while True:
            name = self.name('a generator name')
            self.expect(':')
            degree = self.integer('a degree')
            bidegree = self.bidegree() if self.peek('(') else None
            specs.append(GenSpec(name, degree, bidegree))
            if self.current.kind != 'IDENT':
                break
        return GenDecl(tuple(specs), tok.line, tok.column)

    def _diff(self, tok: Token) -> DiffDecl:
        target = self.name('a generator or basis element')
        self.expect('=')
        return DiffDecl(tok.text, target, self.poly(), tok.line, tok.column)

    def _truncate(self, tok: Token) -> TruncateDecl:
        return TruncateDecl(self.integer('a degree'), tok.line, tok.column)

    def _component(self, tok: Token) -> ComponentDecl:
        bidegree = self.bidegree()
        return ComponentDecl(bidegree, self.names('a basis element'), tok.line, tok.column)

    def _dimension(self, tok: Token) -> DimensionDecl:
        return DimensionDecl(self.integer('the complex dimension n'), tok.line, tok.column)

    def _exterior(self, tok: Token) -> ExteriorDecl:
        return ExteriorDecl(self.names('a degree-1 class'), tok.line, tok.column)

    def _relation(self, tok: Token) -> RelationDecl:
        return RelationDecl(self.poly(), tok.line, tok.column)

    def _ring_basis(self, tok: Token) -> RingBasisDecl:
        entries = []
        while True:
            name = self.name('a basis element')
            self.expect(':')
            entries.append((name, self.integer('a degree')))
            if self.current.kind != 'IDENT':
                break
        return RingBasisDecl(tuple(entries), tok.line, tok.column)

    def _mult(self, tok: Token) -> MultDecl:
        left = self.name('a basis element')
        self.expect('*')
        right = self.name('a basis element')
        self.expect('=')
        return MultDecl(left, right, self.poly(), tok.line, tok.column)

    def _ring_component(self, tok: Token) -> RingComponentDecl:
        bidegree = self.bidegree()
        vectors = [self.poly()]
        while self.accept(','):
            vectors.append(self.poly())
        return RingComponentDecl(bidegree, tuple(vectors), tok.line, tok.column)

    def _omega(self, tok: Token) -> OmegaDecl:
        self.expect('=')
        return OmegaDecl(self.poly(), tok.line, tok.column)

    # poly := ['+' | '-'] term (('+' | '-') term)*
    def poly(self) -> Poly:
        sign = -1 if self.accept('-') else 1
        if sign > 0:
            self.accept('+')
        terms = [self.term(sign)]
        while self.peek('+') or self.peek('-'):
            sign = -1 if self.advance().text == '-' else 1
            terms.append(self.term(sign))
        return tuple(terms)

    # term := factor ('*' factor)*
    def term(self, sign: int) -> Term:
        coefficient = QQ_I.convert(sign)
        factors: List[str] = []
        while True:
            coefficient, symbol = self.factor(coefficient)
            if symbol is not None:
                factors.append(symbol)
            if not self.accept('*'):
                break
        return Term(coefficient, tuple(factors))

    # factor := NUMBER | 'i' | NAME | '(' poly ')'
    def factor(self, coefficient: Any) -> Tuple[Any, Optional[str]]:
        tok = self.current
        if tok.kind == 'NUMBER':
            self.advance()
            numerator, _, denominator = tok.text.partition('/')
            if denominator and int(denominator) == 0:
                self.fail('division by zero', tok)
            value = QQ(int(numerator), int(denominator or 1))
            return coefficient * QQ_I.convert(value), None
        if tok.kind == 'IDENT':
            self.advance()
            if tok.text == IMAGINARY_UNIT:
                return coefficient * QQ_I(0, 1), None
            return coefficient, tok.text
        if self.accept('('):
            inner = self.poly()
            self.expect(')')
            if any(t.factors for t in inner):
                self.fail('a parenthesized coefficient must be a scalar', tok)
            total = QQ_I.zero
            for t in inner:
                total += t.coefficient
            return coefficient * total, None
        self.fail('expected a number, a name or a parenthesized coefficient')
        raise AssertionError('unreachable')


def parse(text: str, path: str = '<string>') -> SourceFile:
    """Parse source text; raises :class:`DslError` with every syntax diagnostic found."""
    parser = _Parser(tokenize(text, path), path)
    blocks = parser.source()
    if parser.diagnostics:
        raise DslError(parser.diagnostics)
    logger.debug(f"Parsed {path}: {len(blocks)} blocks")
    return SourceFile(blocks, path)


# -- resolution ---------------------------------------------------------------


@dataclass
class Definitions:
    """Resolved blocks of one source file, by name in source order."""

    source: SourceFile
    objects: Dict[str, Any]

    def __getitem__(self, name: str) -> Any:
        try:
            return self.objects[name]
        except KeyError:
            raise KeyError(f"{name} is not defined in {self.source.path}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.objects

    def names(self) -> List[str]:
        return list(self.objects)

    def of_type(self, *types: Type) -> List[Tuple[str, Any]]:
        return [(name, obj) for name, obj in self.objects.items() if isinstance(obj, types)]


class _Resolver:
    def __init__(self, path: str, max_dim: int):
        self.path = path
        self.max_dim = max_dim
        self.diagnostics: List[Diagnostic] = []

    def error(self, node: Any, message: str) -> None:
        self.diagnostics.append(Diagnostic(ERROR, message, node.line, node.column, self.path))

    def cap(self, what: str, dim: int) -> None:
        if dim > self.max_dim:
            raise DimensionLimitExceeded(what, dim, self.max_dim)

    def resolve(self, block: Block) -> Optional[Any]:
        handler = {
            'lie': self.lie,
            'cdga': self.cdga,
            'bicomplex': self.bicomplex,
            'basicring': self.basic_ring,
        }[block.kind]
        before = len(self.diagnostics)
        try:
            obj = handler(block)
        except (ValidationFailed, BicomplexError) as exc:
            self.error(block, str(exc))
            return None
        return obj if len(self.diagnostics) == before else None

    def declare(self, node: Any, names: Iterable[str], declared: Dict[str, Any], value: Callable[[str], Any]) -> None:
        for name in names:
            if name == IMAGINARY_UNIT:
                self.error(node, f"'{IMAGINARY_UNIT}' is reserved for the imaginary unit")
            elif name in declared:
                self.error(node, f"{name} is declared twice")
            else:
                declared[name] = value(name)

    def scalar(self, node: Any, c: Any, domain: Any) -> Optional[Any]:
        if domain == QQ:
            if c.y:
                self.error(node, f"coefficient {format_scalar(c, QQ_I)} is not real")
                return None
            return c.x
        return c

    def linear(
        self, node: Any, poly: Poly, labels: Mapping[str, Any], domain: Any, what: str
    ) -> Optional[Dict[str, Any]]:
        out: Dict[str, Any] = {}
        ok = True
        for term in poly:
            if not term.coefficient:
                continue
            if len(term.factors) != 1:
                self.error(node, f"{what} must be a linear combination, got the term {term.render(True)}")
                ok = False
                continue
            label = term.factors[0]
            if label not in labels:
                self.error(node, f"{label} is not declared before use")
                ok = False
                continue
            c = self.scalar(node, term.coefficient, domain)
            if c is None:
                ok = False
                continue
            out[label] = out.get(label, domain.zero) + c
        return {k: v for k, v in out.items() if v} if ok else None

    def polynomial(
        self, node: Any, poly: Poly, symbols: Mapping[str, Any], domain: Any
    ) -> Optional[Dict[Tuple[str, ...], Any]]:
        out: Dict[Tuple[str, ...], Any] = {}
        ok = True
        for term in poly:
            if not term.coefficient:
                continue
            missing = [f for f in term.factors if f not in symbols]
            if missing:
                self.error(node, f"{missing[0]} is not declared before use")
                ok = False
                continue
            c = self.scalar(node, term.coefficient, domain)
            if c is None:
                ok = False
                continue
            out[term.factors] = out.get(term.factors, domain.zero) + c
        return out if ok else None

    # -- blocks ----------------------------------------------------------

    def lie(self, block: Block) -> Optional[LieAlgebra]:
        domain = field_for(block.tag)
        index: Dict[str, int] = {}
        brackets: Dict[Tuple[int, int], Dict[int, Any]] = {}
        for s in block.statements:
            if isinstance(s, BasisDecl):
                if index:
                    self.error(s, 'basis is declared twice')
                    continue
                self.declare(s, s.names, index, lambda _: len(index))
                self.cap(f"Lie algebra {block.name}", len(index))
            elif isinstance(s, BracketDecl):
                if s.left not in index or s.right not in index:
                    missing = s.left if s.left not in index else s.right
                    self.error(s, f"{missing} is not declared before use")
                    continue
                i, j = index[s.left], index[s.right]
                if i == j:
                    self.error(s, f"[{s.left}, {s.left}] is zero by antisymmetry")
                elif i > j:
                    self.error(s, f"write the bracket as [{s.right}, {s.left}], earlier basis element first")
                elif (i, j) in brackets:
                    self.error(s, f"bracket [{s.left}, {s.right}] is declared twice")
                else:
                    value = self.linear(s, s.value, index, domain, 'a bracket')
                    if value is not None:
                        brackets[(i, j)] = {index[k]: c for k, c in value.items()}
        if not index:
            self.error(block, f"lie {block.name} has no basis")
            return None
        return LieAlgebra.from_brackets(block.name, list(index), brackets, domain)

    def cdga(self, block: Block) -> Optional[FreeCDGA]:
        domain = field_for(block.tag)
        generators: Dict[str, Generator] = {}
        pending: List[Tuple[DiffDecl, Dict[str, Generator]]] = []
        truncation = None
        for s in block.statements:
            if isinstance(s, GenDecl):
                for spec in s.generators:
                    if spec.degree < 1:
                        self.error(s, f"generator {spec.name} must have positive degree")
                        continue
                    self.declare(s, [spec.name], generators,
                                 lambda name, spec=spec: Generator(len(generators), name, spec.degree, spec.bidegree))
                self.cap(f"generator count of {block.name}", len(generators))
            elif isinstance(s, DiffDecl):
                if s.target not in generators:
                    self.error(s, f"{s.target} is not declared before use")
                elif any(p.target == s.target for p, _ in pending):
                    self.error(s, f"d {s.target} is declared twice")
                else:
                    pending.append((s, dict(generators)))
            elif isinstance(s, TruncateDecl):
                if truncation is not None:
                    self.error(s, 'truncate is declared twice')
                elif s.degree < 1:
                    self.error(s, 'truncation degree must be positive')
                else:
                    truncation = s.degree
        if not generators:
            self.error(block, f"cdga {block.name} has no generators")
            return None
        gens = list(generators.values())
        top = max([truncation or 0] + [generators[s.target].degree + 1 for s, _ in pending])
        scratch = FreeCDGA(gens, None, max(top, sum(g.degree for g in gens)), domain, block.name)
        differentials: Dict[int, GCAElement] = {}
        for s, visible in pending:
            value = self.differential_value(s, scratch, visible, domain)
            if value is not None:
                differentials[generators[s.target].id] = value
        return FreeCDGA(gens, differentials, truncation, domain, block.name)

    def differential_value(
        self, s: DiffDecl, algebra: FreeCDGA, visible: Mapping[str, Generator], domain: Any
    ) -> Optional[GCAElement]:
        terms = self.polynomial(s, s.value, visible, domain)
        if terms is None:
            return None
        expected = visible[s.target].degree + 1
        total = algebra.zero()
        for factors, c in terms.items():
            degree = sum(visible[f].degree for f in factors)
            if degree != expected:
                self.error(s, f"d {s.target} must have degree {expected}, the term {'*'.join(factors) or '1'} "
                              f"has degree {degree}")
                return None
            product = algebra.one()
            for name in factors:
                product = algebra.multiply(product, algebra.gen(name))
            if product.is_zero:
                odd = next(f for f in factors if factors.count(f) > 1 and visible[f].degree % 2)
                term = '*'.join(factors)
                self.error(s, f"d {s.target}: the term {term} is zero, odd generator {odd} squares to zero")
                return None
            total = algebra.add(total, algebra.scale(c, product))
        if total.is_zero and any(s_term.coefficient for s_term in s.value):
            self.error(s, f"d {s.target} is declared nonzero but its terms cancel")
            return None
        return GCAElement(total.terms, expected)

    def bicomplex(self, block: Block) -> Optional[Bicomplex]:
        before = len(self.diagnostics)
        domain = field_for(block.tag)
        components: Dict[Tuple[int, int], List[str]] = {}
        labels: Dict[str, Tuple[int, int]] = {}
        images: Dict[str, Dict[str, Dict[str, Any]]] = {'del': {}, 'delbar': {}}
        for s in block.statements:
            if isinstance(s, ComponentDecl):
                if min(s.bidegree) < 0:
                    self.error(s, 'bidegrees must be non-negative')
                    continue
                self.declare(s, s.labels, labels, lambda _, pq=s.bidegree: pq)
                components.setdefault(s.bidegree, []).extend(x for x in s.labels if labels.get(x) == s.bidegree)
            elif isinstance(s, DiffDecl):
                if s.target not in labels:
                    self.error(s, f"{s.target} is not declared before use")
                elif s.target in images[s.keyword]:
                    self.error(s, f"{s.keyword} {s.target} is declared twice")
                else:
                    value = self.linear(s, s.value, labels, domain, s.keyword)
                    if value is not None:
                        images[s.keyword][s.target] = value
        totals: Dict[int, int] = {}
        for (p, q), members in components.items():
            totals[p + q] = totals.get(p + q, 0) + len(members)
        for k, dim in totals.items():
            self.cap(f"degree {k} of {block.name}", dim)
        if len(self.diagnostics) > before:
            return None
        return Bicomplex(block.name, components, images['del'], images['delbar'], domain)

    def basic_ring(self, block: Block) -> Optional[BasicRing]:
        before = len(self.diagnostics)
        n = None
        exterior: Dict[str, int] = {}
        basis: Dict[str, int] = {}
        relations: List[Dict[Tuple[str, ...], Any]] = []
        mult: Dict[Tuple[str, str], Dict[str, Any]] = {}
        components: Dict[Tuple[int, int], List[Dict[str, Any]]] = {}
        omega = None
        for s in block.statements:
            if isinstance(s, DimensionDecl):
                if n is not None:
                    self.error(s, 'n is declared twice')
                n = s.n
            elif isinstance(s, ExteriorDecl):
                if basis:
                    self.error(s, 'a basic ring is given either by exterior classes or by a basis, not both')
                    continue
                self.declare(s, s.names, exterior, lambda _: 1)
                self.cap(f"degree-1 classes of {block.name}", len(exterior))
            elif isinstance(s, RingBasisDecl):
                if exterior:
                    self.error(s, 'a basic ring is given either by exterior classes or by a basis, not both')
                    continue
                for name, degree in s.entries:
                    self.declare(s, [name], basis, lambda _, degree=degree: degree)
            elif isinstance(s, RelationDecl):
                if not exterior:
                    self.error(s, 'relations need exterior classes declared before them')
                    continue
                value = self.polynomial(s, s.value, exterior, QQ)
                if value is not None:
                    relations.append(value)
            elif isinstance(s, MultDecl):
                missing = [x for x in (s.left, s.right) if x not in basis]
                if missing:
                    self.error(s, f"{missing[0]} is not declared before use")
                elif (s.left, s.right) in mult:
                    self.error(s, f"mult {s.left}*{s.right} is declared twice")
                else:
                    value = self.linear(s, s.value, basis, QQ, 'a product')
                    if value is not None:
                        mult[(s.left, s.right)] = value
            elif isinstance(s, RingComponentDecl):
                if exterior and sum(s.bidegree) != 1:
                    self.error(s, 'components of an exterior ring are declared in degree 1 and extended by products')
                    continue
                labels = exterior or basis
                for vector in s.vectors:
                    value = self.linear(s, vector, labels, QQ_I, 'a component vector')
                    if value is not None:
                        components.setdefault(s.bidegree, []).append(value)
            elif isinstance(s, OmegaDecl):
                if omega is not None:
                    self.error(s, 'omega is declared twice')
                    continue
                if exterior:
                    omega = self.polynomial(s, s.value, exterior, QQ)
                else:
                    omega = self.linear(s, s.value, basis, QQ, 'omega')
        if n is None:
            self.error(block, f"basicring {block.name} needs n")
        if not exterior and not basis:
            self.error(block, f"basicring {block.name} needs exterior classes or a basis")
        if len(self.diagnostics) > before:
            return None
        if exterior:
            ring = BasicRing.from_exterior(block.name, n, list(exterior), relations, components, omega)
        else:
            by_degree: Dict[int, List[str]] = {}
            for name, degree in basis.items():
                by_degree.setdefault(degree, []).append(name)
            ring = BasicRing.from_table(block.name, n, by_degree, mult, components, omega or {})
        for k in range(ring.top_degree + 1):
            self.cap(f"degree {k} of {block.name}", ring.ring.dim(k))
        return ring


def resolve(source: SourceFile, max_dim: int = DEFAULT_MAX_DIM) -> Definitions:
    """Build the domain object of every block; raises :class:`DslError` on scope or semantic errors."""
    resolver = _Resolver(source.path, max_dim)
    objects: Dict[str, Any] = {}
    for block in source.blocks:
        if block.name in objects:
            resolver.error(block, f"{block.name} is defined twice")
            continue
        obj = resolver.resolve(block)
        if obj is not None:
            objects[block.name] = obj
    if resolver.diagnostics:
        raise DslError(resolver.diagnostics)
    logger.info(f"Loaded {source.path}: {', '.join(objects) or 'no definitions'}")
    return Definitions(source, objects)


def load(text: str, path: str = '<string>', max_dim: int = DEFAULT_MAX_DIM) -> Definitions:
    return resolve(parse(text, path), max_dim)


def load_file(path: Union[str, Path], max_dim: int = DEFAULT_MAX_DIM) -> Definitions:
    p = Path(path)
    return load(p.read_text(encoding='utf-8'), str(p), max_dim)
