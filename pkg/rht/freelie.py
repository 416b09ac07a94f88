"""Free Lie algebras by degree and quotients by quadratic relations.

Degree-k elements are expanded in the tensor algebra (words of length k in
the generators, ``[a, b] = ab - ba``). The free Lie algebra in degree k is
spanned by the standard bracketings of Lyndon words; the ideal generated by
degree-2 relations ``R`` is ``I_2 = R``, ``I_k = [L_1, I_(k-1)]``.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from rht.cohomology import LieAlgebra
from rht.formality import QuadraticPresentation
from rht.linalg import Subquotient, Subspace, Vector, subquotient

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Tensor = Dict[Word, Any]


def lyndon_words(letters: int, length: int) -> List[Word]:
    """Lyndon words of the given length over ``range(letters)`` (Duval's algorithm)."""
    if length < 1 or letters < 1:
        return []
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == length:
            words.append(tuple(w))
        m = len(w)
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == letters - 1:
            w.pop()
    return words


def _is_lyndon(word: Word) -> bool:
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def standard_factorization(word: Word) -> Tuple[Word, Word]:
    """``w = uv`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if _is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no proper factorization")


def _commutator(a: Tensor, b: Tensor, domain: Any) -> Tensor:
    out: Tensor = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, domain.zero) + x * y
            out[v + u] = out.get(v + u, domain.zero) - x * y
    return {w: c for w, c in out.items() if c}


def bracketing(word: Word, domain: Any) -> Tensor:
    """Standard bracketing of a Lyndon word as a tensor."""
    if len(word) == 1:
        return {word: domain.one}
    u, v = standard_factorization(word)
    return _commutator(bracketing(u, domain), bracketing(v, domain), domain)


def free_lie_dims(letters: int, max_degree: int) -> Tuple[int, ...]:
    return tuple(len(lyndon_words(letters, k)) for k in range(1, max_degree + 1))


class _TensorSpace:
    """Coordinates for degree-k tensors over a fixed alphabet."""

    def __init__(self, letters: int, degree: int, domain: Any):
        self.words = list(itertools.product(range(letters), repeat=degree))
        self.index = {w: i for i, w in enumerate(self.words)}
        self.domain = domain

    @property
    def dim(self) -> int:
        return len(self.words)

    def vector(self, t: Tensor) -> Vector:
        out = [self.domain.zero] * self.dim
        for w, c in t.items():
            out[self.index[w]] = c
        return tuple(out)

    def tensor(self, v: Vector) -> Tensor:
        return {self.words[i]: c for i, c in enumerate(v) if c}


@dataclass(frozen=True)
class PresentationQuotient:
    """Free Lie algebra mod the relation ideal, truncated above ``nilpotency_class``."""

    degree_dims: Tuple[int, ...]
    vanishes_above: bool
    algebra: LieAlgebra

    @property
    def level_dims(self) -> Tuple[int, ...]:
        return tuple(itertools.accumulate(self.degree_dims))


def presentation_quotient(presentation: QuadraticPresentation, nilpotency_class: int) -> PresentationQuotient:
    """Quotient dimensions per degree and the truncated quotient Lie algebra.

    Degree ``nilpotency_class + 1`` is computed as well; ``vanishes_above``
    records whether the ideal fills it.
    """
    dom = presentation.domain
    letters = len(presentation.generators)
    spaces: Dict[int, _TensorSpace] = {}
    pieces: Dict[int, Subquotient] = {}
    ideal_vectors: List[Tensor] = []
    dims = []
    vanishes_above = True
    for k in range(1, nilpotency_class + 2):
        space = _TensorSpace(letters, k, dom)
        spaces[k] = space
        lie = Subspace.span((space.vector(bracketing(w, dom)) for w in lyndon_words(letters, k)), space.dim, dom)
        if k == 1:
            ideal_vectors = []
        elif k == 2:
            ideal_vectors = []
            for r in presentation.relations:
                t: Tensor = {}
                for (i, j), c in zip(presentation.pairs, r):
                    if c:
                        for w, x in _commutator({(i,): dom.one}, {(j,): dom.one}, dom).items():
                            t[w] = t.get(w, dom.zero) + c * x
                ideal_vectors.append({w: c for w, c in t.items() if c})
        else:
            ideal_vectors = [
                _commutator({(a,): dom.one}, t, dom) for a in range(letters) for t in ideal_vectors
            ]
        ideal = Subspace.span((space.vector(t) for t in ideal_vectors), space.dim, dom)
        ideal_vectors = [space.tensor(b) for b in ideal.basis]
        piece = subquotient(lie, ideal)
        if k <= nilpotency_class:
            pieces[k] = piece
            dims.append(piece.dim)
        else:
            vanishes_above = piece.dim == 0
    algebra = _quotient_algebra(presentation, pieces, spaces, nilpotency_class)
    logger.debug(f"Presentation quotient dims per degree {dims}, vanishes above class: {vanishes_above}")
    return PresentationQuotient(tuple(dims), vanishes_above, algebra)


def _quotient_algebra(
    presentation: QuadraticPresentation,
    pieces: Dict[int, Subquotient],
    spaces: Dict[int, '_TensorSpace'],
    nilpotency_class: int,
) -> LieAlgebra:
    dom = presentation.domain
    names: List[str] = []
    offsets: Dict[int, int] = {}
    for k in sorted(pieces):
        offsets[k] = len(names)
        if k == 1:
            names.extend(presentation.generators[: pieces[k].dim])
        else:
            names.extend(f"L{k}_{j + 1}" for j in range(pieces[k].dim))
    brackets: Dict[Tuple[int, int], Dict[int, Any]] = {}
    elements = [(k, j) for k in sorted(pieces) for j in range(pieces[k].dim)]
    for (a, (ka, ja)), (b, (kb, jb)) in itertools.combinations(enumerate(elements), 2):
        if ka + kb > nilpotency_class:
            continue
        ta = spaces[ka].tensor(pieces[ka].representatives[ja])
        tb = spaces[kb].tensor(pieces[kb].representatives[jb])
        product = spaces[ka + kb].vector(_commutator(ta, tb, dom))
        coordinates = pieces[ka + kb].project(product)
        image = {offsets[ka + kb] + idx: c for idx, c in enumerate(coordinates) if c}
        if image:
            brackets[(a, b)] = image
    return LieAlgebra.from_brackets('quotient', names, brackets, dom)
