"""Exact scalar fields.

Two fields are supported, the rationals ``QQ`` and the Gaussian rationals
``QQ_I`` (``a + b*i`` with rational ``a``, ``b``), both taken from sympy's
polys domains. Values are the domain elements themselves; this module only
adds tags, conversion, conjugation and the text format used by the DSL and
the reports.
"""

from typing import Any, Iterable

from sympy.polys.domains import QQ, QQ_I

FIELD_TAGS = {'Q': QQ, 'Qi': QQ_I}


def field_for(tag: str) -> Any:
    """Return the sympy domain for a field tag (``Q`` or ``Qi``)."""
    try:
        return FIELD_TAGS[tag]
    except KeyError:
        raise ValueError(f"Unknown scalar field '{tag}', expected one of {sorted(FIELD_TAGS)}") from None


def tag_of(domain: Any) -> str:
    """Inverse of :func:`field_for`."""
    return 'Qi' if domain == QQ_I else 'Q'


def join(*domains: Any) -> Any:
    """Smallest of the two fields containing all given domains."""
    return QQ_I if any(d == QQ_I for d in domains) else QQ


def lift(value: Any, source: Any, target: Any) -> Any:
    """Convert ``value`` from domain ``source`` into domain ``target``."""
    if source == target:
        return value
    return target.convert_from(value, source)


def conjugate(value: Any, domain: Any) -> Any:
    """Complex conjugate of a scalar; the identity on rationals."""
    if domain == QQ_I:
        return QQ_I(value.x, -value.y)
    return value


def real_part(value: Any, domain: Any) -> Any:
    return value.x if domain == QQ_I else value


def imag_part(value: Any, domain: Any) -> Any:
    return value.y if domain == QQ_I else QQ.zero


def is_real(value: Any, domain: Any) -> bool:
    return domain != QQ_I or value.y == 0


def equal(a: Any, a_domain: Any, b: Any, b_domain: Any) -> bool:
    """Compare scalars across fields through the embedding QQ -> QQ_I."""
    return lift(a, a_domain, QQ_I) == lift(b, b_domain, QQ_I)


def from_fraction(numerator: int, denominator: int = 1) -> Any:
    """Rational scalar in lowest terms with positive denominator."""
    if denominator == 0:
        raise ZeroDivisionError('denominator must be nonzero')
    return QQ(numerator, denominator)


def _format_rational(q: Any) -> str:
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def format_scalar(value: Any, domain: Any = QQ) -> str:
    """Render a scalar in the DSL's syntax.

    Rationals print as ``a`` or ``a/b``; purely imaginary Gaussians as
    ``b*i`` (``i`` and ``-i`` for unit coefficients); general Gaussians as a
    parenthesized sum ``(a + b*i)``.
    """
    if domain != QQ_I:
        return _format_rational(value)
    re_, im_ = value.x, value.y
    if im_ == 0:
        return _format_rational(re_)
    if im_ == 1:
        imag = 'i'
    elif im_ == -1:
        imag = '-i'
    else:
        imag = f"{_format_rational(im_)}*i"
    if re_ == 0:
        return imag
    sign = '-' if im_ < 0 else '+'
    magnitude = imag[1:] if imag.startswith('-') else imag
    return f"({_format_rational(re_)} {sign} {magnitude})"


def format_vector(values: Iterable[Any], domain: Any) -> list:
    """Scalars of a vector as strings, for JSON reports."""
    return [format_scalar(v, domain) for v in values]
