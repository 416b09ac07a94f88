"""Exception hierarchy shared by every computation module.

Each exception carries the process exit code the command line driver maps it
to: ``2`` for bad input (syntax, validation, violated preconditions) and ``3``
for broken internal invariants.
"""

from typing import Any, List, Optional, Sequence, Tuple


class RhtError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class DslError(RhtError):
    """Source text could not be parsed or resolved."""

    def __init__(self, diagnostics: Sequence[Any]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first is not None else 'invalid source')


class ValidationFailed(RhtError):
    """An input object failed one or more validation checks."""

    def __init__(self, message: str, failures: Optional[List[Any]] = None):
        super().__init__(message)
        self.failures = failures or []


class DimensionLimitExceeded(RhtError):
    """A declared dimension is above the configured cap."""

    def __init__(self, what: str, dim: int, cap: int):
        super().__init__(f"{what} has dimension {dim}, above the limit of {cap} (RHT_MAX_DIM)")
        self.what = what
        self.dim = dim
        self.cap = cap


class TruncationError(RhtError):
    """A product or differential left the truncated range of a free algebra."""


class JacobiViolation(RhtError):
    """Structure constants fail the Jacobi identity."""

    def __init__(self, triple: Tuple[str, str, str], detail: str = ''):
        msg = f"Jacobi identity fails on ({', '.join(triple)})"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.triple = triple


class NonConnected(RhtError):
    """H^0 of a target algebra is not one-dimensional."""


class NotACocycle(RhtError):
    """A vector handed to a cohomology projection is not closed."""


class NotDefined(RhtError):
    """A Massey triple product was requested with a nonzero cup product."""


class NotOneFormal(RhtError):
    """An operation needing a 1-formal tower got a non-formal one."""


class NotNilpotent(RhtError):
    """The lower central series of a Lie algebra does not reach zero."""


class NotMHS(RhtError):
    """A filtration pair failed the mixed Hodge reconstruction checks."""


class HypothesisViolation(RhtError):
    """A bigrading fails conjugation symmetry modulo lower weights."""

    def __init__(self, bidegree: Tuple[int, int], detail: str = ''):
        msg = f"conjugation hypothesis fails at {bidegree}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.bidegree = bidegree


class FiltrationNotDStable(RhtError):
    """The differential does not preserve a filtration."""


class NotBigradeable(RhtError):
    """A tower stage cannot be split into (p, q) components."""


class BicomplexError(RhtError):
    """del/delbar data do not form a bicomplex."""


class InternalInvariantViolation(RhtError):
    """An invariant guaranteed by construction was found broken."""

    exit_code = 3
