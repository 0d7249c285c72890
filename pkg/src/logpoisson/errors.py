"""Exception hierarchy and the small verdict record returned by checks.

Two families matter to callers (and to the CLI exit codes):

* :class:`InputError` -- malformed or incompatible input (exit code 3).
* :class:`MathematicalFailure` -- a hypothesis of the theory fails on valid
  input: resonance, non-flatness, (H3) failure, ... (exit code 2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class LogPoissonError(Exception):
    """Base class for every error raised by this package."""

    #: short name of the hypothesis/condition that failed, used in reports
    hypothesis: str = ""

    def __init__(self, message: str, *, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InputError(LogPoissonError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {message}" if line else message)
        self.line = line
        self.col = col
        self.bare_message = message


class RingMismatchError(InputError):
    pass


class PoleBudgetError(InputError):
    """An exponent left the range allowed by the ring (pole bound / non-log pole)."""


class ShapeError(InputError):
    """A structural precondition on the input data does not hold."""


class UnknownGeneratorError(InputError):
    pass


class MathematicalFailure(LogPoissonError):
    pass


class NotInvertibleError(MathematicalFailure):
    hypothesis = "invertible constant term"


class H3Error(MathematicalFailure):
    hypothesis = "(H3): each component is a Poisson hypersurface"


class NonCommutingError(MathematicalFailure):
    hypothesis = "commuting residue tuple (if the residue tuple commutes)"


class NotFlatError(MathematicalFailure):
    hypothesis = "Poisson-flat (or simply flat)"


class EigenvalueError(MathematicalFailure):
    hypothesis = "eigenvalues in Q(i)"


class ResonanceError(MathematicalFailure):
    hypothesis = "non-resonant at p if"

    def __init__(self, message: str, kappa=None, kappa_prime=None, alpha=None):
        super().__init__(message, witness=(kappa, kappa_prime, alpha))
        self.kappa = kappa
        self.kappa_prime = kappa_prime
        self.alpha = alpha


class InconsistentSystemError(MathematicalFailure):
    hypothesis = "solvable homological equation"


class FiltrationError(MathematicalFailure):
    hypothesis = "delta preserves the degree filtration"


class DegenerateSpanError(MathematicalFailure):
    hypothesis = "independent logarithmic Hamiltonians at p"


class ResidueError(MathematicalFailure):
    hypothesis = "residue condition a_i|_{z_i=0}=0"


class NotClosedError(MathematicalFailure):
    hypothesis = "closed logarithmic form"


class PreconditionError(MathematicalFailure):
    hypothesis = "gauge sends the connection to the normal form"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: ``ok`` plus, on failure, where and a witness.

    Truthiness follows ``ok`` so ``if check_jacobi(P): ...`` reads naturally.
    """

    ok: bool
    where: Any = None
    witness: Any = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok
