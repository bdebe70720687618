# cle_integrability/core/errors.py
"""
Error types raised by the formula engine and the simulators.

Each class carries the process exit code the CLI reports for it.
"""


class CLEError(Exception):
    """Base class; maps to the domain/numeric exit code."""
    exit_code = 3


class DomainError(CLEError, ValueError):
    """A parameter lies outside the admissible range of a formula."""


class PoleError(DomainError):
    """Evaluation at a Gamma, sine or cosine singularity."""


class DivergenceError(DomainError):
    """The requested integral or moment is infinite."""


class ConvergenceError(CLEError, ArithmeticError):
    """Quadrature or Laplace inversion failed its accuracy check."""


class SimulationTimeout(CLEError):
    """A first-passage path ran past max_path_time."""


class RejectionBudgetExceeded(CLEError):
    """The bridge sampler used up its attempt budget."""


class MalformedExcursion(CLEError, ValueError):
    """Step sequence is not a first-passage excursion."""


class UsageError(CLEError):
    exit_code = 2
