"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation problems exit 1,
infeasible inputs exit 2, and exhausted search budgets exit 3 (inconclusive
results are ordinary return values, not exceptions).
"""


class ValidationError(ValueError):
    """Malformed input: bad geometry, bad document, bad formula/graph."""


class DomainMismatchError(ValidationError):
    """An assignment mentions ids that do not belong to the instance."""


class DisjointnessError(ValidationError):
    """An operation requiring pairwise-disjoint input got overlapping bodies."""


class PairingError(ValidationError):
    """An assignment document does not match the instance it is checked against."""


class ParameterError(ValidationError):
    """A parameter is outside the range an algorithm is defined for."""


class SizeCapError(ValidationError):
    """Input exceeds the configured size cap of an exact procedure."""


class InfeasibleInputError(Exception):
    """The input configuration already violates the density budget."""


class DensityPreconditionError(InfeasibleInputError):
    """An algorithm's input-density precondition does not hold."""


class WitnessError(ValueError):
    """A witness builder was given data that does not satisfy its premise."""


class NumericalFailure(RuntimeError):
    """The LP solver could not certify an optimal solution."""
