"""Exception types shared across the package."""


class RpbubbleError(Exception):
    """Base class for package-specific failures."""


class ValidationError(RpbubbleError, ValueError):
    """Malformed input: bad geometry, out-of-range parameter, unknown option."""


class QuadratureError(RpbubbleError, ArithmeticError):
    """Requested integration tolerance could not be certified."""


class SingularityError(RpbubbleError, ArithmeticError):
    """Evaluation or integration ran into the density singularity at the origin."""


class NonTerminationError(RpbubbleError, RuntimeError):
    """An integration stop condition never fired within the arclength cap."""


class BracketingError(RpbubbleError, RuntimeError):
    """A root scan found no usable bracket."""


class ConstructionError(RpbubbleError, RuntimeError):
    """A candidate could not be assembled to the requested tolerance."""


class BranchCutError(RpbubbleError, ValueError):
    """A conformal image falls outside the representable principal sector."""


class DomainError(RpbubbleError, ValueError):
    """A map was applied outside its domain of definition."""


# Failure modes that the CLI reports as "numerical" (exit code 2) rather than
# input validation (exit code 1).
NUMERICAL_ERRORS = (
    QuadratureError,
    SingularityError,
    NonTerminationError,
    BracketingError,
    ConstructionError,
)
