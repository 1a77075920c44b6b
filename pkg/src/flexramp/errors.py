"""Exception hierarchy shared across the package."""


class FlexrampError(Exception):
    """Base class for all package errors."""


class ParseError(FlexrampError):
    """A data file could not be parsed against its documented schema."""


class ValidationError(FlexrampError):
    """A parsed record violates a type invariant; the message names the record."""


class ModelBuildError(FlexrampError):
    """A model could not be assembled (missing data, dimension mismatch)."""


class SolveError(FlexrampError):
    """The solver backend failed or returned an unusable status."""


class InfeasibleError(SolveError):
    """The optimization problem admits no feasible point."""


class PricingError(FlexrampError):
    """Dual extraction failed or the fixed-binary LP is inconsistent."""
