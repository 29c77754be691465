"""Exception types shared across the toolkit."""


class FoliationLabError(Exception):
    """Base class for all errors raised by foliation-lab."""


class ParseError(FoliationLabError):
    """Syntax error in an expression string; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidInputError(FoliationLabError):
    """Input violates a documented precondition (zero field, bad degree, ...)."""


class RootFindingError(FoliationLabError):
    """Simultaneous root iteration failed to converge."""


class ResidueDepthError(FoliationLabError):
    """Pole order exceeds the configured series depth for residue extraction."""


class AmbiguousRatioError(FoliationLabError):
    """A numerically-known eigenvalue ratio is too close to a small rational to
    call the positive-rationality test; exact input is required to decide."""

    def __init__(self, ratio, nearest):
        super().__init__(
            f"eigenvalue ratio {ratio} is within decision tolerance of {nearest}; "
            "supply exact data to classify"
        )
        self.ratio = ratio
        self.nearest = nearest


class DepthExceededError(FoliationLabError):
    """Reduction loop hit the depth cap before all leaves became irreducible."""

    def __init__(self, max_depth):
        super().__init__(f"reduction did not terminate within depth {max_depth}")
        self.max_depth = max_depth


class IntegrationError(FoliationLabError):
    """Numerical path integration failed (escape, vanishing pivot, no convergence)."""


class InternalInconsistencyError(FoliationLabError):
    """An invariant that should hold by construction was violated; a bug."""
