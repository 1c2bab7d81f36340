"""Exception types shared across the package."""


class BrouwerError(Exception):
    """Base class for all package-specific errors."""


class OutOfWindow(BrouwerError):
    """A point fell outside the padded working window."""


class SymmetryViolation(BrouwerError):
    """A declared deck-transformation symmetry failed on a sample point."""

    def __init__(self, message, witness=None, residual=None):
        super().__init__(message)
        self.witness = witness
        self.residual = residual


class UnboundedDerivative(BrouwerError):
    """No finite derivative bound exists for the map on the requested region."""


class FixedPointSuspected(BrouwerError):
    """The free radius at a point collapsed below tolerance: h(x) is too close to x."""

    def __init__(self, message, point=None, displacement=None):
        super().__init__(message)
        self.point = point
        self.displacement = displacement


class RadiusExceedsWindow(BrouwerError):
    """Critical-radius search hit the window-size cap without losing freeness."""


class LinkedArcs(BrouwerError):
    """Boundary hit-sets of a critical disc are linked: the map cannot be fixed point free."""


class EmptyIntersection(BrouwerError):
    """A disc supposed to be critical is still free at radius + tolerance."""


class NoGapFound(BrouwerError):
    """No free parameter gap on a translation arc at the sampling cap."""


class ConditionFailed(BrouwerError):
    """A named extension condition failed with a witness."""

    def __init__(self, condition, message, witness=None):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition
        self.witness = witness


class CoverageStall(BrouwerError):
    """Neighborhood radii underflowed tolerance while covering a compactum."""


class ChainStall(BrouwerError):
    """Chain construction failed part way; carries the partial chain."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EscapeViolation(BrouwerError):
    """A late chain disc re-entered the compactum it should have escaped."""


class SegmentEscapesUnion(BrouwerError):
    """A synthesized line segment left the union of its source discs."""


class SeparationFailure(BrouwerError):
    """A candidate Brouwer line failed to separate h(L) from h^-1(L)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ClaimUnverified(BrouwerError):
    """An orbit-intersection claim in a Franks chain could not be verified."""

    def __init__(self, index, message):
        super().__init__(f"claim {index}: {message}")
        self.index = index


class SimplicityFailure(BrouwerError):
    """A trajectory polyline self-intersected beyond tolerance."""


class DegenerateAnchor(BrouwerError):
    """Side-query anchor segment grazed the polyline; retry with another anchor."""


class OnLine(BrouwerError):
    """Side query for a point lying on the polyline itself."""


class DisconnectedUnion(BrouwerError):
    """Region union closure is not connected; frontier extraction refused."""


class NoUnboundedComponent(BrouwerError):
    """No complement component touches the designated window edge."""


class StallDiagnostics(BrouwerError):
    """A classification pipeline stalled; carries structured diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SurgeryStall(BrouwerError):
    """Line surgery failed to make progress."""


class DeltaCollapse(BrouwerError):
    """Freeness margin too small to carve a rerouting corridor."""


class AmbiguousTrend(BrouwerError):
    """Band end trend unreadable at the current truncation."""


class EmptyLevel(BrouwerError):
    """A selection level was empty."""


class DeadEnd(BrouwerError):
    """An element had no predecessor under the level relation."""


class ConfigError(BrouwerError):
    """Configuration file failed schema validation."""


class VerificationFailure(BrouwerError):
    """A serialized certificate failed independent re-verification."""

    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check
