"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ValidationError -> 2,
ConvergenceError -> 3, CapacityError -> 4.
"""


class MbcnError(Exception):
    """Base class for all package errors."""


class ValidationError(MbcnError):
    """Bad input: configuration, geometry or argument contracts violated."""


class InvalidParticleNumberError(ValidationError):
    pass


class InvalidConfigurationError(ValidationError):
    pass


class RegionError(ValidationError):
    """Region outside the lattice, or regions that must be disjoint overlap."""


class FluxCommensurabilityError(ValidationError):
    """Torus flux does not thread an integer number of flux quanta."""


class GeometryMismatchError(ValidationError):
    """Operation requires a different boundary condition."""


class PairingError(ValidationError):
    """Shot records do not come in matched (A, B) pairs."""


class ConvergenceError(MbcnError):
    """Iterative solver failed to reach the requested tolerance."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class DegeneracyError(ConvergenceError):
    """Ground state (quasi-)degenerate where a unique state is required."""


class PropagationAccuracyError(ConvergenceError):
    """Krylov propagation could not meet the error tolerance."""


class AmplitudeFloorError(ConvergenceError):
    """Correlator magnitude fell below the amplitude floor; winding undefined."""


class AmbiguousFitError(ConvergenceError):
    """Two winding candidates fit the data equally well."""

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = candidates


class GridTooCoarseError(ConvergenceError):
    """Berry-curvature link overlap too small for a reliable plaquette field."""


class CapacityError(MbcnError):
    """Requested computation exceeds the configured memory/size budget."""
