"""Exception hierarchy shared by all chernflow modules."""


class ChernFlowError(Exception):
    """Base class for every error raised by this package."""


# -- torus grids and fields ------------------------------------------------

class VolumeNotOne(ChernFlowError):
    """Grid periods do not multiply to 1 (or are not positive)."""


class BadResolution(ChernFlowError):
    """Axis counts are wrong, odd, or below the 8-point minimum."""


class GridMismatch(ChernFlowError):
    """Fields on different grids were combined, or shapes disagree."""


class NonFiniteField(ChernFlowError):
    """A field was constructed with NaN or infinite node values."""


# -- Poisson solves --------------------------------------------------------

class NonZeroMean(ChernFlowError):
    """Right-hand side of a mean-zero Poisson solve has nonzero mean."""


class TooLarge(ChernFlowError):
    """Grid exceeds the node budget of the dense oracle."""


# -- problem data ----------------------------------------------------------

class NonNegativeDegree(ChernFlowError):
    """The background curvature integrates to a nonnegative value."""


class BadRecipe(ChernFlowError):
    """A scenario recipe is unknown, malformed, or not band-limited."""


# -- flow stepping ---------------------------------------------------------

class StepUnstable(ChernFlowError):
    """A single time step produced non-finite values (or dt is hopeless)."""


class StepFailure(ChernFlowError):
    """A flow run aborted; carries the partial trajectory recorded so far."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


# -- super-solutions -------------------------------------------------------

class WrongSign(ChernFlowError):
    """Candidate curvature has the wrong sign for the requested construction."""


class DegenerateF(ChernFlowError):
    """Candidate curvature is identically zero where that is not allowed."""


class NotSignChanging(ChernFlowError):
    """Candidate curvature does not attain both signs."""


class LambdaTooLarge(ChernFlowError):
    """Requested shift exceeds the largest admissible value; carries it."""

    def __init__(self, message, lambda_max=None):
        super().__init__(message)
        self.lambda_max = lambda_max


class WrongDimension(ChernFlowError):
    """Operation requires a specific complex dimension."""


# -- analysis --------------------------------------------------------------

class ZeroF(ChernFlowError):
    """Lower-bound formula undefined because the sup-norm of f vanishes."""


class TooFewRecords(ChernFlowError):
    """Trajectory has too few records for a centered-difference check."""


# -- configuration / CLI ---------------------------------------------------

class ConfigError(ChernFlowError):
    """Config file is unreadable, has unknown keys, or bad values."""
