"""Exception types shared across the library.

Every numeric precondition failure raises a named subclass of
:class:`ChronoscaleError` so callers (and the CLI) can map failures to
distinct exit codes without string matching.
"""


class ChronoscaleError(Exception):
    """Base class for all library errors."""


# -- time-scale construction and indexing -----------------------------------

class NonMonotone(ChronoscaleError):
    """Instants are not strictly increasing."""


class TooShort(ChronoscaleError):
    """A time scale needs at least two instants."""


class IndexOutOfRange(ChronoscaleError):
    """Index falls outside the window."""


class BoundaryIndex(ChronoscaleError):
    """Operation needs a neighbour instant that is outside the window."""


class InvalidStep(ChronoscaleError):
    """Step size must be strictly positive."""


# -- calculus ----------------------------------------------------------------

class OrderZeroOrNegative(ChronoscaleError):
    """Derivative order must be a positive integer."""


class WindowTooSmall(ChronoscaleError):
    """The window does not hold enough history for the requested stencil."""


class SupportTouchesBoundary(ChronoscaleError):
    """Signal support reaches a window edge where a weight is undefined."""


class ReversedInterval(ChronoscaleError):
    """Integration interval has its endpoints out of order."""


# -- exponentials and transforms ---------------------------------------------

class PoleHit(ChronoscaleError):
    """An exponential factor vanishes for this parameter value."""


class PoleOnScale(ChronoscaleError):
    """A transform pole coincides with a reciprocal step of the scale."""


class ImproperRational(ChronoscaleError):
    """Numerator degree must be strictly below denominator degree."""


class UntaggedPole(ChronoscaleError):
    """Every pole needs a causal/anticausal region-of-convergence tag."""


class ContourInvalid(ChronoscaleError):
    """Quadrature contour violates its separation invariants."""


class DegenerateDenominator(ChronoscaleError):
    """Denominator coefficients are empty or all zero."""


# -- systems -----------------------------------------------------------------

class SingularStep(ChronoscaleError):
    """Marching recursion hit a step whose reciprocal is a denominator zero."""


class ScaleMismatch(ChronoscaleError):
    """Signals live on different scales, or the grid is not shift-closed."""


class ReflectionOffGrid(ChronoscaleError):
    """Reflected support instant does not land on the grid."""


class TargetOffSuperScale(ChronoscaleError):
    """Interpolation target is not a pairwise difference of grid instants."""


class IncompatibleStep(ChronoscaleError):
    """Resampling step does not produce super-scale-compatible targets."""


# -- fractional --------------------------------------------------------------

class RepeatedGraininess(ChronoscaleError):
    """Step values cluster too tightly for the distinct-residue formula."""


# -- file handling ------------------------------------------------------------

class FileFormatError(ChronoscaleError):
    """Input file does not follow the documented format."""
