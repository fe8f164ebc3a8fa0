class BurgessError(ValueError):
    """Base class of every error raised by burgesspy."""


class WindowEmpty(BurgessError):
    """No prime exists in the requested window."""


class NotAUnit(BurgessError):
    """The argument shares a factor with the modulus."""


class NotPrime(BurgessError):
    """A prime was required."""


class ModulusTooLarge(BurgessError):
    """The modulus exceeds the supported cap."""


class LengthExceedsPeriod(BurgessError):
    """An interval sum longer than one period was requested."""


class DegenerateCase(BurgessError):
    """f is constant and g is constant or linear."""


class BudgetExceeded(BurgessError):
    """The requested computation exceeds the active operation budget."""


class SpacingViolated(BurgessError):
    """Two consecutive points are closer than the gap parameter."""


class OverlapDetected(BurgessError):
    """Intervals of a disjoint family overlap."""


class NotPrimitive(BurgessError):
    """A primitive character was required."""


class DegenerateInput(BurgessError):
    """Basis vectors are linearly dependent."""


class HTooSmall(BurgessError):
    """H does not exceed q^{1/(2r)}."""


class PRangeEmpty(BurgessError):
    """No admissible P below q/2."""


class PDividesQ(BurgessError):
    """The shift prime divides the modulus."""


class MonotonicityViolated(BurgessError):
    """Scaled points are not strictly increasing."""


class InsufficientSpread(BurgessError):
    """Too few rows, or rows spanning less than one decade in q."""


class ConfigError(BurgessError):
    """Invalid experiment configuration."""


class HardCheckFailed(BurgessError):
    """An exact integer inequality was violated."""


class IoFailure(BurgessError, OSError):
    """A report could not be written or read."""
