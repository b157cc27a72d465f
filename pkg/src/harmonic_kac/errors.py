"""Exception and warning types shared across the package."""


class NonConvergence(RuntimeError):
    """Root iteration did not reach the requested backward error."""


class DegenerateLeadingCoefficient(ValueError):
    """A leading w-coefficient vanishes at the resultant sample point."""


class DomainError(ArithmeticError):
    """Kac-Rice discriminant went negative beyond rounding."""


class ToleranceNotMet(RuntimeWarning):
    """Adaptive quadrature hit its subdivision limit."""


class ValidationFailed(RuntimeWarning):
    """Argument-principle check disagrees with the signed zero count."""


class PhaseStepTooLarge(RuntimeError):
    """A zero sits too close to the winding contour."""


class UnboundedZeroSet(ValueError):
    """Equal degrees with equal leading moduli: zeros may escape to infinity."""


class NotGaussian(ValueError):
    """Ensemble kind has no variance profile."""


class TooManyFailures(RuntimeError):
    """Monte Carlo run exceeded the allowed unvalidated-trial fraction."""


class BoundaryAmbiguity(RuntimeError):
    """A root's imaginary part is too close to the real/complex threshold."""


class DegenerateCovariance(ValueError):
    """Conditional covariance is not positive definite."""


class DegenerateZero(RuntimeWarning):
    """A zero with (near) singular Jacobian was found and excluded from signed counts."""
